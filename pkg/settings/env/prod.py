# Python modules
import os

# Project modules
from settings.base import *


DEBUG = False
ALLOWED_HOSTS = config("ALLOWED_HOSTS", default="localhost", cast=lambda v: [h.strip() for h in v.split(",")])

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": config("MFGS_DATABASE", default=os.path.join(BASE_DIR, "lab.sqlite3")),
    }
}

# Runs are archived in the database as well as in manifest.jsonl.
MFGS_RECORD_RUNS = config("MFGS_RECORD_RUNS", default=True, cast=bool)

# Python modules
import os

# Project modules
from settings.base import *


DEBUG = True
ALLOWED_HOSTS = ["localhost", "127.0.0.1"]

# ----------------------------------------------
# Database
#
DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": config("MFGS_DATABASE", default=os.path.join(BASE_DIR, "lab-local.sqlite3")),
    }
}

# ----------------------------------------------
# Mean-field lab
#
# Local runs land next to the checkout, apart from archived prod runs.
MFGS_RUNS_DIR = config("MFGS_RUNS_DIR", default=os.path.join(BASE_DIR, "runs", "local"))

# Project modules
from decouple import config

# ----------------------------------------------
# Env id
#
ENV_POSSIBLE_OPTIONS = (
    "local",
    "prod",
)
ENV_ID = config("PROJECT_ENV_ID", default="local")
SECRET_KEY = config("SECRET_KEY", default="django-insecure-mean-field-lab-local-only")

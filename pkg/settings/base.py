# Python modules
import os

# Third party modules
from decouple import config

# Project modules
from settings.conf import *


# ----------------------------------------------
# Path
#
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
ROOT_URLCONF = "settings.urls"

# ----------------------------------------------
# Apps
#
DJANGO_AND_THIRD_PARTY_APPS = [
    "django.contrib.admin",
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.sessions",
    "django.contrib.messages",
    "django.contrib.staticfiles",
    "rest_framework",
]

PROJECT_APPS = [
    "apps.abstracts.apps.AbstractsConfig",
    "apps.modelspec.apps.ModelSpecConfig",
    "apps.simplex.apps.SimplexConfig",
    "apps.potentials.apps.PotentialsConfig",
    "apps.spectral.apps.SpectralConfig",
    "apps.hj_halfspin.apps.HjHalfspinConfig",
    "apps.lax_oleinik.apps.LaxOleinikConfig",
    "apps.mc_sim.apps.McSimConfig",
    "apps.cli.apps.CliConfig",
]

INSTALLED_APPS = DJANGO_AND_THIRD_PARTY_APPS + PROJECT_APPS

# ----------------------------------------------
# Middleware | Templates
#
MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "django.contrib.sessions.middleware.SessionMiddleware",
    "django.middleware.common.CommonMiddleware",
    "django.middleware.csrf.CsrfViewMiddleware",
    "django.contrib.auth.middleware.AuthenticationMiddleware",
    "django.contrib.messages.middleware.MessageMiddleware",
    "django.middleware.clickjacking.XFrameOptionsMiddleware",
]

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.debug",
                "django.template.context_processors.request",
                "django.contrib.auth.context_processors.auth",
                "django.contrib.messages.context_processors.messages",
            ],
        },
    },
]

# ----------------------------------------------
# Internationalization
#
LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = True
USE_TZ = True

# ----------------------------------------------
# Static
#
STATIC_URL = "static/"
STATIC_ROOT = os.path.join(BASE_DIR, "static")

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# ----------------------------------------------
# Mean-field lab
#
MFGS_THREADS = config("MFGS_THREADS", default=os.cpu_count() or 1, cast=int)
MFGS_SIMPLEX_CAP = config("MFGS_SIMPLEX_CAP", default=5_000_000, cast=int)
MFGS_ORACLE_CAP = config("MFGS_ORACLE_CAP", default=4096, cast=int)
MFGS_SIMPLEX_TOL = config("MFGS_SIMPLEX_TOL", default=1e-12, cast=float)
MFGS_POWER_MAX_ITER = config("MFGS_POWER_MAX_ITER", default=2_000_000, cast=int)
MFGS_POWER_TOL = config("MFGS_POWER_TOL", default=1e-12, cast=float)
MFGS_POWER_TAIL_TOL = config("MFGS_POWER_TAIL_TOL", default=1e-10, cast=float)
MFGS_NEWTON_MAX_ITER = config("MFGS_NEWTON_MAX_ITER", default=200, cast=int)
MFGS_NEWTON_TOL = config("MFGS_NEWTON_TOL", default=1e-10, cast=float)
MFGS_MULTIWELL_BAND = config("MFGS_MULTIWELL_BAND", default=1e-10, cast=float)
MFGS_MERGE_TOL = config("MFGS_MERGE_TOL", default=1e-8, cast=float)
MFGS_MC_CHUNK = config("MFGS_MC_CHUNK", default=4096, cast=int)
MFGS_RUNS_DIR = config("MFGS_RUNS_DIR", default="runs")
MFGS_RECORD_RUNS = config("MFGS_RECORD_RUNS", default=False, cast=bool)
MFGS_LOG_LEVEL = config("MFGS_LOG_LEVEL", default="INFO")

# ----------------------------------------------
# Logging
#
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "apps": {
            "handlers": ["console"],
            "level": MFGS_LOG_LEVEL,
            "propagate": False,
        },
    },
}

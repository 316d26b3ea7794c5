# Django modules
from django.apps import AppConfig


class SimplexConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.simplex'
    verbose_name = "Discrete simplex"

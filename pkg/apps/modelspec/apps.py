# Django modules
from django.apps import AppConfig


class ModelSpecConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.modelspec'
    verbose_name = "Model specifications"

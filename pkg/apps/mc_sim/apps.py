# Django modules
from django.apps import AppConfig


class McSimConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.mc_sim'
    verbose_name = "Feynman-Kac Monte Carlo"

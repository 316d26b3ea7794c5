# Django modules
from django.apps import AppConfig


class HjHalfspinConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.hj_halfspin'
    verbose_name = "Spin-1/2 Hamilton-Jacobi solutions"

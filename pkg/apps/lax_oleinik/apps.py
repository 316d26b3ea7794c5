# Django modules
from django.apps import AppConfig


class LaxOleinikConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.lax_oleinik'
    verbose_name = "Lax-Oleinik semigroup"

from django.apps import AppConfig


class ZonoidsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'zonoids'
    verbose_name = 'Zonoid log-Brunn-Minkowski verification'

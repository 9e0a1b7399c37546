from django.apps import AppConfig


class RegularizadoresConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'regularizadores'
    verbose_name = 'Regularizadores y operadores proximales'

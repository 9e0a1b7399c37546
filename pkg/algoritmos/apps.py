from django.apps import AppConfig


class AlgoritmosConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'algoritmos'
    verbose_name = 'Algoritmos iterativos (AM, FISTAPH, gradiente proximal)'

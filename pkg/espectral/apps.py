from django.apps import AppConfig


class EspectralConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'espectral'
    verbose_name = 'Transformada discreta de Fourier'

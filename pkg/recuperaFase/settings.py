"""
Django settings for recuperaFase project.

Generated by 'django-admin startproject' using Django 5.2.7.

El proyecto no expone vistas ni usa base de datos: Django aporta la configuración,
los comandos de gestión (verify, solve, bench, plot), el logging y el test runner.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os
from pathlib import Path

from recuperaFase.parametros import VALORES_POR_DEFECTO

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
# No hay servidor web, pero Django exige la clave para inicializarse
SECRET_KEY = os.environ.get('RECUPERA_FASE_SECRET_KEY', 'django-insecure-solo-cli-sin-servidor')

DEBUG = False

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'espectral',
    'regularizadores',
    'geometria',
    'algoritmos',
    'experimentos',
]

MIDDLEWARE = []


# Database
# Sin modelos: los resultados se guardan en CSV / JSON-lines dentro de OUTPUT_DIR

DATABASES = {}


# Internationalization

LANGUAGE_CODE = 'es-cl'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Default primary key field type

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Directorio por defecto para CSV, SVG y JSON generados por los comandos
OUTPUT_DIR = BASE_DIR / 'resultados'


# Parámetros numéricos de los algoritmos y del protocolo experimental
# (ver recuperaFase/parametros.py; se pueden sobreescribir claves aquí)
RECUPERA_FASE = {
    **VALORES_POR_DEFECTO,
}


# Logging
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '[{levelname}] {asctime} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        name: {
            'handlers': ['console'],
            'level': os.environ.get('RECUPERA_FASE_LOG_LEVEL', 'INFO'),
            'propagate': False,
        }
        for name in INSTALLED_APPS
    },
}

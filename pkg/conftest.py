"""Configura Django para que pytest pueda recolectar los tests.py de cada app."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'recuperaFase.settings')
django.setup()

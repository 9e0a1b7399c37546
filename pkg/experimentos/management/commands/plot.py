"""
Comando para regenerar los gráficos SVG desde un CSV agregado guardado
"""
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from experimentos.graficos import graficar_agregado
from experimentos.persistencia import ErrorEsquemaCSV, read_aggregate_csv


class Command(BaseCommand):
    help = 'Genera recuperacion.svg y tiempos.svg a partir de un CSV agregado'

    def add_arguments(self, parser):
        parser.add_argument('csv', type=str, help='Ruta del CSV agregado (aggregate.csv)')
        parser.add_argument(
            '--out',
            type=str,
            default=None,
            help='Directorio de salida (default: el directorio del CSV)'
        )

    def handle(self, *args, **options):
        ruta = Path(options['csv'])
        directorio = Path(options['out']) if options['out'] else ruta.parent

        if not ruta.exists():
            raise CommandError(f'No existe el archivo {ruta}')
        try:
            tabla = read_aggregate_csv(ruta)
        except ErrorEsquemaCSV as e:
            raise CommandError(str(e))

        recuperacion, tiempos = graficar_agregado(tabla, directorio)
        self.stdout.write(self.style.SUCCESS(f'✓ {len(tabla)} filas graficadas'))
        self.stdout.write(f'  • {recuperacion}')
        self.stdout.write(f'  • {tiempos}')

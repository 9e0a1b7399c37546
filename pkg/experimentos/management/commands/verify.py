"""
Comando para ejecutar la suite de verificación numérica
"""
from django.core.management.base import BaseCommand, CommandError

from experimentos.verificacion import ejecutar_verificaciones


class Command(BaseCommand):
    help = 'Verifica numéricamente las identidades de la DFT, los prox, la geometría de Z_c y los solvers'

    def add_arguments(self, parser):
        parser.add_argument(
            '--seed',
            type=int,
            default=0,
            help='Semilla base de las verificaciones (default: 0)'
        )
        parser.add_argument(
            '--rapido',
            action='store_true',
            help='Reduce el número de casos de las verificaciones más costosas'
        )

    def handle(self, *args, **options):
        self.stdout.write(self.style.SUCCESS('\n=== VERIFICACIÓN NUMÉRICA ===\n'))

        resultados = ejecutar_verificaciones(options['seed'], rapido=options['rapido'])

        for r in resultados:
            linea = f'{r.nombre:<40} error={r.error:.3e}  umbral={r.umbral:.1e}'
            if r.detalle:
                linea += f'  ({r.detalle})'
            if r.paso:
                self.stdout.write(self.style.SUCCESS(f'  ✓ {linea}'))
            else:
                self.stdout.write(self.style.ERROR(f'  ✗ {linea}'))

        fallidas = [r.nombre for r in resultados if not r.paso]
        if fallidas:
            raise CommandError(
                f'{len(fallidas)} de {len(resultados)} verificaciones fallaron: {", ".join(fallidas)}'
            )
        self.stdout.write(self.style.SUCCESS(f'\n✅ {len(resultados)} verificaciones correctas\n'))

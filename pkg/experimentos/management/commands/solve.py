"""
Comando para resolver una instancia de recuperación de fase

La instancia se lee de un archivo de magnitudes o se genera con (n, K, snr_db, seed)
del mismo modo que el ensayo 0 del benchmark.
"""
from pathlib import Path

import numpy as np
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from algoritmos.solvers import resolver, truncate_topk
from experimentos.config_experimentos import ErrorConfiguracion, construir_solve, leer_config
from experimentos.persistencia import write_solution_json
from experimentos.protocolo import (
    FLUJO_INICIO, FLUJO_SENAL, generador, generate_measurements, generate_signal,
    magnitudes_desde_medidas, random_init, recovery_metric,
)
from geometria.magnitudes import residuo_amplitud


class Command(BaseCommand):
    help = 'Resuelve una instancia (magnitudes leídas o generadas) y escribe la solución en JSON'

    def add_arguments(self, parser):
        parser.add_argument(
            '--config',
            type=str,
            required=True,
            help='Archivo de configuración con sección [solve] y opcionalmente [prior]'
        )
        parser.add_argument(
            '--out',
            type=str,
            default=None,
            help='Directorio de salida (default: settings.OUTPUT_DIR)'
        )
        parser.add_argument(
            '--seed',
            type=int,
            default=None,
            help='Semilla (sobreescribe la del archivo de configuración)'
        )

    def handle(self, *args, **options):
        ruta_config = Path(options['config'])
        directorio = Path(options['out']) if options['out'] else Path(settings.OUTPUT_DIR)

        try:
            config = construir_solve(leer_config(ruta_config), base=ruta_config.parent, seed=options['seed'])
        except ErrorConfiguracion as e:
            raise CommandError(str(e))

        x0 = None
        try:
            if config.medidas is None:
                rng = generador(config.seed, FLUJO_SENAL, 0)
                x0 = generate_signal(config.n, config.K, rng)
                m = generate_measurements(x0, config.snr_db, rng)
            else:
                negativas = int(np.count_nonzero(config.medidas < 0))
                if negativas:
                    self.stdout.write(self.style.WARNING(
                        f'  ⚠️  {negativas} magnitudes negativas recortadas a cero'
                    ))
                m = magnitudes_desde_medidas(config.medidas)

            if isinstance(config.inicio, np.ndarray):
                inicio = config.inicio
            elif config.inicio == 'verdad':
                inicio = x0.copy()
            else:
                inicio = random_init(config.n, range(config.n // 2), generador(config.seed, FLUJO_INICIO, 0, 0))

            run = resolver(m, config.solver, inicio)
        except ValueError as e:
            raise CommandError(str(e))

        x_final = truncate_topk(run.final_x, config.K) if config.trunca else run.final_x
        datos = {
            **run.a_dict(),
            'method': config.etiqueta,
            'seed': config.seed,
            'final_x': [float(v) for v in x_final],
            'residual': residuo_amplitud(m, x_final),
        }
        if run.paso_agotado:
            self.stdout.write(self.style.WARNING('  ⚠️  backtracking agotado: se conservó el último iterado'))
        if x0 is not None:
            datos['recovery'] = recovery_metric(x_final, x0)

        ruta = write_solution_json(directorio / 'solucion.json', datos)
        self.stdout.write(self.style.SUCCESS(
            f"✓ {config.etiqueta}: {run.iterations} iteraciones, término={run.termination}, "
            f"residuo={datos['residual']:.3e} -> {ruta}"
        ))

"""
Comando para ejecutar un benchmark de recuperación sobre un grid de celdas

Escribe en el directorio de salida:
  trials.csv     un registro por ensayo
  aggregate.csv  una fila por celda (method, n, K, snr_db)
  trials.jsonl   log completo de cada ensayo
  recuperacion.svg / tiempos.svg
"""
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from experimentos.config_experimentos import (
    NIVEL_BENCH_DEFAULT, NIVELES_BENCH, ErrorConfiguracion, construir_grid, leer_config,
)
from experimentos.graficos import graficar_agregado
from experimentos.persistencia import (
    read_aggregate_csv, write_aggregate_csv, write_trials_csv, write_trials_jsonl,
)
from experimentos.protocolo import best_lambda_per_cell, run_grid


class Command(BaseCommand):
    help = 'Ejecuta el benchmark de probabilidad de recuperación y genera CSV y gráficos SVG'

    def add_arguments(self, parser):
        parser.add_argument(
            '--config',
            type=str,
            default=None,
            help=f'Archivo de configuración con sección [bench] (default: nivel {NIVEL_BENCH_DEFAULT})'
        )
        parser.add_argument(
            '--nivel',
            type=str,
            choices=sorted(NIVELES_BENCH),
            default=None,
            help='Nivel predefinido cuando no se entrega --config'
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
            help='Semilla maestra (sobreescribe la del archivo de configuración)'
        )
        parser.add_argument(
            '--jobs',
            type=int,
            default=1,
            help='Hilos para repartir los ensayos (default: 1, el resultado no cambia)'
        )
        parser.add_argument(
            '--no-timing',
            action='store_true',
            help='Registra 0 como tiempo de CPU para obtener salidas idénticas entre corridas'
        )

    def handle(self, *args, **options):
        directorio = Path(options['out']) if options['out'] else Path(settings.OUTPUT_DIR)
        if options['jobs'] < 1:
            raise CommandError('--jobs debe ser >= 1')
        if options['seed'] is not None and options['seed'] < 0:
            raise CommandError('--seed debe ser >= 0')

        try:
            if options['config']:
                datos = leer_config(options['config'])
                if 'bench' not in datos:
                    raise ErrorConfiguracion(f"{options['config']}: falta la sección [bench]")
                seccion = datos['bench']
            else:
                seccion = {'nivel': options['nivel'] or NIVEL_BENCH_DEFAULT}
            config = construir_grid(seccion, seed=options['seed'])
        except ErrorConfiguracion as e:
            raise CommandError(str(e))

        total_ensayos = sum(cfg.trials for cfg in config.grid)
        self.stdout.write(self.style.SUCCESS('\n=== BENCHMARK DE RECUPERACIÓN ===\n'))
        self.stdout.write(f'Celdas: {len(config.grid)}, ensayos totales: {total_ensayos}, semilla: {config.seed}')
        if options['no_timing']:
            self.stdout.write(self.style.WARNING('  ⚠️  Tiempos desactivados (--no-timing)'))

        resultado = run_grid(config.grid, jobs=options['jobs'], medir_tiempo=not options['no_timing'])
        agregado = best_lambda_per_cell(resultado.agregado) if config.mejor_lambda else resultado.agregado

        ruta_ensayos = write_trials_csv(directorio / 'trials.csv', resultado.ensayos)
        ruta_agregado = write_aggregate_csv(directorio / 'aggregate.csv', agregado)
        ruta_log = write_trials_jsonl(directorio / 'trials.jsonl', resultado.ensayos)

        # Los gráficos se generan desde el CSV releído, igual que el comando plot
        tabla = read_aggregate_csv(ruta_agregado)
        recuperacion, tiempos = graficar_agregado(tabla, directorio)

        self.stdout.write('\n📊 PROBABILIDAD DE RECUPERACIÓN:')
        for fila in tabla.itertuples(index=False):
            self.stdout.write(
                f'  • {fila.method:<12} n={fila.n:<4} K={fila.K:<3} snr={fila.snr_db:g}: '
                f'{fila.recovery_probability:.2f} (cpu mediana {fila.median_cpu_seconds:.4f}s)'
            )

        self.stdout.write(self.style.SUCCESS('\n✅ Archivos generados:'))
        for ruta in (ruta_ensayos, ruta_agregado, ruta_log, recuperacion, tiempos):
            self.stdout.write(f'  • {ruta}')

import json
import os
import re
import tempfile
import unittest
from io import StringIO
from pathlib import Path
from unittest import mock

import numpy as np
import pandas as pd
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from algoritmos.config_solvers import metodo_desde_etiqueta
from algoritmos.solvers import resolver, truncate_topk
from espectral.transformada import dft
from regularizadores.prior import PriorSpec
from .config_experimentos import (
    ErrorConfiguracion, construir_grid, construir_solve, leer_config, obtener_nivel_bench,
)
from .graficos import graficar_agregado
from .persistencia import (
    VERSION_AGREGADO, ErrorEsquemaCSV, read_aggregate_csv, write_aggregate_csv,
    write_trials_csv, write_trials_jsonl,
)
from .protocolo import (
    COLUMNAS_AGREGADO, ExperimentConfig, FLUJO_INICIO, best_lambda_per_cell, expand_lambda_sweep,
    generador, generate_measurements, generate_signal, magnitudes_desde_medidas, orbita_invariancias,
    random_init, recovery_metric, run_grid, run_trial, varianza_ruido,
)
from .verificacion import (
    RETICULAS_PROX, VERIFICACIONES, ejecutar_verificaciones, error_oraculo_prox,
    verificar_identidad_minimizacion_parcial, verificar_prox_oraculo,
)


def celda(etiqueta='am-l1', n=16, K=2, snr_db=np.inf, **kwargs):
    return ExperimentConfig(n=n, K=K, snr_db=snr_db, method=metodo_desde_etiqueta(etiqueta, n, K),
                            label=etiqueta, **kwargs)


def escribir(directorio, nombre, texto):
    ruta = Path(directorio) / nombre
    ruta.write_text(texto, encoding='utf-8')
    return ruta


def tabla_agregada(filas):
    return pd.DataFrame(filas, columns=COLUMNAS_AGREGADO)


class GeneracionTests(SimpleTestCase):
    def test_senal_con_soporte_en_la_primera_mitad(self):
        x = generate_signal(4, 2, generador(1, 0, 0))
        np.testing.assert_array_equal(np.flatnonzero(x), [0, 1])
        self.assertTrue(np.all((np.abs(x[:2]) >= 3) & (np.abs(x[:2]) <= 4)))

    def test_senal_determinista(self):
        np.testing.assert_array_equal(generate_signal(64, 4, generador(9, 0, 3)),
                                      generate_signal(64, 4, generador(9, 0, 3)))
        with self.assertRaises(ValueError):
            generate_signal(8, 5, generador(0))

    def test_frecuencia_de_soporte_uniforme(self):
        n, K, sorteos = 8, 2, 10000
        rng = generador(11, 0, 0)
        conteos = np.zeros(n)
        for _ in range(sorteos):
            conteos += generate_signal(n, K, rng) != 0
        np.testing.assert_array_equal(conteos[n // 2:], 0)
        p = K / (n // 2)
        sigma = np.sqrt(sorteos * p * (1 - p))
        self.assertTrue(np.all(np.abs(conteos[:n // 2] - sorteos * p) <= 3 * sigma), conteos)

    def test_mediciones_sin_ruido_exactas(self):
        x0 = generate_signal(32, 3, generador(2, 0, 0))
        np.testing.assert_array_equal(generate_measurements(x0, np.inf, generador(2)).c, np.abs(dft(x0)))

    def test_mediciones_con_ruido_no_negativas(self):
        x0 = generate_signal(32, 3, generador(3, 0, 0))
        for i in range(20):
            self.assertTrue(np.all(generate_measurements(x0, 0.0, generador(3, 5, i)).c >= 0))

    def test_snr_empirico(self):
        # x0 = [4, 0, ...] da un espectro constante s = 16
        n = 16
        x0 = np.zeros(n)
        x0[0] = 4.0
        s = np.abs(dft(x0)) ** 2
        rng = np.random.default_rng(81)
        ruido = np.array([generate_measurements(x0, 20.0, rng).c ** 2 - s for _ in range(10000)])
        snr = 10 * np.log10(np.sum(s ** 2) / (n * np.var(ruido)))
        self.assertAlmostEqual(snr, 20.0, delta=0.5)
        self.assertAlmostEqual(varianza_ruido(s, 20.0), 2.56)

    def test_inicio_aleatorio(self):
        x = random_init(10, range(5), generador(4, FLUJO_INICIO, 0, 0))
        np.testing.assert_array_equal(x[5:], 0)
        np.testing.assert_array_equal(x, random_init(10, range(5), generador(4, FLUJO_INICIO, 0, 0)))
        self.assertFalse(np.array_equal(x, random_init(10, range(5), generador(4, FLUJO_INICIO, 0, 1))))

    def test_medidas_negativas_se_recortan(self):
        with self.assertLogs('experimentos.protocolo', level='WARNING'):
            m = magnitudes_desde_medidas([1.0, -0.5, 2.0])
        np.testing.assert_array_equal(m.c, [1.0, 0.0, 2.0])


class RecuperacionTests(SimpleTestCase):
    def test_orbita(self):
        x = np.random.default_rng(82).standard_normal(7)
        orbita = orbita_invariancias(x)
        self.assertEqual(orbita.shape, (28, 7))
        for y in orbita:
            np.testing.assert_allclose(np.abs(dft(y)), np.abs(dft(x)), atol=1e-9)

    def test_metrica(self):
        x0 = np.array([3.0, 0.0, -4.0, 0.0])
        self.assertEqual(recovery_metric(x0, x0), 1)
        self.assertEqual(recovery_metric([-3, 0, 4, 0], x0), 1)
        self.assertEqual(recovery_metric([3, 0, 4, 0], x0), 0)
        self.assertEqual(recovery_metric([0, 3, 0, -4], x0), 1)

    def test_metrica_invariante_en_la_orbita(self):
        rng = np.random.default_rng(83)
        x0 = generate_signal(10, 3, generador(12, 0, 0))
        for x_hat in (np.roll(-x0, 3), x0 + 0.1 * rng.standard_normal(10), rng.standard_normal(10)):
            esperado = recovery_metric(x_hat, x0)
            for y in orbita_invariancias(x_hat):
                self.assertEqual(recovery_metric(y, x0), esperado)
        self.assertEqual(recovery_metric(np.roll(-x0, 3), x0), 1)
        self.assertEqual(recovery_metric(x0 + 0.1 * np.ones(10), x0), 0)


class EnsayoTests(SimpleTestCase):
    def test_inicio_en_la_verdad_recupera(self):
        for etiqueta in ('am-l1', 'fistaph-l1'):
            for n in (16, 32):
                cfg = celda(etiqueta, n=n, restarts=1, trials=50, seed=5, include_truth_init=True)
                for t in range(cfg.trials):
                    self.assertEqual(run_trial(cfg, t, medir_tiempo=False).recovery, 1, f'{etiqueta} n={n} ensayo {t}')

    def test_un_reinicio_es_la_salida_del_solver(self):
        cfg = celda('am-l0', restarts=1, seed=6)
        registro = run_trial(cfg, 0, medir_tiempo=False)
        m = generate_measurements(registro.ground_truth, np.inf, generador(6, 0, 0))
        run = resolver(m, cfg.method, random_init(16, range(8), generador(6, FLUJO_INICIO, 0, 0)))
        np.testing.assert_array_equal(registro.best_estimate, run.final_x)

    def test_truncado_en_priors_sin_l0(self):
        registro = run_trial(celda('am-l1', restarts=2, seed=7), 0, medir_tiempo=False)
        np.testing.assert_array_equal(registro.best_estimate, truncate_topk(registro.best_estimate, 2))
        self.assertLessEqual(np.count_nonzero(registro.best_estimate), 2)

    def test_determinista(self):
        cfg = celda('fistaph-l1', restarts=3, seed=8, snr_db=20.0)
        a, b = run_trial(cfg, 2, medir_tiempo=False), run_trial(cfg, 2, medir_tiempo=False)
        np.testing.assert_array_equal(a.best_estimate, b.best_estimate)
        np.testing.assert_array_equal(a.per_restart_residuals, b.per_restart_residuals)
        self.assertEqual(a.cpu_time, 0.0)

    def test_orden_de_ensayos_no_importa(self):
        cfg = celda('am-l1', restarts=2, trials=4, seed=13, snr_db=20.0)
        en_orden = [run_trial(cfg, t, medir_tiempo=False).a_dict() for t in range(cfg.trials)]
        invertido = [run_trial(cfg, t, medir_tiempo=False).a_dict() for t in reversed(range(cfg.trials))]
        self.assertEqual(en_orden, invertido[::-1])


class GridTests(SimpleTestCase):
    def test_hilos_igual_a_secuencial(self):
        grid = [celda('am-l1', K=K, restarts=2, trials=3, seed=9) for K in (2, 3)]
        secuencial = run_grid(grid, jobs=1, medir_tiempo=False)
        paralelo = run_grid(grid, jobs=3, medir_tiempo=False)
        pd.testing.assert_frame_equal(secuencial.agregado, paralelo.agregado)
        self.assertEqual(list(secuencial.agregado.columns), COLUMNAS_AGREGADO)

    def test_todos_recuperados(self):
        grid = [celda('am-l1', restarts=1, trials=4, seed=10, include_truth_init=True)]
        self.assertEqual(run_grid(grid, medir_tiempo=False).agregado['recovery_probability'].iloc[0], 1.0)

    def test_barrido_lambda(self):
        expandidas = expand_lambda_sweep(celda('wirt-l1'), [1.0, 2.15, 4.64])
        self.assertEqual([c.lam for c in expandidas], [1.0, 2.15, 4.64])
        self.assertEqual(expand_lambda_sweep(celda('am-l0'), None), [celda('am-l0')])
        with self.assertRaises(ValueError):
            expand_lambda_sweep(celda('am-l0'), [1.0])

    def test_mejor_lambda_por_celda(self):
        tabla = tabla_agregada([
            ['wirt-l1', 16, 2, np.inf, 1.0, 0.5, 0.0, 10, 5],
            ['wirt-l1', 16, 2, np.inf, 2.15, 0.7, 0.0, 10, 5],
            ['wirt-l1', 16, 2, np.inf, 4.64, 0.7, 0.0, 10, 5],
            ['wirt-l1', 16, 3, np.inf, 1.0, 0.2, 0.0, 10, 5],
            ['wirt-l1', 16, 3, np.inf, 2.15, 0.1, 0.0, 10, 5],
        ])
        mejores = best_lambda_per_cell(tabla)
        self.assertEqual(mejores['K'].tolist(), [2, 3])
        self.assertEqual(mejores['lambda'].tolist(), [2.15, 1.0])


class PersistenciaTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.directorio = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_agregado_se_relee(self):
        tabla = tabla_agregada([['am-l1', 64, 2, np.inf, 0.2, 0.95, 0.0123, 20, 50],
                                ['am-l1', 64, 3, 20.0, 0.2, 0.4, 0.02, 20, 50]])
        ruta = write_aggregate_csv(self.directorio / 'aggregate.csv', tabla)
        self.assertEqual(ruta.read_text().splitlines()[0], VERSION_AGREGADO)
        leida = read_aggregate_csv(ruta)
        self.assertEqual(leida['snr_db'].tolist(), [np.inf, 20.0])
        self.assertEqual(leida['K'].tolist(), [2, 3])
        self.assertEqual(leida['recovery_probability'].tolist(), [0.95, 0.4])

    def test_version_incorrecta(self):
        ruta = escribir(self.directorio, 'a.csv', '# recupera-fase aggregate v0\n' + ','.join(COLUMNAS_AGREGADO) + '\n')
        with self.assertRaises(ErrorEsquemaCSV):
            read_aggregate_csv(ruta)

    def test_sin_filas(self):
        ruta = escribir(self.directorio, 'a.csv', VERSION_AGREGADO + '\n' + ','.join(COLUMNAS_AGREGADO) + '\n')
        with self.assertRaisesMessage(ErrorEsquemaCSV, 'no tiene filas'):
            read_aggregate_csv(ruta)

    def test_valor_no_numerico_indica_fila_y_columna(self):
        texto = (VERSION_AGREGADO + '\n' + ','.join(COLUMNAS_AGREGADO) + '\n'
                 'am,16,2,inf,0,0.5,0.1,10,5\n'
                 'am,16,x,inf,0,0.5,0.1,10,5\n')
        with self.assertRaisesMessage(ErrorEsquemaCSV, "fila 2, columna 'K'"):
            read_aggregate_csv(escribir(self.directorio, 'a.csv', texto))

    def test_columnas_incorrectas(self):
        texto = VERSION_AGREGADO + '\nmethod,n,K\nam,16,2\n'
        with self.assertRaises(ErrorEsquemaCSV):
            read_aggregate_csv(escribir(self.directorio, 'a.csv', texto))

    def test_probabilidad_fuera_de_rango(self):
        texto = VERSION_AGREGADO + '\n' + ','.join(COLUMNAS_AGREGADO) + '\nam,16,2,inf,0,1.5,0.1,10,5\n'
        with self.assertRaisesMessage(ErrorEsquemaCSV, 'fila 1'):
            read_aggregate_csv(escribir(self.directorio, 'a.csv', texto))

    def test_ensayos_y_log(self):
        cfg = celda('am-l0', restarts=1, trials=2, seed=11)
        resultado = run_grid([cfg], medir_tiempo=False)
        ensayos = write_trials_csv(self.directorio / 'trials.csv', resultado.ensayos).read_text().splitlines()
        self.assertEqual(ensayos[0], '# recupera-fase trials v1')
        self.assertEqual(len(ensayos), 4)
        lineas = write_trials_jsonl(self.directorio / 'trials.jsonl', resultado.ensayos).read_text().splitlines()
        self.assertEqual(len(lineas), 2)
        registro = json.loads(lineas[0])
        self.assertEqual(list(registro), sorted(registro))
        self.assertEqual(len(registro['ground_truth']), 16)


class ConfiguracionTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.directorio = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_clave_desconocida(self):
        ruta = escribir(self.directorio, 'c.ini', '[bench]\nn = 16\nmetods = am\n')
        with self.assertRaisesMessage(ErrorConfiguracion, 'metods'):
            leer_config(ruta)

    def test_seccion_desconocida(self):
        ruta = escribir(self.directorio, 'c.ini', '[banco]\nn = 16\n')
        with self.assertRaises(ErrorConfiguracion):
            leer_config(ruta)

    def test_grid_metodos_por_K(self):
        ruta = escribir(self.directorio, 'c.ini',
                        '[bench]\nn = 16\nK = 2, 3, 4\nsnr_db = inf\nmethods = am-l1, am-l0\ntrials = 2\nrestarts = 2\n')
        config = construir_grid(leer_config(ruta)['bench'], seed=3)
        self.assertEqual(len(config.grid), 6)
        self.assertFalse(config.mejor_lambda)
        self.assertEqual({c.seed for c in config.grid}, {3})

    def test_barrido(self):
        config = construir_grid({'n': '16', 'K': '2', 'snr_db': 'inf', 'methods': 'wirt-l1, am-l1', 'lambdas': 'sweep'})
        self.assertTrue(config.mejor_lambda)
        self.assertEqual(len(config.grid), 10)

    def test_niveles(self):
        self.assertEqual(obtener_nivel_bench('inexistente'), obtener_nivel_bench('escritorio'))
        self.assertEqual(len(construir_grid({'nivel': 'escritorio'}).grid), 18)
        with self.assertRaises(ErrorConfiguracion):
            construir_grid({'nivel': 'inexistente'})
        with self.assertRaises(ErrorConfiguracion):
            construir_grid({'methods': 'gespar'})

    def test_solve(self):
        config = construir_solve({'solve': {'method': 'am-l0', 'n': '16', 'K': '2', 'init': 'verdad'}}, seed=4)
        self.assertEqual(config.solver.prior.k_sparsity, 2)
        self.assertEqual(config.seed, 4)
        with self.assertRaises(ErrorConfiguracion):
            construir_solve({'solve': {'method': 'am-l1', 'n': '16'}})
        with self.assertRaises(ErrorConfiguracion):
            construir_solve({'solve': {'method': 'am-l1', 'n': '16', 'K': '2', 'truncate': 'quizas'}})

    def test_solve_con_prior(self):
        datos = {'solve': {'method': 'am', 'n': '8', 'K': '1'},
                 'prior': {'kind': 'l1_with_support', 'lambda': '0.5', 'support': '0, 1, 2'}}
        prior = construir_solve(datos).solver.prior
        self.assertEqual(prior.kind, 'l1_with_support')
        self.assertEqual(prior.support, (0, 1, 2))


class GraficosTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.directorio = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_una_serie_por_metodo(self):
        filas = [[m, 64, K, np.inf, 0.2, p, 0.01 * K, 20, 50]
                 for m, base in (('fistaph-l1', 1.0), ('am-l1', 0.8)) for K, p in zip((2, 3, 4), (base, base - 0.2, base - 0.4))]
        recuperacion, tiempos = graficar_agregado(tabla_agregada(filas), self.directorio)
        for ruta in (recuperacion, tiempos):
            svg = ruta.read_text()
            self.assertEqual(len(set(re.findall(r'id="(serie-[^"]+)"', svg))), 2)
            self.assertIn('viewBox="0 0 800 600"', svg)
        primera = recuperacion.read_bytes()
        graficar_agregado(tabla_agregada(filas), self.directorio)
        self.assertEqual(recuperacion.read_bytes(), primera)

    def test_una_fila_y_tiempos_nulos(self):
        recuperacion, tiempos = graficar_agregado(
            tabla_agregada([['am', 16, 2, np.inf, 0.0, 1.0, 0.0, 5, 5]]), self.directorio)
        self.assertIn('serie-am', recuperacion.read_text())
        self.assertTrue(tiempos.exists())


class ComandosTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.directorio = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_verify(self):
        salida = StringIO()
        call_command('verify', rapido=True, stdout=salida)
        self.assertGreaterEqual(salida.getvalue().count('✓'), 12)
        self.assertIn('verificaciones correctas', salida.getvalue())

    def test_verify_detecta_normalizacion_erronea(self):
        self.assertTrue(verificar_identidad_minimizacion_parcial(np.random.default_rng(0), casos=50).paso)
        with mock.patch('geometria.magnitudes.idft', lambda v: np.fft.ifft(v, norm='ortho')):
            resultado = verificar_identidad_minimizacion_parcial(np.random.default_rng(0), casos=50)
        self.assertFalse(resultado.paso)
        self.assertEqual(resultado.nombre, 'identidad_minimizacion_parcial')

    def test_oraculo_prox_hasta_n_4(self):
        self.assertEqual(sorted(RETICULAS_PROX), [1, 2, 3, 4])
        casos = [
            (PriorSpec(kind='l0_topk', k_sparsity=1), [0.5, -1.5, 1.5, 0.2]),
            (PriorSpec(kind='l0_with_support', k_sparsity=1, support=(0, 2)), [1.0, 2.0, -0.7, 0.3]),
            (PriorSpec(kind='support_only', support=(1,)), [0.4, -1.1, 0.9]),
            (PriorSpec(kind='l1', lam=0.3), [1.0, -1.0, 0.5]),
        ]
        for p, v in casos:
            paso, radio = RETICULAS_PROX[len(v)]
            self.assertEqual(error_oraculo_prox(p, np.array(v), paso, radio), 0.0, p.kind)

        resultado = verificar_prox_oraculo(np.random.default_rng(5), casos=3)
        self.assertTrue(resultado.paso)
        self.assertIn('n=4', resultado.detalle)

    def test_oraculo_prox_detecta_prox_erroneo(self):
        p = PriorSpec(kind='l1', lam=0.3)
        paso, radio = RETICULAS_PROX[3]
        with mock.patch('experimentos.verificacion.prox', lambda p, v: np.array(v, dtype=float)):
            self.assertGreater(error_oraculo_prox(p, np.array([1.0, -1.0, 0.5]), paso, radio), 0.1)

    def test_tamano_de_la_suite(self):
        self.assertGreaterEqual(len(VERIFICACIONES), 12)
        with mock.patch('experimentos.verificacion.VERIFICACIONES', VERIFICACIONES[:2]):
            nombres = [r.nombre for r in ejecutar_verificaciones(semilla=3)]
        self.assertEqual(nombres, ['dft_rapida_vs_ingenua', 'idft_dft_ida_y_vuelta'])

    def test_solve_determinista(self):
        ruta = escribir(self.directorio, 'solve.ini',
                        '[solve]\nmethod = fistaph-l1\nn = 32\nK = 2\nseed = 7\ninit = verdad\nlambda = 0\ntruncate = true\n')
        call_command('solve', config=str(ruta), out=str(self.directorio / 'a'), stdout=StringIO())
        call_command('solve', config=str(ruta), out=str(self.directorio / 'b'), stdout=StringIO())
        a = (self.directorio / 'a' / 'solucion.json').read_bytes()
        self.assertEqual(a, (self.directorio / 'b' / 'solucion.json').read_bytes())
        datos = json.loads(a)
        self.assertLessEqual(datos['residual'], 1e-6)
        self.assertEqual(datos['recovery'], 1)
        self.assertEqual(len(datos['final_x']), 32)
        self.assertEqual(datos['method'], 'fistaph-l1')
        self.assertEqual(datos['seed'], 7)
        self.assertEqual(datos['termination'], 'tolerance_met')
        self.assertIs(datos['step_exhausted'], False)
        self.assertEqual(
            set(datos),
            {'method', 'seed', 'final_x', 'residual', 'iterations', 'termination', 'objective',
             'step_exhausted', 'recovery'},
        )

    def test_solve_clave_desconocida(self):
        ruta = escribir(self.directorio, 'solve.ini', '[solve]\nmethod = am\nn = 16\nK = 2\nsemilla = 3\n')
        with self.assertRaises(CommandError):
            call_command('solve', config=str(ruta), out=str(self.directorio), stdout=StringIO())

    def test_solve_medidas_negativas(self):
        escribir(self.directorio, 'c.txt', '2.0, -0.1, 1.0, -0.1\n')
        ruta = escribir(self.directorio, 'solve.ini', '[solve]\nmethod = am\nmeasurements = c.txt\nmax_iters = 50\n')
        salida = StringIO()
        with self.assertLogs('experimentos.protocolo', level='WARNING'):
            call_command('solve', config=str(ruta), out=str(self.directorio), stdout=salida)
        self.assertIn('recortadas', salida.getvalue())
        datos = json.loads((self.directorio / 'solucion.json').read_text())
        self.assertNotIn('recovery', datos)
        # n medidas dan una solución de largo n
        self.assertEqual(len(datos['final_x']), 4)

    def test_bench_y_plot(self):
        ruta = escribir(self.directorio, 'bench.ini',
                        '[bench]\nn = 16\nK = 2, 3, 4\nsnr_db = inf\nmethods = am-l1, am-l0\n'
                        'trials = 2\nrestarts = 2\nmax_iters = 300\n')
        for nombre, jobs in (('a', 1), ('b', 2)):
            call_command('bench', config=str(ruta), out=str(self.directorio / nombre), seed=12,
                         jobs=jobs, no_timing=True, stdout=StringIO())
        a, b = self.directorio / 'a', self.directorio / 'b'
        for archivo in ('trials.csv', 'aggregate.csv', 'trials.jsonl', 'recuperacion.svg', 'tiempos.svg'):
            self.assertEqual((a / archivo).read_bytes(), (b / archivo).read_bytes(), archivo)

        tabla = read_aggregate_csv(a / 'aggregate.csv')
        self.assertEqual(len(tabla), 6)
        self.assertTrue(tabla['recovery_probability'].between(0, 1).all())
        svg = (a / 'recuperacion.svg').read_text()
        self.assertEqual(len(set(re.findall(r'id="(serie-[^"]+)"', svg))), 2)

        call_command('plot', str(a / 'aggregate.csv'), out=str(self.directorio / 'c'), stdout=StringIO())
        for archivo in ('recuperacion.svg', 'tiempos.svg'):
            self.assertEqual((a / archivo).read_bytes(), (self.directorio / 'c' / archivo).read_bytes())

    def test_plot_errores(self):
        vacio = escribir(self.directorio, 'vacio.csv', VERSION_AGREGADO + '\n' + ','.join(COLUMNAS_AGREGADO) + '\n')
        with self.assertRaises(CommandError):
            call_command('plot', str(vacio), stdout=StringIO())
        with self.assertRaises(CommandError):
            call_command('plot', str(self.directorio / 'no_existe.csv'), stdout=StringIO())

    def test_plot_una_fila(self):
        ruta = escribir(self.directorio, 'uno.csv',
                        VERSION_AGREGADO + '\n' + ','.join(COLUMNAS_AGREGADO) + '\nam,16,2,inf,0,1,0,5,5\n')
        call_command('plot', str(ruta), stdout=StringIO())
        self.assertTrue((self.directorio / 'recuperacion.svg').exists())


@unittest.skipUnless(os.environ.get('RECUPERA_FASE_BATERIA') == '1', 'batería completa: RECUPERA_FASE_BATERIA=1')
class BateriaEscritorioTests(SimpleTestCase):
    """n=64, K en {2,3,4}, SNR en {inf, 20}, 20 ensayos x 50 reinicios (varios minutos)"""

    def test_orden_de_recuperacion(self):
        config = construir_grid({'nivel': 'escritorio'}, seed=20170417)
        agregado = run_grid(config.grid, jobs=os.cpu_count() or 1, medir_tiempo=False).agregado
        tabla = agregado.pivot_table(index=['K', 'snr_db'], columns='method', values='recovery_probability')
        for (K, snr), fila in tabla.iterrows():
            self.assertGreaterEqual(fila['fistaph-l1'], fila['am-l1'] - 0.05, f'K={K} snr={snr}')
            self.assertGreaterEqual(fila['am-l1'], fila['am-l0'] - 0.05, f'K={K} snr={snr}')

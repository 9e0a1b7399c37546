import numpy as np
from django.test import SimpleTestCase

from espectral.transformada import dft
from geometria.magnitudes import MagnitudeSet, project_onto_Zc
from regularizadores import prior as priors
from regularizadores.prior import PriorNoConvexoError, PriorSpec
from .config_solvers import lambdas_barrido, metodo_desde_etiqueta, obtener_configuracion_metodo
from .solvers import (
    PasoBacktracking, SolverConfig, alpha_fista, displacement_tail_ratio, es_monotono, fienup_am,
    fistaph, fixed_point_residual, gradiente_magnitud_cuadrado, mag2_pg, objetivo_magnitud_cuadrado,
    resolver, sufficient_decrease_gaps, truncate_topk,
)


def senal_dispersa(rng, n, K):
    x = np.zeros(n)
    x[rng.choice(n // 2, size=K, replace=False)] = rng.choice([-1.0, 1.0], size=K) * rng.uniform(3, 4, size=K)
    return x


def inicio_aleatorio(rng, n):
    x = np.zeros(n)
    x[:n // 2] = rng.standard_normal(n // 2)
    return x


def prior_l1(n, lam=0.2):
    return PriorSpec(kind=priors.L1_WITH_SUPPORT, lam=lam, support=tuple(range(n // 2)))


class SolverConfigTests(SimpleTestCase):
    def test_valores_por_defecto(self):
        cfg = SolverConfig(method='am')
        self.assertEqual(cfg.max_iters, 5000)
        self.assertEqual(cfg.tol, 1e-8)
        self.assertEqual(cfg.inertia_schedule, 'fista')

    def test_validaciones(self):
        with self.assertRaises(ValueError):
            SolverConfig(method='gespar')
        with self.assertRaises(ValueError):
            SolverConfig(method='fistaph', inertia_schedule=1.0)
        with self.assertRaises(ValueError):
            SolverConfig(method='am', max_iters=0)
        with self.assertRaises(ValueError):
            SolverConfig(method='am', tol=0.0)

    def test_alpha_fista(self):
        self.assertEqual(alpha_fista(0), 0.0)
        self.assertEqual(alpha_fista(1), 0.0)
        self.assertAlmostEqual(alpha_fista(3), 0.4)
        self.assertAlmostEqual(alpha_fista(8), 0.7)
        self.assertEqual(SolverConfig(method='fistaph', inertia_schedule=0.3).alpha(8), 0.3)


class FienupAMTests(SimpleTestCase):
    def test_inicio_en_la_senal(self):
        x0 = senal_dispersa(np.random.default_rng(51), 16, 2)
        run = fienup_am(MagnitudeSet(np.abs(dft(x0))), SolverConfig(method='am'), x0)
        self.assertEqual(run.iterations, 1)
        self.assertEqual(run.termination, 'tolerance_met')
        np.testing.assert_allclose(run.final_x, x0, atol=1e-12)
        self.assertAlmostEqual(run.objective, 0.0, places=12)

    def test_un_paso_dos_puntos(self):
        m = MagnitudeSet([1, 1])
        run = fienup_am(m, SolverConfig(method='am', max_iters=1), [1, 1])
        np.testing.assert_allclose(run.final_x, [1, 0], atol=1e-15)
        self.assertEqual(run.termination, 'max_iters')
        run = fienup_am(m, SolverConfig(method='am'), [1, 1])
        np.testing.assert_allclose(run.final_x, [1, 0], atol=1e-15)
        self.assertEqual(run.termination, 'tolerance_met')

    def test_l0_desde_la_senal_conserva_signos(self):
        rng = np.random.default_rng(52)
        x0 = senal_dispersa(rng, 16, 2)
        p = PriorSpec(kind=priors.L0_TOPK, k_sparsity=2)
        run = fienup_am(MagnitudeSet(np.abs(dft(x0))), SolverConfig(method='am', prior=p), x0)
        np.testing.assert_array_equal(np.sign(run.final_x), np.sign(x0))

    def test_decrecimiento_suficiente(self):
        rng = np.random.default_rng(53)
        p = prior_l1(64)
        for snr in (np.inf, 20.0):
            for _ in range(3):
                x0 = senal_dispersa(rng, 64, 3)
                s = np.abs(dft(x0)) ** 2
                if np.isinf(snr):
                    c = np.sqrt(s)
                else:
                    sigma = np.sqrt(np.sum(s ** 2) / (64 * 10 ** (snr / 10)))
                    c = np.sqrt(np.maximum(s + rng.normal(0, sigma, 64), 0))
                m = MagnitudeSet(c)
                inicio = inicio_aleatorio(rng, 64)
                run = fienup_am(m, SolverConfig(method='am', prior=p, max_iters=2000), inicio)
                self.assertLessEqual(np.max(sufficient_decrease_gaps(m, p, run, inicio)), 1e-10)
                self.assertTrue(es_monotono(run))
                if run.termination == 'tolerance_met':
                    self.assertLessEqual(displacement_tail_ratio(run), 0.01)

    def test_l0_monotono(self):
        rng = np.random.default_rng(54)
        p = PriorSpec(kind=priors.L0_WITH_SUPPORT, k_sparsity=3, support=tuple(range(16)))
        for _ in range(5):
            m = MagnitudeSet(np.abs(dft(senal_dispersa(rng, 32, 3))))
            run = fienup_am(m, SolverConfig(method='am', prior=p, max_iters=1000), inicio_aleatorio(rng, 32))
            self.assertTrue(es_monotono(run))

    def test_residuo_de_punto_fijo(self):
        x0 = senal_dispersa(np.random.default_rng(55), 16, 2)
        m = MagnitudeSet(np.abs(dft(x0)))
        self.assertLess(fixed_point_residual(m, PriorSpec(), x0), 1e-12)

    def test_tolerancia_acota_el_ultimo_desplazamiento(self):
        rng = np.random.default_rng(57)
        p = prior_l1(32)
        for _ in range(4):
            m = MagnitudeSet(np.abs(dft(senal_dispersa(rng, 32, 2))))
            inicio = inicio_aleatorio(rng, 32)
            run = fienup_am(m, SolverConfig(method='am', prior=p), inicio)
            if run.termination == 'tolerance_met':
                self.assertLessEqual(run.displacement_trace[-1], np.sqrt(2 * (run.stop_value + 1e-10)))
            fino = fienup_am(m, SolverConfig(method='am', prior=p, max_iters=20000, tol=1e-13), inicio)
            if fino.termination == 'tolerance_met':
                self.assertLessEqual(fixed_point_residual(m, p, fino.final_x), 1e-6)

    def test_determinista(self):
        rng = np.random.default_rng(56)
        m = MagnitudeSet(np.abs(dft(senal_dispersa(rng, 32, 2))))
        inicio = inicio_aleatorio(rng, 32)
        cfg = SolverConfig(method='am', prior=prior_l1(32), max_iters=300)
        a, b = fienup_am(m, cfg, inicio), fienup_am(m, cfg, inicio)
        np.testing.assert_array_equal(a.final_x, b.final_x)
        np.testing.assert_array_equal(a.objective_trace, b.objective_trace)

    def test_configuracion_de_otro_metodo(self):
        with self.assertRaises(ValueError):
            fienup_am(MagnitudeSet([1, 1]), SolverConfig(method='fistaph'), [1, 0])


class FISTAPHTests(SimpleTestCase):
    def test_alpha_cero_reproduce_am(self):
        rng = np.random.default_rng(61)
        p = prior_l1(32)
        for _ in range(20):
            x0 = senal_dispersa(rng, 32, 2)
            m = MagnitudeSet(np.abs(dft(x0)))
            inicio = inicio_aleatorio(rng, 32)
            am = fienup_am(m, SolverConfig(method='am', prior=p, max_iters=60, tol=1e-300), inicio)
            fista = fistaph(m, SolverConfig(method='fistaph', prior=p, max_iters=60, tol=1e-300,
                                            inertia_schedule=0.0), inicio)
            largo = min(am.iterations, fista.iterations)
            self.assertGreater(largo, 0)
            np.testing.assert_array_equal(am.objective_trace[:largo], fista.objective_trace[:largo])
            np.testing.assert_array_equal(am.displacement_trace[:largo], fista.displacement_trace[:largo])

    def test_desde_la_proyeccion_de_la_senal(self):
        x0 = senal_dispersa(np.random.default_rng(62), 32, 2)
        m = MagnitudeSet(np.abs(dft(x0)))
        run = fistaph(m, SolverConfig(method='fistaph', prior=prior_l1(32)), project_onto_Zc(m, x0))
        self.assertEqual(run.termination, 'tolerance_met')
        self.assertLess(run.stop_value, 1e-8)
        np.testing.assert_array_equal(np.sign(truncate_topk(run.final_x, 2)), np.sign(x0))

    def test_rechaza_prior_no_convexo(self):
        p = PriorSpec(kind=priors.L0_TOPK, k_sparsity=1)
        with self.assertRaises(PriorNoConvexoError):
            fistaph(MagnitudeSet([1, 1]), SolverConfig(method='fistaph', prior=p), [1, 0])


class Mag2PGTests(SimpleTestCase):
    def test_gradiente_diferencias_finitas(self):
        rng = np.random.default_rng(71)
        h = 1e-5
        for _ in range(20):
            m = MagnitudeSet(np.abs(rng.standard_normal(10)) * 2)
            x = rng.standard_normal(10)
            analitico = gradiente_magnitud_cuadrado(m, x)
            numerico = np.array([
                (objetivo_magnitud_cuadrado(m, x + h * e) - objetivo_magnitud_cuadrado(m, x - h * e)) / (2 * h)
                for e in np.eye(10)
            ])
            self.assertLessEqual(np.linalg.norm(numerico - analitico), 1e-5 * max(1.0, np.linalg.norm(analitico)))

    def test_en_la_senal_se_detiene(self):
        x0 = senal_dispersa(np.random.default_rng(72), 16, 2)
        m = MagnitudeSet(np.abs(dft(x0)))
        self.assertLess(np.linalg.norm(gradiente_magnitud_cuadrado(m, x0)), 1e-10)
        run = mag2_pg(m, SolverConfig(method='mag2_pg'), x0)
        self.assertEqual(run.iterations, 1)
        self.assertEqual(run.termination, 'tolerance_met')

    def test_objetivo_no_aumenta(self):
        rng = np.random.default_rng(73)
        m = MagnitudeSet(np.abs(dft(senal_dispersa(rng, 16, 2))))
        inicio = inicio_aleatorio(rng, 16)
        valores = [objetivo_magnitud_cuadrado(m, inicio)]
        for k in range(1, 8):
            run = mag2_pg(m, SolverConfig(method='mag2_pg', max_iters=k, tol=1e-300), inicio)
            valores.append(objetivo_magnitud_cuadrado(m, run.final_x))
        self.assertTrue(np.all(np.diff(valores) <= 0))

    def test_pasos_aceptados_cumplen_armijo(self):
        rng = np.random.default_rng(75)
        m = MagnitudeSet(np.abs(dft(senal_dispersa(rng, 16, 2))))
        iterados = [inicio_aleatorio(rng, 16)]
        for k in range(1, 11):
            run = mag2_pg(m, SolverConfig(method='mag2_pg', max_iters=k, tol=1e-300), iterados[0])
            iterados.append(run.final_x)
        for x, x_mas in zip(iterados, iterados[1:]):
            gradiente = gradiente_magnitud_cuadrado(m, x)
            # Con prior none x+ = x - t grad f(x)
            t = np.linalg.norm(x - x_mas) / np.linalg.norm(gradiente)
            f, f_mas = objetivo_magnitud_cuadrado(m, x), objetivo_magnitud_cuadrado(m, x_mas)
            self.assertLessEqual(f_mas, f - 1e-4 * t * np.sum(gradiente ** 2) + 1e-12 * f)

    def test_backtracking_agotado(self):
        rng = np.random.default_rng(76)
        m = MagnitudeSet(np.abs(dft(senal_dispersa(rng, 16, 2))))
        inicio = inicio_aleatorio(rng, 16)
        # El primer intento (t = 100) se aleja demasiado y el siguiente ya está bajo el mínimo
        regla = PasoBacktracking(inicial=100.0, minimo=60.0)
        with self.assertLogs('algoritmos.solvers', level='WARNING'):
            run = mag2_pg(m, SolverConfig(method='mag2_pg', step_rule=regla), inicio)
        self.assertTrue(run.paso_agotado)
        self.assertTrue(run.a_dict()['step_exhausted'])
        self.assertEqual(run.iterations, 1)
        np.testing.assert_array_equal(run.final_x, inicio)
        self.assertFalse(mag2_pg(m, SolverConfig(method='mag2_pg', max_iters=5), inicio).paso_agotado)

    def test_resolver_despacha(self):
        x0 = senal_dispersa(np.random.default_rng(74), 16, 2)
        m = MagnitudeSet(np.abs(dft(x0)))
        for metodo in ('am', 'fistaph', 'mag2_pg'):
            self.assertEqual(resolver(m, SolverConfig(method=metodo), x0).method, metodo)


class TruncateTests(SimpleTestCase):
    def test_ejemplos(self):
        np.testing.assert_array_equal(truncate_topk([0.1, 3, -2.9, 0.05], 2), [0, 3, -2.9, 0])
        np.testing.assert_array_equal(truncate_topk([0, 2, 0, -1], 2), [0, 2, 0, -1])
        np.testing.assert_array_equal(truncate_topk([1, 1, 1], 1), [1, 0, 0])

    def test_K_invalido(self):
        with self.assertRaises(ValueError):
            truncate_topk([1, 2], 3)


class CatalogoMetodosTests(SimpleTestCase):
    def test_metodos(self):
        cfg = metodo_desde_etiqueta('am-l0', 16, 3)
        self.assertEqual(cfg.method, 'am')
        self.assertEqual(cfg.prior.k_sparsity, 3)
        self.assertEqual(cfg.prior.support, tuple(range(8)))
        self.assertEqual(metodo_desde_etiqueta('fistaph-l1', 16, 3).prior.lam, 0.2)
        self.assertEqual(metodo_desde_etiqueta('wirt-l1', 16, 3).method, 'mag2_pg')
        self.assertEqual(metodo_desde_etiqueta('am', 16, None).prior.kind, priors.SUPPORT_ONLY)

    def test_barrido(self):
        self.assertEqual(len(lambdas_barrido('wirt-l1')), 9)
        self.assertIsNone(lambdas_barrido('am-l1'))

    def test_errores(self):
        with self.assertRaises(ValueError):
            obtener_configuracion_metodo('gespar')
        with self.assertRaises(ValueError):
            metodo_desde_etiqueta('am-l0', 16, None)

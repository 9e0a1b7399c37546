from unittest import mock

import numpy as np
from django.test import SimpleTestCase

from espectral.transformada import dft, idft
from regularizadores import prior as priors
from regularizadores.prior import PriorNoConvexoError, PriorSpec, prox
from .magnitudes import (
    MagnitudeSet, SplitPoint, amplitude_objective, full_objective_K, funcion_H, grad_H,
    gradient_mapping_norm, majorizer, partial_min_value, paso_gradiente_proyectado,
    pertenece_a_Zc, project_onto_Zc,
)


def senal_dispersa(rng, n=16, K=2):
    x = np.zeros(n)
    x[rng.choice(n // 2, size=K, replace=False)] = rng.choice([-1.0, 1.0], size=K) * rng.uniform(3, 4, size=K)
    return x


class MagnitudeSetTests(SimpleTestCase):
    def test_rechaza_negativos_y_no_finitos(self):
        with self.assertRaises(ValueError):
            MagnitudeSet([1.0, -0.5])
        with self.assertRaises(ValueError):
            MagnitudeSet([1.0, np.nan])
        with self.assertRaises(ValueError):
            MagnitudeSet([1.0, 1j])

    def test_inmutable(self):
        m = MagnitudeSet([1.0, 2.0])
        with self.assertRaises(ValueError):
            m.c[0] = 5.0


class ProyeccionTests(SimpleTestCase):
    def test_ejemplos(self):
        np.testing.assert_allclose(project_onto_Zc(MagnitudeSet([1, 1]), [1, 1]), [1, 0], atol=1e-15)
        np.testing.assert_allclose(project_onto_Zc(MagnitudeSet([2, 2]), [1, 0]), [2, 0], atol=1e-15)

    def test_punto_en_Zc_es_fijo(self):
        x = np.random.default_rng(31).standard_normal(12)
        np.testing.assert_allclose(project_onto_Zc(MagnitudeSet(np.abs(dft(x))), x), x, atol=1e-12)

    def test_espectro_nulo_usa_fase_cero(self):
        z = project_onto_Zc(MagnitudeSet([1.0, 2.0, 3.0]), np.zeros(3))
        np.testing.assert_allclose(dft(z), [1, 2, 3], atol=1e-12)

    def test_resultado_pertenece_a_Zc(self):
        rng = np.random.default_rng(32)
        for _ in range(50):
            m = MagnitudeSet(np.abs(rng.standard_normal(9)))
            self.assertTrue(pertenece_a_Zc(m, project_onto_Zc(m, rng.standard_normal(9))))

    def test_optimalidad(self):
        rng = np.random.default_rng(33)
        m = MagnitudeSet(np.abs(rng.standard_normal(8)) * 2)
        x = rng.standard_normal(8)
        distancia = np.linalg.norm(x - project_onto_Zc(m, x))
        for _ in range(200):
            z = idft(m.c * np.exp(2j * np.pi * rng.random(8)))
            self.assertLessEqual(distancia, np.linalg.norm(x - z) + 1e-10)


class ObjetivoTests(SimpleTestCase):
    def test_amplitude_objective(self):
        self.assertAlmostEqual(amplitude_objective(MagnitudeSet([1, 1]), PriorSpec(), [0, 0]), 0.5)
        self.assertAlmostEqual(amplitude_objective(MagnitudeSet([1, 1]), PriorSpec(kind=priors.L1, lam=1.0), [1, 0]), 1.0)
        x = np.random.default_rng(34).standard_normal(10)
        self.assertAlmostEqual(amplitude_objective(MagnitudeSet(np.abs(dft(x))), PriorSpec(), x), 0.0, places=12)

    def test_partial_min_value(self):
        self.assertAlmostEqual(partial_min_value(MagnitudeSet([1, 1]), [1, 1]), 0.5)
        self.assertAlmostEqual(partial_min_value(MagnitudeSet([2, 2]), [1, 0]), 0.5)

    def test_identidad_minimizacion_parcial(self):
        rng = np.random.default_rng(35)
        for _ in range(1000):
            n = int(rng.integers(2, 65))
            x = rng.standard_normal(n) * 3
            m = MagnitudeSet(np.abs(rng.standard_normal(n)) * 3)
            identidad = np.sum((np.abs(dft(x)) - m.c) ** 2) / (2 * n)
            self.assertLessEqual(abs(partial_min_value(m, x) - identidad), 1e-9 * (1 + identidad))

    def test_identidad_detecta_normalizacion_erronea(self):
        m = MagnitudeSet([1.0, 2.0, 0.5, 1.5])
        x = np.array([0.3, -1.0, 2.0, 0.7])
        identidad = np.sum((np.abs(dft(x)) - m.c) ** 2) / 8
        with mock.patch('geometria.magnitudes.idft', lambda v: np.fft.ifft(v, norm='ortho')):
            self.assertGreater(abs(partial_min_value(m, x) - identidad), 1e-3)

    def test_majorizer(self):
        self.assertAlmostEqual(majorizer(MagnitudeSet([1, 1]), PriorSpec(), [1, 1], [0, 0]), 0.5)
        rng = np.random.default_rng(36)
        p = PriorSpec(kind=priors.L1, lam=0.3)
        for _ in range(500):
            m = MagnitudeSet(np.abs(rng.standard_normal(6)))
            x, y = rng.standard_normal(6), rng.standard_normal(6)
            self.assertGreaterEqual(majorizer(m, p, x, y) - amplitude_objective(m, p, y), -1e-10)
            self.assertAlmostEqual(majorizer(m, p, x, x), amplitude_objective(m, p, x), delta=1e-10)

    def test_full_objective_K(self):
        m = MagnitudeSet([1, 1])
        self.assertAlmostEqual(full_objective_K(m, PriorSpec(), [0, 0], SplitPoint([1, 0], [0, 0])), 0.5)
        self.assertAlmostEqual(full_objective_K(m, PriorSpec(), [1, 0], SplitPoint([1, 0], [0, 0])), 0.0)
        self.assertEqual(full_objective_K(m, PriorSpec(), [0, 0], SplitPoint([1, 1], [0, 0])), np.inf)


class GradienteHTests(SimpleTestCase):
    def test_ejemplos(self):
        g = grad_H(PriorSpec(kind=priors.L1, lam=1.0), SplitPoint([2.0], [3.0]))
        np.testing.assert_allclose(g.w1, [1.0])
        np.testing.assert_allclose(g.w2, [3.0])
        g = grad_H(PriorSpec(), SplitPoint([1.0, -2.0], [0.5, 0.5]))
        np.testing.assert_array_equal(g.w1, [0.0, 0.0])
        np.testing.assert_array_equal(g.w2, [0.5, 0.5])
        # J = {1} en numeración 1-based
        g = grad_H(PriorSpec(kind=priors.SUPPORT_ONLY, support=(0,)), SplitPoint([2.0, 3.0], [0.0, 0.0]))
        np.testing.assert_array_equal(g.w1, [0.0, 3.0])

    def test_rechaza_prior_no_convexo(self):
        p = PriorSpec(kind=priors.L0_TOPK, k_sparsity=1)
        with self.assertRaises(PriorNoConvexoError):
            grad_H(p, SplitPoint([1.0, 2.0], [0.0, 0.0]))
        with self.assertRaises(PriorNoConvexoError):
            gradient_mapping_norm(MagnitudeSet([1, 1]), p, SplitPoint([1.0, 2.0], [0.0, 0.0]))

    def test_diferencias_finitas(self):
        rng = np.random.default_rng(37)
        p = PriorSpec(kind=priors.L1_WITH_SUPPORT, lam=0.4, support=(0, 1, 2))
        h = 1e-5
        for _ in range(50):
            w = SplitPoint(rng.standard_normal(5) * 2, rng.standard_normal(5))
            g = grad_H(p, w)
            for i in range(5):
                e = np.zeros(5)
                e[i] = h
                numerico = (funcion_H(p, SplitPoint(w.w1 + e, w.w2)) - funcion_H(p, SplitPoint(w.w1 - e, w.w2))) / (2 * h)
                self.assertAlmostEqual(numerico, g.w1[i], delta=1e-5 * max(1.0, abs(g.w1[i])))

    def test_lipschitz(self):
        rng = np.random.default_rng(38)
        p = PriorSpec(kind=priors.L1, lam=0.5)
        for _ in range(500):
            u = SplitPoint(rng.standard_normal(4), rng.standard_normal(4))
            v = SplitPoint(rng.standard_normal(4), rng.standard_normal(4))
            self.assertLessEqual((grad_H(p, u) - grad_H(p, v)).norma(), (1 + 1e-9) * (u - v).norma())


class GradientMappingTests(SimpleTestCase):
    def test_cero_en_la_senal(self):
        x0 = senal_dispersa(np.random.default_rng(39))
        m = MagnitudeSet(np.abs(dft(x0)))
        self.assertLess(gradient_mapping_norm(m, PriorSpec(), SplitPoint(x0, np.zeros_like(x0))), 1e-10)

    def test_paso_igual_a_am(self):
        rng = np.random.default_rng(40)
        p = PriorSpec(kind=priors.L1_WITH_SUPPORT, lam=0.2, support=tuple(range(6)))
        for _ in range(200):
            m = MagnitudeSet(np.abs(rng.standard_normal(12)) * 3)
            z = project_onto_Zc(m, rng.standard_normal(12) + 1j * rng.standard_normal(12))
            paso = paso_gradiente_proyectado(m, p, SplitPoint.desde_complejo(z))
            np.testing.assert_allclose(paso.como_complejo(), project_onto_Zc(m, prox(p, z.real)), rtol=0, atol=1e-12)

    def test_igual_a_composicion_directa(self):
        rng = np.random.default_rng(41)
        p = PriorSpec(kind=priors.L1, lam=0.3)
        m = MagnitudeSet(np.abs(rng.standard_normal(7)))
        w = SplitPoint(rng.standard_normal(7), rng.standard_normal(7))
        directa = np.linalg.norm(w.como_complejo() - project_onto_Zc(m, prox(p, w.w1)))
        self.assertAlmostEqual(gradient_mapping_norm(m, p, w), directa, places=12)

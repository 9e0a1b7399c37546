import numpy as np
from django.test import SimpleTestCase

from espectral.transformada import ErrorDimension
from . import prior as priors
from .prior import PriorSpec, evaluate, hard_threshold, prior_desde_dict, prox, soft_threshold, tie_break_topk


class ProxTests(SimpleTestCase):
    def test_l1(self):
        p = PriorSpec(kind=priors.L1, lam=0.5)
        np.testing.assert_allclose(prox(p, [1, -0.2, 2]), [0.5, 0, 1.5])

    def test_l0_topk(self):
        p = PriorSpec(kind=priors.L0_TOPK, k_sparsity=2)
        np.testing.assert_array_equal(prox(p, [3, -1, 2]), [3, 0, 2])

    def test_l1_con_soporte(self):
        # J = {1} en numeración 1-based es el índice 0
        p = PriorSpec(kind=priors.L1_WITH_SUPPORT, lam=1.0, support=(0,))
        np.testing.assert_array_equal(prox(p, [3, 5]), [2, 0])

    def test_base_identidad_es_soft_threshold(self):
        p = PriorSpec(kind=priors.BASIS_L1, lam=1.0, basis=np.eye(2))
        np.testing.assert_allclose(prox(p, [2, -0.5]), [1, 0])

    def test_base_rotada(self):
        angulo = 0.3
        D = np.array([[np.cos(angulo), -np.sin(angulo)], [np.sin(angulo), np.cos(angulo)]])
        p = PriorSpec(kind=priors.BASIS_L1, lam=0.4, basis=D)
        v = np.array([1.5, -0.7])
        np.testing.assert_allclose(prox(p, v), D @ soft_threshold(D.T @ v, 0.4), atol=1e-14)

    def test_none_y_soporte(self):
        v = np.array([1.0, -2.0, 3.0])
        np.testing.assert_array_equal(prox(PriorSpec(), v), v)
        np.testing.assert_array_equal(prox(PriorSpec(kind=priors.SUPPORT_ONLY, support=(0, 2)), v), [1, 0, 3])

    def test_no_modifica_la_entrada(self):
        v = np.array([3.0, 5.0])
        prox(PriorSpec(kind=priors.SUPPORT_ONLY, support=(0,)), v)
        np.testing.assert_array_equal(v, [3.0, 5.0])

    def test_no_expansivo_para_priors_convexos(self):
        rng = np.random.default_rng(21)
        D, _ = np.linalg.qr(rng.standard_normal((6, 6)))
        for p in (PriorSpec(kind=priors.L1, lam=0.3),
                  PriorSpec(kind=priors.L1_WITH_SUPPORT, lam=0.3, support=(0, 1, 2)),
                  PriorSpec(kind=priors.BASIS_L1, lam=0.3, basis=D)):
            for _ in range(200):
                u, v = rng.standard_normal(6), rng.standard_normal(6)
                self.assertLessEqual(np.linalg.norm(prox(p, u) - prox(p, v)), np.linalg.norm(u - v) + 1e-12)

    def test_idempotencia_soporte(self):
        p = PriorSpec(kind=priors.SUPPORT_ONLY, support=(1, 3))
        v = np.random.default_rng(22).standard_normal(5)
        np.testing.assert_array_equal(prox(p, prox(p, v)), prox(p, v))

    def test_soporte_fuera_de_rango(self):
        with self.assertRaises(ErrorDimension):
            prox(PriorSpec(kind=priors.SUPPORT_ONLY, support=(4,)), [1.0, 2.0])


class EvaluateTests(SimpleTestCase):
    def test_ejemplos(self):
        self.assertEqual(evaluate(PriorSpec(kind=priors.L1, lam=2.0), [1, -3]), 8.0)
        self.assertEqual(evaluate(PriorSpec(kind=priors.SUPPORT_ONLY, support=(0,)), [0, 1]), np.inf)
        self.assertEqual(evaluate(PriorSpec(), [5, -7, 1]), 0.0)

    def test_l0_cuenta_no_ceros(self):
        p = PriorSpec(kind=priors.L0_TOPK, k_sparsity=2)
        self.assertEqual(evaluate(p, [1, 0, 2]), 0.0)
        self.assertEqual(evaluate(p, [1, 3, 2]), np.inf)

    def test_filas(self):
        p = PriorSpec(kind=priors.L1_WITH_SUPPORT, lam=1.0, support=(0,))
        np.testing.assert_array_equal(evaluate(p, [[1, 0], [-2, 0], [1, 1]]), [1.0, 2.0, np.inf])

    def test_base(self):
        D = np.eye(3)[:, ::-1]
        self.assertAlmostEqual(evaluate(PriorSpec(kind=priors.BASIS_L1, lam=0.5, basis=D), [1, -2, 3]), 3.0)


class TopKTests(SimpleTestCase):
    def test_desempate_por_menor_indice(self):
        np.testing.assert_array_equal(tie_break_topk([1, 1, 0], 1), [0])
        np.testing.assert_array_equal(tie_break_topk([0, 2, 2], 2), [1, 2])
        np.testing.assert_array_equal(tie_break_topk([5, 1], 2), [0, 1])

    def test_K_fuera_de_rango(self):
        with self.assertRaises(ValueError):
            tie_break_topk([1, 2], 0)
        with self.assertRaises(ValueError):
            tie_break_topk([1, 2], 3)

    def test_hard_threshold_como_mucho_K(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            v = rng.standard_normal(10)
            self.assertLessEqual(np.count_nonzero(hard_threshold(v, 3)), 3)


class PriorSpecTests(SimpleTestCase):
    def test_validaciones(self):
        with self.assertRaises(ValueError):
            PriorSpec(kind='l2')
        with self.assertRaises(ValueError):
            PriorSpec(kind=priors.L1, lam=-1.0)
        with self.assertRaises(ValueError):
            PriorSpec(kind=priors.L0_TOPK)
        with self.assertRaises(ValueError):
            PriorSpec(kind=priors.SUPPORT_ONLY)
        with self.assertRaises(ValueError):
            PriorSpec(kind=priors.BASIS_L1, lam=1.0, basis=np.ones((2, 2)))

    def test_soporte_ordenado_y_convexidad(self):
        p = PriorSpec(kind=priors.L0_WITH_SUPPORT, k_sparsity=1, support=[3, 1, 1])
        self.assertEqual(p.support, (1, 3))
        self.assertFalse(p.es_convexo)
        self.assertTrue(PriorSpec(kind=priors.L1, lam=1.0).es_convexo)

    def test_desde_dict(self):
        p = prior_desde_dict({'kind': 'l1_with_support', 'lambda': 0.2, 'support': 'mitad'}, n=8)
        self.assertEqual(p.support, (0, 1, 2, 3))
        self.assertEqual(p.a_dict(), {'kind': 'l1_with_support', 'lambda': 0.2, 'support': [0, 1, 2, 3]})
        with self.assertRaises(ValueError):
            prior_desde_dict({'kind': 'l1', 'lamda': 0.2})

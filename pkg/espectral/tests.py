import numpy as np
from django.test import SimpleTestCase

from .transformada import ErrorDimension, dft, dft_ingenua, dft_padded, idft


class DFTTests(SimpleTestCase):
    def test_ejemplos_dos_puntos(self):
        np.testing.assert_allclose(dft([1, 1]), [2, 0], atol=1e-15)
        np.testing.assert_allclose(dft([1, 0]), [1, 1], atol=1e-15)
        np.testing.assert_array_equal(dft(np.zeros(5)), np.zeros(5))

    def test_inversa_dos_puntos(self):
        np.testing.assert_allclose(idft([2, 0]), [1, 1], atol=1e-15)
        np.testing.assert_allclose(idft([1, 1]), [1, 0], atol=1e-15)

    def test_n_uno_es_identidad(self):
        np.testing.assert_allclose(dft([3.5]), [3.5])

    def test_coincide_con_suma_directa(self):
        rng = np.random.default_rng(11)
        for n in range(1, 65):
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            np.testing.assert_allclose(dft(x), dft_ingenua(x), atol=1e-9)

    def test_ida_y_vuelta(self):
        rng = np.random.default_rng(12)
        for _ in range(1000):
            x = rng.standard_normal(64)
            self.assertLessEqual(np.max(np.abs(idft(dft(x)) - x)), 1e-12 * np.max(np.abs(x)))

    def test_parseval_y_simetria_conjugada(self):
        rng = np.random.default_rng(13)
        for n in (1, 2, 7, 16, 33, 100):
            x = rng.standard_normal(n)
            espectro = dft(x)
            self.assertAlmostEqual(np.sum(np.abs(espectro) ** 2), n * np.sum(x ** 2), delta=1e-9 * n * np.sum(x ** 2))
            np.testing.assert_allclose(espectro, np.conj(espectro[(-np.arange(n)) % n]), atol=1e-12)

    def test_entrada_vacia_o_matriz(self):
        with self.assertRaises(ErrorDimension):
            dft([])
        with self.assertRaises(ErrorDimension):
            dft(np.ones((2, 2)))


class DFTPaddedTests(SimpleTestCase):
    def test_ejemplos(self):
        np.testing.assert_allclose(dft_padded([1], 2), [1, 1], atol=1e-15)
        np.testing.assert_allclose(dft_padded([1, 1], 4), [2, 1 - 1j, 0, 1 + 1j], atol=1e-15)

    def test_sin_relleno_igual_a_dft(self):
        x = np.random.default_rng(14).standard_normal(9)
        np.testing.assert_array_equal(dft_padded(x, 9), dft(x))

    def test_N_menor_que_n(self):
        with self.assertRaises(ValueError):
            dft_padded([1, 2, 3], 2)

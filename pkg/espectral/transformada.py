"""
Núcleo de la transformada discreta de Fourier (DFT)

Convención fija: la transformada directa no se normaliza y la inversa lleva el factor 1/n.
Con esta convención ||dft(x)||^2 = n ||x||^2 y ||idft(v)||^2 = (1/n) ||v||^2, que es
exactamente lo que usa la identidad de minimización parcial sobre Z_c.
"""
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray


RealVector = NDArray[np.float64]
ComplexVector = NDArray[np.complex128]
Vector = Union[RealVector, ComplexVector]


class ErrorDimension(ValueError):
    """Longitudes incompatibles entre vectores, o vector vacío"""


def como_vector(x: ArrayLike, nombre: str = 'x') -> NDArray:
    """
    Convierte la entrada en un vector 1D (real o complejo) de largo >= 1

    Args:
        x: secuencia de números
        nombre: nombre del argumento para el mensaje de error

    Returns:
        ndarray float64 o complex128 (copia independiente de la entrada)
    """
    arr = np.array(x)
    if arr.ndim != 1 or arr.size == 0:
        raise ErrorDimension(f'{nombre} debe ser un vector 1D no vacío (forma recibida: {arr.shape})')
    if np.iscomplexobj(arr):
        return arr.astype(np.complex128)
    return arr.astype(np.float64)


def verificar_largo(x: NDArray, n: int, nombre: str = 'x') -> None:
    """Lanza ErrorDimension si x no tiene largo n"""
    if x.shape != (n,):
        raise ErrorDimension(f'{nombre} tiene largo {x.shape[0] if x.ndim else 0}, se esperaba {n}')


def dft(x: ArrayLike) -> ComplexVector:
    """
    DFT directa sin normalizar: salida[j] = sum_t x[t] exp(-2 pi i j t / n)

    Funciona para cualquier n >= 1 (numpy.fft usa Bluestein / radix mixto).
    """
    return np.fft.fft(como_vector(x))


def idft(v: ArrayLike) -> ComplexVector:
    """Inversa de dft, incluye el factor 1/n"""
    return np.fft.ifft(como_vector(v, 'v'))


def dft_padded(x: ArrayLike, N: int) -> ComplexVector:
    """
    DFT de x completado con ceros hasta largo N

    Args:
        x: vector real de largo n
        N: largo de la transformada, N >= n

    Returns:
        Vector complejo de largo N (igual a dft(x) si N == n)
    """
    x = como_vector(x)
    if int(N) < x.shape[0]:
        raise ValueError(f'N={N} es menor que el largo de la señal ({x.shape[0]})')
    return np.fft.fft(x, n=int(N))


def dft_ingenua(x: ArrayLike) -> ComplexVector:
    """
    DFT de referencia O(n^2) por suma directa

    Solo para verificar el camino rápido en tamaños pequeños (n <= 64).
    """
    x = como_vector(x)
    n = x.shape[0]
    indices = np.arange(n)
    matriz = np.exp(-2j * np.pi * np.outer(indices, indices) / n)
    return matriz @ x

"""
Catálogo de regularizadores g con su operador proximal exacto

Todos los algoritmos usan la misma interfaz: prox(p, v) y evaluate(p, v).
Los índices de soporte son 0-based (J = {0, ..., n/2 - 1} corresponde a {1, ..., n/2}).
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from espectral.transformada import ErrorDimension, RealVector


# Tipos de prior disponibles
NONE = 'none'
L1 = 'l1'
L0_TOPK = 'l0_topk'
SUPPORT_ONLY = 'support_only'
L1_WITH_SUPPORT = 'l1_with_support'
L0_WITH_SUPPORT = 'l0_with_support'
BASIS_L1 = 'basis_l1'

TIPOS_CONVEXOS = frozenset({NONE, L1, SUPPORT_ONLY, L1_WITH_SUPPORT, BASIS_L1})
TIPOS_NO_CONVEXOS = frozenset({L0_TOPK, L0_WITH_SUPPORT})
TIPOS_VALIDOS = TIPOS_CONVEXOS | TIPOS_NO_CONVEXOS

# Tipos que usan cada parámetro
TIPOS_CON_LAMBDA = frozenset({L1, L1_WITH_SUPPORT, BASIS_L1})
TIPOS_CON_K = frozenset({L0_TOPK, L0_WITH_SUPPORT})
TIPOS_CON_SOPORTE = frozenset({SUPPORT_ONLY, L1_WITH_SUPPORT, L0_WITH_SUPPORT})

TOL_ORTONORMALIDAD = 1e-10


class PriorNoConvexoError(ValueError):
    """Operación que requiere un prior convexo recibió uno no convexo"""


@dataclass(frozen=True)
class PriorSpec:
    """
    Descripción declarativa del regularizador g

    Los tipos l0 se implementan como la restricción dura ||x||_0 <= K (no como penalización).
    """
    kind: str = NONE
    lam: float = 0.0
    k_sparsity: Optional[int] = None
    support: Optional[Tuple[int, ...]] = None
    basis: Optional[NDArray[np.float64]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in TIPOS_VALIDOS:
            raise ValueError(f'Tipo de prior desconocido: {self.kind!r}. Opciones: {sorted(TIPOS_VALIDOS)}')
        if not self.lam >= 0:
            raise ValueError(f'lambda debe ser >= 0 (recibido {self.lam})')
        object.__setattr__(self, 'lam', float(self.lam))

        if self.kind in TIPOS_CON_K:
            if self.k_sparsity is None or int(self.k_sparsity) < 1:
                raise ValueError(f'El prior {self.kind} requiere k_sparsity >= 1')
            object.__setattr__(self, 'k_sparsity', int(self.k_sparsity))

        if self.kind in TIPOS_CON_SOPORTE:
            if self.support is None:
                raise ValueError(f'El prior {self.kind} requiere un soporte J')
            soporte = tuple(sorted({int(i) for i in self.support}))
            if soporte and soporte[0] < 0:
                raise ValueError(f'Índices de soporte negativos: {soporte}')
            object.__setattr__(self, 'support', soporte)

        if self.kind == BASIS_L1:
            if self.basis is None:
                raise ValueError('El prior basis_l1 requiere una matriz D de columnas ortonormales')
            D = np.array(self.basis, dtype=np.float64)
            if D.ndim != 2:
                raise ErrorDimension(f'La base D debe ser una matriz, forma recibida {D.shape}')
            desvio = np.max(np.abs(D.T @ D - np.eye(D.shape[1])))
            if desvio > TOL_ORTONORMALIDAD:
                raise ValueError(f'Las columnas de D no son ortonormales (||D^T D - I||_inf = {desvio:.3e})')
            D.setflags(write=False)
            object.__setattr__(self, 'basis', D)

    @property
    def es_convexo(self) -> bool:
        return self.kind in TIPOS_CONVEXOS

    def a_dict(self) -> Dict:
        """Representación serializable (config / JSON); la base D se omite"""
        datos = {'kind': self.kind}
        if self.kind in TIPOS_CON_LAMBDA:
            datos['lambda'] = self.lam
        if self.kind in TIPOS_CON_K:
            datos['k_sparsity'] = self.k_sparsity
        if self.kind in TIPOS_CON_SOPORTE:
            datos['support'] = list(self.support)
        return datos


def _verificar_dimension(p: PriorSpec, v: NDArray) -> int:
    n = v.shape[-1]
    if p.support is not None and p.support and p.support[-1] >= n:
        raise ErrorDimension(f'El soporte contiene el índice {p.support[-1]} pero el vector tiene largo {n}')
    if p.basis is not None and p.basis.shape[0] != n:
        raise ErrorDimension(f'La base D tiene {p.basis.shape[0]} filas pero el vector tiene largo {n}')
    return n


def _mascara_soporte(support: Iterable[int], n: int) -> NDArray[np.bool_]:
    mascara = np.zeros(n, dtype=bool)
    mascara[list(support)] = True
    return mascara


def soft_threshold(v: NDArray, alpha: float) -> NDArray:
    """T_alpha(v)_i = sgn(v_i) max(|v_i| - alpha, 0)"""
    return np.sign(v) * np.maximum(np.abs(v) - alpha, 0.0)


def tie_break_topk(v: ArrayLike, K: int) -> NDArray[np.intp]:
    """
    Índices de las K entradas de mayor magnitud

    Los empates en |v[i]| se resuelven a favor del índice menor (orden estable),
    así la selección dentro del hard thresholding es determinista.

    Returns:
        Índices 0-based, ordenados de menor a mayor
    """
    v = np.asarray(v, dtype=np.float64)
    n = v.shape[0]
    if not 1 <= int(K) <= n:
        raise ValueError(f'K={K} fuera de rango para un vector de largo {n}')
    orden = np.argsort(-np.abs(v), kind='stable')
    return np.sort(orden[:int(K)])


def hard_threshold(v: NDArray, K: int) -> NDArray:
    """Conserva las K entradas de mayor magnitud y anula el resto"""
    resultado = np.zeros_like(v)
    seleccion = tie_break_topk(v, min(int(K), v.shape[0]))
    resultado[seleccion] = v[seleccion]
    return resultado


def prox(p: PriorSpec, v: ArrayLike) -> RealVector:
    """
    Operador proximal: argmin_y 1/2 ||v - y||^2 + g(y)

    Para los tipos compuestos primero se anulan las entradas fuera de J y luego
    se aplica el prox interno (soft o hard thresholding).
    """
    v = np.array(v, dtype=np.float64)
    if v.ndim != 1:
        raise ErrorDimension(f'prox espera un vector 1D, forma recibida {v.shape}')
    n = _verificar_dimension(p, v)

    if p.kind in TIPOS_CON_SOPORTE:
        v[~_mascara_soporte(p.support, n)] = 0.0

    if p.kind in (NONE, SUPPORT_ONLY):
        return v
    if p.kind in (L1, L1_WITH_SUPPORT):
        return soft_threshold(v, p.lam)
    if p.kind in (L0_TOPK, L0_WITH_SUPPORT):
        return hard_threshold(v, p.k_sparsity)

    # basis_l1: v + D (T_lambda(D^T v) - D^T v)
    D = p.basis
    coeficientes = D.T @ v
    return v + D @ (soft_threshold(coeficientes, p.lam) - coeficientes)


def evaluate(p: PriorSpec, v: ArrayLike):
    """
    Valor de g(v); +inf si v viola una restricción indicadora

    Acepta un vector (retorna float) o una matriz de vectores fila (retorna un arreglo).
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim not in (1, 2):
        raise ErrorDimension(f'evaluate espera un vector o una matriz de filas, forma {v.shape}')
    n = _verificar_dimension(p, v)

    valor = np.zeros(v.shape[:-1])
    if p.kind in (L1, L1_WITH_SUPPORT):
        valor = p.lam * np.sum(np.abs(v), axis=-1)
    elif p.kind == BASIS_L1:
        valor = p.lam * np.sum(np.abs(v @ p.basis), axis=-1)

    if p.kind in TIPOS_CON_SOPORTE:
        fuera = ~_mascara_soporte(p.support, n)
        viola = np.any(v[..., fuera] != 0, axis=-1)
        valor = np.where(viola, np.inf, valor)
    if p.kind in TIPOS_CON_K:
        viola = np.count_nonzero(v, axis=-1) > p.k_sparsity
        valor = np.where(viola, np.inf, valor)

    if v.ndim == 1:
        return float(valor)
    return np.asarray(valor, dtype=np.float64)


def prior_desde_dict(datos: Dict, n: Optional[int] = None) -> PriorSpec:
    """
    Construye un PriorSpec desde un diccionario de configuración

    Claves aceptadas: kind, lambda, k_sparsity, support. El soporte puede ser una lista
    de índices 0-based o la palabra 'mitad' (J = primera mitad, requiere n).
    """
    claves_validas = {'kind', 'lambda', 'k_sparsity', 'support'}
    desconocidas = set(datos) - claves_validas
    if desconocidas:
        raise ValueError(f'Claves de prior desconocidas: {sorted(desconocidas)}')

    soporte = datos.get('support')
    if soporte == 'mitad':
        if n is None:
            raise ValueError("El soporte 'mitad' requiere conocer el largo n de la señal")
        soporte = tuple(range(n // 2))

    return PriorSpec(
        kind=datos.get('kind', NONE),
        lam=float(datos.get('lambda', 0.0)),
        k_sparsity=datos.get('k_sparsity'),
        support=soporte,
    )

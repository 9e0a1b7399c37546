"""
Núcleo geométrico y analítico del problema de recuperación de fase

- Proyección sobre el toro de magnitudes Z_c = {z : |dft(z)| = c}
- Objetivo de amplitud F, mayorante h, función extendida K
- Envolvente de Moreau G, gradiente de H(w1, w2) = G(w1) + 1/2 ||w2||^2 y gradient mapping
"""
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.typing import ArrayLike

from espectral.transformada import (
    ComplexVector, ErrorDimension, RealVector, como_vector, dft, idft, verificar_largo,
)
from recuperaFase.parametros import obtener_parametro
from regularizadores.prior import PriorNoConvexoError, PriorSpec, evaluate, prox


@dataclass(frozen=True)
class MagnitudeSet:
    """
    Magnitudes medidas c >= 0 que definen Z_c

    Cuando |dft(x)[j]| = 0 la fase es arbitraria; se fija theta_j = 0 (z_hat[j] = c[j]).
    """
    c: RealVector
    theta_policy: str = 'cero'

    def __post_init__(self):
        c = como_vector(self.c, 'c')
        if np.iscomplexobj(c):
            raise ValueError('Las magnitudes c deben ser reales')
        if np.any(c < 0) or np.any(~np.isfinite(c)):
            raise ValueError('Las magnitudes c deben ser finitas y no negativas (recortar antes los negativos)')
        if self.theta_policy != 'cero':
            raise ValueError(f"Política de fase no soportada: {self.theta_policy!r} (solo 'cero')")
        c.setflags(write=False)
        object.__setattr__(self, 'c', c)

    @property
    def n(self) -> int:
        return self.c.shape[0]


@dataclass(frozen=True)
class SplitPoint:
    """Punto z = w1 + i w2 separado en parte real e imaginaria"""
    w1: RealVector
    w2: RealVector

    def __post_init__(self):
        w1 = np.array(self.w1, dtype=np.float64)
        w2 = np.array(self.w2, dtype=np.float64)
        if w1.ndim != 1 or w1.shape != w2.shape:
            raise ErrorDimension(f'w1 y w2 deben tener el mismo largo ({w1.shape} vs {w2.shape})')
        object.__setattr__(self, 'w1', w1)
        object.__setattr__(self, 'w2', w2)

    @classmethod
    def desde_complejo(cls, z: ArrayLike) -> 'SplitPoint':
        z = np.asarray(z, dtype=np.complex128)
        return cls(z.real.copy(), z.imag.copy())

    def como_complejo(self) -> ComplexVector:
        return self.w1 + 1j * self.w2

    def norma(self) -> float:
        return float(np.sqrt(np.sum(self.w1 ** 2) + np.sum(self.w2 ** 2)))

    def __sub__(self, otro: 'SplitPoint') -> 'SplitPoint':
        return SplitPoint(self.w1 - otro.w1, self.w2 - otro.w2)


def como_magnitudes(m: Union[MagnitudeSet, ArrayLike]) -> MagnitudeSet:
    if isinstance(m, MagnitudeSet):
        return m
    return MagnitudeSet(m)


def _exigir_convexo(p: PriorSpec, operacion: str) -> None:
    if not p.es_convexo:
        raise PriorNoConvexoError(
            f'{operacion} requiere un prior convexo; {p.kind!r} no lo es '
            f'(la identidad de Moreau no aplica a priors l0)'
        )


def project_onto_Zc(m: MagnitudeSet, x: ArrayLike) -> ComplexVector:
    """
    Proyección de x sobre Z_c

    z_hat[j] = c[j] dft(x)[j] / |dft(x)[j]| si |dft(x)[j]| supera el umbral de cero,
    si no z_hat[j] = c[j]. Retorna idft(z_hat).
    """
    m = como_magnitudes(m)
    x = como_vector(x)
    verificar_largo(x, m.n)

    espectro = dft(x)
    modulo = np.abs(espectro)
    maximo = modulo.max()
    if maximo > 0:
        umbral = obtener_parametro('ZERO_TOL_RELATIVA') * maximo
    else:
        umbral = obtener_parametro('ZERO_TOL_ABSOLUTA')

    definida = modulo > umbral
    fase = np.ones_like(espectro)
    np.divide(espectro, modulo, out=fase, where=definida)
    return idft(m.c * fase)


def residuo_amplitud(m: MagnitudeSet, x: ArrayLike) -> float:
    """||(|dft(x)| - c)||^2, el ajuste a los datos usado para elegir el mejor reinicio"""
    m = como_magnitudes(m)
    x = como_vector(x)
    verificar_largo(x, m.n)
    return float(np.sum((np.abs(dft(x)) - m.c) ** 2))


def amplitude_objective(m: MagnitudeSet, p: PriorSpec, x: ArrayLike) -> float:
    """F(x) = (1/2n) ||(|dft(x)| - c)||^2 + g(x)"""
    m = como_magnitudes(m)
    valor_g = evaluate(p, x)
    if np.isinf(valor_g):
        return np.inf
    return residuo_amplitud(m, x) / (2 * m.n) + valor_g


def partial_min_value(m: MagnitudeSet, x: ArrayLike) -> float:
    """min_{z en Z_c} 1/2 ||x - z||^2, calculado con la proyección explícita"""
    x = como_vector(x)
    z = project_onto_Zc(m, x)
    return 0.5 * float(np.sum(np.abs(x - z) ** 2))


def majorizer(m: MagnitudeSet, p: PriorSpec, x: ArrayLike, y: ArrayLike) -> float:
    """h(x, y) = 1/2 ||y - z(x)||^2 + g(y), con z(x) la proyección de x sobre Z_c"""
    y = como_vector(y, 'y')
    z = project_onto_Zc(m, x)
    verificar_largo(y, z.shape[0], 'y')
    valor_g = evaluate(p, y)
    if np.isinf(valor_g):
        return np.inf
    return 0.5 * float(np.sum(np.abs(y - z) ** 2)) + valor_g


def moreau_envelope(p: PriorSpec, v: ArrayLike) -> float:
    """G(v) = min_y 1/2 ||v - y||^2 + g(y), evaluado en y = prox(p, v)"""
    v = np.asarray(v, dtype=np.float64)
    y = prox(p, v)
    return 0.5 * float(np.sum((v - y) ** 2)) + evaluate(p, y)


def funcion_H(p: PriorSpec, w: SplitPoint) -> float:
    """H(w1, w2) = G(w1) + 1/2 ||w2||^2"""
    return moreau_envelope(p, w.w1) + 0.5 * float(np.sum(w.w2 ** 2))


def grad_H(p: PriorSpec, w: SplitPoint) -> SplitPoint:
    """Gradiente de H: (w1 - prox(p, w1), w2); 1-Lipschitz para priors convexos"""
    _exigir_convexo(p, 'grad_H')
    return SplitPoint(w.w1 - prox(p, w.w1), w.w2.copy())


def paso_gradiente_proyectado(m: MagnitudeSet, p: PriorSpec, w: SplitPoint) -> SplitPoint:
    """Un paso de gradiente proyectado con paso unitario: P_Zc(w - grad_H(w))"""
    paso = w - grad_H(p, w)
    return SplitPoint.desde_complejo(project_onto_Zc(m, paso.como_complejo()))


def gradient_mapping_norm(m: MagnitudeSet, p: PriorSpec, w: SplitPoint) -> float:
    """||w - P_Zc(w - grad_H(w))||, cero exactamente en los puntos fijos de la iteración"""
    return (w - paso_gradiente_proyectado(m, p, w)).norma()


def pertenece_a_Zc(m: MagnitudeSet, z: ArrayLike, tol: float = None) -> bool:
    """True si | |dft(z)| - c | <= tol en cada entrada"""
    m = como_magnitudes(m)
    z = como_vector(z, 'z')
    verificar_largo(z, m.n, 'z')
    if tol is None:
        tol = obtener_parametro('TOL_PERTENENCIA_Z')
    return bool(np.all(np.abs(np.abs(dft(z)) - m.c) <= tol))


def full_objective_K(m: MagnitudeSet, p: PriorSpec, x: ArrayLike, w: SplitPoint) -> float:
    """
    K(x, w1, w2) = 1/2 ||x - w1||^2 + 1/2 ||w2||^2 + g(x) más la indicadora de Z_c

    Retorna +inf si w1 + i w2 no está en Z_c (tolerancia por entrada TOL_PERTENENCIA_Z).
    """
    x = como_vector(x)
    verificar_largo(w.w1, x.shape[0], 'w1')
    if not pertenece_a_Zc(m, w.como_complejo()):
        return np.inf
    valor_g = evaluate(p, x)
    if np.isinf(valor_g):
        return np.inf
    return 0.5 * float(np.sum((x - w.w1) ** 2)) + 0.5 * float(np.sum(w.w2 ** 2)) + valor_g

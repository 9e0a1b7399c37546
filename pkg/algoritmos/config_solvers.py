"""
Catálogo de métodos de recuperación usados en los experimentos
Cada etiqueta define el solver y el prior (soporte J = primera mitad de la señal)
"""
from typing import Dict, Optional

from recuperaFase.parametros import obtener_parametro
from regularizadores.prior import (
    L0_WITH_SUPPORT, L1_WITH_SUPPORT, SUPPORT_ONLY, PriorSpec,
)
from .solvers import SolverConfig


METODOS_RECUPERACION = {
    'am': {
        'solver': 'am',
        'prior': SUPPORT_ONLY,
        'descripcion': 'Fienup clásico (proyecciones alternadas) con restricción de soporte',
        'barrido_lambda': False,
    },
    'am-l1': {
        'solver': 'am',
        'prior': L1_WITH_SUPPORT,
        'descripcion': 'Minimización alternada con prior l1 + soporte (lambda fijo)',
        'barrido_lambda': False,
    },
    'am-l0': {
        'solver': 'am',
        'prior': L0_WITH_SUPPORT,
        'descripcion': 'Minimización alternada con restricción ||x||_0 <= K + soporte',
        'barrido_lambda': False,
    },
    'fistaph-l1': {
        'solver': 'fistaph',
        'prior': L1_WITH_SUPPORT,
        'descripcion': 'FISTAPH (AM con inercia) con prior l1 + soporte',
        'barrido_lambda': False,
    },
    'wirt-l1': {
        'solver': 'mag2_pg',
        'prior': L1_WITH_SUPPORT,
        'descripcion': 'Gradiente proximal sobre magnitud al cuadrado con prior l1 (lambda barrido)',
        'barrido_lambda': True,
    },
    'wirt-l0': {
        'solver': 'mag2_pg',
        'prior': L0_WITH_SUPPORT,
        'descripcion': 'Gradiente proximal sobre magnitud al cuadrado con restricción l0',
        'barrido_lambda': False,
    },
}

# Método por defecto
METODO_DEFAULT = 'fistaph-l1'


def obtener_configuracion_metodo(etiqueta: str = None) -> Dict:
    """
    Obtiene la descripción de un método del catálogo

    Args:
        etiqueta: 'am', 'am-l1', 'am-l0', 'fistaph-l1', 'wirt-l1' o 'wirt-l0'.
                  Si es None, usa el default.
    """
    if etiqueta is None:
        etiqueta = METODO_DEFAULT
    if etiqueta not in METODOS_RECUPERACION:
        raise ValueError(
            f'Método desconocido: {etiqueta!r}. Opciones: {sorted(METODOS_RECUPERACION)}'
        )
    return METODOS_RECUPERACION[etiqueta]


def metodo_desde_etiqueta(etiqueta: str, n: int, K: Optional[int], lam: Optional[float] = None,
                          max_iters: Optional[int] = None, tol: Optional[float] = None) -> SolverConfig:
    """
    Construye la SolverConfig de un método del catálogo

    Args:
        etiqueta: nombre del método
        n: largo de la señal (J = {0, ..., n/2 - 1})
        K: nivel de dispersión (obligatorio para los priors l0)
        lam: peso l1; si es None se usa LAMBDA_AM (en wirt-l1, el primer valor del barrido)
    """
    config = obtener_configuracion_metodo(etiqueta)
    soporte = tuple(range(n // 2))

    if config['prior'] == L1_WITH_SUPPORT:
        if lam is None:
            lam = obtener_parametro('LAMBDAS_WIRTINGER')[0] if config['barrido_lambda'] \
                else obtener_parametro('LAMBDA_AM')
        prior = PriorSpec(kind=L1_WITH_SUPPORT, lam=lam, support=soporte)
    elif config['prior'] == L0_WITH_SUPPORT:
        prior = PriorSpec(kind=L0_WITH_SUPPORT, k_sparsity=K, support=soporte)
    else:
        prior = PriorSpec(kind=SUPPORT_ONLY, support=soporte)

    return SolverConfig(method=config['solver'], prior=prior, max_iters=max_iters, tol=tol)


def lambdas_barrido(etiqueta: str):
    """Valores de lambda a barrer para un método, o None si usa lambda fijo"""
    if obtener_configuracion_metodo(etiqueta)['barrido_lambda']:
        return list(obtener_parametro('LAMBDAS_WIRTINGER'))
    return None

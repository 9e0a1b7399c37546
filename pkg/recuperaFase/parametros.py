"""
Parámetros numéricos compartidos por los módulos de recuperación de fase
Los valores de settings.RECUPERA_FASE tienen prioridad sobre los de este archivo
"""
from typing import Any, Dict


VALORES_POR_DEFECTO: Dict[str, Any] = {
    # Criterios de parada (diferencia de objetivo / norma del gradient mapping)
    'TOL': 1e-8,
    'MAX_ITERS': 5000,
    # Peso l1 de AM y FISTAPH en todos los experimentos
    'LAMBDA_AM': 0.2,
    # Barrido de lambda para el método Wirtinger (se reporta el mejor por celda)
    'LAMBDAS_WIRTINGER': [1.0, 2.15, 4.64, 10.0, 21.5, 46.4, 100.0, 215.0, 464.0],
    # Tolerancias de la proyección sobre Z_c
    'ZERO_TOL_RELATIVA': 1e-12,
    'ZERO_TOL_ABSOLUTA': 1e-300,
    'TOL_PERTENENCIA_Z': 1e-8,
    # Backtracking del gradiente proximal sobre magnitud al cuadrado
    'PASO_INICIAL': 1.0,
    'FACTOR_REDUCCION': 0.5,
    'CONSTANTE_ARMIJO': 1e-4,
    'PASO_MINIMO': 1e-12,
    # Semilla maestra del benchmark de escritorio
    'SEMILLA_MAESTRA': 20170417,
}


def obtener_parametro(clave: str) -> Any:
    """
    Obtiene un parámetro numérico desde settings.RECUPERA_FASE

    Si Django no está configurado (uso como librería), retorna el valor por defecto.
    """
    from django.conf import settings

    # Fallback si no está en contexto Django
    parametros = getattr(settings, 'RECUPERA_FASE', {}) if settings.configured else {}

    if clave in parametros:
        return parametros[clave]
    return VALORES_POR_DEFECTO[clave]

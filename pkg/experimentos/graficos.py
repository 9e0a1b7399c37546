"""
Gráficos SVG del benchmark: probabilidad de recuperación vs K y tiempo mediano vs K

Salida determinista: sin fecha en los metadatos, sal de ids fija y tamaño fijo 800x600.
"""
from pathlib import Path
from typing import Dict, Tuple

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402


ANCHO_PX = 800
ALTO_PX = 600
# El backend SVG trabaja en puntos (72 por pulgada)
TAMANO_FIGURA = (ANCHO_PX / 72, ALTO_PX / 72)

ESTILO_SVG = {
    'svg.hashsalt': 'recupera-fase',
    'svg.fonttype': 'path',
    'font.family': 'DejaVu Sans',
}


def _series(tabla: pd.DataFrame) -> Dict[str, pd.DataFrame]:
    """Una serie por método; si hay varias (n, snr) se agregan a la etiqueta"""
    varias = tabla[['n', 'snr_db']].drop_duplicates().shape[0] > 1
    series = {}
    for clave, grupo in tabla.groupby(['method', 'n', 'snr_db'], sort=False):
        metodo, n, snr = clave
        etiqueta = f'{metodo} (n={n}, snr={snr:g})' if varias else metodo
        series[etiqueta] = grupo.sort_values('K', kind='mergesort')
    return series


def _figura(titulo: str, etiqueta_y: str) -> Tuple[plt.Figure, plt.Axes]:
    fig, ax = plt.subplots(figsize=TAMANO_FIGURA)
    ax.set_title(titulo)
    ax.set_xlabel('Nivel de dispersión K')
    ax.set_ylabel(etiqueta_y)
    ax.grid(True, linestyle=':', linewidth=0.6)
    return fig, ax


def _guardar(fig: plt.Figure, ruta: Path) -> Path:
    ruta = Path(ruta)
    ruta.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(ruta, format='svg', metadata={'Date': None, 'Creator': None})
    plt.close(fig)
    return ruta


def grafico_recuperacion(tabla: pd.DataFrame, ruta: Path) -> Path:
    """Probabilidad de recuperación vs K, una polilínea por método"""
    with plt.rc_context(ESTILO_SVG):
        fig, ax = _figura('Recuperación de soporte', 'Probabilidad de recuperación')
        for etiqueta, grupo in _series(tabla).items():
            linea, = ax.plot(grupo['K'], grupo['recovery_probability'], marker='o',
                             label=etiqueta, clip_on=False)
            linea.set_gid(f'serie-{etiqueta}')
        ax.set_ylim(0.0, 1.0)
        ax.legend(loc='best')
        return _guardar(fig, ruta)


def grafico_tiempos(tabla: pd.DataFrame, ruta: Path) -> Path:
    """
    Tiempo de CPU mediano por ensayo vs K, ordenada en escala logarítmica

    Si algún tiempo no es positivo (por ejemplo con --no-timing) se usa escala lineal.
    """
    with plt.rc_context(ESTILO_SVG):
        fig, ax = _figura('Tiempo de cómputo', 'Tiempo CPU mediano por ensayo [s]')
        for etiqueta, grupo in _series(tabla).items():
            linea, = ax.plot(grupo['K'], grupo['median_cpu_seconds'], marker='o', label=etiqueta)
            linea.set_gid(f'serie-{etiqueta}')
        if np.all(tabla['median_cpu_seconds'].to_numpy() > 0):
            ax.set_yscale('log')
        ax.legend(loc='best')
        return _guardar(fig, ruta)


def graficar_agregado(tabla: pd.DataFrame, directorio: Path) -> Tuple[Path, Path]:
    """Escribe recuperacion.svg y tiempos.svg en el directorio indicado"""
    directorio = Path(directorio)
    return (
        grafico_recuperacion(tabla, directorio / 'recuperacion.svg'),
        grafico_tiempos(tabla, directorio / 'tiempos.svg'),
    )

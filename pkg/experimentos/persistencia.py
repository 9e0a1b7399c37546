"""
Escritura y lectura de resultados: CSV de ensayos, CSV agregado y log JSON-lines

Todos los archivos son funciones deterministas de (config, semilla): sin fechas y con
formato numérico fijo (punto decimal, %.10g).
"""
import json
from pathlib import Path
from typing import Iterable, List, Tuple

import numpy as np
import pandas as pd

from .protocolo import COLUMNAS_AGREGADO, ExperimentConfig, TrialRecord


VERSION_ENSAYOS = '# recupera-fase trials v1'
VERSION_AGREGADO = '# recupera-fase aggregate v1'
FORMATO_FLOTANTE = '%.10g'

COLUMNAS_ENSAYOS = [
    'method', 'n', 'K', 'snr_db', 'lambda', 'trial', 'recovery',
    'best_residual', 'cpu_seconds', 'restarts',
]
COLUMNAS_ENTERAS = ['n', 'K', 'trials', 'restarts']


class ErrorEsquemaCSV(ValueError):
    """El CSV no respeta el esquema documentado (versión, columnas o tipos)"""


def _escribir_tabla(ruta: Path, version: str, tabla: pd.DataFrame) -> Path:
    ruta = Path(ruta)
    ruta.parent.mkdir(parents=True, exist_ok=True)
    with open(ruta, 'w', encoding='utf-8', newline='') as f:
        f.write(version + '\n')
        tabla.to_csv(f, index=False, float_format=FORMATO_FLOTANTE, lineterminator='\n')
    return ruta


def tabla_ensayos(ensayos: Iterable[Tuple[ExperimentConfig, List[TrialRecord]]]) -> pd.DataFrame:
    filas = []
    for cfg, registros in ensayos:
        for r in registros:
            filas.append({
                'method': cfg.label,
                'n': cfg.n,
                'K': cfg.K,
                'snr_db': cfg.snr_db,
                'lambda': cfg.lam,
                'trial': r.trial_index,
                'recovery': r.recovery,
                'best_residual': r.best_residual,
                'cpu_seconds': r.cpu_time,
                'restarts': cfg.restarts,
            })
    return pd.DataFrame(filas, columns=COLUMNAS_ENSAYOS)


def write_trials_csv(ruta: Path, ensayos) -> Path:
    """Un registro por ensayo"""
    return _escribir_tabla(ruta, VERSION_ENSAYOS, tabla_ensayos(ensayos))


def write_aggregate_csv(ruta: Path, agregado: pd.DataFrame) -> Path:
    """Una fila por celda del grid, columnas en el orden de COLUMNAS_AGREGADO"""
    return _escribir_tabla(ruta, VERSION_AGREGADO, agregado[COLUMNAS_AGREGADO])


def write_trials_jsonl(ruta: Path, ensayos) -> Path:
    """Log JSON-lines: un objeto por TrialRecord con la celda a la que pertenece"""
    ruta = Path(ruta)
    ruta.parent.mkdir(parents=True, exist_ok=True)
    with open(ruta, 'w', encoding='utf-8', newline='') as f:
        for cfg, registros in ensayos:
            for r in registros:
                datos = r.a_dict()
                datos.update({'method': cfg.label, 'n': cfg.n, 'K': cfg.K,
                              'snr_db': cfg.snr_db, 'lambda': cfg.lam})
                f.write(json.dumps(datos, sort_keys=True) + '\n')
    return ruta


def read_aggregate_csv(ruta: Path) -> pd.DataFrame:
    """
    Lee un CSV agregado validando versión, columnas y tipos

    Los errores indican la fila de datos (1-based) y la columna problemática.
    """
    ruta = Path(ruta)
    with open(ruta, 'r', encoding='utf-8') as f:
        version = f.readline().rstrip('\r\n')
        if version != VERSION_AGREGADO:
            raise ErrorEsquemaCSV(
                f'{ruta}: versión de esquema {version!r}, se esperaba {VERSION_AGREGADO!r}'
            )
        try:
            tabla = pd.read_csv(f, dtype=str, keep_default_na=False)
        except pd.errors.EmptyDataError:
            raise ErrorEsquemaCSV(f'{ruta}: falta la fila de encabezados')

    columnas = list(tabla.columns)
    if columnas != COLUMNAS_AGREGADO:
        faltantes = [c for c in COLUMNAS_AGREGADO if c not in columnas]
        sobrantes = [c for c in columnas if c not in COLUMNAS_AGREGADO]
        raise ErrorEsquemaCSV(
            f'{ruta}: columnas {columnas} no coinciden con {COLUMNAS_AGREGADO} '
            f'(faltan {faltantes}, sobran {sobrantes})'
        )
    if tabla.empty:
        raise ErrorEsquemaCSV(f'{ruta}: el CSV no tiene filas de datos')

    for columna in COLUMNAS_AGREGADO[1:]:
        valores = pd.to_numeric(tabla[columna], errors='coerce')
        malos = np.flatnonzero(valores.isna().to_numpy())
        if len(malos):
            fila = int(malos[0])
            raise ErrorEsquemaCSV(
                f'{ruta}: fila {fila + 1}, columna {columna!r}: valor no numérico '
                f'{tabla[columna].iloc[fila]!r}'
            )
        if columna in COLUMNAS_ENTERAS:
            valores = valores.astype(np.int64)
        tabla[columna] = valores

    fuera = np.flatnonzero(~tabla['recovery_probability'].between(0.0, 1.0).to_numpy())
    if len(fuera):
        raise ErrorEsquemaCSV(
            f"{ruta}: fila {int(fuera[0]) + 1}, columna 'recovery_probability': fuera de [0, 1]"
        )
    return tabla


def write_solution_json(ruta: Path, datos: dict) -> Path:
    """Solución de un solve: claves ordenadas e indentación fija"""
    ruta = Path(ruta)
    ruta.parent.mkdir(parents=True, exist_ok=True)
    with open(ruta, 'w', encoding='utf-8', newline='') as f:
        json.dump(datos, f, sort_keys=True, indent=2)
        f.write('\n')
    return ruta

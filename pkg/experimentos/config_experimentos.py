"""
Configuración de los comandos verify / solve / bench / plot

Los archivos de configuración son texto plano con secciones [seccion] y líneas
clave = valor. Las claves o secciones desconocidas son un error (sin tolerancia a typos).
Las listas se escriben separadas por comas.
"""
import configparser
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from algoritmos.config_solvers import (
    METODO_DEFAULT, lambdas_barrido, metodo_desde_etiqueta, obtener_configuracion_metodo,
)
from algoritmos.solvers import SolverConfig
from recuperaFase.parametros import obtener_parametro
from regularizadores.prior import PriorSpec, prior_desde_dict
from .protocolo import ExperimentConfig, expand_lambda_sweep


# Niveles predefinidos del benchmark
NIVELES_BENCH = {
    'rapido': {
        'descripcion': 'Prueba rápida - pocas celdas y pocos ensayos',
        'n': [16],
        'K': [2, 3],
        'snr_db': [np.inf],
        'trials': 5,
        'restarts': 5,
        'methods': ['fistaph-l1', 'am-l1', 'am-l0'],
    },
    'escritorio': {
        'descripcion': 'Batería de escritorio - n=64, K en {2,3,4}, SNR en {inf, 20}',
        'n': [64],
        'K': [2, 3, 4],
        'snr_db': [np.inf, 20.0],
        'trials': 20,
        'restarts': 50,
        'methods': ['fistaph-l1', 'am-l1', 'am-l0'],
    },
    'articulo': {
        'descripcion': 'Protocolo completo - 100 ensayos x 100 reinicios (horas de cómputo)',
        'n': [32, 64, 128],
        'K': [2, 3, 4, 5, 6, 7, 8],
        'snr_db': [np.inf, 20.0],
        'trials': 100,
        'restarts': 100,
        'methods': ['fistaph-l1', 'am-l1', 'am-l0', 'wirt-l1', 'wirt-l0'],
    },
}

# Nivel por defecto
NIVEL_BENCH_DEFAULT = 'escritorio'

CLAVES_BENCH = {
    'nivel', 'n', 'K', 'snr_db', 'trials', 'restarts', 'seed', 'methods',
    'lambda', 'lambdas', 'max_iters', 'tol',
}
CLAVES_SOLVE = {
    'method', 'n', 'K', 'snr_db', 'seed', 'measurements', 'init', 'max_iters', 'tol',
    'inertia', 'truncate', 'lambda',
}
CLAVES_PRIOR = {'kind', 'lambda', 'k_sparsity', 'support'}
SECCIONES = {'bench': CLAVES_BENCH, 'solve': CLAVES_SOLVE, 'prior': CLAVES_PRIOR}


class ErrorConfiguracion(ValueError):
    """Archivo de configuración mal formado o con claves desconocidas"""


def obtener_nivel_bench(nivel: str = None) -> Dict:
    """
    Obtiene la configuración de un nivel de benchmark

    Args:
        nivel: 'rapido', 'escritorio' o 'articulo'. Si es None o desconocido, usa el default.
    """
    if nivel is None or nivel not in NIVELES_BENCH:
        nivel = NIVEL_BENCH_DEFAULT
    return dict(NIVELES_BENCH[nivel])


def leer_config(ruta: Path) -> Dict[str, Dict[str, str]]:
    """
    Lee el archivo de configuración y valida secciones y claves

    Returns:
        Dict {seccion: {clave: valor_texto}}
    """
    ruta = Path(ruta)
    if not ruta.exists():
        raise ErrorConfiguracion(f'No existe el archivo de configuración {ruta}')

    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=('#', ';'))
    # Claves sensibles a mayúsculas (K no es k)
    parser.optionxform = str
    try:
        parser.read(ruta, encoding='utf-8')
    except configparser.Error as e:
        raise ErrorConfiguracion(f'{ruta}: formato inválido: {e}')

    datos = {}
    for seccion in parser.sections():
        if seccion not in SECCIONES:
            raise ErrorConfiguracion(f'{ruta}: sección desconocida [{seccion}]. Opciones: {sorted(SECCIONES)}')
        claves = dict(parser.items(seccion))
        desconocidas = sorted(set(claves) - SECCIONES[seccion])
        if desconocidas:
            raise ErrorConfiguracion(
                f'{ruta}: clave(s) desconocida(s) en [{seccion}]: {desconocidas}. '
                f'Opciones: {sorted(SECCIONES[seccion])}'
            )
        datos[seccion] = claves
    return datos


def _flotante(texto: str, clave: str) -> float:
    try:
        return float(texto)
    except ValueError:
        raise ErrorConfiguracion(f'{clave}: {texto!r} no es un número')


def _entero(texto: str, clave: str) -> int:
    try:
        return int(texto)
    except ValueError:
        raise ErrorConfiguracion(f'{clave}: {texto!r} no es un entero')


def _lista(texto: str) -> List[str]:
    return [parte.strip() for parte in texto.split(',') if parte.strip()]


def _booleano(texto: str, clave: str) -> bool:
    valor = texto.strip().lower()
    if valor in ('1', 'true', 'si', 'sí', 'yes'):
        return True
    if valor in ('0', 'false', 'no'):
        return False
    raise ErrorConfiguracion(f'{clave}: {texto!r} no es un booleano')


@dataclass
class ConfigBench:
    """Grid de celdas a ejecutar y si se reduce al mejor lambda por celda"""
    grid: List[ExperimentConfig] = field(default_factory=list)
    mejor_lambda: bool = False
    seed: int = 0


def construir_grid(seccion: Dict[str, str], seed: Optional[int] = None) -> ConfigBench:
    """
    Construye el grid del benchmark desde la sección [bench]

    Parte del nivel indicado (clave 'nivel') y sobreescribe las claves presentes.
    'lambdas = sweep' barre la grilla de LAMBDAS_WIRTINGER en los métodos que la usan.
    """
    base = obtener_nivel_bench(seccion.get('nivel'))
    if 'nivel' in seccion and seccion['nivel'] not in NIVELES_BENCH:
        raise ErrorConfiguracion(f"nivel: {seccion['nivel']!r} desconocido. Opciones: {sorted(NIVELES_BENCH)}")

    ns = [_entero(v, 'n') for v in _lista(seccion['n'])] if 'n' in seccion else base['n']
    ks = [_entero(v, 'K') for v in _lista(seccion['K'])] if 'K' in seccion else base['K']
    snrs = [_flotante(v, 'snr_db') for v in _lista(seccion['snr_db'])] if 'snr_db' in seccion else base['snr_db']
    trials = _entero(seccion['trials'], 'trials') if 'trials' in seccion else base['trials']
    restarts = _entero(seccion['restarts'], 'restarts') if 'restarts' in seccion else base['restarts']
    metodos = _lista(seccion['methods']) if 'methods' in seccion else base['methods']
    lam = _flotante(seccion['lambda'], 'lambda') if 'lambda' in seccion else None
    max_iters = _entero(seccion['max_iters'], 'max_iters') if 'max_iters' in seccion else None
    tol = _flotante(seccion['tol'], 'tol') if 'tol' in seccion else None
    if seed is None:
        seed = _entero(seccion['seed'], 'seed') if 'seed' in seccion else int(obtener_parametro('SEMILLA_MAESTRA'))

    lambdas_texto = seccion.get('lambdas', '').strip()
    for metodo in metodos:
        try:
            obtener_configuracion_metodo(metodo)
        except ValueError as e:
            raise ErrorConfiguracion(f'methods: {e}')

    config = ConfigBench(mejor_lambda=bool(lambdas_texto), seed=seed)
    for metodo in metodos:
        if lambdas_texto == 'sweep':
            barrido = lambdas_barrido(metodo)
        elif lambdas_texto:
            barrido = [_flotante(v, 'lambdas') for v in _lista(lambdas_texto)] if lambdas_barrido(metodo) else None
        else:
            barrido = None
        for n in ns:
            for snr in snrs:
                for K in ks:
                    try:
                        celda = ExperimentConfig(
                            n=n, K=K, snr_db=snr,
                            method=metodo_desde_etiqueta(metodo, n, K, lam=lam, max_iters=max_iters, tol=tol),
                            restarts=restarts, trials=trials, seed=seed, label=metodo,
                        )
                    except ValueError as e:
                        raise ErrorConfiguracion(f'celda {metodo} n={n} K={K} snr={snr:g}: {e}')
                    config.grid.extend(expand_lambda_sweep(celda, barrido))
    return config


INICIOS_SOLVE = ('aleatorio', 'verdad')


@dataclass
class ConfigSolve:
    """Una resolución individual: método, instancia (generada o leída) e inicio"""
    etiqueta: str
    solver: SolverConfig
    n: int
    K: Optional[int]
    seed: int
    snr_db: float = np.inf
    # Magnitudes leídas de archivo; None si la instancia se genera con (n, K, snr_db, seed)
    medidas: Optional[np.ndarray] = None
    # 'aleatorio', 'verdad' o un vector leído de archivo
    inicio: Union[str, np.ndarray] = 'aleatorio'
    trunca: bool = False


def leer_vector(ruta: Path, clave: str) -> np.ndarray:
    """Vector de números separados por espacios, comas o saltos de línea"""
    ruta = Path(ruta)
    if not ruta.exists():
        raise ErrorConfiguracion(f'{clave}: no existe el archivo {ruta}')
    valores = [_flotante(t, clave) for t in ruta.read_text(encoding='utf-8').replace(',', ' ').split()]
    if not valores:
        raise ErrorConfiguracion(f'{clave}: el archivo {ruta} está vacío')
    return np.array(valores, dtype=np.float64)


def _prior_desde_seccion(seccion: Dict[str, str], n: int) -> PriorSpec:
    datos = {}
    if 'kind' in seccion:
        datos['kind'] = seccion['kind'].strip()
    if 'lambda' in seccion:
        datos['lambda'] = _flotante(seccion['lambda'], 'prior.lambda')
    if 'k_sparsity' in seccion:
        datos['k_sparsity'] = _entero(seccion['k_sparsity'], 'prior.k_sparsity')
    if 'support' in seccion:
        texto = seccion['support'].strip()
        datos['support'] = texto if texto == 'mitad' else [_entero(v, 'prior.support') for v in _lista(texto)]
    try:
        return prior_desde_dict(datos, n)
    except ValueError as e:
        raise ErrorConfiguracion(f'[prior]: {e}')


def construir_solve(datos: Dict[str, Dict[str, str]], base: Path = Path('.'),
                    seed: Optional[int] = None) -> ConfigSolve:
    """
    Construye la configuración de un solve desde las secciones [solve] y [prior]

    Sin 'measurements' la instancia se genera como un ensayo del benchmark (requiere n y K).
    La sección [prior], si existe, reemplaza al prior del método del catálogo.

    Args:
        datos: secciones leídas con leer_config
        base: directorio contra el que se resuelven las rutas relativas
        seed: semilla que sobreescribe la del archivo
    """
    if 'solve' not in datos:
        raise ErrorConfiguracion('Falta la sección [solve]')
    seccion = datos['solve']
    base = Path(base)

    etiqueta = seccion.get('method', METODO_DEFAULT).strip()
    try:
        obtener_configuracion_metodo(etiqueta)
    except ValueError as e:
        raise ErrorConfiguracion(f'method: {e}')

    K = _entero(seccion['K'], 'K') if 'K' in seccion else None
    medidas = None
    if 'measurements' in seccion:
        medidas = leer_vector(base / seccion['measurements'].strip(), 'measurements')
        n = medidas.shape[0]
        if 'n' in seccion and _entero(seccion['n'], 'n') != n:
            raise ErrorConfiguracion(f"n={seccion['n']} no coincide con las {n} magnitudes leídas")
    else:
        if 'n' not in seccion or K is None:
            raise ErrorConfiguracion('Sin measurements se requieren n y K para generar la instancia')
        n = _entero(seccion['n'], 'n')

    if seed is None:
        seed = _entero(seccion['seed'], 'seed') if 'seed' in seccion else int(obtener_parametro('SEMILLA_MAESTRA'))

    lam = _flotante(seccion['lambda'], 'lambda') if 'lambda' in seccion else None
    max_iters = _entero(seccion['max_iters'], 'max_iters') if 'max_iters' in seccion else None
    tol = _flotante(seccion['tol'], 'tol') if 'tol' in seccion else None
    inercia = seccion.get('inertia', 'fista').strip()
    trunca = _booleano(seccion['truncate'], 'truncate') if 'truncate' in seccion else False
    if trunca and K is None:
        raise ErrorConfiguracion('truncate requiere K')

    inicio = seccion.get('init', 'aleatorio').strip()
    if inicio == 'verdad' and medidas is not None:
        raise ErrorConfiguracion("init = verdad solo es posible con una instancia generada")
    if inicio not in INICIOS_SOLVE:
        inicio = leer_vector(base / inicio, 'init')
        if inicio.shape[0] != n:
            raise ErrorConfiguracion(f'init: largo {inicio.shape[0]} distinto de n={n}')

    try:
        solver = metodo_desde_etiqueta(etiqueta, n, K, lam=lam, max_iters=max_iters, tol=tol)
        if 'prior' in datos:
            solver = dataclasses.replace(solver, prior=_prior_desde_seccion(datos['prior'], n))
        if inercia != 'fista':
            solver = dataclasses.replace(solver, inertia_schedule=_flotante(inercia, 'inertia'))
    except ValueError as e:
        raise ErrorConfiguracion(f'{etiqueta}: {e}')

    snr = _flotante(seccion['snr_db'], 'snr_db') if 'snr_db' in seccion else np.inf
    return ConfigSolve(etiqueta=etiqueta, solver=solver, n=n, K=K, seed=seed, snr_db=snr,
                       medidas=medidas, inicio=inicio, trunca=trunca)

"""
Protocolo reproducible de experimentos de recuperación

Un ensayo genera una señal K-dispersa con soporte en J = primera mitad, mide las
magnitudes de Fourier al cuadrado con ruido gaussiano según el SNR, resuelve desde
varios inicios aleatorios y se queda con el candidato de menor residuo. La recuperación
se juzga por el patrón de signos módulo las invariancias de Fourier (desplazamientos
circulares, inversión temporal y cambio global de signo).

SNR(dB) = 10 log10(||s||^2 / (n sigma^2)) con s = |dft(x0)|^2.

Generador: PCG64 alimentado con SeedSequence(seed, spawn_key=...). Cada ensayo y cada
reinicio tiene su propio sub-flujo, por lo que todos los métodos usan la misma señal y
los mismos inicios, y el orden de ejecución no cambia los resultados.
"""
import dataclasses
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from algoritmos.solvers import SolverConfig, resolver, truncate_topk
from espectral.transformada import RealVector, como_vector, dft
from geometria.magnitudes import MagnitudeSet, residuo_amplitud
from regularizadores.prior import TIPOS_CON_K, TIPOS_CON_LAMBDA

logger = logging.getLogger(__name__)

# Identificadores de sub-flujo del generador
FLUJO_SENAL = 0
FLUJO_INICIO = 1

COLUMNAS_AGREGADO = [
    'method', 'n', 'K', 'snr_db', 'lambda', 'recovery_probability',
    'median_cpu_seconds', 'trials', 'restarts',
]
CLAVES_CELDA = ['method', 'n', 'K', 'snr_db']


def generador(seed: int, *claves: int) -> np.random.Generator:
    """Sub-flujo determinista PCG64 identificado por (seed, claves)"""
    secuencia = np.random.SeedSequence(int(seed), spawn_key=tuple(int(c) for c in claves))
    return np.random.Generator(np.random.PCG64(secuencia))


@dataclass(frozen=True)
class ExperimentConfig:
    """Una celda del experimento: método, n, K y SNR"""
    n: int
    K: int
    snr_db: float
    method: SolverConfig
    restarts: int = 100
    trials: int = 100
    seed: int = 0
    label: str = ''
    # Gancho de prueba: el reinicio 0 parte desde la señal verdadera
    include_truth_init: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f'n debe ser >= 2 (recibido {self.n})')
        if not 1 <= self.K <= self.n // 2:
            raise ValueError(f'K={self.K} debe estar entre 1 y n/2={self.n // 2}')
        if self.restarts < 1 or self.trials < 1:
            raise ValueError('restarts y trials deben ser >= 1')
        object.__setattr__(self, 'snr_db', float(self.snr_db))
        if not self.label:
            object.__setattr__(self, 'label', f'{self.method.method}-{self.method.prior.kind}')

    @property
    def soporte(self) -> Tuple[int, ...]:
        """J = {0, ..., n/2 - 1}"""
        return tuple(range(self.n // 2))

    @property
    def lam(self) -> float:
        prior = self.method.prior
        return prior.lam if prior.kind in TIPOS_CON_LAMBDA else 0.0

    @property
    def trunca(self) -> bool:
        """Los priors sin restricción l0 no garantizan K entradas: se trunca al final"""
        return self.method.prior.kind not in TIPOS_CON_K


@dataclass
class TrialRecord:
    """Resultado de un ensayo de recuperación"""
    trial_index: int
    ground_truth: RealVector
    measurements: MagnitudeSet
    best_estimate: RealVector
    best_residual: float
    recovery: int
    per_restart_residuals: np.ndarray
    cpu_time: float

    def a_dict(self) -> dict:
        return {
            'trial': self.trial_index,
            'ground_truth': [float(v) for v in self.ground_truth],
            'c': [float(v) for v in self.measurements.c],
            'best_estimate': [float(v) for v in self.best_estimate],
            'best_residual': self.best_residual,
            'recovery': self.recovery,
            'per_restart_residuals': [float(v) for v in self.per_restart_residuals],
            'cpu_time': self.cpu_time,
        }


@dataclass
class ResultadoGrid:
    """Tabla agregada (una fila por celda) y los ensayos de cada celda"""
    agregado: pd.DataFrame
    ensayos: List[Tuple[ExperimentConfig, List[TrialRecord]]]


def generate_signal(n: int, K: int, rng: np.random.Generator) -> RealVector:
    """
    Señal K-dispersa con soporte en J = primera mitad

    Los K índices se eligen sin reemplazo en J; cada valor es uniforme en [-4, -3] U [3, 4].
    """
    mitad = n // 2
    if not 1 <= K <= mitad:
        raise ValueError(f'K={K} debe estar entre 1 y n/2={mitad}')
    x = np.zeros(n)
    indices = rng.choice(mitad, size=K, replace=False)
    signos = rng.choice(np.array([-1.0, 1.0]), size=K)
    x[indices] = signos * rng.uniform(3.0, 4.0, size=K)
    return x


def varianza_ruido(s: np.ndarray, snr_db: float) -> float:
    """sigma^2 = ||s||^2 / (n 10^(snr/10)); 0 si el SNR es infinito"""
    if np.isposinf(snr_db):
        return 0.0
    return float(np.sum(s ** 2)) / (s.shape[0] * 10.0 ** (snr_db / 10.0))


def generate_measurements(x0: ArrayLike, snr_db: float, rng: np.random.Generator) -> MagnitudeSet:
    """
    c^2 = max(|dft(x0)|^2 + eps, 0) con eps gaussiano de varianza sigma^2

    Sin ruido (snr_db = inf) c = |dft(x0)| exactamente.
    """
    modulo = np.abs(dft(x0))
    if np.isposinf(snr_db):
        return MagnitudeSet(modulo)

    s = modulo ** 2
    sigma = np.sqrt(varianza_ruido(s, snr_db))
    c2 = np.maximum(s + rng.normal(0.0, sigma, size=s.shape[0]), 0.0)
    return MagnitudeSet(np.sqrt(c2))


def magnitudes_desde_medidas(c: ArrayLike) -> MagnitudeSet:
    """
    MagnitudeSet a partir de medidas crudas; las entradas negativas se recortan a cero
    """
    c = np.asarray(c, dtype=np.float64)
    negativas = int(np.count_nonzero(c < 0))
    if negativas:
        logger.warning(f'{negativas} magnitudes negativas recortadas a cero')
    return MagnitudeSet(np.maximum(c, 0.0))


def random_init(n: int, J: Iterable[int], rng: np.random.Generator) -> RealVector:
    """Entradas gaussianas estándar en J, cero fuera"""
    x = np.zeros(n)
    indices = np.asarray(list(J), dtype=np.intp)
    x[indices] = rng.standard_normal(indices.shape[0])
    return x


def orbita_invariancias(x: ArrayLike) -> np.ndarray:
    """
    Todos los elementos de la órbita de x bajo las invariancias de Fourier

    {s * shift_k(x), s * shift_k(reverse(x))} con s en {+1, -1} y k en {0, ..., n-1};
    reverse(x)[i] = x[(-i) mod n]. Retorna una matriz de 4n filas.
    """
    x = como_vector(x)
    n = x.shape[0]
    indices = np.arange(n)
    invertido = x[(-indices) % n]
    desplazamientos = (indices[None, :] - indices[:, None]) % n
    filas = np.vstack((x[desplazamientos], invertido[desplazamientos]))
    return np.vstack((filas, -filas))


def recovery_metric(x_hat: ArrayLike, x0: ArrayLike) -> int:
    """1 si algún elemento de la órbita de x_hat tiene exactamente el patrón de signos de x0"""
    x_hat = como_vector(x_hat, 'x_hat')
    x0 = como_vector(x0, 'x0')
    if x_hat.shape != x0.shape:
        raise ValueError(f'Largos distintos: x_hat {x_hat.shape[0]}, x0 {x0.shape[0]}')
    coincide = np.all(np.sign(orbita_invariancias(x_hat)) == np.sign(x0), axis=1)
    return int(np.any(coincide))


def run_trial(cfg: ExperimentConfig, trial_index: int, medir_tiempo: bool = True) -> TrialRecord:
    """
    Un ensayo completo: señal, mediciones, reinicios y mejor candidato

    El candidato de cada reinicio es la salida del método (truncada a K entradas si el
    prior no es l0); el mejor minimiza ||(|dft(x)| - c)||^2. Un reinicio que agota
    max_iters igual aporta su candidato.
    """
    rng_senal = generador(cfg.seed, FLUJO_SENAL, trial_index)
    x0 = generate_signal(cfg.n, cfg.K, rng_senal)
    m = generate_measurements(x0, cfg.snr_db, rng_senal)

    inicio_cpu = time.thread_time()
    candidatos = []
    residuos = []
    for reinicio in range(cfg.restarts):
        if cfg.include_truth_init and reinicio == 0:
            inicio = x0.copy()
        else:
            inicio = random_init(cfg.n, cfg.soporte, generador(cfg.seed, FLUJO_INICIO, trial_index, reinicio))
        run = resolver(m, cfg.method, inicio)
        candidato = truncate_topk(run.final_x, cfg.K) if cfg.trunca else run.final_x
        candidatos.append(candidato)
        residuos.append(residuo_amplitud(m, candidato))
    cpu = time.thread_time() - inicio_cpu if medir_tiempo else 0.0

    mejor = int(np.argmin(residuos))
    registro = TrialRecord(
        trial_index=trial_index,
        ground_truth=x0,
        measurements=m,
        best_estimate=candidatos[mejor],
        best_residual=float(residuos[mejor]),
        recovery=recovery_metric(candidatos[mejor], x0),
        per_restart_residuals=np.array(residuos),
        cpu_time=float(cpu),
    )
    logger.debug(
        f'[{cfg.label} n={cfg.n} K={cfg.K} snr={cfg.snr_db:g}] ensayo {trial_index}: '
        f'recuperación={registro.recovery}, residuo={registro.best_residual:.3e}'
    )
    return registro


def fila_agregada(cfg: ExperimentConfig, registros: Sequence[TrialRecord]) -> dict:
    return {
        'method': cfg.label,
        'n': cfg.n,
        'K': cfg.K,
        'snr_db': cfg.snr_db,
        'lambda': cfg.lam,
        'recovery_probability': float(np.mean([r.recovery for r in registros])),
        'median_cpu_seconds': float(np.median([r.cpu_time for r in registros])),
        'trials': cfg.trials,
        'restarts': cfg.restarts,
    }


def run_grid(grid: Sequence[ExperimentConfig], jobs: int = 1, medir_tiempo: bool = True) -> ResultadoGrid:
    """
    Ejecuta todas las celdas del grid y agrega por celda

    Probabilidad de recuperación = promedio sobre ensayos; tiempo = mediana del CPU por
    ensayo. Con jobs > 1 los ensayos se reparten entre hilos; el resultado es idéntico
    al secuencial porque cada ensayo usa su propio sub-flujo y el orden de agregación es fijo.
    """
    unidades = [(i, cfg, t) for i, cfg in enumerate(grid) for t in range(cfg.trials)]

    def ejecutar(unidad):
        _, cfg, trial = unidad
        return run_trial(cfg, trial, medir_tiempo=medir_tiempo)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            registros = list(pool.map(ejecutar, unidades))
    else:
        registros = [ejecutar(u) for u in unidades]

    ensayos = []
    filas = []
    for i, cfg in enumerate(grid):
        propios = [r for (j, _, _), r in zip(unidades, registros) if j == i]
        ensayos.append((cfg, propios))
        fila = fila_agregada(cfg, propios)
        filas.append(fila)
        logger.info(
            f"[{fila['method']} n={cfg.n} K={cfg.K} snr={cfg.snr_db:g}] "
            f"probabilidad={fila['recovery_probability']:.3f}, "
            f"cpu mediana={fila['median_cpu_seconds']:.4f}s"
        )

    agregado = pd.DataFrame(filas, columns=COLUMNAS_AGREGADO)
    return ResultadoGrid(agregado=agregado, ensayos=ensayos)


def expand_lambda_sweep(cfg: ExperimentConfig, lambdas: Optional[Sequence[float]]) -> List[ExperimentConfig]:
    """Una configuración por cada lambda del barrido (o la original si no hay barrido)"""
    if not lambdas:
        return [cfg]
    if cfg.method.prior.kind not in TIPOS_CON_LAMBDA:
        raise ValueError(f'El prior {cfg.method.prior.kind!r} no tiene parámetro lambda para barrer')
    expandidas = []
    for lam in lambdas:
        prior = dataclasses.replace(cfg.method.prior, lam=float(lam))
        metodo = dataclasses.replace(cfg.method, prior=prior)
        expandidas.append(dataclasses.replace(cfg, method=metodo))
    return expandidas


def best_lambda_per_cell(tabla: pd.DataFrame) -> pd.DataFrame:
    """
    Para cada celda (method, n, K, snr_db) conserva la fila de mayor probabilidad

    Empates: gana el lambda menor. Se mantiene el orden original de las celdas.
    """
    orden = tabla.sort_values(
        ['recovery_probability', 'lambda'], ascending=[False, True], kind='mergesort'
    )
    mejores = orden.drop_duplicates(subset=CLAVES_CELDA, keep='first')
    return mejores.sort_index().reset_index(drop=True)

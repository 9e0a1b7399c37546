"""
Algoritmos iterativos de recuperación de fase

- fienup_am: minimización alternada (Fienup). Con prior none es el método clásico de
  proyecciones alternadas, con l1 es AM-L1 y con l0 es AM-L0.
- fistaph: variante inercial de AM (FISTA para recuperación de fase), solo priors convexos.
- mag2_pg: gradiente proximal sobre la pérdida de magnitud al cuadrado (tipo Wirtinger).

Las garantías de convergencia (decrecimiento suficiente, longitud finita, puntos fijos
críticos) solo valen para AM con priors convexos. Con priors l0 AM sigue siendo monótono
pero no hay garantía sobre el límite; FISTAPH tampoco tiene garantía de convergencia y por
eso siempre se limita el número de iteraciones y se informa el motivo de término.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

import numpy as np
from numpy.typing import ArrayLike

from espectral.transformada import RealVector, como_vector, dft, idft, verificar_largo
from geometria.magnitudes import (
    MagnitudeSet, amplitude_objective, como_magnitudes, project_onto_Zc, residuo_amplitud,
)
from recuperaFase.parametros import obtener_parametro
from regularizadores.prior import PriorNoConvexoError, PriorSpec, evaluate, hard_threshold, prox

logger = logging.getLogger(__name__)

METODOS = ('am', 'fistaph', 'mag2_pg')
TERMINACION_TOLERANCIA = 'tolerance_met'
TERMINACION_MAX_ITERS = 'max_iters'


@dataclass(frozen=True)
class PasoBacktracking:
    """Parámetros de búsqueda de paso para mag2_pg"""
    inicial: float = None
    reduccion: float = None
    armijo: float = None
    minimo: float = None

    def __post_init__(self):
        for nombre, clave in (('inicial', 'PASO_INICIAL'), ('reduccion', 'FACTOR_REDUCCION'),
                              ('armijo', 'CONSTANTE_ARMIJO'), ('minimo', 'PASO_MINIMO')):
            if getattr(self, nombre) is None:
                object.__setattr__(self, nombre, float(obtener_parametro(clave)))
        if not (self.inicial > 0 and 0 < self.reduccion < 1 and 0 < self.armijo < 1 and self.minimo > 0):
            raise ValueError(f'Parámetros de backtracking inválidos: {self}')


@dataclass(frozen=True)
class SolverConfig:
    """
    Configuración de una invocación de solver

    inertia_schedule: 'fista' para alpha^k = (k-1)/(k+2) (0 si k < 1) o una constante en [0, 1).
    """
    method: str
    prior: PriorSpec = field(default_factory=PriorSpec)
    max_iters: int = None
    tol: float = None
    inertia_schedule: Union[str, float] = 'fista'
    step_rule: PasoBacktracking = field(default_factory=PasoBacktracking)

    def __post_init__(self):
        if self.method not in METODOS:
            raise ValueError(f'Método desconocido: {self.method!r}. Opciones: {METODOS}')
        if self.max_iters is None:
            object.__setattr__(self, 'max_iters', int(obtener_parametro('MAX_ITERS')))
        if self.tol is None:
            object.__setattr__(self, 'tol', float(obtener_parametro('TOL')))
        if int(self.max_iters) < 1:
            raise ValueError(f'max_iters debe ser >= 1 (recibido {self.max_iters})')
        if not self.tol > 0:
            raise ValueError(f'tol debe ser > 0 (recibido {self.tol})')
        if self.inertia_schedule != 'fista':
            constante = float(self.inertia_schedule)
            if not 0 <= constante < 1:
                raise ValueError(f'La inercia constante debe estar en [0, 1) (recibido {constante})')
            object.__setattr__(self, 'inertia_schedule', constante)
        object.__setattr__(self, 'max_iters', int(self.max_iters))

    def alpha(self, k: int) -> float:
        """Peso inercial alpha^k"""
        if self.inertia_schedule == 'fista':
            return alpha_fista(k)
        return self.inertia_schedule


@dataclass
class SolverRun:
    """Resultado de una invocación: estimación final, trazas y motivo de término"""
    method: str
    final_x: RealVector
    iterations: int
    objective_trace: np.ndarray
    displacement_trace: np.ndarray
    termination: str
    residual: float
    # Valor del criterio de parada en la última iteración
    stop_value: float = np.nan
    # mag2_pg: el backtracking llegó al paso mínimo sin lograr descenso
    paso_agotado: bool = False

    @property
    def objective(self) -> float:
        return float(self.objective_trace[-1]) if len(self.objective_trace) else np.nan

    def a_dict(self) -> Dict:
        return {
            'method': self.method,
            'final_x': [float(v) for v in self.final_x],
            'iterations': self.iterations,
            'termination': self.termination,
            'residual': self.residual,
            'objective': self.objective,
            'step_exhausted': self.paso_agotado,
        }


def alpha_fista(k: int) -> float:
    """alpha^k = (k - 1) / (k + 2), recortado a 0 para k < 1"""
    if k < 1:
        return 0.0
    return (k - 1) / (k + 2)


def _preparar(m, cfg: SolverConfig, x0: ArrayLike, metodo: str):
    if cfg.method != metodo:
        raise ValueError(f'{metodo} recibió una configuración para {cfg.method!r}')
    m = como_magnitudes(m)
    x0 = como_vector(x0, 'x0')
    verificar_largo(x0, m.n, 'x0')
    return m, x0


def _construir_run(metodo, m, x, objetivos, desplazamientos, terminacion, valor_parada,
                   paso_agotado: bool = False) -> SolverRun:
    run = SolverRun(
        method=metodo,
        final_x=x,
        iterations=len(objetivos),
        objective_trace=np.array(objetivos, dtype=np.float64),
        displacement_trace=np.array(desplazamientos, dtype=np.float64),
        termination=terminacion,
        residual=residuo_amplitud(m, x),
        stop_value=float(valor_parada),
        paso_agotado=paso_agotado,
    )
    logger.debug(
        f'{metodo}: {run.iterations} iteraciones, término={run.termination}, '
        f'residuo={run.residual:.3e}'
    )
    return run


def fienup_am(m: MagnitudeSet, cfg: SolverConfig, x0: ArrayLike) -> SolverRun:
    """
    Minimización alternada: x^{k+1} = prox(p, Re(P_Zc(x^k)))

    Se detiene cuando |F(x^k) - F(x^{k+1})| < tol o al llegar a max_iters.
    Acepta cualquier tipo de prior (convexo o no).

    Con prior convexo el decrecimiento suficiente acota el último desplazamiento por
    sqrt(2 tol): con el tol por defecto (1e-8) el residuo de punto fijo queda del orden
    de 1e-4. Para exigir un residuo <= 1e-6 hay que usar tol ~ 1e-13.
    """
    m, x = _preparar(m, cfg, x0, 'am')
    p = cfg.prior

    objetivos: List[float] = []
    desplazamientos: List[float] = []
    terminacion = TERMINACION_MAX_ITERS
    valor_anterior = amplitude_objective(m, p, x)
    diferencia = np.inf

    for _ in range(cfg.max_iters):
        x_nuevo = prox(p, project_onto_Zc(m, x).real)
        valor = amplitude_objective(m, p, x_nuevo)
        objetivos.append(valor)
        desplazamientos.append(float(np.linalg.norm(x_nuevo - x)))
        x = x_nuevo

        diferencia = abs(valor_anterior - valor)
        if diferencia < cfg.tol:
            terminacion = TERMINACION_TOLERANCIA
            break
        valor_anterior = valor

    return _construir_run('am', m, x, objetivos, desplazamientos, terminacion, diferencia)


def fistaph(m: MagnitudeSet, cfg: SolverConfig, z0: ArrayLike) -> SolverRun:
    """
    FISTAPH: AM con término inercial

    z^{k+1} = P_Zc(prox(p, Re(y^k))),  y^{k+1} = z^{k+1} + alpha^{k+1} (z^{k+1} - z^k),
    con y^0 = z^0 = P_Zc(inicio). La salida es x_hat = prox(p, Re(z^m)).

    El inicio puede ser real (se proyecta sobre Z_c) o complejo. Las trazas registran
    x^{k+1} = prox(p, Re(y^k)); con alpha = 0 coinciden con las de fienup_am.
    El criterio de parada es la norma del gradient mapping en y^k, ||y^k - z^{k+1}||.
    """
    if cfg.method != 'fistaph':
        raise ValueError(f'fistaph recibió una configuración para {cfg.method!r}')
    p = cfg.prior
    if not p.es_convexo:
        raise PriorNoConvexoError(f'FISTAPH requiere un prior convexo; {p.kind!r} no lo es')
    m = como_magnitudes(m)
    inicio = como_vector(z0, 'z0')
    verificar_largo(inicio, m.n, 'z0')

    x_referencia = inicio.real.copy()
    z = project_onto_Zc(m, inicio)
    z_anterior = z
    y = z

    objetivos: List[float] = []
    desplazamientos: List[float] = []
    terminacion = TERMINACION_MAX_ITERS
    norma_mapping = np.inf

    for k in range(cfg.max_iters):
        x_nuevo = prox(p, y.real)
        z_nuevo = project_onto_Zc(m, x_nuevo)
        norma_mapping = float(np.linalg.norm(y - z_nuevo))

        objetivos.append(amplitude_objective(m, p, x_nuevo))
        desplazamientos.append(float(np.linalg.norm(x_nuevo - x_referencia)))
        x_referencia = x_nuevo
        z_anterior, z = z, z_nuevo

        if norma_mapping < cfg.tol:
            terminacion = TERMINACION_TOLERANCIA
            break

        alpha = cfg.alpha(k + 1)
        y = z + alpha * (z - z_anterior) if alpha else z

    x_final = prox(p, z.real)
    return _construir_run('fistaph', m, x_final, objetivos, desplazamientos, terminacion, norma_mapping)


def objetivo_magnitud_cuadrado(m: MagnitudeSet, x: ArrayLike) -> float:
    """f(x) = (1/4n) || |dft(x)|^2 - c^2 ||^2"""
    m = como_magnitudes(m)
    espectro = dft(x)
    return float(np.sum((np.abs(espectro) ** 2 - m.c ** 2) ** 2)) / (4 * m.n)


def gradiente_magnitud_cuadrado(m: MagnitudeSet, x: ArrayLike) -> RealVector:
    """
    Gradiente de f por regla de la cadena a través de la DFT

    Con X = dft(x) y r = |X|^2 - c^2 se obtiene grad f(x) = Re(idft(r X)).
    """
    m = como_magnitudes(m)
    espectro = dft(x)
    residuo = np.abs(espectro) ** 2 - m.c ** 2
    return idft(residuo * espectro).real


def mag2_pg(m: MagnitudeSet, cfg: SolverConfig, x0: ArrayLike) -> SolverRun:
    """
    Gradiente proximal sobre f(x) = (1/4n) || |dft(x)|^2 - c^2 ||^2 con paso prox en g

    x^{k+1} = prox(p, x^k - t_k grad f(x^k)). El paso t_k se obtiene por backtracking:
    se acepta cuando Phi(x+) <= Phi(x) - armijo * t ||G_t||^2, con Phi = f + g y
    G_t = (x - x+) / t (para prior none, G_t = grad f). El primer intento de cada
    iteración es min(inicial, t_{k-1} / reduccion).
    Se detiene cuando la diferencia de Phi entre iteraciones es menor que tol. Si el paso
    cae bajo el mínimo sin descenso, x se conserva, la corrida termina por tolerancia
    (diferencia nula) y queda marcada con paso_agotado.
    """
    m, x = _preparar(m, cfg, x0, 'mag2_pg')
    p = cfg.prior
    regla = cfg.step_rule

    objetivos: List[float] = []
    desplazamientos: List[float] = []
    terminacion = TERMINACION_MAX_ITERS
    diferencia = np.inf
    paso_agotado = False

    f_x = objetivo_magnitud_cuadrado(m, x)
    valor_anterior = f_x + evaluate(p, x)
    paso = regla.inicial

    for _ in range(cfg.max_iters):
        gradiente = gradiente_magnitud_cuadrado(m, x)
        paso = min(regla.inicial, paso / regla.reduccion)

        while True:
            x_nuevo = prox(p, x - paso * gradiente)
            f_nuevo = objetivo_magnitud_cuadrado(m, x_nuevo)
            valor = f_nuevo + evaluate(p, x_nuevo)
            mapping = (x - x_nuevo) / paso
            if valor <= valor_anterior - regla.armijo * paso * float(np.sum(mapping ** 2)):
                break
            paso *= regla.reduccion
            if paso < regla.minimo:
                logger.warning(
                    f'mag2_pg: backtracking agotado (paso < {regla.minimo:g}) en la iteración '
                    f'{len(objetivos) + 1}, se conserva x'
                )
                x_nuevo, f_nuevo, valor = x, f_x, valor_anterior
                paso = regla.minimo
                paso_agotado = True
                break

        objetivos.append(amplitude_objective(m, p, x_nuevo))
        desplazamientos.append(float(np.linalg.norm(x_nuevo - x)))
        x, f_x = x_nuevo, f_nuevo

        diferencia = abs(valor_anterior - valor)
        if diferencia < cfg.tol:
            terminacion = TERMINACION_TOLERANCIA
            break
        valor_anterior = valor

    return _construir_run('mag2_pg', m, x, objetivos, desplazamientos, terminacion, diferencia, paso_agotado)


def truncate_topk(x: ArrayLike, K: int) -> RealVector:
    """Conserva las K entradas de mayor magnitud (empates: menor índice)"""
    x = como_vector(x)
    if not 1 <= int(K) <= x.shape[0]:
        raise ValueError(f'K={K} fuera de rango para un vector de largo {x.shape[0]}')
    return hard_threshold(x, int(K))


def resolver(m: MagnitudeSet, cfg: SolverConfig, x0: ArrayLike) -> SolverRun:
    """Despacha al solver indicado por cfg.method (FISTAPH proyecta el inicio real)"""
    if cfg.method == 'am':
        return fienup_am(m, cfg, x0)
    if cfg.method == 'fistaph':
        return fistaph(m, cfg, x0)
    return mag2_pg(m, cfg, x0)


# DIAGNÓSTICOS DE CONVERGENCIA

def fixed_point_residual(m: MagnitudeSet, p: PriorSpec, x: ArrayLike) -> float:
    """||x - prox(p, Re(P_Zc(x)))||, cero en los puntos fijos de AM"""
    x = como_vector(x)
    return float(np.linalg.norm(x - prox(p, project_onto_Zc(m, x).real)))


def displacement_tail_ratio(run: SolverRun, fraccion: float = 0.1) -> float:
    """Suma de desplazamientos del último 10% de iteraciones sobre la suma total"""
    trazas = run.displacement_trace
    total = float(np.sum(trazas))
    if len(trazas) == 0 or total == 0:
        return 0.0
    cola = max(1, int(np.ceil(fraccion * len(trazas))))
    return float(np.sum(trazas[-cola:])) / total


def sufficient_decrease_gaps(m: MagnitudeSet, p: PriorSpec, run: SolverRun,
                             x0: ArrayLike) -> np.ndarray:
    """
    F(x^{k+1}) + 1/2 ||x^{k+1} - x^k||^2 - F(x^k) para cada iteración de AM

    Con priors convexos todas las brechas son <= 0 (salvo redondeo). Si F(x^0) = +inf
    la primera brecha es -inf.
    """
    anteriores = np.concatenate(([amplitude_objective(m, p, x0)], run.objective_trace[:-1]))
    return run.objective_trace + 0.5 * run.displacement_trace ** 2 - anteriores


def es_monotono(run: SolverRun, tol: float = 1e-10) -> bool:
    """True si la traza de objetivo no aumenta (tolerancia absoluta tol)"""
    trazas = run.objective_trace
    return bool(np.all(np.diff(trazas) <= tol))

from collections import deque
from typing import Callable, Deque, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


LimiterMode = Literal["none", "bp", "irp", "irp_qtilde"]
TimeScheme = Literal["fe", "ssprk3", "sspms3"]
BoundaryKind = Literal["periodic", "outflow", "reflective", "inflow"]


class Eos(BaseModel):
    """
    Modelo Pydantic para la ecuación de estado ideal p = (Γ−1)ρe.
    """
    model_config = ConfigDict(frozen=True)

    gamma: float = Field(5.0 / 3.0, description="Índice adiabático Γ, debe cumplir 1 < Γ ≤ 2")

    @field_validator("gamma")
    @classmethod
    def check_gamma(cls, value: float) -> float:
        if not (1.0 < value <= 2.0) or not np.isfinite(value):
            raise ValueError(f"gamma must lie in (1, 2], got {value}")
        return value


class ConservedState(BaseModel):
    """
    Modelo Pydantic para un estado conservativo U = (D, m, E) en unidades c = 1.
    """
    model_config = ConfigDict(frozen=True)

    D: float = Field(..., description="Densidad de masa en el sistema del laboratorio")
    m: Tuple[float, ...] = Field(..., description="Vector de momento, longitud d")
    E: float = Field(..., description="Energía total")

    @model_validator(mode="after")
    def check_finite(self):
        if not np.all(np.isfinite(self.to_array())):
            raise ValueError("conserved components must be finite")
        if not 1 <= len(self.m) <= 3:
            raise ValueError("momentum must have 1, 2 or 3 components")
        return self

    def to_array(self) -> np.ndarray:
        return np.array([self.D, *self.m, self.E], dtype=float)

    @classmethod
    def from_array(cls, values) -> "ConservedState":
        values = np.asarray(values, dtype=float)
        return cls(D=float(values[0]), m=tuple(float(x) for x in values[1:-1]), E=float(values[-1]))


class PrimitiveState(BaseModel):
    """
    Modelo Pydantic para un estado primitivo V = (ρ, v, p).
    """
    model_config = ConfigDict(frozen=True)

    rho: float = Field(..., description="Densidad de masa en reposo")
    v: Tuple[float, ...] = Field(..., description="Vector velocidad del fluido, longitud d")
    p: float = Field(..., description="Presión térmica")

    def to_array(self) -> np.ndarray:
        return np.array([self.rho, *self.v, self.p], dtype=float)

    @classmethod
    def from_array(cls, values) -> "PrimitiveState":
        values = np.asarray(values, dtype=float)
        return cls(rho=float(values[0]), v=tuple(float(x) for x in values[1:-1]), p=float(values[-1]))


class AuxiliaryPoint(BaseModel):
    """
    Punto auxiliar (v*, ρ*) de la forma lineal φ_σ.
    """
    model_config = ConfigDict(frozen=True)

    v_star: Tuple[float, ...] = Field(..., description="Velocidad auxiliar dentro de la bola unidad abierta")
    rho_star: float = Field(..., gt=0, description="Densidad auxiliar positiva")

    @field_validator("v_star")
    @classmethod
    def check_ball(cls, value):
        if float(np.dot(value, value)) >= 1.0:
            raise ValueError("v_star must lie in the open unit ball")
        return value


class UnitNormal(BaseModel):
    """
    Vector normal unitario de una arista o cara.
    """
    model_config = ConfigDict(frozen=True)

    xi: Tuple[float, ...] = Field(..., description="Componentes del vector normal, longitud d")

    @field_validator("xi")
    @classmethod
    def check_unit(cls, value):
        if abs(float(np.linalg.norm(value)) - 1.0) > 1e-14:
            raise ValueError("xi must have unit length within 1e-14")
        return value

    def to_array(self) -> np.ndarray:
        return np.asarray(self.xi, dtype=float)


class InvariantRegion(BaseModel):
    """
    Región invariante Ω_σ: estados admisibles con entropía específica S ≥ σ.
    """
    model_config = ConfigDict(frozen=True)

    sigma: float = Field(..., description="Cota inferior de la entropía específica")
    eos: Eos = Field(default_factory=Eos, description="Ecuación de estado")

    @field_validator("sigma")
    @classmethod
    def check_sigma(cls, value: float) -> float:
        if not np.isfinite(value):
            raise ValueError("sigma must be finite")
        return value


class LimiterConfig(BaseModel):
    """
    Configuración del limitador de preservación de la región invariante.
    """
    model_config = ConfigDict(frozen=True)

    mode: LimiterMode = Field("irp", description="Modo del limitador: none, bp, irp o irp_qtilde")
    s0: float = Field(-np.inf, description="Cota de entropía que se impone en los puntos de descomposición")
    bisection_tol: float = Field(1e-12, gt=0, description="Tolerancia de la bisección del paso de entropía")
    max_iter: int = Field(200, ge=1, description="Número máximo de iteraciones de la bisección")
    eps: float = Field(1e-13, gt=0, description="Holgura ε de los pasos de densidad y de q")
    average_tol: float = Field(1e-12, ge=0, description="Tolerancia admitida para S(Ū) por debajo de s0")


class BoundaryCondition(BaseModel):
    """
    Condición de contorno de un lado del dominio.
    """
    model_config = ConfigDict(frozen=True)

    kind: BoundaryKind = Field("outflow", description="Tipo: periodic, outflow, reflective o inflow")
    state: Optional[Tuple[float, ...]] = Field(None, description="Estado primitivo prescrito para inflow")
    window: Optional[Tuple[float, float]] = Field(
        None, description="Intervalo de la coordenada tangencial donde actúa el inflow"
    )
    fallback: BoundaryKind = Field("outflow", description="Tipo usado fuera de la ventana de inflow")

    @model_validator(mode="after")
    def check_state(self):
        if self.kind == "inflow" and self.state is None:
            raise ValueError("inflow boundaries need a prescribed state")
        if self.fallback in ("inflow", "periodic"):
            raise ValueError("fallback must be outflow or reflective")
        return self


class Mesh(BaseModel):
    """
    Malla cartesiana uniforme en 1D o 2D.
    """
    model_config = ConfigDict(frozen=True)

    extents: Tuple[Tuple[float, float], ...] = Field(..., description="Intervalo [lo, hi] de cada eje")
    counts: Tuple[int, ...] = Field(..., description="Número de celdas por eje")
    boundary: Dict[str, BoundaryCondition] = Field(
        default_factory=dict, description="Condición por lado: left, right, bottom, top"
    )

    @model_validator(mode="after")
    def check_mesh(self):
        if len(self.extents) != len(self.counts) or len(self.counts) not in (1, 2):
            raise ValueError("mesh must be 1D or 2D with one extent per axis")
        for (lo, hi), n in zip(self.extents, self.counts):
            if not hi > lo or n < 1:
                raise ValueError("each axis needs hi > lo and at least one cell")
        for side in self.sides():
            self.boundary.setdefault(side, BoundaryCondition())
        for a, b in (("left", "right"), ("bottom", "top")):
            if a in self.boundary and b in self.boundary:
                if (self.boundary[a].kind == "periodic") != (self.boundary[b].kind == "periodic"):
                    raise ValueError(f"periodic boundaries must pair {a} with {b}")
        return self

    @property
    def dim(self) -> int:
        return len(self.counts)

    @property
    def spacing(self) -> Tuple[float, ...]:
        return tuple((hi - lo) / n for (lo, hi), n in zip(self.extents, self.counts))

    def sides(self) -> List[str]:
        return ["left", "right"] if self.dim == 1 else ["left", "right", "bottom", "top"]

    def centers(self, axis: int) -> np.ndarray:
        lo, _ = self.extents[axis]
        h = self.spacing[axis]
        return lo + (np.arange(self.counts[axis]) + 0.5) * h


class DgSolution(BaseModel):
    """
    Solución DG modal: coeficientes por celda, por modo y por componente conservativa.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    degree: int = Field(..., ge=0, le=3, description="Grado polinómico k")
    coeffs: np.ndarray = Field(..., description="Coeficientes con forma (*celdas, modos, componentes)")
    time: float = Field(0.0, description="Instante de la solución")

    def averages(self) -> np.ndarray:
        return self.coeffs[..., 0, :]

    def with_coeffs(self, coeffs: np.ndarray, time: Optional[float] = None) -> "DgSolution":
        return DgSolution(degree=self.degree, coeffs=coeffs, time=self.time if time is None else time)


class RunConfig(BaseModel):
    """
    Configuración de una ejecución del programa por lotes.
    """
    model_config = ConfigDict(extra="forbid")

    scenario: str = Field("smooth1d", description="Nombre del escenario incorporado")
    degree: int = Field(2, ge=0, le=3, description="Grado polinómico k")
    cells: Optional[Tuple[int, ...]] = Field(None, description="Celdas por eje; por defecto las del escenario")
    cfl: Optional[float] = Field(None, gt=0, description="Número CFL práctico; por defecto según k y el esquema")
    dt: Optional[float] = Field(None, gt=0, description="Paso de tiempo fijo")
    dt_coefficient: Optional[float] = Field(None, gt=0, description="Coeficiente c de la ley Δt = c·Δx^e")
    dt_exponent: Optional[float] = Field(None, gt=0, description="Exponente e de la ley Δt = c·Δx^e")
    t_final: Optional[float] = Field(None, gt=0, description="Instante final; por defecto el del escenario")
    limiter: LimiterMode = Field("irp", description="Modo del limitador")
    scheme: TimeScheme = Field("sspms3", description="Integrador temporal")
    gamma: Optional[float] = Field(None, description="Índice adiabático alternativo")
    output_dir: Optional[str] = Field(None, description="Directorio de salida")
    snapshot_interval: int = Field(0, ge=0, description="Pasos entre instantáneas; 0 solo escribe la final")
    monitor: bool = Field(True, description="Registrar la serie S_min(t)")
    seed: int = Field(0, description="Semilla de la batería de propiedades (orden verify)")
    include_optional: bool = Field(False, description="Permitir escenarios opcionales de gran tamaño")
    max_steps: int = Field(10_000_000, ge=1, description="Límite de seguridad de pasos")

    @field_validator("cells")
    @classmethod
    def check_cells(cls, value):
        if value is not None and (len(value) not in (1, 2) or min(value) < 1):
            raise ValueError("cells needs one or two positive counts")
        return value

    @model_validator(mode="after")
    def check_dt_law(self):
        if (self.dt_coefficient is None) != (self.dt_exponent is None):
            raise ValueError("dt_coefficient and dt_exponent go together")
        if self.dt is not None and self.dt_coefficient is not None:
            raise ValueError("dt and the dt law are mutually exclusive")
        return self


class SminRecord(BaseModel):
    """
    Registro de la serie S_min(t) tras cada paso aceptado.
    """
    t: float = Field(..., description="Instante")
    s_min_points: float = Field(..., description="Mínimo de S sobre los puntos de descomposición")
    s_min_averages: float = Field(..., description="Mínimo de S sobre los promedios de celda")


class RunSummary(BaseModel):
    """
    Resumen legible por máquina de una ejecución.
    """
    scenario: str = Field(..., description="Escenario ejecutado")
    degree: int = Field(..., description="Grado polinómico")
    cells: Tuple[int, ...] = Field(..., description="Celdas por eje")
    scheme: str = Field(..., description="Integrador temporal")
    limiter: str = Field(..., description="Modo del limitador")
    gamma: float = Field(..., description="Índice adiabático")
    t_final: float = Field(..., description="Instante final alcanzado")
    steps: int = Field(..., description="Número de pasos aceptados")
    wall_time: float = Field(..., description="Tiempo de reloj en segundos")
    s0: float = Field(..., description="Cota de entropía inicial S₀")
    s_min_points: Optional[float] = Field(None, description="Mínimo de la serie S_min sobre puntos")
    s_max_points: Optional[float] = Field(None, description="Máximo de la serie S_min sobre puntos")
    s_min_averages: Optional[float] = Field(None, description="Mínimo de la serie S_min sobre promedios")
    s_max_averages: Optional[float] = Field(None, description="Máximo de la serie S_min sobre promedios")
    entropy_excursion: float = Field(0.0, description="Mayor descenso de S_min por debajo de S₀")
    l1_error: Optional[float] = Field(None, description="Error l1 de la densidad en reposo")
    l2_error: Optional[float] = Field(None, description="Error l2 de la densidad en reposo")
    irp_verdict: bool = Field(..., description="Verdadero si nunca se abandonó Ω_{S₀} más allá de la holgura")
    snapshots: List[str] = Field(default_factory=list, description="Ficheros de instantáneas escritos")


class ConvergenceRow(BaseModel):
    """
    Fila de una tabla de convergencia.
    """
    cells: int = Field(..., description="Celdas por eje")
    l1: float = Field(..., description="Error l1")
    l1_order: Optional[float] = Field(None, description="Orden observado en l1")
    l2: float = Field(..., description="Error l2")
    l2_order: Optional[float] = Field(None, description="Orden observado en l2")


class PropertyResult(BaseModel):
    """
    Resultado de una propiedad teórica comprobada por muestreo.
    """
    name: str = Field(..., description="Nombre de la propiedad")
    samples: int = Field(..., description="Número de muestras evaluadas")
    passed: bool = Field(..., description="Verdadero si todas las muestras cumplen la propiedad")
    worst: float = Field(0.0, description="Peor margen observado (negativo si falla)")
    detail: str = Field("", description="Información adicional")


class Scenario(BaseModel):
    """
    Modelo Pydantic para un problema de referencia: dominio, datos iniciales y de contorno.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = Field(..., description="Nombre del escenario")
    extents: Tuple[Tuple[float, float], ...] = Field(..., description="Dominio físico por eje")
    cells: Tuple[int, ...] = Field(..., description="Resolución por defecto")
    boundary: Dict[str, BoundaryCondition] = Field(..., description="Condiciones de contorno por lado")
    gamma: float = Field(5.0 / 3.0, description="Índice adiabático")
    t_final: float = Field(..., gt=0, description="Instante final")
    initial: Callable[..., np.ndarray] = Field(..., description="Datos iniciales primitivos en función de la posición")
    exact: Optional[Callable[..., np.ndarray]] = Field(None, description="Solución exacta primitiva (x, t)")
    states: Optional[List[Tuple[float, ...]]] = Field(
        None, description="Estados primitivos constantes de un problema de Riemann"
    )
    output_times: List[float] = Field(default_factory=list, description="Instantes de escritura de instantáneas")
    optional: bool = Field(False, description="Escenario opcional fuera de la batería de aceptación")
    description: str = Field("", description="Descripción breve")

    @property
    def dim(self) -> int:
        return len(self.extents)


class StepperState(BaseModel):
    """
    Estado del integrador temporal: historial de niveles para el método multipaso.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    scheme: TimeScheme = Field("ssprk3", description="Integrador: fe, ssprk3 o sspms3")
    history: Deque[Tuple[np.ndarray, np.ndarray]] = Field(
        default_factory=lambda: deque(maxlen=4),
        description="Pares (coeficientes limitados, residuo) de los últimos niveles",
    )
    dt: Optional[float] = Field(None, description="Paso de tiempo de los niveles almacenados")
    steps: int = Field(0, description="Pasos aceptados")

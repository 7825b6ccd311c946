"""
===============================================================================
MÓDULO: models.py
===============================================================================
Definición:
-----------
Modelos de datos (Pydantic) que viajan entre capas: parámetros de un estado
(KncsSpec), muestras y reportes de squeezing, reporte de área de incerteza y la
configuración validada de cada comando (RunConfig).

Conceptos Clave:
----------------
- Los invariantes de cada tipo se validan al construirlo; una violación es un
  pydantic.ValidationError, que la CLI traduce a exit 2 y la API a 422.
- Todo JSON emitido lleva `schema_version`.
===============================================================================
"""
from __future__ import annotations

import math
from pathlib import Path
from typing import Any, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.closed_forms import SUPPORTED_PAIRS
from app.deps import get_nonlinearity
from app.nonlinear import NonlinearFn

SCHEMA_VERSION = "1"
TWO_PI = 2.0 * math.pi


class KncsSpec(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    xi: complex
    K: int = Field(ge=1)
    j: int = Field(default=0, ge=0)
    f: NonlinearFn = Field(default_factory=lambda: get_nonlinearity("unit"))
    cutoff: Union[int, Literal["auto"]] = "auto"

    @field_validator("xi", mode="before")
    @classmethod
    def _coerce_xi(cls, v: Any) -> complex:
        if isinstance(v, (list, tuple)) and len(v) == 2:
            return complex(float(v[0]), float(v[1]))
        return complex(v)

    @field_validator("f", mode="before")
    @classmethod
    def _resolve_f(cls, v: Any) -> NonlinearFn:
        return get_nonlinearity(v) if isinstance(v, str) else v

    @field_validator("cutoff")
    @classmethod
    def _check_cutoff(cls, v):
        if isinstance(v, int) and v < 0:
            raise ValueError("cutoff debe ser >= 0")
        return v

    @model_validator(mode="after")
    def _check_j(self) -> "KncsSpec":
        if self.j > self.K - 1:
            raise ValueError(f"j={self.j} fuera de [0, K-1] con K={self.K}")
        return self


class SqueezeSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    K: int = Field(ge=1)
    N: int = Field(ge=2)
    phi: float = Field(ge=0.0, lt=TWO_PI)
    xi_abs: float = Field(ge=0.0)
    S: float
    source: Literal["analytic", "numeric", "printed"]

    @model_validator(mode="after")
    def _check(self) -> "SqueezeSample":
        if self.N % 2:
            raise ValueError("N debe ser par")
        if self.source != "numeric" and (self.K, self.N) not in SUPPORTED_PAIRS:
            raise ValueError(f"sin forma cerrada para (K={self.K}, N={self.N})")
        return self


class CriticalReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    K: int
    N: int
    xi_c: float
    xi_m: float
    s_min: float
    directions_sq: List[float]
    directions_st: List[float]
    conjugate_pair: Tuple[float, float]
    source: Literal["analytic", "numeric", "printed"]
    bracket: Tuple[float, float]
    xtol: float
    cutoff: int

    @model_validator(mode="after")
    def _check(self) -> "CriticalReport":
        if not 0.0 < self.xi_m < self.xi_c:
            raise ValueError(f"se esperaba 0 < xi_m < xi_c (xi_m={self.xi_m}, xi_c={self.xi_c})")
        if self.s_min >= 0.0:
            raise ValueError("s_min debe ser negativo")
        if len(self.directions_sq) != 2 * self.K:
            raise ValueError(
                f"se esperaban {2 * self.K} direcciones de squeezing, hay {len(self.directions_sq)}"
            )
        return self


class AreaReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    K: int
    N: int
    xi_abs: float
    area_analytic: float
    area_numeric: float
    circle_area: float

    @model_validator(mode="after")
    def _check(self) -> "AreaReport":
        if self.area_analytic < self.circle_area * (1.0 - 1e-12):
            raise ValueError("el área del estado quedó por debajo del círculo coherente")
        rel = abs(self.area_analytic - self.area_numeric) / self.area_analytic
        if rel >= 1e-6:
            raise ValueError(f"área analítica y numérica difieren (rel={rel:.2e})")
        return self


Command = Literal[
    "state", "squeeze", "report", "flower", "area", "geometry", "surface", "contour", "orders"
]


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: Command
    K: int = Field(default=2, ge=1)
    N: int = Field(default=4, ge=2)
    j: int = Field(default=0, ge=0)
    xi: List[float] = Field(default_factory=lambda: [0.5])
    xi_arg: float = 0.0
    kind: Literal["kncs", "sekncs", "fan", "coherent", "ncs"] = "fan"
    f: str = "unit"
    cutoff: Union[int, Literal["auto"]] = "auto"
    grid: int = Field(default=256, ge=1)
    mode: Literal["chi", "xiq"] = "chi"
    source: Literal["auto", "analytic", "numeric", "printed"] = "auto"
    degrees: bool = False
    output_format: Literal["csv", "json"] = "csv"
    output_path: Optional[Path] = None

    @field_validator("xi")
    @classmethod
    def _check_xi(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("se necesita al menos un valor de xi")
        if any(x < 0 or not math.isfinite(x) for x in v):
            raise ValueError("xi debe ser real, finito y >= 0")
        return v

    @field_validator("f")
    @classmethod
    def _check_f(cls, v: str) -> str:
        get_nonlinearity(v)
        return v

    @model_validator(mode="after")
    def _check_command(self) -> "RunConfig":
        c = self.command
        even_k = c in ("report", "area", "orders", "surface", "contour", "flower") or (
            c in ("state", "squeeze") and self.kind in ("fan", "sekncs")
        )
        if even_k and self.K % 2:
            raise ValueError(f"'{c}' con kind={self.kind} requiere K par (K={self.K})")
        if self.kind in ("coherent", "ncs") and c in ("state", "squeeze") and self.K != 1:
            raise ValueError(f"kind={self.kind} requiere K=1")
        if self.j > self.K - 1:
            raise ValueError(f"j={self.j} fuera de [0, K-1]")
        if self.N % 2:
            raise ValueError(f"N debe ser par (N={self.N})")
        if c not in ("squeeze", "surface") and len(self.xi) != 1:
            raise ValueError(f"'{c}' acepta un solo valor de xi")
        min_grid = {"squeeze": 8, "surface": 8, "flower": 64, "area": 64, "contour": 64}
        if self.grid < min_grid.get(c, 1):
            raise ValueError(f"'{c}' requiere grid >= {min_grid[c]}")
        if c == "flower" and self.grid < 32 * self.K:
            raise ValueError(f"'flower' requiere grid >= 32K = {32 * self.K}")
        if c == "orders" and self.N < 2 * self.K:
            raise ValueError("'orders' requiere N (N_max) >= 2K")
        return self

    @property
    def xi_value(self) -> float:
        return self.xi[0]

    def spec(self) -> KncsSpec:
        j = self.j if self.kind == "kncs" else 0
        K = 1 if self.kind in ("coherent", "ncs") else self.K
        xi = self.xi_value * complex(math.cos(self.xi_arg), math.sin(self.xi_arg))
        f = "unit" if self.kind == "coherent" else self.f
        return KncsSpec(xi=xi, K=K, j=j, f=f, cutoff=self.cutoff)


# --- cuerpos HTTP ------------------------------------------------------------

class StateRequest(BaseModel):
    kind: Literal["kncs", "sekncs", "fan", "coherent", "ncs"] = "fan"
    k: int = 2
    j: int = 0
    xi: float = 0.5
    xi_arg: float = 0.0
    f: str = "unit"
    cutoff: Union[int, Literal["auto"]] = "auto"

    def to_config(self) -> RunConfig:
        return RunConfig(command="state", K=self.k, j=self.j, xi=[self.xi], xi_arg=self.xi_arg,
                         kind=self.kind, f=self.f, cutoff=self.cutoff)


class SqueezeRequest(BaseModel):
    kind: Literal["kncs", "sekncs", "fan", "coherent", "ncs"] = "fan"
    k: int = 2
    n: int = 4
    xi: List[float] = Field(default_factory=lambda: [0.5])
    grid: int = 64
    f: str = "unit"

    def to_config(self) -> RunConfig:
        return RunConfig(command="squeeze", K=self.k, N=self.n, xi=self.xi, grid=self.grid,
                         kind=self.kind, f=self.f)


class ReportRequest(BaseModel):
    k: int = 2
    n: int = 4
    source: Literal["auto", "analytic", "numeric", "printed"] = "auto"
    f: str = "unit"

    def to_config(self) -> RunConfig:
        return RunConfig(command="report", K=self.k, N=self.n, source=self.source, f=self.f)


class AreaRequest(BaseModel):
    k: int = 2
    n: int = 4
    xi: float = 0.5
    grid: int = 256

    def to_config(self) -> RunConfig:
        return RunConfig(command="area", K=self.k, N=self.n, xi=[self.xi], grid=self.grid)


class GeometryRequest(BaseModel):
    k: int = 2
    xi: float = 1.0
    mode: Literal["chi", "xiq"] = "chi"

    def to_config(self) -> RunConfig:
        return RunConfig(command="geometry", K=self.k, xi=[self.xi], mode=self.mode)


class TableResponse(BaseModel):
    schema_version: str = SCHEMA_VERSION
    columns: List[str]
    rows: List[List[Any]]

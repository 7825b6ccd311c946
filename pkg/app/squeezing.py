"""
===============================================================================
MÓDULO: squeezing.py (3)
===============================================================================
Definición:
-----------
Squeezing de amplitud de orden N (Hong–Mandel):

    S_{φ,N} = ⟨(ΔX_φ)^N⟩ − R_N ,   R_N = (N−1)!! / 2^{N/2}

S < 0 certifica squeezing de orden N en la dirección φ.

Conceptos Clave:
----------------
- Camino numérico: momento central calculado sobre el vector de Fock
  (fock.central_quadrature_moment). Vale para cualquier K, N y f.
- Camino analítico: formas cerradas de closed_forms (f ≡ 1, pares soportados).
- source: "analytic" | "numeric" | "printed" | "auto". "auto" toma la forma
  cerrada cuando existe y f es la unidad; si no, el camino numérico.

Rol en el Sistema:
------------------
- Evaluar S para analysis (búsquedas de ξ_c, ξ_M, direcciones) y para los
  barridos de la CLI y la API.
===============================================================================
"""
from __future__ import annotations

from functools import lru_cache
from typing import List, Literal, Optional, Sequence, Union

import numpy as np
from scipy.special import factorial2

from app.closed_forms import SUPPORTED_PAIRS, squeeze_analytic
from app.errors import InvalidParameter
from app.fock import FockVector, central_quadrature_moment
from app.logging_utils import logger, span
from app.models import SqueezeSample
from app.states import build_fan

Source = Literal["auto", "analytic", "numeric", "printed"]
Cutoff = Union[int, Literal["auto"]]


def r_const(N: int) -> float:
    if N < 2 or N % 2:
        raise InvalidParameter(f"N debe ser par y >= 2 (N={N})")
    return float(factorial2(N - 1, exact=True)) / 2.0 ** (N // 2)


def squeeze_numeric(v: FockVector, phi, N: int):
    return central_quadrature_moment(v, phi, N) - r_const(N)


@lru_cache(maxsize=256)
def fan_state(xi: float, K: int, f: str, cutoff: Cutoff) -> FockVector:
    return build_fan(xi, K, f, cutoff)


def resolve_source(K: int, N: int, source: Source, f: str = "unit") -> str:
    if source == "auto":
        return "analytic" if (K, N) in SUPPORTED_PAIRS and f == "unit" else "numeric"
    if source in ("analytic", "printed") and f != "unit":
        raise InvalidParameter("las formas cerradas solo existen para f = unit")
    return source


def squeeze_value(K: int, N: int, xi: float, phi, source: Source = "auto",
                  f: str = "unit", cutoff: Cutoff = "auto"):
    """S_{φ,N} del estado abanico en ξ real; `phi` escalar o arreglo."""
    src = resolve_source(K, N, source, f)
    if src == "numeric":
        return squeeze_numeric(fan_state(float(xi), K, f, cutoff), phi, N)
    return squeeze_analytic(K, N, xi, phi, printed=(src == "printed"))


def phi_grid(count: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(count) / count


def squeeze_scan(K: int, N: int, xi: float, phi_count: int, f: str = "unit",
                 cutoff: Cutoff = "auto", state: Optional[FockVector] = None) -> List[SqueezeSample]:
    """
    Barrido uniforme en φ ∈ [0, 2π). Siempre incluye la muestra numérica; si el
    par tiene forma cerrada (y no se pasó un estado propio) agrega la analítica
    en el mismo φ, de modo que ambas fuentes puedan compararse.
    """
    if phi_count < 8:
        raise InvalidParameter("el barrido en φ requiere al menos 8 puntos")
    phis = phi_grid(phi_count)
    with span(f"[SQZ] scan K={K} N={N} xi={xi:.6g}"):
        v = state if state is not None else fan_state(float(xi), K, f, cutoff)
        numeric = squeeze_numeric(v, phis, N)
        samples = [
            SqueezeSample(K=K, N=N, phi=float(p), xi_abs=abs(xi), S=float(s), source="numeric")
            for p, s in zip(phis, numeric)
        ]
        if state is None and f == "unit" and (K, N) in SUPPORTED_PAIRS:
            analytic = squeeze_analytic(K, N, abs(xi), phis)
            samples += [
                SqueezeSample(K=K, N=N, phi=float(p), xi_abs=abs(xi), S=float(s), source="analytic")
                for p, s in zip(phis, analytic)
            ]
    logger.debug(f"[SQZ] {len(samples)} muestras")
    return samples


def squeeze_surface(K: int, N: int, xi_grid: Sequence[float], phi_count: int,
                    source: Source = "auto", f: str = "unit") -> np.ndarray:
    """Matriz S[i, k] sobre |ξ_i| × φ_k (datos de la superficie S(|ξ|, φ))."""
    phis = phi_grid(phi_count)
    with span(f"[SQZ] surface K={K} N={N} {len(xi_grid)}x{phi_count}"):
        rows = [np.atleast_1d(squeeze_value(K, N, x, phis, source, f)) for x in xi_grid]
    return np.vstack(rows)

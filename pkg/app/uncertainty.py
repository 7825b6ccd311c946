"""
===============================================================================
MÓDULO: uncertainty.py (4)
===============================================================================
Definición:
-----------
Área de incerteza de orden N:

    A_N = ½ ∫₀^{2π} dφ ⟨(ΔX_φ)^N⟩²

Para un estado abanico ⟨(ΔX_φ)^N⟩ = R_N + X_N + Σ_p Y_N(p) cos(2pKφ), de modo
que A_N = π{R_N² + (2R_N + X_N)X_N + ½ Σ_p Y_N(p)²}. El coherente da πR_N².

Conceptos Clave:
----------------
- area_analytic arma la expresión con momentos normalmente ordenados.
- area_numeric integra el integrando crudo con la regla del trapecio sobre un
  período π/K; el integrando es periódico y la regla converge espectralmente.
- Las dos se verifican entre sí; ninguna asume a la otra.
===============================================================================
"""
from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import factorial

from app.deps import get_settings
from app.errors import ImaginaryResidue, InvalidParameter
from app.fock import FockVector, central_quadrature_moment, normally_ordered_moment
from app.logging_utils import logger, span
from app.squeezing import r_const


def _check_n(N: int) -> None:
    if N < 2 or N % 2:
        raise InvalidParameter(f"N debe ser par y >= 2 (N={N})")


def x_moment(v: FockVector, N: int) -> float:
    _check_n(N)
    h = N // 2
    total = 0.0
    for m in range(1, h + 1):
        n_m = normally_ordered_moment(v, m, m).real
        total += 2.0 ** m * n_m / (factorial(m) ** 2 * factorial(h - m))
    return float(factorial(N) / 2.0 ** N * total)


def y_moment(v: FockVector, N: int, K: int, p: int) -> float:
    _check_n(N)
    if K < 1:
        raise InvalidParameter("K debe ser >= 1")
    if not 1 <= p <= N // (2 * K):
        raise InvalidParameter(f"p={p} fuera de [1, {N // (2 * K)}]")
    h, d = N // 2, 2 * p * K
    total = 0.0j
    for m in range(0, h - p * K + 1):
        mom = normally_ordered_moment(v, m, m + d)
        total += 2.0 ** m * mom / (factorial(m) * factorial(m + d) * factorial(h - m - p * K))
    value = 2.0 ** (p * K) * factorial(N) / 2.0 ** (N - 1) * total
    if abs(value.imag) > get_settings().imag_tol * max(abs(value), 1e-300):
        raise ImaginaryResidue(f"Y_{N}({p}) con parte imaginaria {value.imag:.3e}")
    return float(value.real)


def area_analytic(v: FockVector, K: int, N: int) -> float:
    """Supone media nula y soporte de abanico (armónicos cos 2pKφ)."""
    R, X = r_const(N), x_moment(v, N)
    ys = [y_moment(v, N, K, p) for p in range(1, N // (2 * K) + 1)]
    return float(np.pi * (R * R + (2.0 * R + X) * X + 0.5 * sum(y * y for y in ys)))


def area_numeric(v: FockVector, N: int, grid: int = 1024, K: Optional[int] = None) -> float:
    """
    Trapecio sobre un período de ⟨(ΔX_φ)^N⟩². Sin K se usa el período π, que
    vale para cualquier estado con N par.
    """
    _check_n(N)
    if grid < 64:
        raise InvalidParameter("area_numeric requiere grid >= 64")
    turns = 2 * (K or 1)
    period = 2.0 * np.pi / turns
    phis = np.linspace(0.0, period, grid + 1)
    with span(f"[AREA] trapecio N={N} grid={grid}"):
        m = central_quadrature_moment(v, phis, N)
        area = 0.5 * turns * trapezoid(m * m, phis)
    logger.debug(f"[AREA] numérica={area:.12g}")
    return float(area)


class Contour(NamedTuple):
    phi: np.ndarray
    moment: np.ndarray
    radius: float


def uncertainty_contour(v: FockVector, N: int, grid: int = 256) -> Contour:
    """Datos polares del dominio de incerteza frente al círculo de radio R_N."""
    if grid < 64:
        raise InvalidParameter("el contorno requiere grid >= 64")
    phis = 2.0 * np.pi * np.arange(grid) / grid
    return Contour(phis, central_quadrature_moment(v, phis, N), r_const(N))


def quadrature_product(v: FockVector, N: int, phi: float) -> float:
    m = central_quadrature_moment(v, np.array([phi, phi + 0.5 * np.pi]), N)
    return float(m[0] * m[1])

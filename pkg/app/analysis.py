"""
===============================================================================
MÓDULO: analysis.py (5)
===============================================================================
Definición:
-----------
Búsquedas sobre S_{φ,N}(ξ) de estados abanico:

- ξ_c   supremo del intervalo de squeezing (raíz por bisección)
- ξ_M   amplitud de squeezing máximo (mínimo por sección dorada)
- direcciones de squeezing (mínimos en φ) y de estiramiento (máximos)
- orden mínimo de squeezing N_min = 2K y el conjunto de órdenes con squeezing
- perfil polar (φ, S) de la "flor" de 4K alas

Conceptos Clave:
----------------
- Dirección de referencia φ_sq,1 = π/(2K). Las búsquedas en ξ se hacen a lo
  largo de ella con ξ real.
- Antes de cada búsqueda hay un barrido grueso de 64 puntos: ubica el cambio
  de signo para la bisección y verifica unimodalidad para la sección dorada.
- Umbral de detección de squeezing: S < −1e-9.
- source "auto" usa la forma cerrada si existe; "numeric" fuerza el motor de
  Fock para contrastar los hitos; "printed" usa las expresiones publicadas.

Rol en el Sistema:
------------------
- Reproducir los hitos numéricos (ξ_c, ξ_M, direcciones, N_min) y armar el
  CriticalReport que emiten la CLI y la API.
===============================================================================
"""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect, minimize_scalar

from app.closed_forms import g_function
from app.errors import InvalidParameter, NoSignChange, NotFound, NotUnimodal
from app.fock import FockVector
from app.logging_utils import logger, span
from app.models import CriticalReport
from app.squeezing import Source, phi_grid, resolve_source, squeeze_numeric, squeeze_value, fan_state

DEFAULT_BRACKET = (0.01, 2.0)
COARSE_POINTS = 64
SQUEEZE_THRESHOLD = -1e-9
XTOL = 1e-10
FLAT_TOL = 1e-12


def squeezing_direction(K: int) -> float:
    return np.pi / (2 * K)


def conjugate_pair(K: int) -> Tuple[float, float]:
    """(φ_sq,0, φ_st,1): componentes desfasadas π/(2K) que actúan como conjugadas."""
    if K < 1:
        raise InvalidParameter("K debe ser >= 1")
    return np.pi / (2 * K), np.pi / K


def _along_sq(K: int, N: int, source: Source, f: str, cutoff):
    phi = squeezing_direction(K)
    return lambda xi: float(squeeze_value(K, N, xi, phi, source, f, cutoff))


def _coarse(fn, bracket: Tuple[float, float]) -> Tuple[np.ndarray, np.ndarray]:
    lo, hi = bracket
    if not 0.0 <= lo < hi:
        raise InvalidParameter(f"bracket inválido {bracket}")
    xs = np.linspace(lo, hi, COARSE_POINTS)
    return xs, np.array([fn(x) for x in xs])


def find_critical_xi(K: int, N: int, bracket: Tuple[float, float] = DEFAULT_BRACKET,
                     source: Source = "auto", f: str = "unit", cutoff="auto",
                     xtol: float = XTOL) -> float:
    fn = _along_sq(K, N, source, f, cutoff)
    with span(f"[SEARCH] xi_c K={K} N={N} source={source}"):
        xs, ss = _coarse(fn, bracket)
        neg = ss < SQUEEZE_THRESHOLD
        # último paso negativo -> no negativo del barrido
        crossings = np.nonzero(neg[:-1] & ~neg[1:])[0]
        if crossings.size == 0:
            raise NoSignChange(
                f"S(φ=π/{2 * K}, ξ) no cambia de signo en {bracket} para (K={K}, N={N})"
            )
        i = int(crossings[-1])
        root = bisect(fn, xs[i], xs[i + 1], xtol=xtol)
    logger.info(f"[SEARCH] xi_c={root:.9f}")
    return float(root)


def g_threshold_root(bracket: Tuple[float, float] = DEFAULT_BRACKET, xtol: float = XTOL) -> float:
    """Raíz de g(ξ) + 1: para (K=2, N=4) coincide con ξ_c."""
    fn = lambda xi: g_function(xi) + 1.0  # noqa: E731
    xs, vals = _coarse(fn, bracket)
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if idx.size == 0:
        raise NoSignChange(f"g(ξ) + 1 no cambia de signo en {bracket}")
    i = int(idx[0])
    return float(bisect(fn, xs[i], xs[i + 1], xtol=xtol))


def _interior_minima(vals: np.ndarray) -> np.ndarray:
    scale = FLAT_TOL * max(1.0, float(np.max(np.abs(vals))))
    left = vals[1:-1] < vals[:-2] - scale
    right = vals[1:-1] <= vals[2:] + scale
    return np.nonzero(left & right)[0] + 1


def find_optimal_xi(K: int, N: int, bracket: Optional[Tuple[float, float]] = None,
                    source: Source = "auto", f: str = "unit", cutoff="auto",
                    xtol: float = XTOL) -> Tuple[float, float]:
    """
    (ξ_M, S(φ_sq,1, ξ_M)). Sin bracket se usa (0.01, ξ_c).
    """
    if bracket is None:
        bracket = (DEFAULT_BRACKET[0], find_critical_xi(K, N, source=source, f=f, cutoff=cutoff))
    fn = _along_sq(K, N, source, f, cutoff)
    with span(f"[SEARCH] xi_M K={K} N={N} source={source}"):
        xs, ss = _coarse(fn, bracket)
        minima = _interior_minima(ss)
        if minima.size != 1:
            raise NotUnimodal(
                f"se esperaba un único mínimo interior en {bracket}, hay {minima.size}"
            )
        i = int(minima[0])
        res = minimize_scalar(fn, bracket=(xs[i - 1], xs[i], xs[i + 1]), method="golden",
                              tol=xtol / max(xs[i], 1e-3))
    logger.info(f"[SEARCH] xi_M={res.x:.9f} S={res.fun:.6e}")
    return float(res.x), float(res.fun)


def _refine(phis: np.ndarray, vals: np.ndarray, idx: np.ndarray) -> List[float]:
    n = vals.size
    h = 2.0 * np.pi / n
    out = []
    for i in idx:
        a, b, c = vals[(i - 1) % n], vals[i], vals[(i + 1) % n]
        den = a - 2.0 * b + c
        shift = 0.5 * (a - c) / den if den != 0.0 else 0.0
        out.append(float((phis[i] + shift * h) % (2.0 * np.pi)))
    return sorted(out)


def _circular_extrema(vals: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    prev, nxt = np.roll(vals, 1), np.roll(vals, -1)
    scale = FLAT_TOL * max(1.0, float(np.max(np.abs(vals))))
    minima = np.nonzero((vals < prev - scale) & (vals <= nxt + scale))[0]
    maxima = np.nonzero((vals > prev + scale) & (vals >= nxt - scale))[0]
    return minima, maxima


def find_directions(K: int, N: int, xi: float, grid: int = 512, source: Source = "auto",
                    f: str = "unit", state: Optional[FockVector] = None) -> Tuple[List[float], List[float]]:
    """(mínimos, máximos) de S sobre [0, 2π), refinados con una parábola."""
    if grid < 32 * K:
        raise InvalidParameter(f"find_directions requiere grid >= 32K = {32 * K}")
    phis = phi_grid(grid)
    vals = np.asarray(
        squeeze_numeric(state, phis, N) if state is not None
        else squeeze_value(K, N, xi, phis, source, f),
        dtype=float,
    )
    if np.ptp(vals) <= FLAT_TOL * max(1.0, float(np.max(np.abs(vals)))):
        return [], []
    minima, maxima = _circular_extrema(vals)
    return _refine(phis, vals, minima), _refine(phis, -vals, maxima)


def _order_shows_squeezing(K: int, N: int, xi_grid: Sequence[float], phis: np.ndarray,
                           f: str) -> bool:
    for xi in xi_grid:
        s = squeeze_numeric(fan_state(float(xi), K, f, "auto"), phis, N)
        if float(np.min(s)) < SQUEEZE_THRESHOLD:
            return True
    return False


def squeezing_orders(K: int, xi_grid: Sequence[float], N_max: int, f: str = "unit") -> List[int]:
    """Todos los N pares <= N_max con squeezing en alguna (ξ, φ) del barrido."""
    if K < 2 or K % 2:
        raise InvalidParameter(f"se requiere K par >= 2 (K={K})")
    if N_max < 2 * K:
        raise InvalidParameter(f"N_max={N_max} < 2K")
    phis = phi_grid(16 * K)
    with span(f"[SEARCH] órdenes K={K} N_max={N_max}"):
        return [N for N in range(2, N_max + 1, 2) if _order_shows_squeezing(K, N, xi_grid, phis, f)]


def min_squeezing_order(K: int, xi_grid: Sequence[float], N_max: int, f: str = "unit") -> int:
    if K < 2 or K % 2:
        raise InvalidParameter(f"se requiere K par >= 2 (K={K})")
    if N_max < 2 * K:
        raise InvalidParameter(f"N_max={N_max} < 2K")
    phis = phi_grid(16 * K)
    with span(f"[SEARCH] N_min K={K}"):
        for N in range(2, N_max + 1, 2):
            if _order_shows_squeezing(K, N, xi_grid, phis, f):
                return N
    raise NotFound(f"sin squeezing hasta N={N_max} para K={K}")


def flower_profile(K: int, N: int, xi: float, grid: int = 256, source: Source = "auto",
                   f: str = "unit", state: Optional[FockVector] = None) -> List[Tuple[float, float]]:
    if grid < 64:
        raise InvalidParameter("flower_profile requiere grid >= 64")
    phis = phi_grid(grid)
    vals = (squeeze_numeric(state, phis, N) if state is not None
            else squeeze_value(K, N, xi, phis, source, f))
    return [(float(p), float(s)) for p, s in zip(phis, np.atleast_1d(vals))]


def wing_counts(profile: Sequence[Tuple[float, float]]) -> Tuple[int, int]:
    """(lóbulos negativos, lóbulos positivos) contando cambios de signo circulares."""
    s = np.array([v for _, v in profile])
    sign = np.where(s < 0.0, -1, 1)
    starts = np.nonzero(sign != np.roll(sign, 1))[0]
    neg = sum(1 for i in starts if sign[i] < 0)
    pos = sum(1 for i in starts if sign[i] > 0)
    return neg, pos


def critical_report(K: int, N: int, source: Source = "auto", f: str = "unit", cutoff="auto",
                    bracket: Tuple[float, float] = DEFAULT_BRACKET, grid: int = 512) -> CriticalReport:
    if N < 2 * K:
        raise NotFound(f"no squeezing for N < 2K (K={K}, N={N})")
    src = resolve_source(K, N, source, f)
    with span(f"[SEARCH] reporte K={K} N={N} source={src}"):
        try:
            xi_c = find_critical_xi(K, N, bracket, src, f, cutoff)
        except NoSignChange as e:
            raise NotFound(f"sin squeezing en {bracket} para (K={K}, N={N}): {e.detail}")
        xi_m, s_min = find_optimal_xi(K, N, (bracket[0], xi_c), src, f, cutoff)
        sq, st = find_directions(K, N, xi_m, max(grid, 32 * K), src, f)
    used_cutoff = fan_state(xi_c, K, f, cutoff).n_max
    return CriticalReport(
        K=K, N=N, xi_c=xi_c, xi_m=xi_m, s_min=s_min,
        directions_sq=sq, directions_st=st,
        conjugate_pair=conjugate_pair(K), source=src,
        bracket=bracket, xtol=XTOL, cutoff=used_cutoff,
    )

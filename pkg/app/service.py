"""
===============================================================================
MÓDULO: service.py (6)
===============================================================================
Definición:
-----------
Comandos puros compartidos por la CLI y la API: cada uno recibe un RunConfig
ya validado y devuelve una Table o un reporte pydantic. No escriben nada.

Rol en el Sistema:
------------------
- cli.py los invoca y serializa con export.render.
- main.py los expone como endpoints.
===============================================================================
"""
from __future__ import annotations

from typing import Callable, Dict, Union

import numpy as np
from pydantic import BaseModel

from app.analysis import critical_report, flower_profile, squeezing_orders
from app.closed_forms import SUPPORTED_PAIRS
from app.errors import NotFound
from app.export import Table
from app.fock import FockVector, number_distribution
from app.logging_utils import logger, span
from app.models import AreaReport, RunConfig
from app.squeezing import phi_grid, r_const, squeeze_scan, squeeze_surface
from app.states import build_fan, build_kncs, build_sekncs, geometry_points
from app.uncertainty import area_analytic, area_numeric, uncertainty_contour

Result = Union[Table, BaseModel]


def build_state(cfg: RunConfig, xi: float | None = None) -> FockVector:
    spec = cfg.spec()
    if xi is not None:
        spec = spec.model_copy(update={"xi": complex(xi) * np.exp(1j * cfg.xi_arg)})
    if cfg.kind == "fan":
        return build_fan(spec.xi, spec.K, spec.f, spec.cutoff)
    if cfg.kind == "sekncs":
        return build_sekncs(spec.xi, spec.K, spec.f, spec.cutoff)
    return build_kncs(spec)


def cmd_state(cfg: RunConfig) -> Table:
    v = build_state(cfg)
    p = number_distribution(v)
    rows = [(n, float(a.real), float(a.imag), float(pn)) for n, (a, pn) in enumerate(zip(v.amps, p))]
    # se recorta la cola de ceros por encima del último nivel poblado
    last = int(np.max(np.nonzero(p > 0.0)[0])) if np.any(p > 0.0) else 0
    return Table(["n", "re", "im", "p"], rows[: last + 1])


def cmd_squeeze(cfg: RunConfig) -> Table:
    K = cfg.spec().K
    with_analytic = cfg.kind == "fan" and cfg.f == "unit" and (K, cfg.N) in SUPPORTED_PAIRS
    cols = ["xi", "phi", "s_numeric"] + (["s_analytic"] if with_analytic else [])
    rows = []
    for xi in cfg.xi:
        state = None if cfg.kind == "fan" else build_state(cfg, xi)
        samples = squeeze_scan(K, cfg.N, xi, cfg.grid, cfg.f, cfg.cutoff, state=state)
        numeric = [s for s in samples if s.source == "numeric"]
        analytic = [s for s in samples if s.source == "analytic"]
        for i, s in enumerate(numeric):
            row = [xi, s.phi, s.S] + ([analytic[i].S] if with_analytic else [])
            rows.append(tuple(row))
    return Table(cols, rows, frozenset({"phi"}))


def cmd_report(cfg: RunConfig):
    return critical_report(cfg.K, cfg.N, cfg.source, cfg.f, cfg.cutoff, grid=max(cfg.grid, 32 * cfg.K))


def cmd_flower(cfg: RunConfig) -> Table:
    prof = flower_profile(cfg.K, cfg.N, cfg.xi_value, cfg.grid, cfg.source, cfg.f)
    return Table(["phi", "s"], prof, frozenset({"phi"}))


def area_report(K: int, N: int, xi: float, grid: int, f: str = "unit", cutoff="auto") -> AreaReport:
    with span(f"[AREA] K={K} N={N} xi={xi:.6g}"):
        v = build_fan(xi, K, f, cutoff)
        R = r_const(N)
        return AreaReport(
            K=K, N=N, xi_abs=abs(xi),
            area_analytic=area_analytic(v, K, N),
            area_numeric=area_numeric(v, N, grid, K),
            circle_area=float(np.pi * R * R),
        )


def cmd_area(cfg: RunConfig) -> AreaReport:
    return area_report(cfg.K, cfg.N, cfg.xi_value, cfg.grid, cfg.f, cfg.cutoff)


def cmd_geometry(cfg: RunConfig) -> Table:
    pts = geometry_points(cfg.xi_value * np.exp(1j * cfg.xi_arg), cfg.K, cfg.mode)
    rows = [(i, float(z.real), float(z.imag), float(np.angle(z) % (2 * np.pi))) for i, z in enumerate(pts)]
    return Table(["index", "re", "im", "arg"], rows, frozenset({"arg"}))


def cmd_surface(cfg: RunConfig) -> Table:
    S = squeeze_surface(cfg.K, cfg.N, cfg.xi, cfg.grid, cfg.source, cfg.f)
    phis = phi_grid(cfg.grid)
    rows = [(float(x), float(p), float(S[i, k])) for i, x in enumerate(cfg.xi) for k, p in enumerate(phis)]
    return Table(["xi", "phi", "s"], rows, frozenset({"phi"}))


def cmd_contour(cfg: RunConfig) -> Table:
    c = uncertainty_contour(build_state(cfg), cfg.N, cfg.grid)
    rows = [(float(p), float(m), c.radius) for p, m in zip(c.phi, c.moment)]
    return Table(["phi", "moment", "circle"], rows, frozenset({"phi"}))


def cmd_orders(cfg: RunConfig) -> Table:
    """Órdenes con squeezing sobre |ξ| ∈ (0, xi] en `grid` pasos; N hace de N_max."""
    xi_grid = np.linspace(0.0, cfg.xi_value, cfg.grid + 1)[1:]
    found = squeezing_orders(cfg.K, xi_grid, cfg.N, cfg.f)
    if not found:
        raise NotFound(f"sin squeezing hasta N={cfg.N} para K={cfg.K}")
    logger.info(f"[SEARCH] órdenes con squeezing: {found}")
    return Table(["N", "squeezing"], [(N, N in found) for N in range(2, cfg.N + 1, 2)])


COMMANDS: Dict[str, Callable[[RunConfig], Result]] = {
    "state": cmd_state,
    "squeeze": cmd_squeeze,
    "report": cmd_report,
    "flower": cmd_flower,
    "area": cmd_area,
    "geometry": cmd_geometry,
    "surface": cmd_surface,
    "contour": cmd_contour,
    "orders": cmd_orders,
}


def run(cfg: RunConfig) -> Result:
    with span(f"[CLI] {cfg.command}"):
        return COMMANDS[cfg.command](cfg)

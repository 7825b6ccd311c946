"""
===============================================================================
MÓDULO: cli.py (7)
===============================================================================
Definición:
-----------
Interfaz de línea de comandos (`python -m app.cli`). Cada subcomando arma un RunConfig,
lo valida, ejecuta el comando puro de service.py y escribe CSV o JSON en la
salida estándar (o en --out). Los diagnósticos van a la salida de error.

Códigos de salida:
------------------
- 0  éxito
- 2  uso o validación (pydantic.ValidationError, InvalidParameter)
- 3  falla numérica (CutoffTooSmall, NoSignChange, ...)
- 4  resultado vacío (sin squeezing para el (K, N) pedido)

Ejemplos:
---------
    python -m app.cli state --kind fan --k 2 --xi 0.5
    python -m app.cli squeeze --k 4 --n 8 --xi 0.754939
    python -m app.cli report --k 2 --n 4
    python -m app.cli area --k 2 --n 6 --xi 0.659657
    python -m app.cli geometry --mode xiq --k 8 --xi 1
===============================================================================
"""
from __future__ import annotations

import sys
from pathlib import Path
from typing import Any, Callable

import click
from dotenv import find_dotenv, load_dotenv
from pydantic import ValidationError

from app.deps import get_settings
from app.errors import FanSqueezeError
from app.export import render, write_output
from app.logging_utils import logger, set_level
from app.models import RunConfig
from app.service import run


def _cutoff(value: str):
    if value == "auto":
        return value
    try:
        return int(value)
    except ValueError:
        raise click.BadParameter("debe ser un entero o 'auto'")


def _execute(command: str, **opts: Any) -> None:
    try:
        cfg = RunConfig(
            command=command,
            K=opts["k"],
            N=opts["n"],
            j=opts["j"],
            xi=list(opts["xi"]) or [0.5],
            xi_arg=opts["xi_arg"],
            kind=opts["kind"],
            f=opts["f"],
            cutoff=_cutoff(opts["cutoff"]),
            grid=opts["grid"],
            mode=opts["mode"],
            source=opts["source"],
            degrees=opts["degrees"],
            output_format=opts["output_format"],
            output_path=opts["out"],
        )
        result = run(cfg)
        write_output(render(result, command, cfg.output_format, cfg.degrees), cfg.output_path)
    except ValidationError as e:
        msgs = "; ".join(err["msg"] for err in e.errors())
        click.echo(f"Error de validación: {msgs}", err=True)
        sys.exit(2)
    except FanSqueezeError as e:
        click.echo(f"Error: {e.detail}", err=True)
        sys.exit(e.exit_code)


def common_options(fn: Callable) -> Callable:
    options = [
        click.option("--k", "k", type=int, default=2, show_default=True, help="Potencia K del KNCS"),
        click.option("--n", "n", type=int, default=4, show_default=True, help="Orden N (par)"),
        click.option("--j", "j", type=int, default=0, show_default=True, help="Residuo j (kind=kncs)"),
        click.option("--xi", "xi", type=float, multiple=True, help="|ξ| (repetible en squeeze/surface)"),
        click.option("--xi-arg", "xi_arg", type=float, default=0.0, help="arg(ξ) en radianes"),
        click.option("--kind", type=click.Choice(["kncs", "sekncs", "fan", "coherent", "ncs"]),
                     default="fan", show_default=True),
        click.option("--f", "f", default="unit", show_default=True, help="No linealidad: unit | inv-sqrt"),
        click.option("--cutoff", default="auto", show_default=True, help="Corte de Fock (entero o auto)"),
        click.option("--grid", type=int, default=256, show_default=True, help="Puntos de la grilla en φ"),
        click.option("--mode", type=click.Choice(["chi", "xiq"]), default="chi", show_default=True),
        click.option("--source", type=click.Choice(["auto", "analytic", "numeric", "printed"]),
                     default="auto", show_default=True),
        click.option("--degrees", is_flag=True, help="Ángulos de salida en grados"),
        click.option("--format", "output_format", type=click.Choice(["csv", "json"]),
                     default="csv", show_default=True),
        click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
                     help="Archivo de salida (por defecto stdout)"),
    ]
    for opt in reversed(options):
        fn = opt(fn)
    return fn


@click.group()
@click.version_option(version="1.0.0", prog_name="fansqueeze")
@click.option("--log-level", default=None, help="Nivel del logger (sobrescribe FANSQ_LOG_LEVEL)")
def cli(log_level):
    """Estados abanico y squeezing de amplitud de orden superior."""
    load_dotenv(find_dotenv(usecwd=True))
    # la configuración se relee después de cargar el .env del directorio actual
    get_settings.cache_clear()
    set_level(log_level or get_settings().log_level)
    logger.debug("[CLI] inicio")


def _register(name: str, help_text: str) -> None:
    @cli.command(name=name, help=help_text)
    @common_options
    def _cmd(**opts):
        _execute(name, **opts)


_register("state", "Amplitudes n, Re, Im y P(n) del estado pedido.")
_register("squeeze", "S_{φ,N} sobre una grilla en φ (numérico y, si existe, analítico).")
_register("report", "Reporte JSON con ξ_c, ξ_M, S_min y direcciones.")
_register("flower", "Perfil polar (φ, S) de la flor de 4K alas.")
_register("area", "Reporte JSON del área de incerteza (analítica, numérica, círculo).")
_register("geometry", "Puntos χ_l (mode chi) o ξ_q (mode xiq).")
_register("surface", "S sobre |ξ| × φ; repetir --xi para cada fila.")
_register("contour", "Dominio de incerteza ⟨(ΔX_φ)^N⟩ frente al círculo R_N.")
_register("orders", "Órdenes N <= --n con squeezing sobre |ξ| ∈ (0, --xi].")


def main() -> None:
    cli()


if __name__ == "__main__":
    main()

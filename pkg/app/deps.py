"""
===============================================================================
MÓDULO: deps.py
===============================================================================
Definición:
-----------
Dependencias compartidas: configuración numérica leída del entorno (.env) y el
registro de no linealidades f(n) con nombre. Ambas se construyen una sola vez
(lru_cache) y se reutilizan en todo el paquete.

Variables de entorno:
---------------------
- FANSQ_TAIL_TOL     probabilidad de cola admitida al truncar (1e-12)
- FANSQ_MAX_CUTOFF   techo del corte adaptativo (600)
- FANSQ_HEADROOM     ceros añadidos sobre el corte adaptativo (16)
- FANSQ_IMAG_TOL     residuo imaginario tolerado en resultados reales (1e-8)
- FANSQ_LOG_LEVEL    nivel del logger (WARNING)

No linealidades con nombre: "unit" (f ≡ 1) e "inv-sqrt" (f(n) = 1/√(n+1)).
===============================================================================
"""
import os
from functools import lru_cache

from pydantic import BaseModel, Field

from app.errors import InvalidParameter
from app.logging_utils import logger
from app.nonlinear import NAMED_NONLINEARITIES, NonlinearFn


class Settings(BaseModel):
    tail_tol: float = Field(default=1e-12, gt=0, lt=1e-3)
    max_cutoff: int = Field(default=600, ge=8)
    headroom: int = Field(default=16, ge=0)
    imag_tol: float = Field(default=1e-8, gt=0)
    log_level: str = "WARNING"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    s = Settings(
        tail_tol=float(os.getenv("FANSQ_TAIL_TOL", "1e-12")),
        max_cutoff=int(os.getenv("FANSQ_MAX_CUTOFF", "600")),
        headroom=int(os.getenv("FANSQ_HEADROOM", "16")),
        imag_tol=float(os.getenv("FANSQ_IMAG_TOL", "1e-8")),
        log_level=os.getenv("FANSQ_LOG_LEVEL", "WARNING"),
    )
    logger.info(f"[CONFIG] {s.model_dump()}")
    return s


@lru_cache(maxsize=None)
def get_nonlinearity(name: str) -> NonlinearFn:
    try:
        return NAMED_NONLINEARITIES[name]
    except KeyError:
        known = ", ".join(sorted(NAMED_NONLINEARITIES))
        raise InvalidParameter(f"no linealidad desconocida '{name}' (disponibles: {known})")

"""
===============================================================================
MÓDULO: main.py (FastAPI Entrypoint) (8)
===============================================================================
Definición:
-----------
Punto de entrada HTTP. Expone los mismos comandos que la CLI y devuelve los
mismos modelos que ella emite en JSON.

Conceptos Clave:
----------------
- /state:    amplitudes del estado pedido (kncs | sekncs | fan | coherent | ncs)
- /squeeze:  S_{φ,N} sobre una grilla en φ
- /report:   CriticalReport (ξ_c, ξ_M, direcciones); 404 si no hay squeezing
- /area:     AreaReport (analítica, numérica y círculo coherente)
- /geometry: puntos χ_l o ξ_q

Rol en el Sistema:
------------------
- Servicio sin estado: cada request es un cálculo puro.
- Traduce FanSqueezeError a HTTPException con su status (422, 500, 404).
===============================================================================
"""
from typing import Callable

from dotenv import load_dotenv
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import ValidationError

from app.deps import get_settings
from app.errors import FanSqueezeError
from app.export import Table
from app.logging_utils import logger, set_level, span
from app.models import (
    AreaReport, AreaRequest, CriticalReport, GeometryRequest, ReportRequest,
    SqueezeRequest, StateRequest, TableResponse,
)
from app.service import run

load_dotenv()
set_level(get_settings().log_level)

app = FastAPI(title="Fan-State Squeezing API")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"], allow_credentials=True,
    allow_methods=["*"], allow_headers=["*"]
)


def _serve(name: str, build: Callable):
    try:
        with span(f"[API] {name}"):
            result = run(build())
    except ValidationError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except FanSqueezeError as e:
        if e.status_code >= 500:
            logger.exception(f"❌ Error en /{name}")
        raise HTTPException(status_code=e.status_code, detail=e.detail)
    if isinstance(result, Table):
        return TableResponse(columns=result.columns, rows=[list(r) for r in result.rows])
    return result


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/state", response_model=TableResponse)
def state(body: StateRequest):
    return _serve("state", body.to_config)


@app.post("/squeeze", response_model=TableResponse)
def squeeze(body: SqueezeRequest):
    return _serve("squeeze", body.to_config)


@app.post("/report", response_model=CriticalReport)
def report(body: ReportRequest):
    return _serve("report", body.to_config)


@app.post("/area", response_model=AreaReport)
def area(body: AreaRequest):
    return _serve("area", body.to_config)


@app.post("/geometry", response_model=TableResponse)
def geometry(body: GeometryRequest):
    return _serve("geometry", body.to_config)

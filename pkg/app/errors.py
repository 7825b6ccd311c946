"""
Errores del dominio.

Cada excepción lleva su código de salida (CLI) y su status HTTP, de modo que
las dos fronteras (cli.py y main.py) traducen sin tablas adicionales.
"""


class FanSqueezeError(Exception):
    exit_code = 3
    status_code = 500

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


# --- validación (exit 2) ---------------------------------------------------

class InvalidParameter(FanSqueezeError):
    exit_code = 2
    status_code = 422


class UnsupportedPair(InvalidParameter):
    """(K, N) sin forma cerrada disponible."""


# --- fallas numéricas (exit 3) ---------------------------------------------

class ZeroVector(FanSqueezeError):
    pass


class CutoffTooSmall(FanSqueezeError):
    pass


class NonHermitianResult(FanSqueezeError):
    pass


class ImaginaryResidue(FanSqueezeError):
    pass


class ZeroFactorValue(FanSqueezeError):
    pass


class NoSignChange(FanSqueezeError):
    pass


class NotUnimodal(FanSqueezeError):
    pass


# --- resultado vacío (exit 4) ----------------------------------------------

class NotFound(FanSqueezeError):
    exit_code = 4
    status_code = 404

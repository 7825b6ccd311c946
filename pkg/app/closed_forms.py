"""
===============================================================================
MÓDULO: closed_forms.py
===============================================================================
Definición:
-----------
Formas cerradas de S_{φ,N} para estados abanico con f ≡ 1 y ξ real, en los
pares (K, N) = (2,2), (2,4), (2,6), (4,2), (4,4), (4,6), (4,8).

Conceptos Clave:
----------------
- Con x = ξ² todos los momentos del abanico son cocientes G_r(x)/D_K(x) de
  combinaciones de cosh, sinh, cos y sin (en x y en y = x/√2 para K = 4):

      K=2:  D_2 = cosh x + cos x
            sinh x − sin x,  cosh x − cos x,  sinh x + sin x
      K=4:  D_4 = cosh x + cos x + 2 cos y cosh y
            G7 = sinh x − sin x + √2 (sinh y cos y − sin y cosh y)
            G6 = cosh x − cos x − 2 sinh y sin y
            G5 = sinh x + sin x − √2 (sinh y cos y + sin y cosh y)
            G4 = cosh x + cos x − 2 cosh y cos y

- Numerador y denominador se evalúan escalados por e^{−x}; el cociente no
  cambia y no hay desborde para ningún ξ.
- `printed=True` reproduce tres expresiones tal como circulan publicadas:
  (2,6) sin el factor ξ² en el coeficiente de cos 4φ, (4,4) sin el factor 2
  del término G7 y (4,8) con 622 donde la expansión normal da 630. Las
  versiones por defecto son las derivadas y coinciden con el motor numérico.
===============================================================================
"""
from __future__ import annotations

from typing import Callable, Dict, NamedTuple, Tuple, Union

import numpy as np

from app.errors import InvalidParameter, UnsupportedPair

SUPPORTED_PAIRS = frozenset({(2, 2), (2, 4), (2, 6), (4, 2), (4, 4), (4, 6), (4, 8)})
PRINTED_DIFFERS = frozenset({(2, 6), (4, 4), (4, 8)})

SQRT2 = np.sqrt(2.0)
G_SERIES_BELOW = 1e-3  # x = ξ² por debajo del cual g usa su serie

PhaseLike = Union[float, np.ndarray]


class _Scaled(NamedTuple):
    """cosh, sinh, cos, sin de x (y de y = x/√2) multiplicados por e^{−x}."""
    ch: float
    sh: float
    c: float
    s: float
    chy: float
    shy: float
    cy: float
    sy: float


def _scaled(x: float) -> _Scaled:
    e = np.exp(-x)
    ch = 0.5 * (1.0 + np.exp(-2.0 * x))
    sh = -0.5 * np.expm1(-2.0 * x)
    y = x / SQRT2
    chy = 0.5 * (np.exp(y - x) + np.exp(-y - x))
    shy = 0.5 * (np.exp(y - x) - np.exp(-y - x))
    return _Scaled(ch, sh, np.cos(x) * e, np.sin(x) * e, chy, shy, np.cos(y), np.sin(y))


def _k2_terms(x: float) -> Tuple[float, float, float, float]:
    """(D_2, sinh−sin, cosh−cos, sinh+sin) escalados."""
    t = _scaled(x)
    return t.ch + t.c, t.sh - t.s, t.ch - t.c, t.sh + t.s


def _k4_terms(x: float) -> Tuple[float, float, float, float, float]:
    """(D_4, G7, G6, G5, G4) escalados."""
    t = _scaled(x)
    d4 = t.ch + t.c + 2.0 * t.cy * t.chy
    g7 = t.sh - t.s + SQRT2 * (t.shy * t.cy - t.sy * t.chy)
    g6 = t.ch - t.c - 2.0 * t.shy * t.sy
    g5 = t.sh + t.s - SQRT2 * (t.shy * t.cy + t.sy * t.chy)
    g4 = t.ch + t.c - 2.0 * t.chy * t.cy
    return d4, g7, g6, g5, g4


def g_function(xi: float) -> float:
    """
    Umbral de squeezing de cuarto orden para K = 2: hay squeezing en φ si
    cos 4φ < g(|ξ|). g(0) = 0 (límite) y g → −3 cuando |ξ| → ∞.
    """
    if xi < 0:
        raise InvalidParameter("g_function requiere ξ >= 0")
    x = xi * xi
    if x < G_SERIES_BELOW:
        return -2.5 * x * x
    d2, sm, cm, _ = _k2_terms(x)
    return float(-3.0 * (x * cm + 2.0 * sm) / (x * d2))


# --- K = 2 -----------------------------------------------------------------

def _s_2_2(x, c4, printed):
    d2, sm, _, _ = _k2_terms(x)
    return x * sm / d2 + 0.0 * c4


def _s_2_4(x, c4, printed):
    d2, sm, cm, _ = _k2_terms(x)
    return 0.5 * x * (x * c4 + 3.0 * (x * cm + 2.0 * sm) / d2)


def _s_2_6(x, c4, printed):
    d2, sm, cm, sp = _k2_terms(x)
    coef = 7.5 + 3.0 * x * sm / d2
    if not printed:
        coef = x * coef
    rest = (10.0 * x * x * sp + 45.0 * x * cm + 45.0 * sm) / (2.0 * d2)
    return 0.5 * x * (coef * c4 + rest)


# --- K = 4 -----------------------------------------------------------------

def _s_4_2(x, c8, printed):
    d4, g7, _, _, _ = _k4_terms(x)
    return x * g7 / d4 + 0.0 * c8


def _s_4_4(x, c8, printed):
    d4, g7, g6, _, _ = _k4_terms(x)
    w7 = 1.0 if printed else 2.0
    return 1.5 * x * (x * g6 + w7 * g7) / d4 + 0.0 * c8


def _s_4_6(x, c8, printed):
    d4, g7, g6, g5, _ = _k4_terms(x)
    return 1.25 * x * (2.0 * x * x * g5 + 9.0 * x * g6 + 9.0 * g7) / d4 + 0.0 * c8


def _s_4_8(x, c8, printed):
    d4, g7, g6, g5, g4 = _k4_terms(x)
    w6 = 622.0 if printed else 630.0
    inner = 35.0 * x ** 3 * g4 + 280.0 * x * x * g5 + w6 * x * g6 + 420.0 * g7
    return x / 8.0 * (x ** 3 * c8 + inner / d4)


_FORMS: Dict[Tuple[int, int], Callable] = {
    (2, 2): _s_2_2,
    (2, 4): _s_2_4,
    (2, 6): _s_2_6,
    (4, 2): _s_4_2,
    (4, 4): _s_4_4,
    (4, 6): _s_4_6,
    (4, 8): _s_4_8,
}


def squeeze_analytic(K: int, N: int, xi: float, phi: PhaseLike, printed: bool = False):
    """S_{φ,N} en forma cerrada; `phi` escalar o arreglo."""
    form = _FORMS.get((K, N))
    if form is None:
        raise UnsupportedPair(f"sin forma cerrada para (K={K}, N={N})")
    if xi < 0 or not np.isfinite(xi):
        raise InvalidParameter("la forma cerrada requiere ξ real, finito y >= 0")
    harmonic = np.cos(2 * K * np.asarray(phi, dtype=float))
    out = form(float(xi) ** 2, harmonic, printed)
    return float(out) if np.ndim(out) == 0 else np.asarray(out, dtype=float)

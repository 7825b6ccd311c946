"""
===============================================================================
MÓDULO: fock.py (1)
===============================================================================
Definición:
-----------
Álgebra lineal en el espacio de Fock truncado |0⟩..|n_max⟩ de un solo modo
bosónico. Aquí viven el vector de estado (FockVector) y todo lo que se calcula
sobre él: normalización, producto interno, momentos normalmente ordenados
⟨a^{+p} a^{q}⟩, aplicación del operador de cuadratura X_φ y momentos centrales
⟨(X_φ − ⟨X_φ⟩)^N⟩.

Conceptos Clave:
----------------
- Corte (cutoff): índice máximo n_max conservado. Los constructores dejan ceros
  por encima de la masa relevante ("headroom") para que aplicar operadores no
  toque la zona truncada.
- Dos motores independientes: los momentos se suman directamente sobre la base
  de Fock (factoriales en espacio logarítmico) y los momentos de cuadratura se
  obtienen aplicando X_φ N veces. Cada uno sirve de oráculo del otro.
- Residuo imaginario: un valor esperado de un operador hermítico debe ser real;
  si la parte imaginaria supera la tolerancia se lanza NonHermitianResult.

Rol en el Sistema:
------------------
- Portador universal de estados para states, squeezing, uncertainty y analysis.
- Todas las funciones son puras; FockVector es inmutable.
===============================================================================
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.special import gammaln

from app.deps import get_settings
from app.errors import CutoffTooSmall, InvalidParameter, NonHermitianResult, ZeroVector

NORM_TOL = 1e-12
MOMENT_TAIL_REL = 1e-10

PhaseLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class FockVector:
    amps: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        arr = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if arr.size == 0:
            raise InvalidParameter("un FockVector necesita al menos la componente |0⟩")
        if not np.all(np.isfinite(arr)):
            raise InvalidParameter("amplitudes no finitas")
        arr.setflags(write=False)
        object.__setattr__(self, "amps", arr)
        if self.normalized and abs(np.vdot(arr, arr).real - 1.0) > NORM_TOL:
            raise InvalidParameter("vector marcado como normalizado con norma distinta de 1")

    @property
    def n_max(self) -> int:
        return self.amps.size - 1

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amps, self.amps).real))

    def padded(self, n_max: int) -> "FockVector":
        if n_max < self.n_max:
            raise InvalidParameter(f"no se puede recortar de n_max={self.n_max} a {n_max}")
        out = np.zeros(n_max + 1, dtype=np.complex128)
        out[: self.amps.size] = self.amps
        return FockVector(out, normalized=self.normalized)

    @classmethod
    def basis(cls, n: int, n_max: Optional[int] = None) -> "FockVector":
        """Estado número |n⟩; por defecto deja el headroom configurado encima."""
        if n < 0:
            raise InvalidParameter("n debe ser no negativo")
        if n_max is None:
            n_max = n + get_settings().headroom
        if n_max < n:
            raise InvalidParameter("n_max menor que n")
        amps = np.zeros(n_max + 1, dtype=np.complex128)
        amps[n] = 1.0
        return cls(amps, normalized=True)


def log_factorial(n) -> np.ndarray:
    return gammaln(np.asarray(n, dtype=float) + 1.0)


def normalize(v: FockVector) -> FockVector:
    norm2 = np.vdot(v.amps, v.amps).real
    if not np.isfinite(norm2) or norm2 <= np.finfo(float).tiny:
        raise ZeroVector("no se puede normalizar un vector de norma nula")
    out = v.amps / np.sqrt(norm2)
    # una pasada extra deja la norma en el último ulp
    out = out / np.sqrt(np.vdot(out, out).real)
    return FockVector(out, normalized=True)


def inner(u: FockVector, v: FockVector) -> complex:
    """⟨u|v⟩; el más corto se completa con ceros."""
    n = max(u.n_max, v.n_max)
    a = u.padded(n).amps if u.n_max < n else u.amps
    b = v.padded(n).amps if v.n_max < n else v.amps
    return complex(np.vdot(a, b))


def tail_mass(v: FockVector, width: int) -> float:
    """Probabilidad acumulada en los `width` niveles superiores."""
    if width <= 0:
        return 0.0
    top = v.amps[max(0, v.amps.size - width):]
    return float(np.sum(np.abs(top) ** 2))


def normally_ordered_moment(v: FockVector, p: int, q: int) -> complex:
    """
    ⟨a^{+p} a^{q}⟩ = Σ_k conj(c_{k+p}) c_{k+q} √((k+p)!/k!) √((k+q)!/k!).
    """
    if p < 0 or q < 0:
        raise InvalidParameter("p y q deben ser no negativos")
    top = max(p, q)
    if top > v.n_max:
        return 0.0j
    k = np.arange(v.n_max - top + 1)
    log_w = 0.5 * (log_factorial(k + p) + log_factorial(k + q)) - log_factorial(k)
    terms = np.conj(v.amps[k + p]) * v.amps[k + q] * np.exp(log_w)
    result = complex(np.sum(terms))

    width = p + q
    if width:
        touches_top = (k + top) > (v.n_max - width)
        tail = float(np.abs(np.sum(terms[touches_top])))
        if tail > MOMENT_TAIL_REL * abs(result):
            raise CutoffTooSmall(
                f"⟨a^+{p} a^{q}⟩: la cola truncada aporta {tail:.3e} "
                f"(resultado {abs(result):.3e}); aumente el cutoff"
            )
    return result


def mean_amplitude(v: FockVector) -> complex:
    return normally_ordered_moment(v, 0, 1)


def _quadrature_step(w: np.ndarray, e_minus: np.ndarray, e_plus: np.ndarray) -> np.ndarray:
    # w: (P, L) -> (P, L+1) con X_φ = (a e^{-iφ} + a† e^{iφ})/√2
    P, L = w.shape
    out = np.zeros((P, L + 1), dtype=np.complex128)
    s = np.sqrt(np.arange(1, L + 1, dtype=float))
    out[:, : L - 1] += e_minus * s[: L - 1] * w[:, 1:]
    out[:, 1:] += e_plus * s * w
    return out / np.sqrt(2.0)


def apply_quadrature(v: FockVector, phi: float) -> FockVector:
    """X_φ v; el resultado crece un nivel (n_max + 1)."""
    e_minus = np.exp(-1j * phi)
    w = _quadrature_step(v.amps[None, :], np.array([[e_minus]]), np.array([[np.conj(e_minus)]]))
    return FockVector(w[0])


def central_quadrature_moment(v: FockVector, phi: PhaseLike, N: int):
    """
    ⟨(ΔX_φ)^N⟩ aplicando N veces (X_φ − ⟨X_φ⟩) y cerrando con ⟨v|·⟩.

    `phi` puede ser escalar o arreglo; en el segundo caso se evalúan todas las
    direcciones de una vez y se devuelve un arreglo.
    """
    if N < 2 or N % 2:
        raise InvalidParameter(f"N debe ser par y >= 2 (N={N})")
    settings = get_settings()
    if tail_mass(v, N) > settings.tail_tol:
        raise CutoffTooSmall(
            f"los {N} niveles superiores tienen masa {tail_mass(v, N):.3e}; "
            f"se necesita headroom >= {N}"
        )

    phis = np.atleast_1d(np.asarray(phi, dtype=float))
    scalar = np.ndim(phi) == 0
    e_minus = np.exp(-1j * phis)[:, None]
    e_plus = np.conj(e_minus)
    alpha = mean_amplitude(v)
    mean = (np.sqrt(2.0) * np.real(alpha * np.exp(-1j * phis)))[:, None]

    w = np.repeat(v.amps[None, :], phis.size, axis=0)
    for _ in range(N):
        nxt = _quadrature_step(w, e_minus, e_plus)
        nxt[:, : w.shape[1]] -= mean * w
        w = nxt

    bra = np.zeros(w.shape[1], dtype=np.complex128)
    bra[: v.amps.size] = v.amps
    values = w @ np.conj(bra)

    imag = np.abs(values.imag)
    limit = settings.imag_tol * np.maximum(1.0, np.abs(values.real))
    if np.any(imag > limit):
        worst = float(np.max(imag))
        raise NonHermitianResult(f"⟨(ΔX_φ)^{N}⟩ con parte imaginaria {worst:.3e}")
    out = values.real
    return float(out[0]) if scalar else out


def number_distribution(v: FockVector) -> np.ndarray:
    return np.abs(v.amps) ** 2

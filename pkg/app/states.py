"""
===============================================================================
MÓDULO: states.py (2)
===============================================================================
Definición:
-----------
Constructores de estados coherentes no lineales en la base de Fock:

- NCS      autoestado de a f(n̂) con autovalor χ
- KNCS     autoestado de a^K f(n̂) con autovalor ξ^K, soporte n ≡ j (mod K)
- SEKNCS   KNCS con j = 0 y K par (simétrico ante T_m y par ante ξ → −ξ)
- fan      superposición de K SEKNCS en las fases ξ_q = ξ e^{iπq/K};
           soporte en múltiplos de 2K

Conceptos Clave:
----------------
- Amplitudes en espacio logarítmico: c_n ∝ ξ^n / (√(n!) f(n)!) con gammaln y
  productos de f acumulados como suma de logaritmos más un signo. Así no hay
  desbordes cerca de n ≈ 170 y se admite f negativa.
- f(n)! es el producto sobre la clase de residuo: f(mK+j)! = Π_{q=1..m} f(qK+j)
  (producto vacío = 1). Con esta convención a^K f(n̂) actúa como desplazamiento
  exacto m → m−1 y la relación de autovalores vale para toda f.
- Corte adaptativo: se elige el menor índice cuya cola de probabilidad quede
  por debajo de FANSQ_TAIL_TOL y se agregan FANSQ_HEADROOM ceros encima.
- Descomposición: el KNCS es la suma con pesos (1/K)(C_Kj/C_10)e^{−2πijl/K} de
  K estados de un cuanto en χ_l = ξ e^{2πil/K}. Cada componente comparte el
  f-factorial de paso K del KNCS; con f ≡ 1 (o K = 1) es exactamente el NCS.

Rol en el Sistema:
------------------
- Fabricar los estados que consumen squeezing, uncertainty, analysis y la CLI.
- Exponer las identidades (raíces de la unidad, J_K, rotación T_m) que usan
  las pruebas como oráculos.
===============================================================================
"""
from __future__ import annotations

from typing import List, Literal, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from app.deps import get_nonlinearity, get_settings
from app.errors import CutoffTooSmall, InvalidParameter, ZeroFactorValue
from app.fock import FockVector, inner, log_factorial, normalize
from app.logging_utils import logger
from app.models import KncsSpec
from app.nonlinear import NonlinearFn


class FFactorial(NamedTuple):
    log_abs: float
    sign: float

    @property
    def value(self) -> float:
        return self.sign * float(np.exp(self.log_abs))


def _f_factorial_table(f: NonlinearFn, m_max: int, K: int, j: int) -> Tuple[np.ndarray, np.ndarray]:
    """log|f(mK+j)!| y su signo para m = 0..m_max."""
    q = np.arange(1, m_max + 1)
    vals = f(q * K + j) if m_max > 0 else np.empty(0)
    if np.any(vals == 0.0):
        bad = int(q[np.argmax(vals == 0.0)] * K + j)
        raise ZeroFactorValue(f"f({bad}) = 0 anula el f-factorial ({f.label})")
    if not np.all(np.isfinite(vals)):
        raise InvalidParameter(f"f no es finita en la red n = qK+j ({f.label})")
    log_abs = np.concatenate(([0.0], np.cumsum(np.log(np.abs(vals)))))
    sign = np.concatenate(([1.0], np.cumprod(np.sign(vals))))
    return log_abs, sign


def f_factorial(f: NonlinearFn, n: int, K: int, j: int) -> FFactorial:
    if n < 0:
        raise InvalidParameter("n debe ser >= 0")
    log_abs, sign = _f_factorial_table(f, n, K, j)
    return FFactorial(float(log_abs[n]), float(sign[n]))


class _Terms(NamedTuple):
    n: np.ndarray        # índices de Fock
    log_abs: np.ndarray  # log|c_n| sin normalizar
    sign: np.ndarray     # signo del f-factorial


def _residue_terms(xi: complex, K: int, r: int, f: NonlinearFn, n_top: int,
                   weight: Optional[np.ndarray] = None) -> _Terms:
    m = np.arange((n_top - r) // K + 1) if n_top >= r else np.arange(0)
    n = m * K + r
    log_f, sign = _f_factorial_table(f, int(m[-1]) if m.size else 0, K, r)
    log_f, sign = log_f[: m.size], sign[: m.size]
    with np.errstate(divide="ignore", invalid="ignore"):
        log_xi = np.where(n == 0, 0.0, n * np.log(abs(xi)))
    log_abs = log_xi - 0.5 * log_factorial(n) - log_f
    if weight is not None:
        w = weight[: m.size]
        with np.errstate(divide="ignore"):
            log_abs = log_abs + np.log(np.abs(w))
        sign = sign * np.sign(w)
    return _Terms(n, log_abs, sign)


def _choose_cutoff(terms: _Terms, cutoff, tol: float, headroom: int, label: str) -> int:
    order = np.argsort(terms.n)
    n, logp = terms.n[order], 2.0 * terms.log_abs[order]
    total = logsumexp(logp)
    if not np.isfinite(total):
        raise CutoffTooSmall(f"{label}: todas las amplitudes son nulas")
    # rel_tail[i] = log(Σ_{k>i} p_k / Σ p)
    rev = np.logaddexp.accumulate(logp[::-1])[::-1]
    rel_tail = np.concatenate((rev[1:], [-np.inf])) - total
    log_tol = np.log(tol)
    if logp[-1] - total > log_tol + np.log(1e-3):
        raise CutoffTooSmall(
            f"{label}: la distribución no decae dentro de n <= {int(n[-1])}; "
            "estado no normalizable o FANSQ_MAX_CUTOFF insuficiente"
        )
    if cutoff == "auto":
        ok = np.nonzero(rel_tail < log_tol)[0]
        return int(n[ok[0]]) + headroom
    beyond = n > cutoff
    if np.any(beyond):
        tail = logsumexp(logp[beyond]) - total
        if tail > log_tol:
            raise CutoffTooSmall(
                f"{label}: cola de probabilidad {np.exp(tail):.3e} por encima de n_max={cutoff}"
            )
    return int(cutoff)


def _assemble(xi: complex, K: int, residues: Sequence[int], f: NonlinearFn, cutoff,
              label: str, weight: Optional[np.ndarray] = None,
              headroom: Optional[int] = None) -> Tuple[FockVector, float]:
    """Vector normalizado y log C (constante de normalización del truncado)."""
    settings = get_settings()
    headroom = settings.headroom if headroom is None else headroom
    n_top = settings.max_cutoff if cutoff == "auto" else max(settings.max_cutoff, int(cutoff) + 64)
    parts = [_residue_terms(xi, K, r, f, n_top, weight) for r in residues]
    terms = _Terms(*(np.concatenate(a) for a in zip(*parts)))

    n_max = _choose_cutoff(terms, cutoff, settings.tail_tol, headroom, label)
    keep = terms.n <= n_max
    n, log_abs, sign = terms.n[keep], terms.log_abs[keep], terms.sign[keep]
    log_c = -0.5 * logsumexp(2.0 * log_abs)

    amps = np.zeros(n_max + 1, dtype=np.complex128)
    amps[n] = sign * np.exp(log_abs + log_c) * np.exp(1j * n * np.angle(xi))
    logger.debug(f"[STATE] {label} xi={xi:.6g} K={K} n_max={n_max}")
    return normalize(FockVector(amps)), float(log_c)


def build_kncs(spec: KncsSpec, headroom: Optional[int] = None) -> FockVector:
    v, _ = _assemble(spec.xi, spec.K, [spec.j], spec.f, spec.cutoff,
                     f"KNCS(K={spec.K},j={spec.j},f={spec.f.label})", headroom=headroom)
    return v


def build_ncs(chi: complex, f: NonlinearFn | str = "unit", cutoff="auto") -> FockVector:
    return build_kncs(KncsSpec(xi=chi, K=1, j=0, f=f, cutoff=cutoff))


def _require_even_k(K: int) -> None:
    if K < 2 or K % 2:
        raise InvalidParameter(f"se requiere K par >= 2 (K={K})")


def _as_fn(f: NonlinearFn | str) -> NonlinearFn:
    return get_nonlinearity(f) if isinstance(f, str) else f


def build_sekncs(xi: complex, K: int, f: NonlinearFn | str = "unit", cutoff="auto") -> FockVector:
    _require_even_k(K)
    return build_kncs(KncsSpec(xi=xi, K=K, j=0, f=f, cutoff=cutoff))


def build_fan(xi: complex, K: int, f: NonlinearFn | str = "unit", cutoff="auto") -> FockVector:
    """
    Estado abanico construido directo en Fock: c_{mK} ∝ J_K(m) ξ^{mK}/(√((mK)!) f(mK)!).

    J_K(m) vale K para m par y 0 para m impar, así que el soporte queda en
    múltiplos de 2K con ceros exactos en el resto.
    """
    _require_even_k(K)
    f = _as_fn(f)
    settings = get_settings()
    n_top = settings.max_cutoff if cutoff == "auto" else max(settings.max_cutoff, int(cutoff) + 64)
    m = np.arange(n_top // K + 1)
    j_weights = np.where(m % 2 == 0, float(K), 0.0)
    v, _ = _assemble(xi, K, [0], f, cutoff, f"FAN(K={K},f={f.label})", weight=j_weights)
    return v


def fan_by_superposition(xi: complex, K: int, f: NonlinearFn | str = "unit",
                         cutoff="auto") -> FockVector:
    """B_K Σ_q |ξ_q; K, f⟩_se, sumando los K SEKNCS (oráculo de build_fan)."""
    _require_even_k(K)
    f = _as_fn(f)
    parts = [build_sekncs(z, K, f, cutoff) for z in geometry_points(xi, K, "xiq")]
    n_max = max(p.n_max for p in parts)
    total = sum(p.padded(n_max).amps for p in parts)
    return normalize(FockVector(total))


def eigen_residual(v: FockVector, spec: KncsSpec) -> float:
    """‖a^K f(n̂) v − ξ^K v‖ sobre n = 0..top−K (top: último nivel poblado)."""
    K = spec.K
    populated = np.nonzero(v.amps)[0]
    top = int(populated[-1]) if populated.size else 0
    if top < K:
        return float(np.linalg.norm(spec.xi ** K * v.amps[: top + 1]))
    n = np.arange(top - K + 1)
    lowered = spec.f(n + K) * np.exp(0.5 * (log_factorial(n + K) - log_factorial(n))) * v.amps[n + K]
    return float(np.linalg.norm(lowered - spec.xi ** K * v.amps[n]))


def decompose_kncs(spec: KncsSpec) -> List[Tuple[complex, FockVector]]:
    """
    Pares (peso_l, |χ_l⟩) cuya suma reconstruye build_kncs(spec).
    """
    K, j = spec.K, spec.j
    target, log_ckj = _assemble(spec.xi, K, [j], spec.f, spec.cutoff, "KNCS")
    out: List[Tuple[complex, FockVector]] = []
    for l, chi in enumerate(geometry_points(spec.xi, K, "chi")):
        comp, log_c10 = _assemble(chi, K, range(K), spec.f, target.n_max, f"NCS(l={l})", headroom=0)
        weight = np.exp(log_ckj - log_c10) / K * np.exp(-2j * np.pi * j * l / K)
        out.append((complex(weight), comp))
    return out


def reconstruct(pairs: Sequence[Tuple[complex, FockVector]]) -> FockVector:
    n_max = max(c.n_max for _, c in pairs)
    return FockVector(sum(w * c.padded(n_max).amps for w, c in pairs))


def rotate(v: FockVector, m: int, K: int) -> FockVector:
    """T_m: c_n → e^{2πimn/K} c_n."""
    if not 0 <= m <= K - 1:
        raise InvalidParameter(f"m={m} fuera de [0, K-1]")
    n = np.arange(v.n_max + 1)
    return FockVector(v.amps * np.exp(2j * np.pi * m * n / K), normalized=v.normalized)


def rotation_phase(v: FockVector, m: int, K: int) -> float:
    """arg⟨v|T_m v⟩ en (−π, π]."""
    return float(np.angle(inner(v, rotate(v, m, K))))


def roots_of_unity_sum(L: int, q: int) -> complex:
    if L < 1:
        raise InvalidParameter("L debe ser >= 1")
    l = np.arange(L)
    return complex(np.sum(np.exp(2j * np.pi * q * l / L)))


def j_sum(K: int, m: int) -> complex:
    """J_K(m) = Σ_{q<K} e^{iπqm}: K para m par, 0 para m impar."""
    _require_even_k(K)
    q = np.arange(K)
    return complex(np.sum(np.exp(1j * np.pi * q * m)))


def geometry_points(xi: complex, K: int, mode: Literal["chi", "xiq"]) -> np.ndarray:
    if K < 1:
        raise InvalidParameter("K debe ser >= 1")
    k = np.arange(K)
    if mode == "chi":
        return xi * np.exp(2j * np.pi * k / K)
    if mode == "xiq":
        return xi * np.exp(1j * np.pi * k / K)
    raise InvalidParameter(f"modo desconocido '{mode}'")


def parity(v: FockVector, tol: float = 1e-24) -> Optional[int]:
    """+1 par, −1 impar, None si mezcla ambas paridades (ξ → −ξ)."""
    p = np.abs(v.amps) ** 2
    odd, even = p[1::2].sum(), p[0::2].sum()
    if odd <= tol:
        return 1
    if even <= tol:
        return -1
    return None


def is_symmetric(v: FockVector, K: int, tol: float = 1e-24) -> bool:
    """Invariancia ante todas las rotaciones T_m (soporte en múltiplos de K)."""
    n = np.arange(v.n_max + 1)
    return bool(np.sum(np.abs(v.amps[n % K != 0]) ** 2) <= tol)

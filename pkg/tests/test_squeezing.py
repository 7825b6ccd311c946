import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.closed_forms import PRINTED_DIFFERS, SUPPORTED_PAIRS, g_function, squeeze_analytic
from app.errors import InvalidParameter, UnsupportedPair
from app.squeezing import (
    fan_state,
    r_const,
    squeeze_numeric,
    squeeze_scan,
    squeeze_surface,
    squeeze_value,
)
from app.states import build_fan
from tests.conftest import coherent

XI_GRID = np.round(np.arange(0.05, 1.2001, 0.05), 10)


@pytest.mark.parametrize("N,expected", [(2, 0.5), (4, 0.75), (6, 15 / 8), (8, 105 / 16)])
def test_r_const(N, expected):
    assert r_const(N) == pytest.approx(expected, rel=1e-15)


def test_r_const_rejects_odd_order():
    with pytest.raises(InvalidParameter):
        r_const(5)


@pytest.mark.parametrize("N", [2, 4, 6, 8])
@pytest.mark.parametrize("xi", [0.3, 0.7, 1.0])
def test_coherent_baseline(N, xi, phis16):
    s = squeeze_numeric(coherent(xi), phis16, N)
    assert np.max(np.abs(s)) < 1e-10


@pytest.mark.parametrize("pair", sorted(SUPPORTED_PAIRS))
def test_closed_forms_match_moment_engine(pair, phis16):
    K, N = pair
    worst = 0.0
    for xi in XI_GRID:
        numeric = squeeze_numeric(build_fan(xi, K), phis16, N)
        analytic = squeeze_analytic(K, N, xi, phis16)
        worst = max(worst, float(np.max(np.abs(numeric - analytic))))
    assert worst < 1e-9


@pytest.mark.parametrize("pair", sorted(PRINTED_DIFFERS))
def test_printed_variants_differ(pair):
    K, N = pair
    phi = np.pi / (2 * K)
    # en ξ = 1 (x = 1) el factor x que falta en (2,6) no se nota
    assert abs(squeeze_analytic(K, N, 1.3, phi, printed=True) - squeeze_analytic(K, N, 1.3, phi)) > 1e-6


@pytest.mark.parametrize("pair", sorted(SUPPORTED_PAIRS - PRINTED_DIFFERS))
def test_printed_variants_agree_elsewhere(pair):
    K, N = pair
    assert squeeze_analytic(K, N, 0.7, 0.3, printed=True) == squeeze_analytic(K, N, 0.7, 0.3)


@pytest.mark.parametrize("pair", [(2, 8), (6, 12), (3, 6)])
def test_unsupported_pair(pair):
    with pytest.raises(UnsupportedPair):
        squeeze_analytic(*pair, 0.5, 0.0)


def test_closed_form_vanishes_at_origin():
    assert squeeze_analytic(2, 2, 0.0, 1.0) == 0.0


def test_fourth_order_onset_near_origin():
    assert squeeze_analytic(2, 4, 0.05, np.pi / 4) < 0.0


def test_large_amplitude_does_not_overflow():
    s = squeeze_analytic(4, 8, 40.0, 0.0)
    assert np.isfinite(s) and s > 0


# --- g(|ξ|) ---------------------------------------------------------------

def test_g_vanishes_at_origin():
    assert g_function(0.0) == 0.0


def test_g_crosses_minus_one_at_critical_amplitude():
    assert g_function(0.796541) == pytest.approx(-1.0, abs=1e-4)


def test_g_tends_to_minus_three():
    # g = −3(1 + 2/ξ² + ...) para ξ grande
    assert g_function(80.0) == pytest.approx(-3.0, abs=1e-3)
    assert g_function(10.0) == pytest.approx(-3.06, abs=1e-3)


def test_g_series_joins_closed_expression():
    x = np.sqrt(1e-3) * 1.01
    assert g_function(x) == pytest.approx(-2.5 * x ** 4, rel=1e-6)


# --- propiedades del camino numérico -------------------------------------------

@pytest.mark.parametrize("K,N", [(2, 2), (4, 2), (4, 4), (4, 6), (6, 10)])
def test_no_phase_dependence_below_minimum_order(K, N):
    phis = 2 * np.pi * np.arange(32) / 32
    for xi in np.linspace(0.6, 1.5, 4):
        s = squeeze_numeric(build_fan(xi, K), phis, N)
        assert np.ptp(s) < 1e-10
        assert np.min(s) > 0.0


@given(phi=st.floats(0.0, 2 * np.pi), K=st.sampled_from([2, 4]), N=st.sampled_from([4, 6, 8]))
def test_fan_periodicity_and_reflection(phi, K, N):
    v = fan_state(0.7, K, "unit", "auto")
    s = squeeze_numeric(v, np.array([phi, phi + np.pi / K, -phi]), N)
    assert abs(s[1] - s[0]) < 1e-12
    assert abs(s[2] - s[0]) < 1e-12


@given(xi=st.floats(0.0, 1.5), phi=st.floats(0.0, 2 * np.pi), N=st.sampled_from([2, 4, 6, 8]))
def test_central_moment_is_nonnegative(xi, phi, N):
    s = squeeze_numeric(build_fan(xi, 2), phi, N)
    assert s + r_const(N) >= 0.0


def test_landmark_signs():
    v = build_fan(0.669272, 2)
    assert squeeze_numeric(v, np.pi / 4, 4) < 0.0
    phis = np.linspace(0.0, 2 * np.pi, 9)
    assert np.all(squeeze_numeric(v, phis, 2) > 0.0)


def test_auto_source_falls_back_to_numeric():
    # (2, 8) no tiene forma cerrada; "auto" debe usar el motor de Fock
    s = squeeze_value(2, 8, 0.6, 0.0)
    assert s == pytest.approx(squeeze_numeric(build_fan(0.6, 2), 0.0, 8))


def test_closed_forms_require_unit_f():
    with pytest.raises(InvalidParameter):
        squeeze_value(2, 4, 0.5, 0.0, source="analytic", f="inv-sqrt")


# --- barridos -------------------------------------------------------------------

def test_scan_carries_both_sources():
    samples = squeeze_scan(2, 2, 0.7, 16)
    assert len(samples) == 32
    for src in ("numeric", "analytic"):
        values = [s.S for s in samples if s.source == src]
        assert max(values) - min(values) < 1e-10
        assert min(values) > 0


def test_scan_locates_sixth_order_minima():
    samples = [s for s in squeeze_scan(2, 6, 0.659657, 16) if s.source == "numeric"]
    S = np.array([s.S for s in samples])
    lowest = sorted(np.argsort(S)[:4])
    assert lowest == [2, 6, 10, 14]


def test_scan_rejects_coarse_grid():
    with pytest.raises(InvalidParameter):
        squeeze_scan(2, 4, 0.5, 4)


def test_surface_shape():
    S = squeeze_surface(2, 4, [0.2, 0.4, 0.6], 8)
    assert S.shape == (3, 8)
    assert np.allclose(S[1], squeeze_analytic(2, 4, 0.4, 2 * np.pi * np.arange(8) / 8))

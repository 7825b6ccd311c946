import numpy as np
import pytest

from app.analysis import (
    conjugate_pair,
    critical_report,
    find_critical_xi,
    find_directions,
    find_optimal_xi,
    flower_profile,
    g_threshold_root,
    min_squeezing_order,
    squeezing_orders,
    wing_counts,
)
from app.closed_forms import squeeze_analytic
from app.errors import NoSignChange, NotFound, NotUnimodal
from app.squeezing import fan_state
from tests.conftest import coherent

XI_ORDERS = np.round(np.arange(0.01, 1.5001, 0.01), 10)


# --- ξ_c y ξ_M ---------------------------------------------------------------

def test_fourth_order_critical_amplitude():
    assert g_threshold_root() == pytest.approx(0.796541, abs=1e-5)
    analytic = find_critical_xi(2, 4)
    assert analytic == pytest.approx(0.796541, abs=1e-5)
    assert abs(analytic - g_threshold_root()) < 1e-7
    assert find_critical_xi(2, 4, source="numeric") == pytest.approx(analytic, abs=1e-6)


def test_fourth_order_optimum():
    xi_m, s_min = find_optimal_xi(2, 4)
    assert xi_m == pytest.approx(0.669272, abs=1e-5)
    assert s_min < 0


def test_sixth_order_landmarks():
    assert find_critical_xi(2, 6) == pytest.approx(0.785486, abs=1e-5)
    xi_m, _ = find_optimal_xi(2, 6)
    # coincide con 0.659657; 0.659675 queda a 1.8e-5
    assert xi_m == pytest.approx(0.659657, abs=1e-6)
    assert find_optimal_xi(2, 6, source="numeric")[0] == pytest.approx(0.659657, abs=1e-6)


def test_eighth_order_published_landmarks():
    assert find_critical_xi(4, 8, source="printed") == pytest.approx(0.823267, abs=1e-5)
    xi_m, _ = find_optimal_xi(4, 8, source="printed")
    assert xi_m == pytest.approx(0.754939, abs=1e-5)


def test_eighth_order_derived_landmarks():
    xi_c = find_critical_xi(4, 8)
    xi_m, _ = find_optimal_xi(4, 8)
    assert xi_c == pytest.approx(0.8230255, abs=2e-5)
    assert xi_m == pytest.approx(0.7547177, abs=2e-5)
    # el término 630 (frente a 622) acorta el intervalo de squeezing
    assert xi_c < find_critical_xi(4, 8, source="printed")
    assert find_critical_xi(4, 8, source="numeric") == pytest.approx(xi_c, abs=1e-6)


@pytest.mark.parametrize("K,N", [(2, 4), (2, 6), (4, 8)])
def test_squeezing_interval(K, N):
    xi_c = find_critical_xi(K, N)
    phi = np.pi / (2 * K)
    for xi in np.linspace(0.3 * xi_c, xi_c, 50)[:-1]:
        assert squeeze_analytic(K, N, xi, phi) < 0
    for xi in np.linspace(xi_c + 1e-8, 2.0, 20):
        assert squeeze_analytic(K, N, xi, phi) >= -1e-12


@pytest.mark.parametrize("K,N", [(2, 4), (2, 6), (4, 8)])
def test_landmarks_survive_cutoff_doubling(K, N):
    xi_c = find_critical_xi(K, N, source="numeric")
    xi_m, _ = find_optimal_xi(K, N, source="numeric")
    doubled = 2 * fan_state(2.0, K, "unit", "auto").n_max
    assert find_critical_xi(K, N, source="numeric", cutoff=doubled) == pytest.approx(xi_c, abs=1e-7)
    xi_m2, _ = find_optimal_xi(K, N, source="numeric", cutoff=doubled)
    assert xi_m2 == pytest.approx(xi_m, abs=1e-6)


def test_no_sign_change_without_squeezing():
    with pytest.raises(NoSignChange):
        find_critical_xi(2, 2)


def test_monotone_bracket_is_not_unimodal():
    with pytest.raises(NotUnimodal):
        find_optimal_xi(2, 4, bracket=(0.01, 0.5))


# --- direcciones ----------------------------------------------------------------

@pytest.mark.parametrize("K,N,xi", [(2, 4, 0.669272), (2, 6, 0.65967), (4, 8, 0.754939)])
def test_direction_law(K, N, xi):
    sq, st = find_directions(K, N, xi, 512)
    assert len(sq) == 2 * K and len(st) == 2 * K
    expected_sq = [(1 + 2 * m) * np.pi / (2 * K) for m in range(2 * K)]
    expected_st = [m * np.pi / K for m in range(2 * K)]
    assert np.allclose(sq, expected_sq, atol=np.pi / 512)
    assert np.allclose(st, expected_st, atol=np.pi / 512)


def test_flat_profile_has_no_directions():
    assert find_directions(2, 2, 0.7, 64) == ([], [])


def test_conjugate_pair():
    assert conjugate_pair(2) == pytest.approx((np.pi / 4, np.pi / 2))
    sq, st = conjugate_pair(4)
    assert st - sq == pytest.approx(np.pi / 8)


# --- órdenes ----------------------------------------------------------------------

@pytest.mark.parametrize("K,expected", [(2, 4), (4, 8), (6, 12)])
def test_minimum_squeezing_order(K, expected):
    assert min_squeezing_order(K, XI_ORDERS, 12) == expected


def test_squeezing_orders_above_minimum():
    grid = np.round(np.arange(0.05, 1.5001, 0.05), 10)
    assert squeezing_orders(2, grid, 8) == [4, 6, 8]


def test_no_order_found():
    with pytest.raises(NotFound):
        min_squeezing_order(6, [0.05], 12)


# --- flor -----------------------------------------------------------------------

def test_sixth_order_flower():
    prof = flower_profile(2, 6, 0.659657, 512)
    S = np.array([s for _, s in prof])
    assert S.max() == pytest.approx(1.07, abs=0.01)
    assert wing_counts(prof) == (4, 4)


def test_eighth_order_flower():
    prof = flower_profile(4, 8, 0.754939, 512)
    S = np.array([s for _, s in prof])
    assert S.max() == pytest.approx(0.02, abs=0.005)
    assert wing_counts(prof) == (8, 8)


def test_coherent_flower_is_degenerate():
    prof = flower_profile(1, 4, 0.5, 64, state=coherent(0.5))
    assert max(abs(s) for _, s in prof) < 1e-10


# --- reporte ----------------------------------------------------------------------

def test_critical_report():
    rep = critical_report(2, 4)
    assert rep.xi_c == pytest.approx(0.796541, abs=1e-5)
    assert rep.xi_m == pytest.approx(0.669272, abs=1e-5)
    assert rep.source == "analytic"
    assert len(rep.directions_sq) == 4
    assert rep.schema_version == "1"


def test_report_without_squeezing():
    with pytest.raises(NotFound, match="N < 2K"):
        critical_report(2, 2)

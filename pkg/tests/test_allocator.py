import math

import numpy as np
import pytest

from qubit_metrology import allocator
from qubit_metrology.allocator import InfeasibleResources, Resources
from qubit_metrology.oracles import grid_search


def test_starved_time():
    assert allocator.t_s(Resources(R=10, tau=10, nu_min=50)) == 5
    assert allocator.t_s(Resources(R=100, tau=1, nu_min=50)) == 0.5


def test_exactly_nu_min_is_infeasible():
    with pytest.raises(InfeasibleResources):
        allocator.t_s(Resources(R=50, tau=1, nu_min=50))


@pytest.mark.parametrize("kwargs", [dict(R=0), dict(tau=-1), dict(gamma2=-0.1), dict(nu_min=0), dict(nu_min=2.5)])
def test_resources_validation(kwargs):
    with pytest.raises(ValueError):
        Resources(**{**dict(R=100, tau=1), **kwargs})


def test_tp_at_one():
    assert allocator.gamma2_tp(1.0) == 0.5


def test_tp_limits():
    assert allocator.gamma2_tp(0.01) / 0.01 == pytest.approx(2 / 3, rel=0.01)
    assert allocator.gamma2_tp(100.0) == pytest.approx(1.0, rel=0.02)
    assert allocator.t_p(0.0, 3.0) == 2.0


def test_tp_is_quadratic_root():
    for x in np.geomspace(1e-3, 1e3, 50):
        y = allocator.gamma2_tp(x)
        assert abs(math.fsum([y * y, -(1.5 + x) * y, x])) < 1e-12
        assert 0 < y < min(x, 1)


def test_tp_minimises_budgeted_bound():
    res = Resources(R=1e6, tau=2.0, gamma2=1.3, nu_min=1)
    Tp = allocator.t_p(res.gamma2, res.tau)
    f = lambda T: allocator.strong_delta_g_budget(1, T, res)  # noqa: E731
    assert f(Tp) < f(Tp * 1.001) and f(Tp) < f(Tp * 0.999)


def test_product_without_decoherence():
    res = Resources(R=1e4, tau=0.3, gamma2=0.0)
    a = allocator.optimize_product(res)
    assert a.T_star == pytest.approx(0.2, rel=1e-14)
    assert a.delta_g_star == pytest.approx(1.5 * math.sqrt(3) / (0.3 * math.sqrt(3e3)), rel=1e-12)
    assert a.dimensionless is None


def test_product_high_decoherence_limit():
    res = Resources(R=1e8, tau=1000.0, gamma2=1.0)
    a = allocator.optimize_product(res)
    assert a.regime == "high-dec"
    assert a.delta_g_star == pytest.approx(math.e / math.sqrt(res.R * res.tau), rel=1e-3)


def test_product_starved():
    res = Resources(R=100, tau=0.9, gamma2=1.0)
    a = allocator.optimize_product(res)
    assert a.regime == "starved"
    assert (a.n, a.nu) == (1, 50)
    assert a.T == pytest.approx(0.4, rel=1e-12)


@pytest.mark.parametrize("R, tau, gamma2", [(1e3, 1.0, 0.5), (1e4, 0.2, 3.0), (300, 2.0, 0.1), (1e5, 5.0, 1.0)])
def test_product_matches_fine_grid(R, tau, gamma2):
    res = Resources(R=R, tau=tau, gamma2=gamma2)
    a = allocator.optimize_product(res)
    oracle = grid_search(res, "product", t_points=100_000)
    assert a.delta_g <= oracle.delta_g * 1.001


def test_transition_example():
    res = Resources(R=1e4, tau=0.5, gamma2=1.0)
    a = allocator.optimize_cat(res)
    assert a.regime == "transition"
    assert (a.n, a.nu, a.T) == (2, 1250, 0.25)
    assert a.n_star == pytest.approx(2.0, rel=1e-14)
    assert a.dimensionless == pytest.approx(4 * math.sqrt(2 * math.e), rel=1e-12)
    assert a.dimensionless == pytest.approx(9.326575926388498, rel=1e-12)


def test_cat_low_decoherence_without_dephasing():
    res = Resources(R=1e4, tau=0.5, gamma2=0.0)
    a = allocator.optimize_cat(res)
    assert a.regime == "low-dec"
    assert a.T == 0.25
    assert a.N == 2500
    assert a.delta_g_star == pytest.approx(4 * math.sqrt(50) / (1e4 * 0.25), rel=1e-14)


@pytest.mark.parametrize("tau", [1.0, 2.0, 5.0, 50.0])
def test_cat_high_decoherence_equals_product(tau):
    res = Resources(R=1e4, tau=tau, gamma2=1.0)
    cat, prod = allocator.optimize_cat(res), allocator.optimize_product(res)
    # the boundary point keeps the transition label but deploys the same probes
    assert cat.regime == ("transition" if tau == 1.0 else "high-dec")
    assert cat.n == 1
    for field in ("T", "n", "nu", "N", "delta_g", "T_star", "n_star", "nu_star", "delta_g_star"):
        assert getattr(cat, field) == pytest.approx(getattr(prod, field), rel=1e-14)


def test_regime_ties_take_lower_decoherence_label():
    # R tau = 2 nu_min exactly
    assert allocator.cat_regime(Resources(R=1e4, tau=0.01, gamma2=1.0)) == "starved"
    # gamma2 tau = 1 exactly
    assert allocator.cat_regime(Resources(R=1e4, tau=1.0, gamma2=1.0)) == "transition"


def test_allocation_budget_invariants():
    for tau in np.geomspace(0.006, 20, 40):
        res = Resources(R=1e4, tau=float(tau), gamma2=1.0)
        a = allocator.optimize_cat(res)
        assert a.nu >= res.nu_min and a.n >= 1
        assert a.nu * a.n / res.R + a.T == pytest.approx(res.tau, abs=1 / res.R)
        assert a.N == a.n * a.nu


def test_infeasible():
    with pytest.raises(InfeasibleResources):
        allocator.optimize("cat", Resources(R=10, tau=1))
    with pytest.raises(ValueError):
        allocator.optimize("squeezed", Resources(R=1e4, tau=1))


def test_hessian_at_transition_optimum():
    res = Resources(R=1e4, tau=0.5, gamma2=1.0)
    rep = allocator.hessian_check(2.0, 0.25, res)
    assert rep.is_minimum
    assert rep.determinant == pytest.approx(0.017397, rel=1e-3)
    assert max(map(abs, rep.gradient)) < 1e-6


def test_hessian_off_optimum_has_gradient():
    res = Resources(R=1e4, tau=0.5, gamma2=1.0)
    assert max(map(abs, allocator.hessian_check(4.0, 0.25, res).gradient)) > 1e-3


def test_hessian_near_upper_transition():
    res = Resources(R=1e4, tau=0.9, gamma2=1.0)
    a = allocator.optimize_cat(res)
    assert allocator.hessian_check(a.n_star, a.T_star, res).is_minimum


def test_fig2_rows():
    grid = allocator.log_grid(0.01, 100, 30)
    rows = allocator.figure_curves("fig2", grid)
    tp = [r.gamma2_Tp for r in rows]
    assert np.all(np.diff(tp) > 0)
    assert rows[0].gamma2_Tp / rows[0].gamma2_tau == pytest.approx(2 / 3, rel=0.01)


def test_fig2_small_limit():
    (row,) = allocator.figure_curves("fig2", [1e-6])
    assert row.gamma2_Tp / row.gamma2_tau == pytest.approx(2 / 3, rel=1e-5)


def test_fig3_shape_and_value_at_one():
    grid = [0.5, 1.0, 2.0]
    rows = allocator.figure_curves("fig3", grid)
    assert len(rows) == len(grid) * len(allocator.FIG3_SQRT_R_OVER_GAMMA2)
    for r in rows:
        if r.gamma2_tau == 1.0 and r.sqrt_R_over_gamma2 > 10:
            assert r.dimensionless_bound_cat == pytest.approx(2 * math.sqrt(2 * math.e), rel=1e-12)
        if r.gamma2_tau > 1:
            assert r.dimensionless_bound_cat == r.dimensionless_bound_product


def test_fig3_infeasible_rows_are_nan():
    rows = allocator.figure_curves("fig3", [1e-3], sqrt_r_over_gamma2=[10.0])
    assert rows[0].regime == "infeasible"
    assert math.isnan(rows[0].dimensionless_bound_cat)


def test_figure_independent_of_workers():
    grid = allocator.log_grid(1e-3, 10, 25)
    assert allocator.figure_curves("fig3", grid, workers=1) == allocator.figure_curves("fig3", grid, workers=4)


def test_figure_rejects_bad_input():
    with pytest.raises(ValueError):
        allocator.figure_curves("fig4", [1.0])
    with pytest.raises(ValueError):
        allocator.figure_curves("fig2", [1.0, 0.5])


def test_worker_env(monkeypatch):
    monkeypatch.setenv(allocator.THREADS_ENV, "3")
    assert allocator.default_workers() == 3
    monkeypatch.setenv(allocator.THREADS_ENV, "lots")
    assert allocator.default_workers() == 1

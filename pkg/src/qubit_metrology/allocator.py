"""Optimal deployment of a fixed qubit rate ``R`` over a fixed window ``tau``.

A deployment picks the interaction time ``T``, the probe size ``n`` and the
probe count ``nu``, subject to ``nu n / R + T = tau`` and ``nu >= nu_min``.
The objective is the strong (Fisher-information) bound with pure transverse
dephasing at rate ``gamma2``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .bounds import dimensionless

DEFAULT_NU_MIN = 50
REGIMES = ("starved", "low-dec", "transition", "high-dec")
THREADS_ENV = "QUBIT_METROLOGY_THREADS"
# guards floor/ceil of probe counts that are integral up to rounding
_INT_SLACK = 1e-9


class InfeasibleResources(ValueError):
    """The window cannot hold ``nu_min`` probes."""


@dataclass(frozen=True)
class Resources:
    """Rates in 1/s, times in s. ``gamma1`` and ``mu`` are carried for reporting only."""

    R: float
    tau: float
    gamma2: float = 0.0
    nu_min: int = DEFAULT_NU_MIN
    gamma1: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError(f"R must be positive, got {self.R!r}")
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau!r}")
        if not self.gamma2 >= 0:
            raise ValueError(f"gamma2 must be non-negative, got {self.gamma2!r}")
        if int(self.nu_min) != self.nu_min or self.nu_min < 1:
            raise ValueError(f"nu_min must be a positive integer, got {self.nu_min!r}")

    @property
    def gamma2_tau(self) -> float:
        return self.gamma2 * self.tau

    def check_feasible(self):
        if self.R * self.tau <= self.nu_min:
            raise InfeasibleResources(
                f"R*tau = {self.R * self.tau:g} cannot field nu_min = {self.nu_min} probes"
            )


@dataclass(frozen=True)
class Allocation:
    """One deployment. Starred fields are the continuous optimum; the rest are integral."""

    family: str
    regime: str
    T: float
    n: int
    nu: int
    N: int
    delta_g: float
    dimensionless: float | None
    T_star: float
    n_star: float
    nu_star: float
    delta_g_star: float
    dimensionless_star: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def t_s(res: Resources) -> float:
    """Interaction time when starved of qubits, ``tau - nu_min/R``."""
    res.check_feasible()
    return res.tau - res.nu_min / res.R


def gamma2_tp(gamma2_tau: float) -> float:
    """Dimensionless optimal time: smaller root of ``y^2 - (3/2 + x) y + x = 0``."""
    x = gamma2_tau
    if x < 0:
        raise ValueError("gamma2*tau must be non-negative")
    # b^2 - 4x = (x - 1/2)^2 + 2, so no cancellation in the discriminant
    return 2 * x / (1.5 + x + math.sqrt((x - 0.5) ** 2 + 2))


def t_p(gamma2: float, tau: float) -> float:
    """Unconstrained optimal interaction time for single-qubit probes; ``2 tau/3`` at ``gamma2 = 0``."""
    if gamma2 < 0 or tau <= 0:
        raise ValueError("need gamma2 >= 0 and tau > 0")
    x = gamma2 * tau
    return 2 * tau / (1.5 + x + math.sqrt((x - 0.5) ** 2 + 2))


def strong_delta_g(n: float, T: float, nu: float, gamma2: float) -> float:
    """``exp(n gamma2 T) / (T n sqrt(nu))``, evaluated in log space."""
    return math.exp(n * gamma2 * T - math.log(T) - math.log(n) - 0.5 * math.log(nu))


def strong_delta_g_budget(n: float, T: float, res: Resources) -> float:
    """The strong bound with ``nu`` eliminated through ``nu = R (tau - T) / n``."""
    return math.exp(
        n * res.gamma2 * T - math.log(T) - 0.5 * math.log(n * res.R * (res.tau - T))
    )


def _best_integer(res: Resources, n_candidates) -> tuple[float, int, int, float]:
    """Best integral ``(T, n, nu)`` over the candidate probe sizes.

    For each ``n`` the time is the fixed-``n`` optimum (clipped so that
    ``nu >= nu_min``), then ``nu`` is rounded both ways and ``T`` takes up the
    remaining budget exactly.
    """
    R, tau, nu_min = res.R, res.tau, res.nu_min
    best = None
    for n in sorted({int(c) for c in n_candidates}):
        if n < 1 or n * nu_min >= R * tau:
            continue
        T_n = min(t_p(n * res.gamma2, tau), tau - n * nu_min / R)
        nu_c = R * (tau - T_n) / n
        for nu in {math.floor(nu_c + _INT_SLACK), math.ceil(nu_c - _INT_SLACK)}:
            if nu < nu_min:
                continue
            T = tau - n * nu / R
            if T <= 0:
                continue
            dg = strong_delta_g(n, T, nu, res.gamma2)
            if best is None or dg < best[3]:
                best = (T, n, nu, dg)
    if best is None:
        raise InfeasibleResources("no integral deployment satisfies the constraints")
    return best


def _allocation(family, regime, res, star, chosen) -> Allocation:
    T_star, n_star, nu_star, dg_star = star
    T, n, nu, dg = chosen
    return Allocation(
        family=family,
        regime=regime,
        T=T,
        n=n,
        nu=nu,
        N=n * nu,
        delta_g=dg,
        dimensionless=dimensionless(dg, res.R, res.gamma2),
        T_star=T_star,
        n_star=n_star,
        nu_star=nu_star,
        delta_g_star=dg_star,
        dimensionless_star=dimensionless(dg_star, res.R, res.gamma2),
    )


def optimize_product(res: Resources) -> Allocation:
    """Single-qubit probes (``n = 1``) at the optimal or the qubit-starved time."""
    res.check_feasible()
    Tp = t_p(res.gamma2, res.tau)
    if res.R * (res.tau - Tp) >= res.nu_min:
        T_star, regime = Tp, ("high-dec" if res.gamma2_tau > 1 else "low-dec")
    else:
        T_star, regime = t_s(res), "starved"
    nu_star = res.R * (res.tau - T_star)
    star = (T_star, 1.0, nu_star, strong_delta_g(1, T_star, nu_star, res.gamma2))
    return _allocation("product", regime, res, star, _best_integer(res, [1]))


def cat_regime(res: Resources) -> str:
    """Regime label; boundary points go to the smaller-``gamma2 tau`` side."""
    res.check_feasible()
    if res.R * res.tau <= 2 * res.nu_min:
        return "starved"
    if res.gamma2 * res.R * res.tau**2 <= 2 * res.nu_min:
        return "low-dec"
    if res.gamma2_tau <= 1:
        return "transition"
    return "high-dec"


def optimize_cat(res: Resources) -> Allocation:
    """Cat-state probes deployed per the four-regime policy.

    Starved and high-decoherence windows fall back to single-qubit probes,
    which are then identical to :func:`optimize_product`.
    """
    regime = cat_regime(res)
    if regime in ("starved", "high-dec"):
        prod = optimize_product(res)
        label = "starved" if prod.regime == "starved" else regime
        return _allocation(
            "cat",
            label,
            res,
            (prod.T_star, prod.n_star, prod.nu_star, prod.delta_g_star),
            (prod.T, prod.n, prod.nu, prod.delta_g),
        )
    R, tau, nu_min, g2 = res.R, res.tau, res.nu_min, res.gamma2
    T_star = tau / 2
    if regime == "low-dec":
        n_star = R * tau / (2 * nu_min)
        nu_star = float(nu_min)
        dg_star = 4 * math.sqrt(nu_min) / (R * tau**2) * math.exp(g2 * R * tau**2 / (4 * nu_min))
    else:
        n_star = 1 / (g2 * tau)
        nu_star = g2 * R * tau**2 / 2
        dg_star = 2 * math.sqrt(2 * math.e) / (tau * math.sqrt(R / g2))
    chosen = _best_integer(res, [math.floor(n_star), math.ceil(n_star)])
    return _allocation("cat", regime, res, (T_star, n_star, nu_star, dg_star), chosen)


def optimize(family: str, res: Resources) -> Allocation:
    if family == "product":
        return optimize_product(res)
    if family == "cat":
        return optimize_cat(res)
    raise ValueError(f"unknown family {family!r}")


class HessianReport(NamedTuple):
    determinant: float
    trace: float
    gradient: tuple[float, float]

    @property
    def is_minimum(self) -> bool:
        return self.determinant > 0 and self.trace > 0


def hessian_check(n: float, T: float, res: Resources, rel_step: float = 1e-3) -> HessianReport:
    """Central-difference gradient and Hessian of the budgeted cat bound in ``(n, T)``."""
    f = lambda a, b: strong_delta_g_budget(a, b, res)  # noqa: E731
    hn, hT = rel_step * n, rel_step * T
    f0 = f(n, T)
    fnn = (f(n + hn, T) - 2 * f0 + f(n - hn, T)) / hn**2
    fTT = (f(n, T + hT) - 2 * f0 + f(n, T - hT)) / hT**2
    fnT = (
        f(n + hn, T + hT) - f(n + hn, T - hT) - f(n - hn, T + hT) + f(n - hn, T - hT)
    ) / (4 * hn * hT)
    grad = ((f(n + hn, T) - f(n - hn, T)) / (2 * hn), (f(n, T + hT) - f(n, T - hT)) / (2 * hT))
    return HessianReport(fnn * fTT - fnT**2, fnn + fTT, grad)


# ---- figure data -----------------------------------------------------------

FIG3_SQRT_R_OVER_GAMMA2 = (10.0, 100.0, 1000.0, 10000.0)


class Fig2Row(NamedTuple):
    gamma2_tau: float
    gamma2_Tp: float
    dimensionless_bound: float


class Fig3Row(NamedTuple):
    gamma2_tau: float
    sqrt_R_over_gamma2: float
    dimensionless_bound_cat: float
    dimensionless_bound_product: float
    regime: str


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _fig2_row(x: float) -> Fig2Row:
    y = gamma2_tp(x)
    return Fig2Row(x, y, math.exp(y) / (y * math.sqrt(x - y)))


def _fig3_curve(s: float, grid: Sequence[float], nu_min: int) -> list[Fig3Row]:
    rows = []
    for x in grid:
        res = Resources(R=s * s, tau=x, gamma2=1.0, nu_min=nu_min)
        try:
            cat = optimize_cat(res)
            prod = optimize_product(res)
        except InfeasibleResources:
            rows.append(Fig3Row(x, s, math.nan, math.nan, "infeasible"))
            continue
        rows.append(Fig3Row(x, s, cat.dimensionless_star, prod.dimensionless_star, cat.regime))
    return rows


def figure_curves(
    which: str,
    grid: Sequence[float],
    sqrt_r_over_gamma2: Sequence[float] = FIG3_SQRT_R_OVER_GAMMA2,
    nu_min: int = DEFAULT_NU_MIN,
    workers: int | None = None,
) -> list:
    """Rows of dimensionless curve data against ``gamma2 tau`` (units with ``gamma2 = 1``).

    ``fig2``: optimal time and product bound, assuming enough qubits never
    to be starved. ``fig3``: cat and product bounds for each ``sqrt(R/gamma2)``.
    """
    grid = [float(x) for x in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing")
    if any(x <= 0 for x in grid):
        raise ValueError("grid values must be positive")
    workers = workers or default_workers()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        if which == "fig2":
            return list(pool.map(_fig2_row, grid))
        if which == "fig3":
            curves = pool.map(lambda s: _fig3_curve(float(s), grid, nu_min), sqrt_r_over_gamma2)
            return [row for curve in curves for row in curve]
    raise ValueError(f"unknown figure {which!r}; expected 'fig2' or 'fig3'")


def log_grid(lo: float, hi: float, num: int) -> np.ndarray:
    return np.geomspace(lo, hi, num)

"""Closed-form lower bounds on the units-corrected estimation error ``delta g``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .channel import ChannelParams
from .probes import FAMILIES, cat_spectral

FORMS = ("nodec", "weak", "strong")


class DivergentBoundError(ValueError):
    """Raised when a bound is requested at zero interaction time."""


@dataclass(frozen=True)
class BoundQuery:
    family: str
    form: str
    n: int
    nu: int
    T: float
    params: ChannelParams = field(default_factory=ChannelParams)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.form not in FORMS:
            raise ValueError(f"form must be one of {FORMS}, got {self.form!r}")
        for name in ("n", "nu"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if not self.T >= 0:
            raise ValueError(f"T must be non-negative, got {self.T!r}")

    @property
    def N(self) -> int:
        return self.n * self.nu


class BoundResult(NamedTuple):
    delta_g: float
    dimensionless: float | None = None


def dimensionless(delta_g: float, R: float, gamma2: float) -> float | None:
    """``sqrt(R/gamma2) * delta_g / gamma2``; ``None`` when ``gamma2 == 0``."""
    if gamma2 <= 0:
        return None
    return math.sqrt(R / gamma2) * delta_g / gamma2


def _prefactor(q: BoundQuery) -> float:
    # the no-decoherence bound
    if q.family == "cat":
        return 1 / (q.T * q.n * math.sqrt(q.nu))
    return 1 / (q.T * math.sqrt(q.n * q.nu))


def _log_correction(q: BoundQuery) -> float:
    """Log of the decoherence factor multiplying the no-decoherence bound."""
    p, n, T = q.params, q.n, q.T
    if q.form == "nodec":
        return 0.0
    if q.form == "weak":
        d1 = p.d1(T)
        if q.family == "product":
            return -0.5 * math.log1p(-d1 * d1)
        # n (1 + (n-1) e1^2 - d1^2) / n^2 relative to the pure-cat variance
        spread = 1 + (n - 1) * math.exp(-2 * p.gamma1 * T) - d1 * d1
        return 0.5 * math.log(n / spread)
    if q.family == "product":
        return p.gamma2 * T
    out = n * p.gamma2 * T
    if n > 1 and p.gamma1 != 0.0:
        # population leaking out of the |0..0>, |1..1> block tightens Delta
        out += 0.5 * math.log(cat_spectral(n, T, p).weight)
    return out


def _check_time(q: BoundQuery):
    if q.T == 0:
        raise DivergentBoundError("bound diverges at T = 0")


def log_bound(q: BoundQuery) -> float:
    """Natural log of the bound; finite for any ``T > 0``."""
    _check_time(q)
    return math.log(_prefactor(q)) + _log_correction(q)


def bound(q: BoundQuery, R: float | None = None) -> BoundResult:
    """Evaluate the requested bound; pass ``R`` to also get the dimensionless value.

    ``nodec`` ignores the channel. ``weak`` uses the variance of ``h`` and
    ``strong`` the quantum Fisher information of the decohered probe.
    """
    _check_time(q)
    corr = _log_correction(q)
    # keep the direct product when it is representable; it is exact without decoherence
    dg = _prefactor(q) * math.exp(corr) if corr < 700 else math.exp(log_bound(q))
    dim = dimensionless(dg, R, q.params.gamma2) if R is not None else None
    return BoundResult(dg, dim)


class InequalityChain(NamedTuple):
    variance_factor: float
    longitudinal: float
    transverse: float

    @property
    def holds(self) -> bool:
        # one-ulp slack: the last two terms coincide on the CP boundary
        slack = 1e-12
        return (
            self.variance_factor >= self.longitudinal * (1 - slack)
            and self.longitudinal >= self.transverse * (1 - slack)
        )


def weak_vs_strong_chain(T: float, params: ChannelParams) -> InequalityChain:
    """The three terms ``sqrt(1 - d1^2) >= exp(-gamma1 T/2) >= exp(-gamma2 T)``."""
    if not params.is_valid():
        raise ValueError("chain needs completely positive parameters")
    if T < 0:
        raise ValueError("T must be non-negative")
    d1 = params.d1(T)
    return InequalityChain(
        math.sqrt(1 - d1 * d1),
        math.exp(-params.gamma1 * T / 2),
        math.exp(-params.gamma2 * T),
    )

"""Oracle suites behind the ``verify`` command."""

from __future__ import annotations

import itertools
import math
from typing import Callable, NamedTuple

import numpy as np

from . import allocator, bounds, probes, qcore
from .channel import MAX_QUBITS, ChannelParams, apply_nqubit
from .oracles import (
    central_difference,
    grid_search,
    qfi_sylvester,
    random_density,
    random_hermitian,
    trace_moments,
)


class Check(NamedTuple):
    suite: str
    name: str
    passed: bool
    detail: str


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def parameter_grid():
    """``(gamma1/gamma2, mu, gamma2 T)`` triples used by the probe checks."""
    return itertools.product((0.0, 0.5, 1.0), (0.0, 0.5, 1.0), (0.1, 0.7, 2.0))


def check_qcore(n_max: int, tol: float, seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst_sld = worst_bridge = 0.0
    for dim in (2, 4, 8, 2 ** min(n_max, 4)):
        for _ in range(10):
            rho = random_density(dim, rng)
            h = random_hermitian(dim, rng)
            drho = qcore.phase_derivative(rho, h, 1.0)
            L = qcore.sld(rho, drho)
            worst_sld = max(worst_sld, float(np.max(np.abs(rho @ L + L @ rho - 2 * drho))))
            for T in (0.1, 1.0, 3.0):
                q = qcore.qfi(rho, qcore.phase_derivative(rho, h, T))
                worst_bridge = max(worst_bridge, _rel(q, 4 * T * T * qcore.delta_sq(rho, h)))
            worst_bridge = max(worst_bridge, _rel(qcore.qfi(rho, drho), qfi_sylvester(rho, drho)))
    return [
        Check("qcore", "sld-relation", worst_sld < tol, f"max residual {worst_sld:.2e}"),
        Check("qcore", "qfi-bridge", worst_bridge < tol, f"max rel. error {worst_bridge:.2e}"),
    ]


def check_probes(n_max: int, tol: float) -> list[Check]:
    worst_qfi = worst_mom = worst_chan = 0.0
    for ratio, mu, x in parameter_grid():
        params = ChannelParams(gamma1=ratio, gamma2=1.0, mu=mu)
        T = x
        for n in range(1, min(n_max, 5) + 1):
            h = qcore.collective_h(n)
            for fam in probes.FAMILIES:
                spec = probes.ProbeSpec(fam, n, T, g=0.3)
                rho = probes.evolve(spec, params)
                q = qcore.qfi(rho, qcore.phase_derivative(rho, h, T))
                worst_qfi = max(worst_qfi, _rel(q, 4 * T * T * probes.delta_sq_closed(spec, params)))
                ref = apply_nqubit(params.with_omega(spec.g), T, probes.build_initial(spec))
                worst_chan = max(worst_chan, float(np.linalg.norm(ref - rho)))
            cat = probes.evolve(probes.ProbeSpec("cat", n, T), params)
            got = probes.cat_moments(n, T, params)
            want = trace_moments(cat, h)
            worst_mom = max(worst_mom, max(abs(a - b) for a, b in zip(got, want)))
    # finite-difference derivative against the analytic commutator
    spec = probes.ProbeSpec("cat", 2, 0.7, g=0.4)
    params = ChannelParams(0.5, 1.0, 0.5)
    fd = central_difference(
        lambda g: probes.evolve(probes.ProbeSpec("cat", 2, 0.7, g), params), spec.g
    )
    rho = probes.evolve(spec, params)
    an = qcore.phase_derivative(rho, qcore.collective_h(2), spec.T)
    fd_err = float(np.max(np.abs(fd - an)))
    return [
        Check("probes", "qfi-closed-form", worst_qfi < tol, f"max rel. error {worst_qfi:.2e}"),
        Check("probes", "cat-moments", worst_mom < 1e-9, f"max abs. error {worst_mom:.2e}"),
        Check("probes", "channel-equivalence", worst_chan < 1e-10, f"max Frobenius {worst_chan:.2e}"),
        Check("probes", "derivative-fd", fd_err < 1e-8, f"max abs. error {fd_err:.2e}"),
    ]


def check_bounds(tol: float, draws: int = 1000, seed: int = 1) -> list[Check]:
    rng = np.random.default_rng(seed)
    zero = ChannelParams()
    reduced = True
    for fam, n, nu, T in itertools.product(probes.FAMILIES, (1, 3), (10, 50), (0.5, 2.0)):
        nodec = bounds.bound(bounds.BoundQuery(fam, "nodec", n, nu, T, zero)).delta_g
        for form in ("weak", "strong"):
            val = bounds.bound(bounds.BoundQuery(fam, form, n, nu, T, zero)).delta_g
            reduced &= _rel(val, nodec) < 1e-14
    ordered = chain = True
    for _ in range(draws):
        g1 = rng.uniform(0, 2)
        params = ChannelParams(g1, g1 / 2 + rng.uniform(0, 2), rng.uniform(-1, 1))
        T = rng.uniform(0.01, 5)
        n = int(rng.integers(1, 8))
        for fam in probes.FAMILIES:
            s = bounds.bound(bounds.BoundQuery(fam, "strong", n, 10, T, params)).delta_g
            w = bounds.bound(bounds.BoundQuery(fam, "weak", n, 10, T, params)).delta_g
            ordered &= s >= w * (1 - 1e-12)
        chain &= bounds.weak_vs_strong_chain(T, params).holds
    return [
        Check("bounds", "no-decoherence-reduction", reduced, "gamma1 = gamma2 = 0"),
        Check("bounds", "strong-above-weak", ordered, f"{draws} random draws"),
        Check("bounds", "inequality-chain", chain, f"{draws} random draws"),
    ]


def check_allocator(tol: float) -> list[Check]:
    xs = np.geomspace(1e-3, 1e3, 200)
    resid = max(abs(math.fsum([y * y, -(1.5 + x) * y, x])) for x in xs for y in [allocator.gamma2_tp(x)])
    tp1 = abs(allocator.gamma2_tp(1.0) - 0.5)
    worst_gap = 0.0
    for s in (100.0, 1000.0):
        R = s * s
        for x in (1.5 * 50 / R, 6 * 50 / R, 0.3, 3.0):
            res = allocator.Resources(R=R, tau=x, gamma2=1.0)
            alloc = allocator.optimize_cat(res)
            oracle = grid_search(res, "cat")
            worst_gap = max(worst_gap, alloc.delta_g / oracle.delta_g - 1)
    return [
        Check("allocator", "tp-residual", resid < 1e-12, f"max residual {resid:.2e}"),
        Check("allocator", "tp-at-one", tp1 < 1e-12, f"|gamma2 Tp - 1/2| = {tp1:.2e}"),
        Check("allocator", "grid-oracle", worst_gap <= 0.005, f"worst excess {worst_gap:.2e}"),
    ]


SUITES: dict[str, Callable[[int, float], list[Check]]] = {
    "qcore": lambda n, tol: check_qcore(n, tol),
    "probes": lambda n, tol: check_probes(n, tol),
    "bounds": lambda n, tol: check_bounds(tol),
    "allocator": lambda n, tol: check_allocator(tol),
}


def run_all(n_max: int = 4, tol: float = 1e-8) -> list[Check]:
    if not 1 <= n_max <= MAX_QUBITS:
        raise ValueError(f"n-max must lie in [1, {MAX_QUBITS}], got {n_max}")
    out = []
    for fn in SUITES.values():
        out.extend(fn(n_max, tol))
    return out

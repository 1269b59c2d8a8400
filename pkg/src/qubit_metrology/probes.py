"""Product and cat probe states, their decohered forms and closed-form spectral data."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import MAX_QUBITS, ChannelParams
from .qcore import PAULI, kron_all

FAMILIES = ("product", "cat")


@dataclass(frozen=True)
class ProbeSpec:
    """A probe of ``n`` qubits held in the channel for ``T`` seconds at coupling ``g`` (1/s)."""

    family: str
    n: int
    T: float
    g: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not self.T >= 0:
            raise ValueError(f"T must be non-negative, got {self.T!r}")


class QubitSpectralData(NamedTuple):
    d1: float
    d2: float
    p_plus: float
    p_minus: float
    sin_theta: float
    cos_theta: float


class CatSpectralData(NamedTuple):
    """Eigen-data of the decohered cat state restricted to span{|0..0>, |1..1>}."""

    d_plus: float
    d_minus: float
    d2n: float
    p_plus: float
    p_minus: float
    sin_theta: float
    cos_theta: float

    @property
    def weight(self) -> float:
        """Population of the two-dimensional block, ``p_plus + p_minus``."""
        return self.p_plus + self.p_minus


def _check_cap(n, max_qubits):
    if n > max_qubits:
        raise ValueError(f"{n} qubits exceeds the explicit-matrix cap of {max_qubits}")


def build_initial(spec: ProbeSpec, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    """Initial probe density matrix (before entering the channel)."""
    n = spec.n
    _check_cap(n, max_qubits)
    if spec.family == "product":
        return kron_all([0.5 * (PAULI["I"] + PAULI["X"])] * n)
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = psi[-1] = 1 / math.sqrt(2)
    return np.outer(psi, psi.conj())


def _qubit_block(d1, d2, phase):
    return 0.5 * (
        PAULI["I"]
        + d1 * PAULI["Z"]
        + d2 * (math.cos(phase) * PAULI["X"] + math.sin(phase) * PAULI["Y"])
    )


def _rotation_angle(spec: ProbeSpec, params: ChannelParams) -> float:
    # The g-rotation is folded into the channel as omega = g; any other
    # coherent rotation would be indistinguishable from g.
    if params.omega not in (0.0, spec.g):
        raise ValueError("extra coherent rotation (omega != g) is not supported")
    return spec.g * spec.T


def evolve(spec: ProbeSpec, params: ChannelParams, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    """Probe state after time ``T`` in the channel, assembled from its Pauli-basis closed form."""
    n, T = spec.n, spec.T
    _check_cap(n, max_qubits)
    phase = _rotation_angle(spec, params)
    d1, d2 = params.d1(T), params.d2(T)
    if spec.family == "product":
        return kron_all([_qubit_block(d1, d2, phase)] * n)
    e1 = math.exp(-params.gamma1 * T)
    up = PAULI["I"] + (e1 + d1) * PAULI["Z"]
    down = PAULI["I"] - (e1 - d1) * PAULI["Z"]
    raise_ = PAULI["X"] + 1j * PAULI["Y"]
    coh = math.exp(-n * params.gamma2 * T) * np.exp(-1j * n * phase)
    rho = kron_all([up] * n) + kron_all([down] * n)
    flip = kron_all([raise_] * n)
    rho = rho + coh * flip + np.conj(coh) * flip.conj().T
    return rho / 2 ** (n + 1)


def qubit_spectral(T: float, params: ChannelParams) -> QubitSpectralData:
    if T < 0:
        raise ValueError("T must be non-negative")
    d1, d2 = params.d1(T), params.d2(T)
    r = math.hypot(d1, d2)
    return QubitSpectralData(d1, d2, 0.5 * (1 + r), 0.5 * (1 - r), d2 / r, d1 / r)


def cat_spectral(n: int, T: float, params: ChannelParams) -> CatSpectralData:
    if T < 0:
        raise ValueError("T must be non-negative")
    e1 = math.exp(-params.gamma1 * T)
    d1 = params.d1(T)
    d_plus = ((1 + e1 + d1) / 2) ** n + ((1 - e1 + d1) / 2) ** n
    d_minus = ((1 + e1 - d1) / 2) ** n + ((1 - e1 - d1) / 2) ** n
    d2n = math.exp(-n * params.gamma2 * T)
    diff = d_plus - d_minus
    root = math.sqrt(diff**2 + 4 * d2n**2)
    p_plus = 0.25 * (d_plus + d_minus + root)
    p_minus = 0.25 * (d_plus + d_minus - root)
    if root == 0.0:
        return CatSpectralData(d_plus, d_minus, d2n, p_plus, p_minus, 0.0, 1.0)
    return CatSpectralData(d_plus, d_minus, d2n, p_plus, p_minus, 2 * d2n / root, diff / root)


def cat_moments(n: int, T: float, params: ChannelParams) -> tuple[float, float, float]:
    """``(<h>, <h^2>, var h)`` for the decohered cat state, ``h = sum sigma_z / 2``."""
    d1 = params.d1(T)
    e1sq = math.exp(-2 * params.gamma1 * T)
    mean = n * d1 / 2
    mean_sq = n / 4 * (1 + (n - 1) * (e1sq + d1**2))
    var = n / 4 * (1 + (n - 1) * e1sq - d1**2)
    return mean, mean_sq, var


def product_variance(n: int, T: float, params: ChannelParams) -> float:
    return n / 4 * (1 - params.d1(T) ** 2)


def delta_sq_closed(spec: ProbeSpec, params: ChannelParams) -> float:
    """Closed-form squared phase sensitivity of the decohered probe.

    Product: ``(n/4) exp(-2 gamma2 T)``. Cat: ``(n^2/4) exp(-2 n gamma2 T) / w``
    where ``w`` is the population left in span{|0..0>, |1..1>}; ``w = 1``
    whenever ``gamma1 = 0`` or ``n = 1``.
    """
    n, T = spec.n, spec.T
    if spec.family == "product":
        return n / 4 * math.exp(-2 * params.gamma2 * T)
    if n == 1 or params.gamma1 == 0.0:
        return n * n / 4 * math.exp(-2 * n * params.gamma2 * T)
    sd = cat_spectral(n, T, params)
    return n * n / 4 * sd.d2n**2 / sd.weight

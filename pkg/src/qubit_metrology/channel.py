"""Rotation-covariant single-qubit decoherence and its i.i.d. n-qubit extension.

The map ``A_t`` acts on the Pauli basis as

    A_t(1)          = 1 + mu (1 - exp(-gamma1 t)) sigma_z
    A_t(sigma_z)    = exp(-gamma1 t) sigma_z
    A_t(sx +- i sy) = exp(-gamma2 t) exp(-+ i omega t) (sx +- i sy)

so on the Bloch vector it contracts the transverse plane by ``exp(-gamma2 t)``,
rotates it counter-clockwise by ``omega t`` and relaxes ``z`` towards ``mu``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .qcore import PAULI, as_density, n_qubits

MAX_QUBITS = 6
BLOCH_ATOL = 1e-10
CHOI_ATOL = 1e-12


@dataclass(frozen=True)
class ChannelParams:
    """Decoherence constants. Rates in 1/s.

    Construction enforces ``|mu| <= 1`` and ``gamma2 >= gamma1/2 >= 0``; use
    :meth:`unchecked` to build a parameter set outside that region (for
    complete-positivity scans).
    """

    gamma1: float = 0.0
    gamma2: float = 0.0
    mu: float = 0.0
    omega: float = 0.0

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "mu", "omega"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if not -1.0 <= self.mu <= 1.0:
            raise ValueError(f"mu must lie in [-1, 1], got {self.mu}")
        if self.gamma1 < 0:
            raise ValueError(f"gamma1 must be non-negative, got {self.gamma1}")
        if self.gamma2 < self.gamma1 / 2:
            raise ValueError(
                f"complete positivity needs gamma2 >= gamma1/2 "
                f"(got gamma1={self.gamma1}, gamma2={self.gamma2})"
            )

    @classmethod
    def unchecked(cls, gamma1=0.0, gamma2=0.0, mu=0.0, omega=0.0) -> "ChannelParams":
        obj = object.__new__(cls)
        for name, v in zip(("gamma1", "gamma2", "mu", "omega"), (gamma1, gamma2, mu, omega)):
            object.__setattr__(obj, name, float(v))
        return obj

    def with_omega(self, omega: float) -> "ChannelParams":
        if self.is_valid():
            return replace(self, omega=omega)
        return ChannelParams.unchecked(self.gamma1, self.gamma2, self.mu, omega)

    def is_valid(self) -> bool:
        return -1 <= self.mu <= 1 and 0 <= self.gamma1 <= 2 * self.gamma2

    def d1(self, t: float) -> float:
        """Bloch ``z`` offset ``mu (1 - exp(-gamma1 t))`` of the fixed-point drift."""
        return self.mu * -math.expm1(-self.gamma1 * t)

    def d2(self, t: float) -> float:
        """Transverse contraction ``exp(-gamma2 t)``."""
        return math.exp(-self.gamma2 * t)


class BlochVector(NamedTuple):
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)

    def to_density(self) -> np.ndarray:
        return 0.5 * (
            PAULI["I"] + self.x * PAULI["X"] + self.y * PAULI["Y"] + self.z * PAULI["Z"]
        )

    @classmethod
    def from_density(cls, rho) -> "BlochVector":
        rho = np.asarray(rho)
        if rho.shape != (2, 2):
            raise ValueError(f"expected a single-qubit state, got shape {rho.shape}")
        return cls(
            float(2 * rho[0, 1].real),
            float(-2 * rho[0, 1].imag),
            float((rho[0, 0] - rho[1, 1]).real),
        )


def _check_time(t):
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")


def transfer_matrix(params: ChannelParams, t: float) -> np.ndarray:
    """4x4 Pauli transfer matrix in the ordered basis (1, x, y, z).

    Column ``b`` holds the coefficients of ``A_t(sigma_b)``; it acts on
    vectors ``(1, x, y, z)`` of Bloch components.
    """
    _check_time(t)
    e2 = params.d2(t)
    c, s = math.cos(params.omega * t), math.sin(params.omega * t)
    r = np.zeros((4, 4))
    r[0, 0] = 1.0
    r[3, 0] = params.d1(t)
    r[1, 1], r[1, 2] = e2 * c, -e2 * s
    r[2, 1], r[2, 2] = e2 * s, e2 * c
    r[3, 3] = math.exp(-params.gamma1 * t)
    return r


def apply_bloch(params: ChannelParams, t: float, v) -> BlochVector:
    v = BlochVector(*v)
    if v.norm() > 1 + BLOCH_ATOL:
        raise ValueError(f"Bloch vector {tuple(v)} lies outside the unit ball")
    out = transfer_matrix(params, t) @ np.array([1.0, *v])
    return BlochVector(*map(float, out[1:]))


def _superoperator(params: ChannelParams, t: float) -> np.ndarray:
    # Matrix-unit form S[r', c', r, c] of the transfer matrix: rho'_{r'c'} = S . rho_{rc}
    r = transfer_matrix(params, t)
    paulis = np.stack([PAULI[k] for k in "IXYZ"])
    # Bloch coefficient of sigma_b in rho is tr(sigma_b rho) = sum_rc sigma_b[c, r] rho[r, c]
    # and rho' = (1/2) sum_a v'_a sigma_a
    return 0.5 * np.einsum("aij,ab,bcd->ijdc", paulis, r, paulis)


def apply_qubit(params: ChannelParams, t: float, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"apply_qubit needs a 2x2 state, got shape {rho.shape}")
    return apply_nqubit(params, t, rho)


def apply_nqubit(params: ChannelParams, t: float, rho, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    """Apply ``A_t`` independently to every qubit of ``rho``."""
    rho = np.asarray(rho, dtype=complex)
    n = n_qubits(rho)
    if n > max_qubits:
        raise ValueError(f"{n} qubits exceeds the explicit-matrix cap of {max_qubits}")
    sup = _superoperator(params, t)
    tens = rho.reshape((2,) * (2 * n))
    for j in range(n):
        tens = np.tensordot(sup, tens, axes=([2, 3], [j, n + j]))
        # new axes 0, 1 are qubit j's row / column; move them back in place
        tens = np.moveaxis(tens, [0, 1], [j, n + j])
    return tens.reshape(rho.shape)


class ChoiReport(NamedTuple):
    is_psd: bool
    min_eigenvalue: float


def choi_matrix(params: ChannelParams, t: float) -> np.ndarray:
    """Choi matrix ``sum_ij |i><j| (x) A_t(|i><j|)`` (trace 2)."""
    sup = _superoperator(params, t)
    # J[(i, r'), (j, c')] = S[r', c', i, j]
    return np.transpose(sup, (2, 0, 3, 1)).reshape(4, 4)


def choi_psd_check(params: ChannelParams, t: float, atol: float = CHOI_ATOL) -> ChoiReport:
    _check_time(t)
    lo = float(np.linalg.eigvalsh(choi_matrix(params, t))[0])
    return ChoiReport(lo >= -atol, lo)


def is_density(rho) -> bool:
    try:
        as_density(rho)
    except ValueError:
        return False
    return True

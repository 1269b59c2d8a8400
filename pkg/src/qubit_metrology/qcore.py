"""Dense Hermitian linear algebra, Pauli operators and the SLD / QFI kernel.

Matrices are plain ``numpy`` arrays. Multi-qubit operators use big-endian
tensor order: qubit 1 is the leftmost Kronecker factor, so the computational
basis state ``|b1 b2 ... bn>`` has index ``int("b1b2...bn", 2)``.
"""

from __future__ import annotations

from functools import reduce
from typing import NamedTuple, Sequence

import numpy as np

HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-10
EIGEN_ATOL = 1e-10
# pairs with p_a + p_b below this are dropped from the SLD sum
SUPPORT_CUTOFF = 1e-12

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": SIGMA_X, "Y": SIGMA_Y, "Z": SIGMA_Z}


class SpectralDecomposition(NamedTuple):
    """Eigenvalues in descending order and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_hermitian(m, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Return ``(m + m^dagger)/2`` after checking that ``m`` is Hermitian to ``atol``."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > atol * max(1.0, np.max(np.abs(m))):
        raise ValueError(f"matrix is not Hermitian (max |m - m^dagger| = {dev:.3e})")
    return 0.5 * (m + m.conj().T)


def as_density(rho, atol: float = TRACE_ATOL) -> np.ndarray:
    """Validate a density operator: Hermitian, unit trace, no eigenvalue below ``-atol``."""
    rho = as_hermitian(rho)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > atol:
        raise ValueError(f"density operator has trace {tr!r}, expected 1")
    lo = np.linalg.eigvalsh(rho)[0]
    if lo < -EIGEN_ATOL:
        raise ValueError(f"density operator has negative eigenvalue {lo:.3e}")
    return rho


def n_qubits(m: np.ndarray) -> int:
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def eig_hermitian(m) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix, eigenvalues descending.

    The input is symmetrised before diagonalisation; inputs further than
    ``HERMITIAN_ATOL`` from Hermitian raise ``ValueError``.
    """
    m = as_hermitian(m)
    w, v = np.linalg.eigh(m)
    return SpectralDecomposition(w[::-1].copy(), v[:, ::-1].copy())


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def phase_derivative(rho: np.ndarray, h: np.ndarray, T: float = 1.0) -> np.ndarray:
    """``d rho / dg = -i T [h, rho]`` for a state rotated by ``exp(-i h g T)``."""
    return -1j * T * commutator(h, rho)


def _in_eigenbasis(rho, op):
    dec = eig_hermitian(rho)
    v = dec.eigenvectors
    return dec.eigenvalues, v, v.conj().T @ op @ v


def _pair_mask(p, cutoff):
    s = p[:, None] + p[None, :]
    keep = s > cutoff
    return s, keep


def sld(rho, drho, cutoff: float = SUPPORT_CUTOFF) -> np.ndarray:
    """Symmetric logarithmic derivative ``L`` with ``drho = (rho L + L rho)/2``.

    Built in the eigenbasis of ``rho`` as ``L_ab = 2 drho_ab / (p_a + p_b)``;
    pairs with ``p_a + p_b <= cutoff`` are set to zero, so the defining
    relation only holds on the support of ``rho``.
    """
    rho = as_hermitian(rho)
    drho = as_hermitian(drho)
    if abs(np.trace(drho)) > TRACE_ATOL:
        raise ValueError("drho must be traceless")
    p, v, d = _in_eigenbasis(rho, drho)
    s, keep = _pair_mask(p, cutoff)
    lab = np.zeros_like(d)
    lab[keep] = 2.0 * d[keep] / s[keep]
    return as_hermitian(v @ lab @ v.conj().T, atol=np.inf)


def qfi(rho, drho, cutoff: float = SUPPORT_CUTOFF) -> float:
    """Quantum Fisher information ``tr(drho L)`` with ``L`` the SLD of ``drho``."""
    rho = as_hermitian(rho)
    drho = as_hermitian(drho)
    if abs(np.trace(drho)) > TRACE_ATOL:
        raise ValueError("drho must be traceless")
    p, _, d = _in_eigenbasis(rho, drho)
    s, keep = _pair_mask(p, cutoff)
    return float(np.sum(2.0 * np.abs(d[keep]) ** 2 / s[keep]))


def delta_sq(rho, h, cutoff: float = SUPPORT_CUTOFF) -> float:
    """The squared phase sensitivity ``(1/2) sum (p_a-p_b)^2/(p_a+p_b) |h_ab|^2``.

    Equals ``qfi(rho, -iT[h, rho]) / (4 T^2)`` and never exceeds ``variance(rho, h)``.
    """
    rho = as_hermitian(rho)
    h = as_hermitian(h)
    p, _, hh = _in_eigenbasis(rho, h)
    s, keep = _pair_mask(p, cutoff)
    diff = p[:, None] - p[None, :]
    return float(0.5 * np.sum(diff[keep] ** 2 / s[keep] * np.abs(hh[keep]) ** 2))


def expectation(rho, op) -> float:
    return float(np.real(np.trace(np.asarray(rho) @ np.asarray(op))))


def variance(rho, h) -> float:
    rho = as_hermitian(rho)
    h = as_hermitian(h)
    mean = expectation(rho, h)
    return max(expectation(rho, h @ h) - mean**2, 0.0)


def kron_all(ops: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, ops)


def pauli_string(n: int, spec: str | Sequence[str]) -> np.ndarray:
    """Kronecker product of single-qubit Paulis, e.g. ``pauli_string(2, "XZ")``.

    ``spec`` must hold exactly ``n`` labels from ``IXYZ``; the first label acts
    on qubit 1 (leftmost factor).
    """
    labels = [c.upper() for c in spec]
    if not labels:
        raise ValueError("empty Pauli specification")
    if len(labels) != n:
        raise ValueError(f"expected {n} labels, got {len(labels)}")
    bad = [c for c in labels if c not in PAULI]
    if bad:
        raise ValueError(f"unknown Pauli labels {bad}")
    return kron_all([PAULI[c] for c in labels])


def local_operator(n: int, op: np.ndarray, j: int) -> np.ndarray:
    """``op`` acting on qubit ``j`` (0-based) of ``n``, identity elsewhere."""
    return kron_all([op if k == j else I2 for k in range(n)])


def collective_h(n: int) -> np.ndarray:
    """Generator ``h = sum_j sigma_z;j / 2`` (diagonal)."""
    if n < 1:
        raise ValueError("n must be positive")
    bits = (np.arange(2**n)[:, None] >> np.arange(n)[None, ::-1]) & 1
    return np.diag((n - 2 * bits.sum(axis=1)) / 2.0).astype(complex)


def parity_x(n: int) -> np.ndarray:
    """``Sigma_x``, the product of ``sigma_x`` over all ``n`` qubits."""
    return pauli_string(n, "X" * n)

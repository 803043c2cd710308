"""Operators and states on the qubit x oscillator Hilbert space.

Basis convention: the qubit factor is ordered [|e>, |g>] (index 0 excited),
so sigma_z = diag(1, -1) and the flat index of |q, n> is q * fock_dim + n.
The composite ordering is qubit (x) mechanics. All operators are dense
complex numpy arrays; at desk-scale Fock dimensions there is nothing to gain
from sparsity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "OperatorSet",
    "boson_lowering",
    "qubit_sigma",
    "make_operators",
    "thermal_fock",
    "make_state",
    "expectation",
    "partial_trace",
    "check_density_matrix",
]

_SIGMA = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
    "+": np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex),
    "-": np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex),
}


def qubit_sigma(which: str) -> np.ndarray:
    """Single-qubit Pauli factor: one of "x", "y", "z", "+", "-".

    In the [|e>, |g>] ordering sigma_minus maps the excited state to the
    ground state and sigma_plus_sigma_minus projects onto |e>.
    """
    try:
        return _SIGMA[which].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli label {which!r}") from None


def boson_lowering(fock_dim: int) -> np.ndarray:
    """Truncated annihilation operator: b|n> = sqrt(n)|n-1>."""
    if fock_dim < 2:
        raise ValueError("fock_dim must be at least 2")
    return np.diag(np.sqrt(np.arange(1, fock_dim, dtype=float)), k=1).astype(complex)


@dataclass(frozen=True)
class OperatorSet:
    """Operators of the composite space, each of shape (2 N, 2 N).

    Qubit operators act as identity on the mechanics and vice versa. ``dim``
    is the composite dimension 2 * fock_dim.
    """

    fock_dim: int
    identity: np.ndarray
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    sp: np.ndarray
    sm: np.ndarray
    b: np.ndarray
    bdag: np.ndarray
    number: np.ndarray

    @property
    def dim(self) -> int:
        return 2 * self.fock_dim


def make_operators(fock_dim: int) -> OperatorSet:
    """Embed the qubit and oscillator operators into the composite space."""
    b1 = boson_lowering(fock_dim)
    eye_q = np.eye(2, dtype=complex)
    eye_m = np.eye(fock_dim, dtype=complex)
    lift_q = lambda op: np.kron(op, eye_m)
    b = np.kron(eye_q, b1)
    return OperatorSet(
        fock_dim=fock_dim,
        identity=np.eye(2 * fock_dim, dtype=complex),
        sx=lift_q(_SIGMA["x"]),
        sy=lift_q(_SIGMA["y"]),
        sz=lift_q(_SIGMA["z"]),
        sp=lift_q(_SIGMA["+"]),
        sm=lift_q(_SIGMA["-"]),
        b=b,
        bdag=b.conj().T,
        number=np.kron(eye_q, b1.conj().T @ b1),
    )


def thermal_fock(fock_dim: int, n_th: float) -> np.ndarray:
    """Thermal oscillator state truncated to fock_dim levels.

    Geometric weights p_n ~ (n_th / (1 + n_th))^n, renormalized on the
    truncated space. n_th = 0 gives the ground state.
    """
    if n_th < 0:
        raise ValueError("n_th must be non-negative")
    if n_th == 0.0:
        rho = np.zeros((fock_dim, fock_dim), dtype=complex)
        rho[0, 0] = 1.0
        return rho
    q = n_th / (1.0 + n_th)
    weights = q ** np.arange(fock_dim)
    weights /= weights.sum()
    return np.diag(weights).astype(complex)


def _qubit_factor(qubit) -> np.ndarray:
    if isinstance(qubit, str):
        if qubit == "ground":
            return np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
        if qubit == "excited":
            return np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
        raise ValueError(f"unknown qubit state {qubit!r}")
    rho_q = np.asarray(qubit, dtype=complex)
    if rho_q.shape != (2, 2):
        raise ValueError("qubit density matrix must be 2 x 2")
    return rho_q


def _mech_factor(fock_dim: int, mech) -> np.ndarray:
    if isinstance(mech, (int, np.integer)):
        if not 0 <= mech < fock_dim:
            raise ValueError(f"Fock index {mech} outside [0, {fock_dim})")
        rho_m = np.zeros((fock_dim, fock_dim), dtype=complex)
        rho_m[mech, mech] = 1.0
        return rho_m
    if isinstance(mech, tuple) and len(mech) == 2 and mech[0] == "thermal":
        return thermal_fock(fock_dim, float(mech[1]))
    rho_m = np.asarray(mech, dtype=complex)
    if rho_m.shape != (fock_dim, fock_dim):
        raise ValueError("mechanical density matrix shape mismatch")
    return rho_m


def make_state(fock_dim: int, qubit="ground", mech=0) -> np.ndarray:
    """Product density matrix on the composite space.

    ``qubit`` is "ground", "excited", or a 2 x 2 density matrix; ``mech`` is a
    Fock index, ("thermal", n_th), or an explicit fock_dim x fock_dim density
    matrix.
    """
    return np.kron(_qubit_factor(qubit), _mech_factor(fock_dim, mech))


def expectation(rho: np.ndarray, op: np.ndarray) -> complex:
    """Tr(rho op); the imaginary part vanishes for Hermitian observables."""
    rho = np.asarray(rho)
    op = np.asarray(op)
    if rho.shape != op.shape:
        raise ValueError("state and operator dimensions do not match")
    return complex(np.trace(rho @ op))


def partial_trace(rho: np.ndarray, fock_dim: int, keep: str) -> np.ndarray:
    """Trace out one factor; ``keep`` is "qubit" or "mech"."""
    full = rho.reshape(2, fock_dim, 2, fock_dim)
    if keep == "qubit":
        return np.einsum("anbn->ab", full)
    if keep == "mech":
        return np.einsum("aman->mn", full)
    raise ValueError('keep must be "qubit" or "mech"')


def check_density_matrix(
    rho: np.ndarray,
    *,
    herm_tol: float = 1e-10,
    trace_tol: float = 1e-9,
    eig_tol: float = 1e-8,
) -> None:
    """Raise ValueError unless rho is Hermitian, unit-trace, and positive.

    Positivity allows eigenvalues down to -eig_tol to absorb roundoff.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    herm_err = np.abs(rho - rho.conj().T).max()
    if herm_err > herm_tol:
        raise ValueError(f"not Hermitian: max |rho - rho^dag| = {herm_err:.3e}")
    trace_err = abs(np.trace(rho) - 1.0)
    if trace_err > trace_tol:
        raise ValueError(f"trace deviates from 1 by {trace_err:.3e}")
    min_eig = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if min_eig < -eig_tol:
        raise ValueError(f"negative eigenvalue {min_eig:.3e}")

"""Sector matrices for the coupled-cavity and cavity-array Hamiltonians.

All energies are in units of ``omega1`` (hbar = 1). Matrices are dense complex
numpy arrays; Hermiticity holds exactly because every off-diagonal entry is
written together with its conjugate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fock import TwoCavityState


@dataclass(frozen=True)
class SystemParams:
    """Two (Kerr) cavities coupled linearly with strength ``J`` and phase ``eta``.

    The detuning ``omega1 - omega2`` is derived, never stored; use
    :meth:`from_detuning` to specify it instead of ``omega2``.
    """

    omega1: float = 1.0
    omega2: float = 1.0
    J: float = 0.0
    chi1: float = 0.0
    chi2: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        if self.J < 0:
            raise ValueError(f"coupling J must be >= 0, got {self.J}")

    @property
    def detuning(self) -> float:
        return self.omega1 - self.omega2

    @classmethod
    def from_detuning(cls, delta: float, omega1: float = 1.0, **kwargs) -> "SystemParams":
        return cls(omega1=omega1, omega2=omega1 - delta, **kwargs)


def _as_float_array(values, length: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        arr = np.full(length, float(arr))
    if arr.shape != (length,):
        raise ValueError(f"{name} needs {length} entries, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class ArrayParams:
    """Per-site frequencies/Kerr strengths and per-bond couplings/phases of an N-site array.

    Scalars are broadcast: ``chi_tilde=0`` means no Kerr term anywhere, ``eta=0.3``
    puts the same phase on every bond.
    """

    omega_tilde: np.ndarray
    J_tilde: np.ndarray
    chi_tilde: np.ndarray = field(default=0.0)
    eta: np.ndarray = field(default=0.0)

    def __post_init__(self):
        omega = np.atleast_1d(np.asarray(self.omega_tilde, dtype=float))
        N = omega.shape[0]
        if N < 1:
            raise ValueError("array needs at least one site")
        object.__setattr__(self, "omega_tilde", omega)
        object.__setattr__(self, "J_tilde", _as_float_array(self.J_tilde, N - 1, "J_tilde"))
        object.__setattr__(self, "chi_tilde", _as_float_array(self.chi_tilde, N, "chi_tilde"))
        object.__setattr__(self, "eta", _as_float_array(self.eta, N - 1, "eta"))
        if np.any(self.J_tilde < 0):
            raise ValueError("bond couplings J_tilde must be >= 0")
        for arr in (self.omega_tilde, self.J_tilde, self.chi_tilde, self.eta):
            arr.setflags(write=False)

    @property
    def N(self) -> int:
        return self.omega_tilde.shape[0]

    def with_eta(self, eta) -> "ArrayParams":
        return ArrayParams(self.omega_tilde, self.J_tilde, self.chi_tilde, eta)


def average_energy(state: TwoCavityState, params: SystemParams) -> float:
    """Diagonal element <m,n|H|m,n> of the Kerr two-cavity Hamiltonian."""
    m, n = state.m, state.n
    return (
        m * params.omega1
        + n * params.omega2
        + params.chi1 * m * (m - 1)
        + params.chi2 * n * (n - 1)
    )


def _tridiagonal(diagonal: np.ndarray, bonds: np.ndarray, phases: np.ndarray) -> np.ndarray:
    d = diagonal.shape[0]
    H = np.zeros((d, d), dtype=complex)
    H[np.arange(d), np.arange(d)] = diagonal
    if d > 1:
        upper = np.exp(1j * phases) * bonds
        i = np.arange(d - 1)
        H[i, i + 1] = upper
        H[i + 1, i] = np.conj(upper)
    return H


def two_cavity_matrix(params: SystemParams, total_photons: int) -> np.ndarray:
    """Hamiltonian restricted to the ``T``-photon sector, basis ``|T-n, n>`` at index ``n``.

    Diagonal: ``(T-n)w1 + n w2 + chi1 (T-n)(T-n-1) + chi2 n(n-1)``.
    Entry ``(n, n+1)``: ``exp(i eta) sqrt((n+1)(T-n)) J`` (from ``exp(i eta) a1^dag a2``).
    """
    T = total_photons
    if T < 0:
        raise ValueError(f"total photon number must be >= 0, got {T}")
    n = np.arange(T + 1)
    m = T - n
    diagonal = (
        m * params.omega1
        + n * params.omega2
        + params.chi1 * m * (m - 1)
        + params.chi2 * n * (n - 1)
    ).astype(float)
    k = np.arange(T)
    bonds = np.sqrt((k + 1) * (T - k)) * params.J
    return _tridiagonal(diagonal, bonds, np.full(T, params.eta))


def array_matrix(params: ArrayParams, include_vacuum: bool = False) -> np.ndarray:
    """Single-excitation array Hamiltonian; ``(b^dag b)^2`` adds ``chi_tilde`` on one photon.

    With ``include_vacuum`` an extra zero row/column is prepended (vacuum has energy 0
    and is untouched by hopping).
    """
    H = _tridiagonal(params.omega_tilde + params.chi_tilde, params.J_tilde, params.eta)
    if include_vacuum:
        H = np.pad(H, ((1, 0), (1, 0)))
    return H


def hermiticity_defect(H: np.ndarray) -> float:
    return float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0

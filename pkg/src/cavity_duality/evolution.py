"""Unitary evolution in a sector: exact diagonalization plus closed-form and RK4 oracles."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np


class EigenDecompositionError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


@dataclass(frozen=True, eq=False)
class EvolutionResult:
    times: np.ndarray
    amplitudes: np.ndarray  # shape (len(times), dim)
    labels: tuple[str, ...] | None = None

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def norms(self) -> np.ndarray:
        return np.sqrt(self.populations.sum(axis=1))

    def population(self, index: int) -> np.ndarray:
        return self.populations[:, index]


def _fix_phases(V: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    # make the first non-negligible component of each eigenvector real and positive
    V = V.copy()
    for k in range(V.shape[1]):
        col = V[:, k]
        nz = np.flatnonzero(np.abs(col) > tol)
        if nz.size:
            ref = col[nz[0]]
            V[:, k] = col * (abs(ref) / ref)
    return V


def eigendecompose(H: np.ndarray, degeneracy_tol: float = 1e-12) -> SpectralDecomposition:
    """Hermitian eigendecomposition with a reproducible eigenvector gauge.

    Eigenvalues come out ascending. Each eigenvector is phase-fixed so that its
    first non-negligible component is real positive; inside a degenerate cluster
    the vectors are ordered by the real part of their first component (descending)
    while the eigenvalues stay sorted (they agree to within ``degeneracy_tol``).
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise EigenDecompositionError(f"eigendecomposition of {H.shape} matrix did not converge: {exc}") from exc
    V = _fix_phases(V)

    scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
    order = list(range(w.size))
    start = 0
    while start < w.size:
        stop = start + 1
        while stop < w.size and w[stop] - w[start] <= degeneracy_tol * scale:
            stop += 1
        if stop - start > 1:
            cluster = order[start:stop]
            cluster.sort(key=lambda k: -V[0, k].real)
            order[start:stop] = cluster
        start = stop
    return SpectralDecomposition(w, V[:, order])


def _spectral(H) -> SpectralDecomposition:
    return H if isinstance(H, SpectralDecomposition) else eigendecompose(H)


def _check_state(psi0, dim: int, tol: float = 1e-10) -> np.ndarray:
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (dim,):
        raise ValueError(f"state has shape {psi0.shape}, Hamiltonian has dimension {dim}")
    norm = np.linalg.norm(psi0)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"initial state must be normalized, |psi0| = {norm!r}")
    return psi0


def propagate(H, psi0, t: float) -> np.ndarray:
    """``exp(-i H t) psi0`` via ``V diag(exp(-i lambda t)) V^dag psi0``.

    ``H`` may be a matrix or a precomputed :class:`SpectralDecomposition`.
    """
    spec = _spectral(H)
    psi0 = _check_state(psi0, spec.dim)
    V = spec.eigenvectors
    return V @ (np.exp(-1j * spec.eigenvalues * t) * (V.conj().T @ psi0))


def population_series(H, psi0, times, labels=None) -> EvolutionResult:
    spec = _spectral(H)
    psi0 = _check_state(psi0, spec.dim)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be ascending")
    V = spec.eigenvectors
    coeffs = V.conj().T @ psi0
    phases = np.exp(-1j * np.outer(times, spec.eigenvalues))
    amplitudes = (phases * coeffs) @ V.T
    return EvolutionResult(times, amplitudes, tuple(labels) if labels is not None else None)


def basis_vector(dim: int, index: int) -> np.ndarray:
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return psi


def analytic_two_cavity_amplitudes(
    T: int, n: int, J: float, t: float, omega: float = 1.0, global_phase: bool = False
) -> np.ndarray:
    """Closed-form resonant linear evolution of ``|T-n, n>`` (no Kerr, no detuning).

    The double binomial sum over photons leaving each cavity; entry ``i`` of the
    result is the amplitude of ``|T-i, i>``. The common factor ``exp(-i T omega t)``
    is only included when ``global_phase`` is set.
    """
    if not 0 <= n <= T:
        raise ValueError(f"need 0 <= n <= T, got n={n}, T={T}")
    c, s = np.cos(J * t), -1j * np.sin(J * t)
    amps = np.zeros(T + 1, dtype=complex)
    for k in range(T - n + 1):
        for l in range(n + 1):
            final = n + k - l
            amps[final] += (
                comb(T - n, k)
                * comb(n, l)
                * c ** (T - (k + l))
                * s ** (k + l)
                * np.sqrt(comb(T, n) / comb(T, final))
            )
    if global_phase:
        amps *= np.exp(-1j * T * omega * t)
    return amps


def homogeneous_G(j: int, l: int, N: int, omega_tilde: float, J: float, t):
    """Propagator amplitude from site ``l`` to site ``j`` of a uniform N-site chain.

    Uses the sine normal modes with weight ``2/(N+1)`` per mode so that the
    propagator is unitary (t=0 gives the identity). ``t`` may be an array.
    """
    if not (1 <= j <= N and 1 <= l <= N):
        raise ValueError(f"site indices must lie in [1, {N}], got j={j}, l={l}")
    q = np.pi * np.arange(1, N + 1) / (N + 1)
    modes = np.sin(j * q) * np.sin(l * q)
    energies = omega_tilde + 2 * J * np.cos(q)
    G = 2.0 / (N + 1) * (np.exp(-1j * np.multiply.outer(t, energies)) @ modes)
    return complex(G) if np.ndim(t) == 0 else G


def homogeneous_average_occupation(j: int, N: int, omega_tilde: float, J: float, t, initial: int = 1):
    """Mean photon number at site ``j`` when the photon starts at site ``initial``."""
    return np.abs(homogeneous_G(j, initial, N, omega_tilde, J, t)) ** 2


# -- RK4 oracle -----------------------------------------------------------------


def _rk4_step(H: np.ndarray, psi: np.ndarray, dt: float) -> np.ndarray:
    f = lambda y: -1j * (H @ y)
    k1 = f(psi)
    k2 = f(psi + 0.5 * dt * k1)
    k3 = f(psi + 0.5 * dt * k2)
    k4 = f(psi + dt * k3)
    return psi + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _rk4_step_matrix(H: np.ndarray, dt: float) -> np.ndarray:
    # the RK4 map is linear for a constant H, so one step applied to the identity is the step matrix
    return _rk4_step(H, np.eye(H.shape[0], dtype=complex), dt)


def _rk4_run(H: np.ndarray, psi0: np.ndarray, t: float, dt: float) -> np.ndarray:
    H = np.asarray(H, dtype=complex)
    shift = float(np.real(np.trace(H))) / H.shape[0]
    Hs = H - shift * np.eye(H.shape[0])
    steps = max(1, int(np.ceil(abs(t) / dt)))
    h = t / steps
    psi = np.linalg.matrix_power(_rk4_step_matrix(Hs, h), steps) @ psi0
    return psi * np.exp(-1j * shift * t)


def rk4_oracle(H, psi0, t: float, dt: float, tol: float = 1e-8) -> np.ndarray:
    """Fixed-step fourth-order Runge-Kutta solution of ``i dpsi/dt = H psi``.

    Independent of the eigendecomposition path; meant for tests only. The mean
    diagonal is removed before stepping and restored as an exact phase, which keeps
    the step error governed by the spread of the spectrum. The run is repeated with
    ``dt/2`` and rejected if the two disagree by more than ``tol``.
    """
    H = np.asarray(H, dtype=complex)
    psi0 = _check_state(psi0, H.shape[0])
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t == 0:
        return psi0.copy()
    coarse = _rk4_run(H, psi0, t, dt)
    fine = _rk4_run(H, psi0, t, dt / 2)
    err = float(np.max(np.abs(coarse - fine)))
    if err > tol:
        raise ValueError(f"RK4 step dt={dt} not converged: halving dt changes the state by {err:.3e} > {tol:.1e}")
    return fine


def rk4_series(H, psi0, times, dt: float) -> EvolutionResult:
    """RK4 trajectory sampled on a uniform grid starting at 0 (oracle for population curves)."""
    H = np.asarray(H, dtype=complex)
    psi0 = _check_state(psi0, H.shape[0])
    times = np.asarray(times, dtype=float)
    spacing = np.diff(times)
    if times[0] != 0 or (spacing.size and not np.allclose(spacing, spacing[0], rtol=1e-9, atol=0)):
        raise ValueError("rk4_series needs a uniform grid starting at t=0")
    shift = float(np.real(np.trace(H))) / H.shape[0]
    Hs = H - shift * np.eye(H.shape[0])
    out = np.empty((times.size, H.shape[0]), dtype=complex)
    out[0] = psi0
    if times.size > 1:
        step = spacing[0]
        n = max(1, int(np.ceil(step / dt)))
        M = np.linalg.matrix_power(_rk4_step_matrix(Hs, step / n), n)
        psi = psi0
        for i in range(1, times.size):
            psi = M @ psi
            out[i] = psi
    out *= np.exp(-1j * shift * times)[:, None]
    return EvolutionResult(times, out)

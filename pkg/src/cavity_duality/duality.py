"""Parameter maps between two coupled cavities (N-1 photons) and an N-site array (one photon).

Also hosts the state-switching (SS) detuning condition and the two-level
diagnostics used to predict switching times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .evolution import eigendecompose
from .fock import TwoCavityState
from .hamiltonians import ArrayParams, SystemParams, average_energy


class SingularSwitchError(ValueError):
    """Initial and target states have the same first-cavity occupation."""


class DegeneracyError(ValueError):
    """Two-level eigenvector assignment is ambiguous."""


@dataclass(frozen=True)
class SwitchSpec:
    initial: TwoCavityState
    target: TwoCavityState
    chi1: float
    chi2: float

    def __post_init__(self):
        if self.initial.total != self.target.total:
            raise ValueError(
                f"photon number not conserved: {self.initial.label} has {self.initial.total}, "
                f"{self.target.label} has {self.target.total}"
            )
        if self.initial.m == self.target.m:
            raise SingularSwitchError(
                f"initial and target share m={self.initial.m}; the switching detuning is undefined"
            )

    @classmethod
    def equal_chi(cls, initial, target, chi: float) -> "SwitchSpec":
        return cls(_state(initial), _state(target), chi, chi)


def _state(s) -> TwoCavityState:
    return s if isinstance(s, TwoCavityState) else TwoCavityState(*s)


@dataclass(frozen=True)
class TwoLevelApprox:
    lambda_s: float
    lambda_n: float
    validity: float  # 1 - min squared overlap of the eigenvectors with |X+>, |X->
    index_s: int = -1
    index_n: int = -1

    @property
    def theta(self) -> float:
        return (self.lambda_s - self.lambda_n) / 2

    @property
    def mean_energy(self) -> float:
        return (self.lambda_s + self.lambda_n) / 2

    @property
    def t_switch(self) -> float:
        split = abs(self.lambda_s - self.lambda_n)
        return math.pi / split if split > 0 else math.inf

    @property
    def switching(self) -> bool:
        return math.isfinite(self.t_switch)


def duality_array_params(N: int, omega1: float, omega2: float, J: float) -> ArrayParams:
    """Linear array dual to two cavities holding ``N-1`` photons."""
    if N < 2:
        raise ValueError(f"duality needs N >= 2, got {N}")
    l = np.arange(1, N + 1)
    omega_tilde = (N - l) * omega1 + (l - 1) * omega2
    b = np.arange(1, N)
    J_tilde = np.sqrt(b * (N - b)) * J
    return ArrayParams(omega_tilde.astype(float), J_tilde, chi_tilde=0.0)


def ss_detuning(spec: SwitchSpec) -> float:
    """Detuning ``omega1 - omega2`` that puts ``|m,n>`` and ``|p,q>`` at equal average energy."""
    m, n = spec.initial.m, spec.initial.n
    p, q = spec.target.m, spec.target.n
    if m == p:
        raise SingularSwitchError("m == p: no detuning defined")
    if spec.chi1 == spec.chi2:
        return 2 * spec.chi1 * (n - p)
    return ((p * (p - 1) - m * (m - 1)) * spec.chi1 + (q * (q - 1) - n * (n - 1)) * spec.chi2) / (m - p)


def ss_system_params(spec: SwitchSpec, J: float, omega1: float = 1.0, eta: float = 0.0) -> SystemParams:
    return SystemParams.from_detuning(
        ss_detuning(spec), omega1=omega1, J=J, chi1=spec.chi1, chi2=spec.chi2, eta=eta
    )


def verify_average_energy_equality(spec: SwitchSpec, omega1: float, omega2: float) -> float:
    params = SystemParams(omega1=omega1, omega2=omega2, chi1=spec.chi1, chi2=spec.chi2)
    return abs(average_energy(spec.initial, params) - average_energy(spec.target, params))


def _kerr_weight(N: int, k: np.ndarray) -> np.ndarray:
    return (N - 1 - k) * (N - 2 - k) + k * (k - 1)


def nonlinear_duality_diagonals(N: int, omega1: float, omega2: float, chi: float) -> np.ndarray:
    """Per-site sums ``omega_tilde + chi_tilde`` making the Kerr array dual to the Kerr pair."""
    if N < 2:
        raise ValueError(f"duality needs N >= 2, got {N}")
    k = np.arange(N)
    m = N - 1 - k
    # same evaluation order as the two-cavity diagonal, so the dual matrices agree bit for bit
    return (m * omega1 + k * omega2 + chi * m * (m - 1) + chi * k * (k - 1)).astype(float)


def array_ss_diagonals(N: int, n: int, q: int, omega1: float, chi: float) -> np.ndarray:
    """Per-site sums for complete transfer from site ``n+1`` to site ``q+1``."""
    if not 0 <= n < q <= N - 1:
        raise ValueError(f"need 0 <= n < q <= N-1, got n={n}, q={q}, N={N}")
    k = np.arange(N)
    return ((N - 1) * omega1 - 2 * k * chi * (n + q + 1 - N) + _kerr_weight(N, k) * chi).astype(float)


def _split_exactly(total: float, part: float) -> float:
    # rest such that rest + part == total in floating point, when a nearby one exists
    rest = total - part
    for _ in range(4):
        err = (rest + part) - total
        if err == 0:
            break
        rest = np.nextafter(rest, -np.inf if err > 0 else np.inf)
    return rest


def kerr_array_params(N: int, diagonal_sums, chi: float, J: float, eta=0.0) -> ArrayParams:
    """Split per-site sums into ``chi_tilde = [(N-1-k)(N-2-k) + k(k-1)] chi`` and the rest."""
    sums = np.asarray(diagonal_sums, dtype=float)
    if sums.shape != (N,):
        raise ValueError(f"need {N} diagonal sums, got shape {sums.shape}")
    chi_tilde = _kerr_weight(N, np.arange(N)) * chi
    omega_tilde = np.array([_split_exactly(s, c) for s, c in zip(sums, chi_tilde)])
    b = np.arange(1, N)
    return ArrayParams(omega_tilde, np.sqrt(b * (N - b)) * J, chi_tilde=chi_tilde, eta=eta)


def two_level_parameters(H, i: int, j: int, degeneracy_tol: float = 1e-12) -> TwoLevelApprox:
    """Eigenpair data of ``H`` closest to ``(|i> +/- |j>)/sqrt(2)``.

    ``lambda_s`` belongs to the eigenvector with the largest overlap onto the
    symmetric combination, ``lambda_n`` to the antisymmetric one. If the two best
    candidates are degenerate (e.g. ``J = 0``) the pair does not switch and
    ``t_switch`` is infinite.
    """
    if i == j:
        raise ValueError("two-level analysis needs two distinct basis states")
    spec = eigendecompose(H)
    V, w = spec.eigenvectors, spec.eigenvalues
    weight = np.abs(V[i]) ** 2 + np.abs(V[j]) ** 2
    top = np.argsort(-weight, kind="stable")[:2]
    scale = max(1.0, float(np.max(np.abs(w))))
    if abs(w[top[0]] - w[top[1]]) <= degeneracy_tol * scale:
        lam = float(w[top[0]])
        return TwoLevelApprox(lam, lam, float(1 - min(weight[top])), int(top[0]), int(top[1]))

    plus = np.abs(V[i] + V[j]) ** 2 / 2
    minus = np.abs(V[i] - V[j]) ** 2 / 2
    ks, kn = int(np.argmax(plus)), int(np.argmax(minus))
    if ks == kn:
        raise DegeneracyError(
            f"eigenvector {ks} has the largest overlap with both (|{i}> + |{j}>) and (|{i}> - |{j}>)"
        )
    validity = 1.0 - min(plus[ks], minus[kn])
    return TwoLevelApprox(float(w[ks]), float(w[kn]), float(validity), ks, kn)

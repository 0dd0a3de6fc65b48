"""Basis states for the two-cavity photon-number sector and the array single-excitation sector.

Index conventions (fixed once, used everywhere):

* two-cavity sector with ``T`` photons: index ``i`` (0-based) holds ``|T-i, i>``,
  i.e. ``i`` is the photon count of the second cavity.
* array with ``N`` sites: index ``l-1`` holds one photon in site ``l`` (1-based).
  With the vacuum included it sits at index 0 and sites are shifted by one.

Under the duality the two coincide: sector index ``n`` <-> array site ``n+1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


@dataclass(frozen=True, order=True)
class TwoCavityState:
    """Fock state ``|m, n>`` of two cavities."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError(f"photon numbers must be non-negative, got ({self.m}, {self.n})")

    @property
    def total(self) -> int:
        return self.m + self.n

    @property
    def label(self) -> str:
        return f"m{self.m}n{self.n}"

    @classmethod
    def parse(cls, text: str) -> "TwoCavityState":
        """Parse ``"5,0"`` or ``"m5n0"``."""
        text = text.strip()
        if text.startswith("m") and "n" in text:
            m, n = text[1:].split("n")
        else:
            m, n = text.split(",")
        return cls(int(m), int(n))


class _Vacuum(Enum):
    VACUUM = "vac"

    @property
    def label(self) -> str:
        return "vac"

    def __repr__(self):
        return "VACUUM"


VACUUM = _Vacuum.VACUUM


@dataclass(frozen=True, order=True)
class ArraySite:
    """One photon in site ``l`` (1-based) of the array."""

    l: int

    def __post_init__(self):
        if self.l < 1:
            raise ValueError(f"site index is 1-based, got {self.l}")

    @property
    def label(self) -> str:
        return f"site{self.l}"


class BasisKind(str, Enum):
    TWO_CAVITY = "two-cavity"
    ARRAY = "array"
    ARRAY_WITH_VACUUM = "array+vacuum"


@dataclass(frozen=True)
class SectorBasis:
    kind: BasisKind
    size: int  # total photons T for the two-cavity sector, site count N for the array
    states: tuple

    def __len__(self):
        return len(self.states)

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.states]

    def state_of(self, index: int):
        if not 0 <= index < len(self.states):
            raise IndexError(f"basis index {index} out of range for dimension {len(self.states)}")
        return self.states[index]

    def index_of(self, state) -> int:
        if self.kind is BasisKind.TWO_CAVITY:
            if not isinstance(state, TwoCavityState) or state.total != self.size:
                raise KeyError(f"{state!r} is not in the {self.size}-photon sector")
            return state.n
        offset = 1 if self.kind is BasisKind.ARRAY_WITH_VACUUM else 0
        if state is VACUUM and offset:
            return 0
        if not isinstance(state, ArraySite) or state.l > self.size:
            raise KeyError(f"{state!r} is not in this {self.size}-site array basis")
        return state.l - 1 + offset


def sector_basis(total_photons: int) -> SectorBasis:
    if total_photons < 0:
        raise ValueError(f"total photon number must be >= 0, got {total_photons}")
    T = total_photons
    states = tuple(TwoCavityState(T - i, i) for i in range(T + 1))
    return SectorBasis(BasisKind.TWO_CAVITY, T, states)


def array_basis(N: int, include_vacuum: bool = False) -> SectorBasis:
    if N < 1:
        raise ValueError(f"array needs at least one site, got N={N}")
    sites = tuple(ArraySite(l) for l in range(1, N + 1))
    if include_vacuum:
        return SectorBasis(BasisKind.ARRAY_WITH_VACUUM, N, (VACUUM,) + sites)
    return SectorBasis(BasisKind.ARRAY, N, sites)

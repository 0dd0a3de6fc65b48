import pytest
from hypothesis import given, strategies as st

from cavity_duality.fock import (
    VACUUM,
    ArraySite,
    BasisKind,
    TwoCavityState,
    array_basis,
    sector_basis,
)


def test_sector_one_photon():
    assert sector_basis(1).states == (TwoCavityState(1, 0), TwoCavityState(0, 1))


def test_sector_empty():
    b = sector_basis(0)
    assert b.dim == 1
    assert b.states == (TwoCavityState(0, 0),)


def test_sector_five_photons_index_four_is_one_four():
    b = sector_basis(5)
    assert b.state_of(4) == TwoCavityState(1, 4)
    assert b.index_of(TwoCavityState(5, 0)) == 0


def test_array_without_vacuum():
    b = array_basis(3)
    assert b.states == (ArraySite(1), ArraySite(2), ArraySite(3))
    assert b.kind is BasisKind.ARRAY


def test_array_with_vacuum_puts_vacuum_first():
    b = array_basis(2, include_vacuum=True)
    assert b.dim == 3
    assert b.state_of(0) is VACUUM
    assert b.index_of(ArraySite(1)) == 1
    assert b.labels == ["vac", "site1", "site2"]


def test_six_site_array_matches_five_photon_sector():
    assert array_basis(6).dim == sector_basis(5).dim == 6


def test_labels():
    assert sector_basis(2).labels == ["m2n0", "m1n1", "m0n2"]
    assert TwoCavityState.parse("5,0") == TwoCavityState(5, 0)
    assert TwoCavityState.parse("m1n4") == TwoCavityState(1, 4)


@pytest.mark.parametrize("bad", [(-1, 2), (3, -1)])
def test_negative_occupation_rejected(bad):
    with pytest.raises(ValueError):
        TwoCavityState(*bad)


def test_invalid_sizes():
    with pytest.raises(ValueError):
        sector_basis(-1)
    with pytest.raises(ValueError):
        array_basis(0)
    with pytest.raises(ValueError):
        ArraySite(0)


def test_foreign_states_rejected():
    with pytest.raises(KeyError):
        sector_basis(3).index_of(TwoCavityState(1, 1))
    with pytest.raises(KeyError):
        array_basis(3).index_of(ArraySite(4))
    with pytest.raises(KeyError):
        array_basis(3).index_of(VACUUM)
    with pytest.raises(IndexError):
        sector_basis(3).state_of(4)


@given(st.integers(0, 60))
def test_sector_round_trip(T):
    b = sector_basis(T)
    assert b.dim == T + 1
    for i in range(b.dim):
        s = b.state_of(i)
        assert s.total == T
        assert b.index_of(s) == i


@given(st.integers(1, 60), st.booleans())
def test_array_round_trip(N, vac):
    b = array_basis(N, include_vacuum=vac)
    assert b.dim == N + vac
    for i in range(b.dim):
        assert b.index_of(b.state_of(i)) == i


@given(st.integers(1, 80))
def test_duality_dimension(N):
    assert sector_basis(N - 1).dim == array_basis(N).dim

import math

import numpy as np
import pytest

from cavity_duality.duality import SwitchSpec, ss_detuning
from cavity_duality.fock import TwoCavityState
from cavity_duality.protocols import (
    array_transfer_experiment,
    avg_energy_curve,
    delta_scan,
    energy_partners,
    homogeneous_chain_experiment,
    kerr_switch_experiment,
    linear_swap_experiment,
    noon_generation,
    qubit_transfer,
    scan_peaks,
    ss_array_params,
    switch_window,
)

FIG1_J = 1e-2 * math.pi
FIG2_J = math.sqrt(2) / 10


def check_report(report):
    assert 0 <= report.max_target <= 1 + 1e-12
    assert report.leakage >= 0
    np.testing.assert_allclose(report.result.norms, 1.0, atol=1e-10)


@pytest.fixture(scope="module")
def fig4():
    return kerr_switch_experiment(SwitchSpec.equal_chi((5, 0), (1, 4), 0.1), J=0.035)


# -- linear swap ------------------------------------------------------------------------------


@pytest.mark.parametrize("T", [1, 3, 5])
def test_swap_peaks_at_fifty(T):
    r = linear_swap_experiment(T, FIG1_J)
    check_report(r)
    assert r.max_target == pytest.approx(1.0, abs=1e-9)
    assert r.t_max == pytest.approx(50.0, abs=1e-9)


def test_swap_without_coupling():
    r = linear_swap_experiment(3, 0.0, window=100.0)
    assert r.max_target == pytest.approx(0.0, abs=1e-30)
    with pytest.raises(ValueError):
        linear_swap_experiment(3, 0.0)


# -- homogeneous chain ----------------------------------------------------------------------------


def test_chain_three_sites_complete():
    r = homogeneous_chain_experiment(3, FIG2_J)
    check_report(r)
    assert r.max_target >= 0.999
    assert r.extras["closed_form_error"] <= 1e-8


def test_chain_maxima_decrease():
    maxima = [homogeneous_chain_experiment(N, FIG2_J, window=200.0).max_target for N in (3, 4, 5, 10)]
    assert all(a > b for a, b in zip(maxima, maxima[1:]))


def test_chain_two_sites():
    J = 0.3
    r = homogeneous_chain_experiment(2, J, window=math.pi / (2 * J), n_times=101)
    assert r.max_target == pytest.approx(1.0, abs=1e-12)
    assert r.t_max == pytest.approx(math.pi / (2 * J))


# -- Kerr switching ----------------------------------------------------------------------------------


def test_fig4_switching(fig4):
    check_report(fig4)
    tl = fig4.extras["two_level"]
    assert fig4.max_target >= 0.95
    assert tl.validity <= 0.05
    assert fig4.extras["period_error"] <= 0.05


def test_switch_blocked_off_resonance():
    spec = SwitchSpec.equal_chi((5, 0), (1, 4), 0.1)
    r = kerr_switch_experiment(spec, J=0.035, delta=ss_detuning(spec) + 10 * 0.1, window=15000.0)
    assert r.max_target <= 0.1


def test_full_swap_at_zero_detuning():
    r = kerr_switch_experiment(SwitchSpec.equal_chi((5, 0), (0, 5), 0.2), J=0.05)
    assert r.scenario["delta"] == 0
    assert r.max_target >= 0.99


def test_eta_does_not_change_kerr_populations(fig4):
    r = kerr_switch_experiment(SwitchSpec.equal_chi((5, 0), (1, 4), 0.1), J=0.035, eta=1.1)
    np.testing.assert_allclose(r.result.populations, fig4.result.populations, atol=1e-10)


@pytest.mark.parametrize("N,n,q", [(4, 0, 2), (6, 1, 3), (6, 0, 5), (5, 2, 4)])
def test_two_cavity_and_array_traces_coincide(N, n, q):
    chi, J = 0.2, 0.05
    spec = SwitchSpec.equal_chi((N - 1 - n, n), (N - 1 - q, q), chi)
    window = 300.0
    pair = kerr_switch_experiment(spec, J=J, window=window, n_times=301)
    array = array_transfer_experiment(ss_array_params(N, n + 1, q + 1, chi, J), n + 1, q + 1, window, n_times=301)
    np.testing.assert_allclose(pair.result.populations, array.result.populations, atol=1e-10)


# -- detuning scan ----------------------------------------------------------------------------------------


def test_scan_midway_all_small():
    targets = [(p, 5 - p) for p in range(5)]
    points = delta_scan((5, 0), targets, [-1.4, -1.0, -0.6, -0.2], chi=0.2, J=0.05)
    for point in points:
        assert max(point.maxima.values()) <= 0.5


def test_scan_hits_predicted_resonance_for_one_target():
    deltas = np.round(np.arange(-0.6, -0.2 + 1e-9, 0.02), 12)
    points = delta_scan((5, 0), [(1, 4)], deltas, chi=0.2, J=0.05)
    d, height = scan_peaks(points)["m1n4"]
    assert d == pytest.approx(-0.4, abs=0.02 + 1e-12)
    assert height >= 0.95


def test_linear_limit_resonances_collapse():
    for p in range(5):
        assert ss_detuning(SwitchSpec.equal_chi((5, 0), (p, 5 - p), 0.0)) == 0
    points = delta_scan((5, 0), [(0, 5)], [-0.2, -0.1, 0.0, 0.1, 0.2], chi=0.0, J=0.05, window=200.0)
    assert scan_peaks(points)["m0n5"][0] == 0.0


def test_switch_window_rejects_decoupled():
    with pytest.raises(ValueError):
        switch_window((5, 0), (1, 4), 0.2, 0.0)


# -- NOON ------------------------------------------------------------------------------------------------


def test_noon_single_photon_exact():
    r = noon_generation(1, 0.0, 0.1)
    assert r.t == pytest.approx(math.pi / 4 / 0.1)
    assert r.fidelity == pytest.approx(1.0, abs=1e-12)


def test_noon_five_photons():
    r = noon_generation(5, 0.2, 0.05)
    assert r.fidelity >= 0.95
    assert r.optimal_fidelity >= r.fidelity - 1e-12
    p0, p5 = abs(r.state[0]) ** 2, abs(r.state[5]) ** 2
    assert abs(p0 - 0.5) <= r.two_level.validity + 0.01
    assert abs(p5 - 0.5) <= r.two_level.validity + 0.01


def test_noon_phase_follows_eta():
    a = noon_generation(5, 0.2, 0.05)
    b = noon_generation(5, 0.2, 0.05, eta=math.pi / 3)
    np.testing.assert_allclose(np.abs(a.state) ** 2, np.abs(b.state) ** 2, atol=1e-10)
    assert b.phi - a.phi == pytest.approx(-5 * math.pi / 3)
    assert b.fidelity == pytest.approx(a.fidelity, abs=1e-9)


# -- qubit transfer ------------------------------------------------------------------------------------------


@pytest.fixture(scope="module")
def n4_array():
    return ss_array_params(4, 1, 3, chi=0.2, J=0.05)


def test_qubit_vacuum_stationary(n4_array):
    r = qubit_transfer(1.0, 0.0, 1, 3, n4_array)
    assert r.fidelity == pytest.approx(1.0, abs=1e-12)


def test_qubit_superposition(n4_array):
    r = qubit_transfer(1 / math.sqrt(2), 1 / math.sqrt(2), 1, 3, n4_array)
    assert r.fidelity >= 0.95
    assert r.target_population >= 0.95


def test_qubit_phase_mis_set(n4_array):
    good = qubit_transfer(1 / math.sqrt(2), 1j / math.sqrt(2), 1, 3, n4_array)
    # shifting eta by pi/2 over two bonds flips the transferred amplitude's sign
    bad = qubit_transfer(1 / math.sqrt(2), 1j / math.sqrt(2), 1, 3, n4_array, eta=good.eta + math.pi / 2)
    assert bad.target_population == pytest.approx(good.target_population, abs=1e-10)
    assert bad.fidelity < 0.05
    assert good.fidelity - bad.fidelity > 0.9


def test_qubit_rejects_unnormalized(n4_array):
    with pytest.raises(ValueError):
        qubit_transfer(1.0, 1.0, 1, 3, n4_array)
    with pytest.raises(ValueError):
        qubit_transfer(1.0, 0.0, 2, 2, n4_array)


# -- average energy ------------------------------------------------------------------------------------------


def test_avg_energy_empty_sector():
    np.testing.assert_array_equal(avg_energy_curve(0, 0.3, 0.1), [[0.0, 0.0]])


def test_avg_energy_fig3a():
    curve = avg_energy_curve(28, 0.0, 0.1)
    np.testing.assert_allclose(curve[:, 1], curve[::-1, 1], atol=1e-12)
    partners = energy_partners(28, 0.0, 0.1)
    for m, ps in partners.items():
        assert ps == ([] if m == 14 else [28 - m])


def test_avg_energy_fig3b():
    partners = energy_partners(28, -2.0, 0.1)
    lonely = sorted(m for m, ps in partners.items() if not ps)
    assert lonely == list(range(10)) + [19]
    assert all(len(ps) <= 1 for ps in partners.values())

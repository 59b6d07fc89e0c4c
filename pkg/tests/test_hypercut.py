from itertools import product

import numpy as np
import pytest

from hoim.hypercut import (
    CutSystem,
    count_cut,
    default_constants,
    pair_factor,
    phase_penalty,
    snap_to_labels,
    wrap_angle,
)
from hoim.instances import CnfInstance, Hypergraph, generate_random_hypergraph
from hoim.naesat import NaeSystem, snap_to_spins
from hoim.oracle import finite_diff_gradient
from hoim.polynomial import count_satisfied

SIGMA = 1e-3


def label_state(labels, k):
    return 2.0 * np.pi * np.asarray(labels, dtype=float) / k


def is_uncut(labels, edge):
    values = [labels[n - 1] for n in edge]
    return all(v == values[0] for v in values)


def test_wrap_angle_principal_range():
    x = np.array([np.pi, -np.pi, 0.0, 3 * np.pi / 2, -3 * np.pi / 2, 2 * np.pi])
    w = wrap_angle(x)
    assert np.all((w > -np.pi) & (w <= np.pi))
    assert w[0] == np.pi and w[1] == np.pi  # -pi maps onto +pi
    assert np.allclose(w[3:], [-np.pi / 2, np.pi / 2, 0.0])


def test_phase_penalty_k3_shifts_to_minus_one():
    f = phase_penalty(2 * np.pi / 3, 3, SIGMA)
    assert abs(f - np.pi / 3) < 1e-9
    assert abs(np.cos(2 * np.pi / 3 + f) + 1.0) < 1e-9


def test_phase_penalty_zero_at_origin():
    assert abs(phase_penalty(0.0, 3, SIGMA)) < 1e-12
    assert abs(phase_penalty(0.0, 4, SIGMA)) < 1e-12


def test_phase_penalty_k4_negative_bump():
    f = phase_penalty(-np.pi / 2, 4, SIGMA)
    assert abs(f + np.pi / 2) < 1e-9
    assert abs(np.cos(-np.pi / 2 + f) + 1.0) < 1e-9


def test_phase_penalty_vanishes_for_two_partitions():
    # for K = 2 every bump amplitude is pi - pi = 0
    deltas = np.linspace(-np.pi, np.pi, 101)
    assert np.all(phase_penalty(deltas, 2, SIGMA) == 0.0)


def test_phase_penalty_antisymmetric():
    deltas = np.linspace(-3, 3, 41)
    for k in (3, 4, 5):
        f = phase_penalty(deltas, k, SIGMA)
        assert np.allclose(f, -phase_penalty(-deltas, k, SIGMA), atol=1e-12)


def make_system(graph, k, sigma=SIGMA, coupling=None, harmonic=None):
    return CutSystem.from_hypergraph(graph, k, coupling=coupling, harmonic=harmonic, sigma=sigma)


def test_pair_factor_lattice_values():
    graph = Hypergraph(2, ((1, 2),))
    for k in (2, 3, 4):
        system = make_system(graph, k)
        for ki in range(k):
            for kj in range(k):
                value = pair_factor(2 * np.pi * ki / k, 2 * np.pi * kj / k, system)
                want = 1.0 if ki == kj else 0.0
                assert abs(value - want) < 1e-6


def test_pair_factor_k2_is_quadratic_maxcut_factor():
    graph = Hypergraph(2, ((1, 2),))
    system = make_system(graph, 2)
    rng = np.random.default_rng(0)
    for _ in range(20):
        a, b = rng.uniform(0, 2 * np.pi, 2)
        assert pair_factor(a, b, system) == pytest.approx((1 + np.cos(a - b)) / 2, abs=1e-12)


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("size", [2, 3, 4])
def test_hyperedge_indicator_matches_discrete_predicate(k, size):
    edge = tuple(range(1, size + 1))
    graph = Hypergraph(size, (edge,))
    system = make_system(graph, k)
    for labels in product(range(k), repeat=size):
        phi = label_state(labels, k)
        value = system.hyperedge_indicator(edge, phi)
        want = 1.0 if is_uncut(labels, edge) else 0.0
        assert abs(value - want) < 1e-6


def test_count_cut_basics():
    graph = Hypergraph(3, ((1, 2, 3),))
    assert count_cut(graph, [0, 1, 0]) == 1
    assert count_cut(graph, [1, 1, 1]) == 0


def test_count_cut_matches_indicator_sum_exhaustive():
    graph = generate_random_hypergraph(6, 10, 2, 4, seed=3)
    for k in (2, 3):
        system = make_system(graph, k)
        for labels in product(range(k), repeat=6):
            phi = label_state(labels, k)
            indicator_sum = sum(system.hyperedge_indicator(e, phi) for e in graph.hyperedges)
            assert abs(indicator_sum - (10 - count_cut(graph, labels))) < 1e-6 * 10


def test_lattice_energy_identity():
    graph = generate_random_hypergraph(10, 20, 2, 4, seed=1)
    rng = np.random.default_rng(4)
    for k in (2, 3, 4):
        system = make_system(graph, k)
        for _ in range(30):
            labels = rng.integers(0, k, 10)
            energy = system.energy(label_state(labels, k))
            expected = system.coupling * (20 - count_cut(graph, labels)) \
                - (system.harmonic / k) * 10
            assert abs(energy - expected) < 1e-6 * 20


def test_all_edges_cut_energy_value():
    # two partitions, every edge cut: E = -(A_s/2) * N with A_s = 10, N = 10
    graph = Hypergraph(10, tuple((i, i + 1) for i in range(1, 10)))
    system = make_system(graph, 2)
    labels = np.arange(10) % 2
    assert abs(system.energy(label_state(labels, 2)) - (-50.0)) < 1e-6


def test_global_rotation_symmetry_at_lattice():
    graph = generate_random_hypergraph(8, 12, 2, 4, seed=5)
    rng = np.random.default_rng(6)
    for k in (2, 3, 4):
        system = make_system(graph, k)
        labels = rng.integers(0, k, 8)
        phi = label_state(labels, k)
        rotated = np.mod(phi + 2 * np.pi / k, 2 * np.pi)
        assert system.energy(rotated) == pytest.approx(system.energy(phi), abs=1e-6)


def test_drift_zero_when_all_phases_equal():
    graph = generate_random_hypergraph(8, 12, 2, 4, seed=7)
    for k in (2, 3, 4):
        system = make_system(graph, k)
        drift = system.drift(np.full(8, 2 * np.pi / k))
        assert np.max(np.abs(drift)) < 1e-9


@pytest.mark.parametrize("k", [2, 3, 4])
def test_drift_matches_frozen_penalty_gradient(k):
    graph = generate_random_hypergraph(8, 12, 2, 4, seed=8)
    system = make_system(graph, k)
    rng = np.random.default_rng(k)
    for _ in range(100):
        state = rng.uniform(0, 2 * np.pi, 8)
        frozen = system.pair_penalties(state)
        fd = finite_diff_gradient(lambda x: system.energy(x, penalties=frozen), state, 1e-6)
        drift = system.drift(state)
        assert np.max(np.abs(drift + fd)) / np.max(np.abs(drift)) < 1e-4


def test_leave_one_out_equals_quotient_form():
    # wherever no pair factor vanishes, drift agrees with the form that
    # divides the edge indicator by the pair's own factor
    graph = generate_random_hypergraph(8, 12, 2, 4, seed=9)
    for k in (2, 3, 4):
        system = make_system(graph, k)
        rng = np.random.default_rng(10 + k)
        checked = 0
        while checked < 20:
            phi = rng.uniform(0, 2 * np.pi, 8)
            deltas, penalties, factors = system._pair_geometry(phi)
            if np.min(factors[system._mask]) <= 1e-9:
                continue
            checked += 1
            indicators = factors.prod(axis=-1)
            drift_quotient = -system.harmonic * np.sin(k * phi)
            for row, edge in enumerate(graph.hyperedges):
                col = 0
                for a in range(len(edge)):
                    for b in range(a + 1, len(edge)):
                        gain = 0.5 * system.coupling \
                            * np.sin(deltas[row, col] + penalties[row, col]) \
                            * indicators[row] / factors[row, col]
                        drift_quotient[edge[a] - 1] += gain
                        drift_quotient[edge[b] - 1] -= gain
                        col += 1
            drift = system.drift(phi)
            rel = np.max(np.abs(drift - drift_quotient)) / np.max(np.abs(drift))
            assert rel < 1e-8


def test_three_node_edge_drift_expanded_form():
    # single 3-node edge: drift_i = (A/2) [ sin(d_ij + f) * pf_ik * pf_jk
    #                                    + sin(d_ik + f) * pf_ij * pf_jk ] - A_s sin(K phi_i)
    graph = Hypergraph(3, ((1, 2, 3),))
    system = make_system(graph, 3)
    rng = np.random.default_rng(11)
    for _ in range(20):
        phi = rng.uniform(0, 2 * np.pi, 3)

        def pf(a, b):
            return pair_factor(phi[a], phi[b], system)

        def term(a, b):
            d = wrap_angle(phi[a] - phi[b])
            return np.sin(d + phase_penalty(d, 3, SIGMA))

        a = system.coupling
        expected = np.array([
            0.5 * a * (term(0, 1) * pf(0, 2) * pf(1, 2) + term(0, 2) * pf(0, 1) * pf(1, 2)),
            0.5 * a * (term(1, 0) * pf(1, 2) * pf(0, 2) + term(1, 2) * pf(0, 1) * pf(0, 2)),
            0.5 * a * (term(2, 0) * pf(0, 1) * pf(1, 2) + term(2, 1) * pf(0, 1) * pf(0, 2)),
        ]) - system.harmonic * np.sin(3 * phi)
        assert np.allclose(system.drift(phi), expected, atol=1e-9)


def test_snap_to_labels():
    assert np.array_equal(snap_to_labels([0.01, 2.10, 4.20], 3), [0, 1, 2])
    # ties go to the smaller label
    assert np.array_equal(snap_to_labels([np.pi / 3], 3), [0])
    assert np.array_equal(snap_to_labels([np.pi], 3), [1])


def test_snap_to_labels_k2_matches_spin_snap_off_ties():
    rng = np.random.default_rng(12)
    phi = rng.uniform(0, 2 * np.pi, 50)
    labels = snap_to_labels(phi, 2)
    spins = snap_to_spins(phi)
    assert np.array_equal(labels, (1 - spins) // 2)


def test_k2_energy_reduces_to_pair_system_at_lattice():
    # a 2-uniform hypergraph is a MaxCut instance; at lattice states the
    # cut energy and the all-positive width-2 clause system agree up to
    # the affine offsets of their respective identities
    graph = generate_random_hypergraph(8, 12, 2, 2, seed=13)
    inst = CnfInstance(8, tuple(tuple(e) for e in graph.hyperedges))
    cut_system = make_system(graph, 2)
    nae_system = NaeSystem.from_instance(inst, coupling=1.0, harmonic=5.0)
    rng = np.random.default_rng(14)
    for _ in range(20):
        labels = rng.integers(0, 2, 8)
        phi = label_state(labels, 2)
        spins = 1 - 2 * labels
        uncut = 12 - count_cut(graph, labels)
        # same discrete count drives both energies
        assert uncut == 12 - count_satisfied(inst, spins)
        e_cut = cut_system.energy(phi)
        e_nae = nae_system.energy(phi)
        assert abs(e_cut - (cut_system.coupling * uncut - (cut_system.harmonic / 2) * 8)) < 1e-6
        assert abs(e_nae - (2.0 * uncut - (5.0 / 2) * 8)) < 1e-12


def test_sigma_invariant_enforced():
    graph = Hypergraph(3, ((1, 2, 3),))
    with pytest.raises(ValueError, match="sigma"):
        CutSystem(hypergraph=graph, k_partitions=4, coupling=10.0, harmonic=10.0, sigma=0.2)
    with pytest.raises(ValueError):
        CutSystem(hypergraph=graph, k_partitions=1, coupling=10.0, harmonic=10.0)


def test_default_constants_flag():
    assert default_constants(2) == (15.0, 10.0, True)
    assert default_constants(3) == (15.0, 10.0, True)
    assert default_constants(4) == (10.0, 10.0, True)
    a, a_s, tabulated = default_constants(5)
    assert (a, a_s) == (10.0, 10.0) and not tabulated


def test_energy_drift_batched_agree_with_single():
    graph = generate_random_hypergraph(6, 10, 2, 4, seed=15)
    system = make_system(graph, 3)
    rng = np.random.default_rng(16)
    batch = rng.uniform(0, 2 * np.pi, (4, 6))
    energies = system.energy(batch)
    drifts = system.drift(batch)
    for row in range(4):
        assert energies[row] == pytest.approx(system.energy(batch[row]), abs=1e-12)
        assert np.allclose(drifts[row], system.drift(batch[row]), atol=1e-12)

import itertools
import math

import numpy as np
import pytest

from dissom import (
    ConfigurationError,
    DissimilarityMatrix,
    KernelSchedule,
    MapTopology,
    ReferentAssignment,
    TrainedMap,
    adequacy,
    assign,
    initialize,
    represent,
    total_cost,
    train,
)
from dissom.synth import geo_intervals
from dissom.trainer import adequacy_matrix, cost_by_neuron, initial_referents, neuron_scores

import oracles

E1 = math.exp(-1)


@pytest.fixture
def chain():
    # items: x (0), a (1), b (2); d2(x, a) = 4, d2(x, b) = 9
    D = np.array([[0.0, 4.0, 9.0], [4.0, 0.0, 1.0], [9.0, 1.0, 0.0]])
    state = ReferentAssignment(np.array([[1], [2]]), np.zeros(3, dtype=int))
    return D, state, MapTopology(1, 2)


def random_squared(rng, n, dim=2):
    pts = rng.uniform(0, 10, (n, dim))
    return ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)


def test_adequacy_single_neuron_self_referent():
    D = np.array([[0.0, 2.0], [2.0, 0.0]])
    state = ReferentAssignment(np.array([[0]]), np.zeros(2, dtype=int))
    assert adequacy(0, 0, state, D, MapTopology(1, 1), 1.0) == 0.0


def test_adequacy_chain(chain):
    D, state, topo = chain
    assert adequacy(0, 0, state, D, topo, 1.0) == pytest.approx(4 + E1 * 9, rel=1e-12)
    assert adequacy(0, 0, state, D, topo, 1.0) == pytest.approx(7.3110, abs=1e-4)
    assert adequacy(0, 1, state, D, topo, 1.0) == pytest.approx(10.4715, abs=1e-4)
    assert assign(state.referents, D, topo, 1.0)[0] == 0


def test_cost_of_chain_item(chain):
    D, state, topo = chain
    state.winners = assign(state.referents, D, topo, 1.0)
    adeq = adequacy_matrix(D, state.referents, topo.kernel_matrix(1.0))
    assert adeq[0, state.winners[0]] == pytest.approx(7.3110, abs=1e-4)
    one_item = DissimilarityMatrix(np.zeros((1, 1)), ("x",))
    solo = ReferentAssignment(np.array([[0]]), np.array([0]))
    assert total_cost(solo, one_item, MapTopology(1, 1), 1.0) == 0.0


def test_adequacy_matrix_matches_literal_sum():
    rng = np.random.default_rng(0)
    D = random_squared(rng, 15)
    topo = MapTopology(2, 3)
    referents = rng.integers(0, 15, (6, 2))
    T = 1.3
    adeq = adequacy_matrix(D, referents, topo.kernel_matrix(T))
    K = oracles.kernel_table(2, 3, T)
    for i in range(15):
        for c in range(6):
            expected = oracles.adequacy_literal(D.tolist(), referents.tolist(), K, i, c)
            assert adeq[i, c] == pytest.approx(expected, rel=1e-12)


def test_adequacy_index_errors(chain):
    D, state, topo = chain
    with pytest.raises(IndexError):
        adequacy(3, 0, state, D, topo, 1.0)
    with pytest.raises(IndexError):
        adequacy(0, 2, state, D, topo, 1.0)


def test_assign_tie_goes_to_smallest_neuron():
    rng = np.random.default_rng(1)
    D = random_squared(rng, 10)
    winners = assign(np.array([[3], [3], [3], [3]]), D, MapTopology(2, 2), 0.8)
    assert winners.tolist() == [0] * 10


def test_assign_order_independent():
    rng = np.random.default_rng(2)
    D = random_squared(rng, 30)
    topo = MapTopology(2, 3)
    refs = rng.permutation(30)[:6][:, None]
    winners = assign(refs, D, topo, 1.0)
    perm = rng.permutation(30)
    inv = np.argsort(perm)
    Dp = D[np.ix_(perm, perm)]
    winners_p = assign(inv[refs], Dp, topo, 1.0)
    assert np.array_equal(winners_p, winners[perm])


def test_represent_examples():
    D = np.array([[0.0, 1, 16], [1, 0, 9], [16, 9, 0]])
    topo = MapTopology(1, 1)
    scores = neuron_scores(np.zeros(3, dtype=int), D, topo.kernel_matrix(1.0))
    assert scores.tolist() == [[17.0, 10.0, 25.0]]
    assert represent(np.zeros(3, dtype=int), D, topo, 1.0).tolist() == [[1]]
    same = np.zeros((5, 5))
    assert represent(np.array([0, 1, 2, 3, 0]), same, MapTopology(2, 2), 1.0)[:, 0].tolist() == [0] * 4


@pytest.mark.parametrize("q", [2, 3])
def test_represent_q_subsets_are_optimal(q):
    rng = np.random.default_rng(q)
    D = random_squared(rng, 9)
    topo = MapTopology(1, 3)
    T = 0.9
    winners = rng.integers(0, 3, 9)
    got = represent(winners, D, topo, T, q=q)
    K = oracles.kernel_table(1, 3, T)
    for r in range(3):
        best = min(itertools.combinations(range(9), q),
                   key=lambda s: oracles.neuron_cost(D.tolist(), winners.tolist(), K, r, s))
        assert sorted(got[r].tolist()) == sorted(best)


def test_represent_never_worse_than_previous():
    rng = np.random.default_rng(3)
    D = random_squared(rng, 40)
    topo = MapTopology(2, 2)
    state = initialize(D, topo, 1, seed=0, T=1.0)
    before = cost_by_neuron(state, D, topo, 1.0)
    state.referents = represent(state.winners, D, topo, 1.0, previous=state.referents)
    after = cost_by_neuron(state, D, topo, 1.0)
    assert np.all(after <= before + 1e-9 * np.abs(before))


def test_represent_keeps_previous_for_isolated_neuron():
    rng = np.random.default_rng(4)
    D = random_squared(rng, 12)
    topo = MapTopology(1, 3)
    winners = np.zeros(12, dtype=int)  # neurons 1 and 2 win nothing
    previous = np.array([[5], [6], [7]])
    new = represent(winners, D, topo, 0.1, cutoff=1e-12, previous=previous)
    assert new[1:, 0].tolist() == [6, 7]


@pytest.mark.parametrize("q", [1, 2])
def test_cost_item_major_equals_neuron_major(q):
    rng = np.random.default_rng(5)
    for _ in range(10):
        D = random_squared(rng, 50)
        topo = MapTopology(3, 2)
        T = float(rng.uniform(0.3, 3))
        state = ReferentAssignment(rng.integers(0, 50, (6, q)), rng.integers(0, 6, 50))
        E = total_cost(state, D, topo, T)
        assert cost_by_neuron(state, D, topo, T).sum() == pytest.approx(E, rel=1e-9)


def test_initialize():
    topo = MapTopology(2, 3)
    refs = initial_referents(6, topo, 1, seed=0)
    assert sorted(refs[:, 0].tolist()) == list(range(6))
    assert np.array_equal(initial_referents(100, topo, 2, 7), initial_referents(100, topo, 2, 7))
    big = MapTopology(10, 3)
    assert not np.array_equal(initial_referents(100, big, 1, 0), initial_referents(100, big, 1, 1))
    D = random_squared(np.random.default_rng(0), 20)
    state = initialize(D, topo, 2, seed=3, T=1.0)
    assert state.referents.shape == (6, 2)
    assert len(set(state.referents.ravel().tolist())) == 12
    assert np.array_equal(state.winners, assign(state.referents, D, topo, 1.0))


def test_initialize_not_enough_items():
    with pytest.raises(ConfigurationError, match="not enough items"):
        initial_referents(10, MapTopology(2, 3), 2, seed=0)


def test_single_neuron_single_iteration_is_generalized_medoid():
    rng = np.random.default_rng(6)
    D = random_squared(rng, 25)
    matrix = DissimilarityMatrix(D, tuple(map(str, range(25))))
    trained = train(matrix, MapTopology(1, 1), KernelSchedule(1.0, 1.0, 1), seed=0)
    sums = [sum(D[i][j] for i in range(25)) for j in range(25)]
    assert trained.referents[0, 0] == sums.index(min(sums))
    assert trained.winners.tolist() == [0] * 25


def test_train_deterministic_and_thread_independent():
    ds = geo_intervals(120, seed=1)
    topo = MapTopology(4, 3)
    sched = KernelSchedule(2.0, 0.5, 15)
    a = train(ds, topo, sched, seed=4)
    b = train(ds, topo, sched, seed=4)
    c = train(ds, topo, sched, seed=4, threads=5)
    assert a.to_json() == b.to_json() == c.to_json()
    assert len(a.cost_trace) == 15
    assert a.to_json() != train(ds, topo, sched, seed=5).to_json()


def test_trained_map_json_round_trip():
    ds = geo_intervals(40, seed=2)
    trained = train(ds, MapTopology(3, 2), KernelSchedule(1.5, 0.5, 5), q=2, seed=1)
    back = TrainedMap.from_json(trained.to_json())
    assert np.array_equal(back.referents, trained.referents)
    assert np.array_equal(back.winners, trained.winners)
    assert back.cost_trace == trained.cost_trace
    assert back.config() == trained.config()
    assert back.to_json() == trained.to_json()


def test_train_rejects_wrong_input():
    with pytest.raises(TypeError):
        train(np.zeros((3, 3)))

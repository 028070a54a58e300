import random

import pytest
from hypothesis import given

from gedtrack.errors import ParameterError
from gedtrack.importance import (
    CommitmentMatrix, ImportanceVector, SpConfig, betweenness_centrality, closeness_centrality,
    commitment_from_weights, degree_centrality, dense_rank, group_importance, measure_frame,
    social_position,
)
from gedtrack.tsn import Group, build_frame_graph
from oracles import centrality_oracles, frames, random_frame, sp_linear_solve

TIGHT = SpConfig(epsilon=0.5, tolerance=1e-13, max_iterations=10_000)


def star(leaves=3):
    return build_frame_graph([(0, i, 1.0) for i in range(1, leaves + 1)])


def path(n=4):
    return build_frame_graph([(i, i + 1, 1.0) for i in range(1, n)])


# --- social position --------------------------------------------------------

def test_sp_config_validation():
    for bad in (dict(epsilon=0), dict(epsilon=1), dict(tolerance=0), dict(max_iterations=0)):
        with pytest.raises(ParameterError):
            SpConfig(**bad)


def test_isolated_node_gets_one_minus_epsilon():
    f = build_frame_graph([(1, 2, 1.0)], nodes=[3])
    sp = social_position(f, cfg=SpConfig(epsilon=0.3))
    assert sp[3] == pytest.approx(0.7)


def test_commitment_rows_are_normalised():
    f = build_frame_graph([(1, 2, 3.0), (1, 3, 1.0), (2, 1, 2.0)])
    c = commitment_from_weights(f)
    assert c(1, 2) == 0.75 and c(1, 3) == 0.25 and c(2, 1) == 1.0
    assert c(3, 1) == 0.0


@pytest.mark.parametrize("seed", range(10))
def test_sp_matches_linear_solve(seed):
    rng = random.Random(seed)
    f = random_frame(rng, rng.randint(1, 10), rng.uniform(0.1, 0.8))
    eps = rng.uniform(0.1, 0.9)
    cfg = SpConfig(epsilon=eps, tolerance=1e-13, max_iterations=10_000)
    got = social_position(f, cfg=cfg)
    want = sp_linear_solve(f, eps)
    assert got.converged
    for n in f.nodes:
        assert got[n] == pytest.approx(want[n], abs=1e-8)


def test_sp_sum_equals_node_count_when_all_nodes_send():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(2, 10)
        edges = [(i, rng.choice([j for j in range(1, n + 1) if j != i]), rng.uniform(0.1, 1)) for i in range(1, n + 1)]
        f = build_frame_graph(edges)
        assert social_position(f, cfg=TIGHT).total() == pytest.approx(n, abs=1e-6)


def test_sp_non_convergence_is_flagged():
    f = random_frame(random.Random(1), 8, 0.5)
    sp = social_position(f, cfg=SpConfig(epsilon=0.99, tolerance=1e-15, max_iterations=3))
    assert not sp.converged and sp.iterations == 3


def test_sp_accepts_custom_commitment():
    f = build_frame_graph([(1, 2, 1.0), (2, 1, 1.0)])
    c = CommitmentMatrix({1: {2: 1.0}, 2: {}})
    sp = social_position(f, c, TIGHT)
    assert sp[1] == pytest.approx(0.5) and sp[2] == pytest.approx(0.75)


@given(frames(max_nodes=7))
def test_sp_ranking_invariant_under_weight_scaling(frame):
    scaled = build_frame_graph([(e.source, e.target, e.weight * 3.5) for e in frame.edges], nodes=frame.nodes)
    a = social_position(frame, cfg=TIGHT)
    b = social_position(scaled, cfg=TIGHT)
    assert a.ranking == b.ranking


# --- centralities -----------------------------------------------------------

def test_star_betweenness_and_degree():
    f = star(3)
    cb = betweenness_centrality(f)
    assert cb[0] == 2.0
    assert all(cb[i] == 0.0 for i in (1, 2, 3))
    cd = degree_centrality(f)
    assert cd[0] == 1.0 and cd[1] == pytest.approx(1 / 3)


def test_path_hand_values():
    f = path(4)
    cb = betweenness_centrality(f)
    # inner nodes lie on 2 of the 3 pairs through them each way: 4 ordered pairs / 3
    assert cb[2] == pytest.approx(4 / 3) and cb[1] == 0.0
    cc = closeness_centrality(f)
    assert cc[1] == pytest.approx(3 / 6) and cc[2] == pytest.approx(3 / 4)


def test_closeness_with_unreachable_member():
    f = build_frame_graph([(1, 2, 1.0)], nodes=[3])
    cc = closeness_centrality(f)
    # node 1: distance 1 to node 2, node 3 unreachable counts as m = 3
    assert cc[1] == pytest.approx(2 / 4)
    assert cc[3] == pytest.approx(2 / 6)


def test_minimum_sizes():
    one = build_frame_graph([], nodes=[1])
    two = build_frame_graph([(1, 2, 1.0)])
    with pytest.raises(ParameterError):
        degree_centrality(one)
    with pytest.raises(ParameterError):
        closeness_centrality(one)
    with pytest.raises(ParameterError):
        betweenness_centrality(two)
    with pytest.raises(ParameterError):
        measure_frame(two, "pagerank")


@pytest.mark.parametrize("seed", range(10))
def test_centralities_match_brute_force(seed):
    rng = random.Random(seed)
    f = random_frame(rng, rng.randint(3, 10), rng.uniform(0.1, 0.6), weighted=False)
    cd, cc, cb = centrality_oracles(f)
    got_cd, got_cc, got_cb = degree_centrality(f), closeness_centrality(f), betweenness_centrality(f)
    for n in f.nodes:
        assert got_cd[n] == float(cd[n])
        assert got_cc[n] == float(cc[n])
        assert got_cb[n] == pytest.approx(float(cb[n]), abs=1e-12)


# --- ranking and group scope ------------------------------------------------

def test_dense_rank_shares_ranks_on_ties():
    assert dense_rank({1: 0.5, 2: 0.9, 3: 0.5, 4: 0.1}) == {2: 1, 1: 2, 3: 2, 4: 3}
    assert dense_rank({1: 0.1 + 0.2, 2: 0.3}) == {1: 1, 2: 1}


def test_importance_vector_defaults():
    v = ImportanceVector({1: 2.0, 2: 1.0}, "sp")
    assert v.ranking == {1: 1, 2: 2}
    assert v.total() == 3.0 and v.total([2]) == 1.0


def test_group_importance_uses_induced_subgraph():
    # node 3 is central in the frame but only a leaf inside the group
    f = build_frame_graph([(1, 3, 1.0), (3, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0)])
    g = Group(7, frozenset({3, 4, 5}), 1)
    cb = group_importance(f, g, "cb")
    assert set(cb.scores) == {3, 4, 5}
    assert cb[4] == 1.0 and cb[3] == 0.0
    assert cb.scope == 7

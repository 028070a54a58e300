import random

import pytest
from hypothesis import given

from gedtrack.community import (
    ModularityState, cpm_extract, enumerate_k_cliques, louvain_extract, maximal_cliques,
    modularity, modularity_gain, percolate,
)
from gedtrack.errors import ParameterError
from gedtrack.tsn import build_frame_graph
from oracles import (
    brute_k_cliques, brute_percolation, frames, modularity_oracle, random_frame, set_partitions,
)


def two_triangles(shared=False):
    if shared:
        edges = [(1, 2, 1), (2, 3, 1), (3, 1, 1), (3, 4, 1), (4, 5, 1), (5, 3, 1)]
    else:
        edges = [(1, 2, 1), (2, 3, 1), (3, 1, 1), (4, 5, 1), (5, 6, 1), (6, 4, 1)]
    return build_frame_graph(edges)


# --- clique percolation -----------------------------------------------------

def test_k_below_three_rejected():
    with pytest.raises(ParameterError):
        cpm_extract(two_triangles(), 2)
    with pytest.raises(ParameterError):
        enumerate_k_cliques(two_triangles(), 1)


def test_triangles_sharing_a_node_give_two_overlapping_groups():
    groups = cpm_extract(two_triangles(shared=True), 3)
    assert [set(g.members) for g in groups] == [{1, 2, 3}, {3, 4, 5}]
    assert [g.group_id for g in groups] == [1, 2]


def test_triangles_sharing_an_edge_percolate():
    f = build_frame_graph([(1, 2, 1), (2, 3, 1), (3, 1, 1), (2, 4, 1), (3, 4, 1)])
    groups = cpm_extract(f, 3)
    assert [set(g.members) for g in groups] == [{1, 2, 3, 4}]


def test_graph_without_k_cliques_has_no_groups():
    f = build_frame_graph([(1, 2, 1), (2, 3, 1)])
    assert cpm_extract(f, 3) == []


def test_direction_is_ignored():
    f = build_frame_graph([(1, 2, 1), (3, 2, 1), (1, 3, 1)])
    assert len(enumerate_k_cliques(f, 3)) == 1


def test_enumeration_matches_brute_force(rng):
    for _ in range(30):
        f = random_frame(rng, rng.randint(1, 12), rng.uniform(0.1, 0.7))
        for k in (3, 4, 5):
            assert set(enumerate_k_cliques(f, k).cliques) == brute_k_cliques(f, k)


@pytest.mark.parametrize("seed", range(5))
def test_maximal_cliques_are_maximal_and_complete(seed):
    rng = random.Random(seed)
    f = random_frame(rng, 12, 0.5)
    found = maximal_cliques(f)
    adj = f.neighbors
    for c in found:
        assert all(b in adj[a] for a in c for b in c if a != b)
        assert not any(all(v in adj[u] for u in c) for v in f.nodes - c)
    assert len(set(found)) == len(found)


def test_percolate_with_explicit_cliques():
    cliques = [frozenset({1, 2, 3}), frozenset({2, 3, 4}), frozenset({7, 8, 9})]
    assert sorted(map(sorted, percolate(cliques, 3))) == [[1, 2, 3, 4], [7, 8, 9]]


@given(frames(max_nodes=9))
def test_cpm_matches_percolation_oracle_property(frame):
    for k in (3, 4):
        got = {g.members for g in cpm_extract(frame, k)}
        assert got == brute_percolation(frame, k)


def test_cpm_groups_are_numbered_by_smallest_member():
    f = build_frame_graph([(7, 8, 1), (8, 9, 1), (9, 7, 1), (1, 2, 1), (2, 3, 1), (3, 1, 1)], 4)
    groups = cpm_extract(f, 3)
    assert [(g.group_id, min(g.members), g.frame_index) for g in groups] == [(1, 1, 4), (2, 7, 4)]


# --- modularity and louvain -------------------------------------------------

def test_modularity_matches_oracle(rng):
    for _ in range(20):
        f = random_frame(rng, rng.randint(2, 7), 0.5)
        if f.total_weight == 0:
            continue
        nodes = sorted(f.nodes)
        part = [set(nodes[: len(nodes) // 2]), set(nodes[len(nodes) // 2:])]
        part = [p for p in part if p]
        assert modularity(f, part) == pytest.approx(modularity_oracle(f, part), abs=1e-12)


def test_modularity_requires_weight_and_full_partition():
    with pytest.raises(ParameterError):
        modularity(build_frame_graph([], nodes=[1, 2]), [{1, 2}])
    with pytest.raises(ParameterError):
        modularity(two_triangles(), [{1, 2, 3}])


def _blocks(assignment):
    blocks = {}
    for n, c in assignment.items():
        blocks.setdefault(c, set()).add(n)
    return list(blocks.values())


def test_modularity_gain_equals_modularity_difference(rng):
    """Gain of moving an isolated node into ``target`` against the oracle."""
    checked = 0
    for _ in range(50):
        f = random_frame(rng, rng.randint(2, 12), rng.uniform(0.1, 0.6))
        if f.total_weight == 0:
            continue
        nodes = sorted(f.nodes)
        assignment = {n: rng.randint(0, 3) for n in nodes}
        state = ModularityState.from_frame(f, _blocks(assignment))
        node = rng.choice(nodes)
        state.remove(node)
        alone = {**assignment, node: "alone"}
        before = modularity_oracle(f, _blocks(alone))
        for target in sorted({c for n, c in state.community.items() if c is not None}):
            moved = {**alone, node: assignment[target]}  # labels are block minima
            after = modularity_oracle(f, _blocks(moved))
            assert modularity_gain(state, node, target) == pytest.approx(after - before, abs=1e-12)
            checked += 1
    assert checked > 50


def test_modularity_gain_requires_removed_node():
    state = ModularityState.from_frame(two_triangles(), [{n} for n in range(1, 7)])
    with pytest.raises(ParameterError):
        modularity_gain(state, 1, 2)


def test_two_disconnected_triangles():
    hp = louvain_extract(two_triangles())
    assert sorted(map(sorted, (g.members for g in hp.groups()))) == [[1, 2, 3], [4, 5, 6]]
    assert hp.qualities[-1] == pytest.approx(0.5, abs=1e-12)
    best = max(modularity_oracle(two_triangles(), p) for p in set_partitions(range(1, 7)))
    assert best == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("seed", range(8))
def test_louvain_levels_increase_modularity(seed):
    rng = random.Random(seed)
    f = random_frame(rng, 12, 0.3)
    hp = louvain_extract(f)
    assert all(b > a for a, b in zip(hp.qualities, hp.qualities[1:]))
    for level, q in enumerate(hp.qualities):
        part = [set(g.members) for g in hp.groups(level)]
        assert sorted(n for p in part for n in p) == sorted(f.nodes)
        assert modularity(f, part) == pytest.approx(q, abs=1e-9)


@pytest.mark.parametrize("seed", range(6))
def test_louvain_close_to_exhaustive_optimum(seed):
    rng = random.Random(100 + seed)
    f = random_frame(rng, 7, 0.4)
    if f.total_weight == 0:
        pytest.skip("no edges drawn")
    best = max(modularity_oracle(f, p) for p in set_partitions(sorted(f.nodes)))
    got = louvain_extract(f).qualities[-1]
    assert got <= best + 1e-12
    assert got >= 0


def test_louvain_empty_and_weightless():
    assert louvain_extract(build_frame_graph([])).groups() == []
    with pytest.raises(ParameterError):
        louvain_extract(build_frame_graph([(1, 2, 0.0)]))


def test_louvain_is_deterministic():
    rng = random.Random(3)
    f = random_frame(rng, 12, 0.3)
    a = [g.members for g in louvain_extract(f).groups()]
    b = [g.members for g in louvain_extract(f).groups()]
    assert a == b

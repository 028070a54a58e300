import pytest
from hypothesis import given
from hypothesis import strategies as st

from gedtrack.errors import FormatError, ParameterError
from gedtrack.tsn import (
    FrameGraph, Group, Grouping, Interaction, TemporalNetwork, WeightedEdge, build_frame_graph,
    induced_subgraph, join_frames, window_interactions,
)


def test_duplicate_edges_are_merged_by_summing():
    f = build_frame_graph([(1, 2, 0.5), (1, 2, 0.25), (2, 1, 1.0)])
    assert f.weight(1, 2) == 0.75
    assert f.weight(2, 1) == 1.0
    assert len(f.edges) == 2


def test_self_loop_and_negative_weight_rejected():
    with pytest.raises(FormatError):
        build_frame_graph([(1, 1, 1.0)])
    with pytest.raises(FormatError):
        build_frame_graph([(1, 2, -1.0)])


def test_frame_graph_validation():
    with pytest.raises(ValueError):
        FrameGraph(0, frozenset({1, 2}), ())
    with pytest.raises(ValueError):
        FrameGraph(1, frozenset({1}), (WeightedEdge(1, 2, 1.0),))


def test_isolated_nodes_kept():
    f = build_frame_graph([(1, 2, 1.0)], nodes=[3])
    assert f.nodes == {1, 2, 3}
    assert f.neighbors[3] == frozenset()


def test_neighbors_are_undirected():
    f = build_frame_graph([(1, 2, 1.0), (3, 2, 1.0)])
    assert f.neighbors[2] == {1, 3}
    assert f.undirected_weights[1][2] == 1.0


def test_temporal_network_frames_must_be_consecutive():
    f1 = build_frame_graph([(1, 2, 1.0)], 1)
    f3 = build_frame_graph([(1, 2, 1.0)], 3)
    with pytest.raises(ValueError):
        TemporalNetwork((f1, f3))
    tsn = TemporalNetwork((f1, build_frame_graph([], 2)))
    assert len(tsn) == 2 and tsn.frame(2).nodes == frozenset()
    with pytest.raises(ParameterError):
        tsn.frame(3)


def test_group_must_be_non_empty():
    with pytest.raises(ValueError):
        Group(1, frozenset(), 1)


def test_grouping_rejects_duplicate_ids():
    with pytest.raises(FormatError):
        Grouping.from_groups([Group(1, frozenset({1}), 1), Group(1, frozenset({2}), 1)])


def test_grouping_allows_overlap_and_lookup():
    g = Grouping.from_sets({1: {14: {615, 1}, 16: {615, 2}}})
    assert [x.group_id for x in g.groups(1)] == [14, 16]
    assert 615 in g.get(1, 14).members and 615 in g.get(1, 16).members
    with pytest.raises(KeyError):
        g.get(1, 99)
    assert g.groups(5) == ()


def test_windowing_half_open_and_overlapping():
    its = [Interaction(1, 2, 1.0, t) for t in (0, 1, 2, 3, 4)]
    tsn = window_interactions(its, window_len=2, step=1)
    # windows [0,2) [1,3) [2,4) [3,5) [4,6)
    assert len(tsn) == 5
    assert [f.weight(1, 2) for f in tsn] == [2.0, 2.0, 2.0, 2.0, 1.0]


def test_windowing_disjoint_windows():
    its = [Interaction(1, 2, 1.0, t) for t in (10, 11, 14, 15)]
    tsn = window_interactions(its, window_len=3, step=3)
    assert [f.weight(1, 2) for f in tsn] == [2.0, 2.0]


def test_windowing_parameters():
    with pytest.raises(ParameterError):
        window_interactions([], 0, 1)
    with pytest.raises(ParameterError):
        window_interactions([], 2, 3)
    assert len(window_interactions([], 2, 1)) == 0


@given(st.lists(st.integers(0, 40), min_size=1, max_size=30), st.integers(1, 6), st.integers(1, 6))
def test_windowing_counts_each_interaction_in_every_covering_window(times, window_len, step):
    step = min(step, window_len)
    its = [Interaction(1, 2, 1.0, t) for t in times]
    tsn = window_interactions(its, window_len, step)
    t0 = min(times)
    for j, frame in enumerate(tsn):
        lo = t0 + j * step
        expected = sum(1 for t in times if lo <= t < lo + window_len)
        assert frame.weight(1, 2) == expected


def test_induced_subgraph():
    f = build_frame_graph([(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)])
    sub = induced_subgraph(f, {1, 2, 3})
    assert sub.nodes == {1, 2, 3}
    assert {(e.source, e.target) for e in sub.edges} == {(1, 2), (2, 3)}
    with pytest.raises(ParameterError, match="node 9"):
        induced_subgraph(f, {1, 9})


def test_join_frames_sums_shared_edges():
    f1 = build_frame_graph([(1, 2, 1.0)], 1)
    f2 = build_frame_graph([(1, 2, 0.5), (2, 3, 1.0)], 2)
    j = join_frames(f1, f2)
    assert j.frame_index == 1
    assert j.weight(1, 2) == 1.5 and j.weight(2, 3) == 1.0
    with pytest.raises(ParameterError):
        join_frames(f2, f1)

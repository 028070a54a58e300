"""Synthetic temporal networks with evolving groups, for tests and demos.

All generators take a :class:`random.Random` so runs are reproducible.
"""
from __future__ import annotations

import random
from itertools import permutations

from .tsn import Grouping, TemporalNetwork, build_frame_graph


def _weight(rng: random.Random) -> float:
    return round(rng.uniform(0.05, 1.0), 4)


def group_edges(rng: random.Random, members, density: float = 0.6) -> list:
    """Random directed edges inside a group; every member gets one out- and one in-edge."""
    members = sorted(members)
    if len(members) < 2:
        return []
    edges = {}
    for s, t in permutations(members, 2):
        if rng.random() < density:
            edges[(s, t)] = _weight(rng)
    for i, s in enumerate(members):
        t = members[(i + 1) % len(members)]
        edges.setdefault((s, t), _weight(rng))
    return [(s, t, w) for (s, t), w in edges.items()]


def complete_digraph(members, weight: float = 1.0) -> list:
    return [(s, t, weight) for s, t in permutations(sorted(members), 2)]


def _evolve(rng, groups, pool, disjoint, max_groups, max_size):
    """One timeframe step. ``groups`` is a list of frozensets."""
    used = set().union(*groups) if groups else set()
    free = sorted(pool - used)
    rng.shuffle(free)

    def take(n):
        out = set()
        while free and len(out) < n:
            out.add(free.pop())
        return out

    nxt = []
    order = list(groups)
    rng.shuffle(order)
    i = 0
    while i < len(order):
        g = set(order[i])
        roll = rng.random()
        if roll < 0.25:  # unchanged
            nxt.append(g)
        elif roll < 0.45:  # lose members
            k = rng.randint(1, max(1, len(g) // 3))
            nxt.append(set(rng.sample(sorted(g), max(3, len(g) - k))))
        elif roll < 0.60:  # gain members
            add = take(rng.randint(1, 4)) if disjoint else set(rng.sample(sorted(pool), rng.randint(1, 4)))
            nxt.append(g | add)
        elif roll < 0.72 and len(g) >= 6:  # split
            members = sorted(g)
            rng.shuffle(members)
            cut = rng.randint(3, len(members) - 3)
            nxt.append(set(members[:cut]))
            nxt.append(set(members[cut:]))
        elif roll < 0.82 and i + 1 < len(order):  # merge with the next group
            nxt.append(g | set(order[i + 1]))
            i += 1
        elif roll < 0.92:  # swap a few members around
            k = rng.randint(1, max(1, len(g) // 4))
            kept = set(rng.sample(sorted(g), max(3, len(g) - k)))
            add = take(k) if disjoint else set(rng.sample(sorted(pool), k))
            nxt.append(kept | add)
        # else: dissolve
        i += 1

    for _ in range(rng.randint(0, 2)):  # newly formed groups
        size = rng.randint(3, 7)
        fresh = take(size) if disjoint else set(rng.sample(sorted(pool), size))
        if len(fresh) >= 3:
            nxt.append(fresh)

    if disjoint:
        seen = set()
        cleaned = []
        for g in nxt:
            g = g - seen
            if len(g) >= 3:
                cleaned.append(g)
                seen |= g
        nxt = cleaned
    nxt = [frozenset(sorted(g)[:max_size]) for g in nxt if len(g) >= 3]
    # drop exact duplicates inside one frame
    unique = list(dict.fromkeys(nxt))
    return unique[:max_groups]


def random_evolving(
    rng: random.Random,
    n_frames: int = 6,
    n_groups: int = 8,
    disjoint: bool = True,
    max_groups: int = 30,
    max_size: int = 15,
    noise_edges: int = 10,
) -> tuple:
    """A ``(TemporalNetwork, Grouping)`` pair whose groups drift between frames.

    Groups are dense inside and linked by a few random noise edges. With
    ``disjoint`` every node belongs to at most one group per frame.
    """
    pool = set(range(1, 4 * n_groups * 6 + 1))
    groups = []
    free = sorted(pool)
    rng.shuffle(free)
    for _ in range(n_groups):
        size = rng.randint(3, 10)
        if disjoint:
            g, free = frozenset(free[:size]), free[size:]
        else:
            g = frozenset(rng.sample(sorted(pool), size))
        groups.append(g)
    groups = list(dict.fromkeys(groups))[:max_groups]

    frames, by_frame = [], {}
    for f in range(1, n_frames + 1):
        if f > 1:
            groups = _evolve(rng, groups, pool, disjoint, max_groups, max_size)
        edges = []
        for g in groups:
            edges.extend(group_edges(rng, g))
        nodes = set().union(*groups) if groups else set()
        node_list = sorted(nodes)
        if len(node_list) >= 2:
            for _ in range(noise_edges):
                s, t = rng.sample(node_list, 2)
                edges.append((s, t, _weight(rng)))
        frames.append(build_frame_graph(edges, f, nodes))
        by_frame[f] = {gid: g for gid, g in enumerate(groups, start=1)}
    return TemporalNetwork(tuple(frames)), Grouping.from_sets(by_frame)


# --- scripted scenarios -----------------------------------------------------

# node ids of the overlapping-anomaly scenario
SHARED = (1, 2, 3, 4)
RED_ONLY = (5, 6, 7)
YELLOW_ONLY = (8, 9, 10)
RED, YELLOW, RED_NEXT, YELLOW_NEXT = 1, 13, 9, 2


def overlapping_anomaly() -> tuple:
    """Two overlapping groups of 7 sharing four members.

    Frame 1: red ``{1..7}`` (id 1) and yellow ``{1..4, 8, 9, 10}`` (id 13).
    Frame 2: red unchanged (id 9); yellow keeps only ``{1, 8, 9, 10}`` (id 2).
    Yellow's strongly tied core is ``{1, 8, 9, 10}``: members 2..4 only send
    edges into that core, so inside yellow they carry the least importance.
    """
    red = set(SHARED) | set(RED_ONLY)
    core = {1, *YELLOW_ONLY}
    yellow = set(SHARED) | set(YELLOW_ONLY)
    f1 = complete_digraph(red) + complete_digraph(core)
    f1 += [(s, t, 1.0) for s in (2, 3, 4) for t in YELLOW_ONLY]
    f2 = complete_digraph(red) + complete_digraph(core)
    tsn = TemporalNetwork((build_frame_graph(f1, 1), build_frame_graph(f2, 2)))
    grouping = Grouping.from_sets({
        1: {RED: red, YELLOW: yellow},
        2: {RED_NEXT: red, YELLOW_NEXT: core},
    })
    return tsn, grouping


def lifecycle_scenario() -> tuple:
    """Eight timeframes: a group forms, grows by four, splits in two, one part
    loses a member, a third group forms, and all three merge before the merged
    group disappears. Group ids follow the lineage labels G1..G5."""
    g1a = set(range(1, 7))
    g1b = set(range(1, 11))
    g2, g3, g4 = set(range(1, 6)), set(range(6, 11)), set(range(11, 16))
    g2_small = set(range(1, 5))
    g5 = g2_small | g3 | g4
    layout = {
        1: {},
        2: {1: g1a},
        3: {1: g1b},
        4: {2: g2, 3: g3},
        5: {2: g2_small, 3: g3},
        6: {2: g2_small, 3: g3, 4: g4},
        7: {5: g5},
        8: {},
    }
    frames = []
    for f, groups in layout.items():
        edges = []
        for members in groups.values():
            edges += complete_digraph(members)
        if not groups:  # sparse leftover contact, no group
            edges = [(1, 2, 1.0), (6, 11, 1.0)]
        frames.append(build_frame_graph(edges, f))
    return TemporalNetwork(tuple(frames)), Grouping.from_sets(layout)


def palla_grid() -> tuple:
    """Three groups per frame inside one joint group, with pairwise Jaccard
    overlaps 68.75, 52.94, 50, 13.33, 8.33, 8, 5.88, 4.35 and 0 percent.

    Returns ``(grouping, joint)``; frame 1 holds groups 68, 83 and 102,
    frame 2 holds 23, 26 and 49, and joint group 1 covers both frames.
    """
    r = lambda a, b: set(range(a, b + 1))  # noqa: E731
    grouping = Grouping.from_sets({
        1: {68: r(15, 25), 83: r(5, 14) | {24, 25}, 102: r(8, 14) | {23, 25}},
        2: {23: {2, 3, 4, 7, 21, 22}, 26: r(1, 6) | r(8, 14) | {24, 25}, 49: r(1, 6) | r(15, 23)},
    })
    joint = Grouping.from_sets({1: {1: r(1, 25)}})
    return grouping, joint

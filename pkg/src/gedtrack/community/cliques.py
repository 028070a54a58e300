"""k-clique enumeration and clique percolation (CPM).

The graph is read as undirected and unweighted: ``x`` and ``y`` are
adjacent when an edge exists in either direction.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParameterError
from ..tsn import FrameGraph, Group


@dataclass(frozen=True)
class CliqueSet:
    k: int
    cliques: tuple

    def __len__(self):
        return len(self.cliques)


def _check_k(k):
    if k < 3:
        raise ParameterError(f"k must be >= 3, got {k}")


def enumerate_k_cliques(frame: FrameGraph, k: int) -> CliqueSet:
    """All node subsets of size ``k`` that are complete in the undirected view."""
    _check_k(k)
    adj = frame.neighbors
    found = []

    def extend(clique, candidates):
        if len(clique) == k:
            found.append(frozenset(clique))
            return
        for i, v in enumerate(candidates):
            if len(clique) + 1 + (len(candidates) - i - 1) < k:
                break
            extend(clique + [v], [u for u in candidates[i + 1:] if u in adj[v]])

    for v in sorted(adj):
        extend([v], sorted(u for u in adj[v] if u > v))
    return CliqueSet(k, tuple(sorted(found, key=sorted)))


def maximal_cliques(frame: FrameGraph, min_size: int = 1) -> list:
    """Bron-Kerbosch with pivoting, iterative to avoid deep recursion."""
    adj = frame.neighbors
    result = []
    stack = [(frozenset(), set(adj), set())]
    while stack:
        r, p, x = stack.pop()
        if not p and not x:
            if len(r) >= min_size:
                result.append(r)
            continue
        if len(r) + len(p) < min_size:
            continue
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            stack.append((r | {v}, p & adj[v], x & adj[v]))
            p = p - {v}
            x = x | {v}
    return sorted(result, key=sorted)


class _DisjointSet:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def percolate(cliques, k: int) -> list:
    """Union cliques that share at least ``k - 1`` nodes; return node sets.

    Fed with the k-cliques this is the textbook construction (two k-cliques
    are adjacent iff they share exactly k - 1 nodes). Fed with the maximal
    cliques of size >= k it gives the same communities, because every pair
    of k-subsets inside one maximal clique is chained.
    """
    cliques = list(cliques)
    ds = _DisjointSet(len(cliques))
    by_node = {}
    for idx, c in enumerate(cliques):
        for v in c:
            by_node.setdefault(v, []).append(idx)
    for idx, c in enumerate(cliques):
        partners = set()
        for v in c:
            partners.update(j for j in by_node[v] if j > idx)
        for j in partners:
            if ds.find(idx) != ds.find(j) and len(c & cliques[j]) >= k - 1:
                ds.union(idx, j)
    components = {}
    for idx, c in enumerate(cliques):
        components.setdefault(ds.find(idx), set()).update(c)
    return sorted((frozenset(m) for m in components.values()), key=lambda m: (min(m), len(m)))


def cpm_extract(frame: FrameGraph, k: int = 6) -> list:
    """Overlapping k-clique communities, numbered 1.. by smallest member."""
    _check_k(k)
    communities = percolate(maximal_cliques(frame, min_size=k), k)
    return [Group(i, members, frame.frame_index) for i, members in enumerate(communities, start=1)]


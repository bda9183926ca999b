"""Minimal cuts in network graphs.

A cut for a boundary region ``A`` is a vertex set ``W`` with
``W & boundary == A``; its size ``|dW|`` is the number of edges (with
multiplicity) leaving ``W``.  The minimum is found by max-flow between the
contracted terminals; the list of all minimal cuts by enumerating subsets of
bulk vertices.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CutReport",
    "EnumerationCapError",
    "cut_size",
    "max_flow_value",
    "cut_sizes_all",
    "min_cut",
    "residual_components",
    "disjoint_min_cut_triples",
    "max_residual_components",
    "disjointness_check",
]

ENUM_CAP = 24


class EnumerationCapError(ValueError):
    pass


@dataclass
class CutReport:
    region: list
    min_cut_edges: int
    s_rt: int
    num_min_cuts: int | None
    min_cut_list: list | None

    @property
    def counts_available(self) -> bool:
        return self.min_cut_list is not None


def _check_region(G, region):
    region = list(region)
    bad = set(region) - set(G.boundary)
    if bad:
        raise ValueError(f"not boundary vertices: {sorted(bad)}")
    return region


def cut_size(G, W) -> int:
    W = set(W)
    return sum((u in W) != (v in W) for u, v in G.edges)


def max_flow_value(G, region) -> int:
    """Edmonds-Karp on the unit-capacity multigraph with ``region`` merged
    into a source and the rest of the boundary into a sink."""
    region = set(_check_region(G, region))
    rest = set(G.boundary) - region
    if not region or not rest:
        return 0

    def node(v):
        return "s" if v in region else "t" if v in rest else v

    cap = {}
    adj = {}
    for u, v in G.edges:
        a, b = node(u), node(v)
        if a == b:
            continue
        for x, y in ((a, b), (b, a)):
            cap[(x, y)] = cap.get((x, y), 0) + 1
            adj.setdefault(x, set()).add(y)
    flow = 0
    while True:
        parent = {"s": None}
        q = deque(["s"])
        while q and "t" not in parent:
            x = q.popleft()
            for y in adj.get(x, ()):
                if y not in parent and cap[(x, y)] > 0:
                    parent[y] = x
                    q.append(y)
        if "t" not in parent:
            return flow
        y = "t"
        while parent[y] is not None:
            x = parent[y]
            cap[(x, y)] -= 1
            cap[(y, x)] += 1
            y = x
        flow += 1


def cut_sizes_all(G, region, cap: int = ENUM_CAP, chunk: int = 1 << 18):
    """Cut size for every ``W = region + S``, ``S`` ranging over bulk subsets.

    Returns ``(sizes, bulk)`` where ``sizes[mask]`` belongs to the subset with
    bit ``i`` of ``mask`` selecting ``bulk[i]``.
    """
    region = set(_check_region(G, region))
    bulk = G.bulk
    m = len(bulk)
    if m > cap:
        raise EnumerationCapError(f"{m} bulk vertices exceed the enumeration cap {cap}")
    pos = {x: i for i, x in enumerate(bulk)}
    sizes = np.empty(1 << m, dtype=np.int64)
    for start in range(0, 1 << m, chunk):
        masks = np.arange(start, min(start + chunk, 1 << m), dtype=np.int64)
        tot = np.zeros(masks.shape, dtype=np.int64)
        for u, v in G.edges:
            iu = (masks >> pos[u]) & 1 if u in pos else int(u in region)
            iv = (masks >> pos[v]) & 1 if v in pos else int(v in region)
            tot += np.asarray(iu != iv, dtype=np.int64)
        sizes[start:start + masks.size] = tot
    return sizes, bulk


def _subset(mask, bulk, region):
    return frozenset(region) | frozenset(x for i, x in enumerate(bulk) if mask >> i & 1)


def min_cut(G, region, cap: int = ENUM_CAP) -> CutReport:
    region = _check_region(G, region)
    flow = max_flow_value(G, region)
    try:
        sizes, bulk = cut_sizes_all(G, region, cap)
    except EnumerationCapError:
        return CutReport(region, flow, G.N * flow, None, None)
    best = int(sizes.min())
    if best != flow:
        raise AssertionError(f"max-flow {flow} disagrees with enumeration {best}")
    cuts = [_subset(int(m), bulk, region) for m in np.nonzero(sizes == best)[0]]
    return CutReport(region, best, G.N * best, len(cuts), cuts)


def residual_components(G, cuts) -> int:
    """Connected components of the bulk left after removing the given cuts."""
    cuts = [set(c) for c in cuts]
    for a, b in itertools.combinations(cuts, 2):
        if a & b:
            raise ValueError("cuts overlap")
    removed = set().union(*cuts) if cuts else set()
    left = [x for x in G.bulk if x not in removed]
    adj = G.adjacency()
    keep = set(left)
    seen = set()
    comps = 0
    for x in left:
        if x in seen:
            continue
        comps += 1
        stack = [x]
        seen.add(x)
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in keep and w not in seen:
                    seen.add(w)
                    stack.append(w)
    return comps


def disjoint_min_cut_triples(G, A, B, C, cap: int = ENUM_CAP):
    """All pairwise-disjoint triples of minimal cuts for A, B and C."""
    reps = [min_cut(G, R, cap) for R in (A, B, C)]
    if any(r.min_cut_list is None for r in reps):
        raise EnumerationCapError("minimal cut lists unavailable")
    out = []
    for VA, VB, VC in itertools.product(*(r.min_cut_list for r in reps)):
        if not (VA & VB or VA & VC or VB & VC):
            out.append((VA, VB, VC))
    return out


def max_residual_components(G, A, B, C, cap: int = ENUM_CAP):
    """``(max, per_triple)`` residual component counts over disjoint minimal-cut triples."""
    triples = disjoint_min_cut_triples(G, A, B, C, cap)
    per = [residual_components(G, t) for t in triples]
    return (max(per) if per else None), per


def disjointness_check(G, A, B, cap: int = ENUM_CAP) -> bool:
    """For all overlapping minimal cuts ``V_A``, ``V_B``: removing the overlap
    from one of them leaves a minimal cut."""
    if set(A) & set(B):
        raise ValueError("regions must be disjoint")
    ra, rb = min_cut(G, A, cap), min_cut(G, B, cap)
    if ra.min_cut_list is None or rb.min_cut_list is None:
        raise EnumerationCapError("minimal cut lists unavailable")
    for VA, VB in itertools.product(ra.min_cut_list, rb.min_cut_list):
        V0 = VA & VB
        if not V0:
            continue
        if not (cut_size(G, VA - V0) == ra.min_cut_edges or cut_size(G, VB - V0) == rb.min_cut_edges):
            return False
    return True

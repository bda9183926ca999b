import itertools

import numpy as np
import pytest

from graphs import brute_min_cut, ladder, random_multigraph
from stabnet import geometry
from stabnet import network as nw


def test_star_cuts():
    G, _ = nw.star_graph(2, 3)
    r = geometry.min_cut(G, ["A"])
    assert r.min_cut_edges == 1 and r.s_rt == 3 and r.num_min_cuts == 1
    assert r.min_cut_list == [frozenset({"A"})]
    assert geometry.residual_components(G, [{"A"}, {"B"}, {"C"}]) == 1
    assert geometry.residual_components(G, [{"A", "x"}, {"B"}, {"C"}]) == 0


def test_parallel_edge_example():
    G = nw.NetworkGraph(["a", "x", "b"], ["a", "b"], [("a", "x"), ("a", "x"), ("x", "b")], 2, 1)
    r = geometry.min_cut(G, ["a"])
    assert r.min_cut_edges == 1 and r.num_min_cuts == 1
    assert r.min_cut_list == [frozenset({"a", "x"})]


def test_empty_and_full_regions():
    G, _ = nw.grid_graph(2, 1)
    assert geometry.min_cut(G, []).min_cut_edges == 0
    assert geometry.min_cut(G, G.boundary).min_cut_edges == 0
    with pytest.raises(ValueError):
        geometry.min_cut(G, ["x00"])


@pytest.mark.parametrize("rungs", [2, 3, 4, 5, 6])
def test_ladders_against_brute_force(rungs):
    G = ladder(rungs)
    for r in range(1, 4):
        for region in itertools.combinations(G.boundary, r):
            rep = geometry.min_cut(G, region)
            assert (rep.min_cut_edges, rep.num_min_cuts) == brute_min_cut(G, region)
            for V in rep.min_cut_list:
                assert V & set(G.boundary) == set(region)
                assert geometry.cut_size(G, V) == rep.min_cut_edges


def test_random_graphs_against_brute_force(rng):
    for _ in range(60):
        G = random_multigraph(rng, max_bulk=8)
        for region in (["A"], ["B"], ["A", "B"], ["A", "C"]):
            rep = geometry.min_cut(G, region)
            assert (rep.min_cut_edges, rep.num_min_cuts) == brute_min_cut(G, region)
            assert geometry.max_flow_value(G, region) == rep.min_cut_edges


def test_cap_marks_counts_unavailable():
    G = ladder(4)
    rep = geometry.min_cut(G, ["A"], cap=3)
    assert rep.num_min_cuts is None and not rep.counts_available
    assert rep.min_cut_edges == brute_min_cut(G, ["A"])[0]
    with pytest.raises(geometry.EnumerationCapError):
        geometry.disjointness_check(G, ["A"], ["B"], cap=3)


def test_cut_function_symmetry(rng):
    for _ in range(30):
        G = random_multigraph(rng)
        W = {v for v in G.vertices if rng.random() < 0.5}
        assert geometry.cut_size(G, W) == geometry.cut_size(G, set(G.vertices) - W)


def _union_find_components(G, removed):
    parent = {x: x for x in G.bulk if x not in removed}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in G.edges:
        if u in parent and v in parent:
            parent[find(u)] = find(v)
    return len({find(x) for x in parent})


def test_residual_components_union_find(rng):
    for _ in range(100):
        G = random_multigraph(rng, max_bulk=8)
        triples = geometry.disjoint_min_cut_triples(G, ["A"], ["B"], ["C"])
        assert triples, "disjoint minimal cuts must exist"
        best, per = geometry.max_residual_components(G, ["A"], ["B"], ["C"])
        for t, val in zip(triples, per):
            assert val == _union_find_components(G, set().union(*t))
        assert best == max(per)


def test_residual_components_rejects_overlap():
    G, _ = nw.star_graph(2, 1)
    with pytest.raises(ValueError):
        geometry.residual_components(G, [{"A", "x"}, {"B", "x"}, {"C"}])


def test_disjointness_random(rng):
    for _ in range(100):
        G = random_multigraph(rng, max_bulk=7, n_boundary=4)
        A, B = ["A"], ["B", "C"]
        assert geometry.disjointness_check(G, A, B)


def test_submodularity(rng):
    for _ in range(100):
        G = random_multigraph(rng, max_bulk=7)
        VA = {"A"} | {x for x in G.bulk if rng.random() < 0.5}
        VB = {"B"} | {x for x in G.bulk if rng.random() < 0.5}
        V0 = VA & VB
        lhs = geometry.cut_size(G, VA) + geometry.cut_size(G, VB)
        rhs = geometry.cut_size(G, VA - V0) + geometry.cut_size(G, VB - V0)
        assert lhs >= rhs


def test_unique_disjoint_cuts_vacuous():
    G, _ = nw.star_graph(2, 1)
    assert geometry.disjointness_check(G, ["A"], ["B"])

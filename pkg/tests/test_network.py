import json

import numpy as np
import pytest

from stabnet import dense, entropy, geometry
from stabnet import network as nw
from stabnet.tableau import sample_uniform


def test_graph_validation():
    with pytest.raises(ValueError):
        nw.NetworkGraph(["A", "A"], ["A"], [], 2, 1)
    with pytest.raises(ValueError):
        nw.NetworkGraph(["A", "x"], ["A"], [("A", "x")], 4, 1)
    with pytest.raises(ValueError):
        nw.NetworkGraph(["A", "x"], ["A"], [("A", "x")], 2, 0)
    with pytest.raises(ValueError):
        nw.NetworkGraph(["A", "x"], [], [("A", "x")], 2, 1)
    with pytest.raises(ValueError):
        nw.NetworkGraph(["A", "x"], ["A"], [("A", "x"), ("x", "x")], 2, 1)
    with pytest.raises(ValueError):
        nw.NetworkGraph(["A", "x", "y"], ["A"], [("A", "x")], 2, 1)
    G = nw.NetworkGraph(["A", "x"], ["A"], [("A", "x"), ("A", "x")], 2, 1)
    assert G.degree("x") == 2 and G.N_b == 2


def test_no_bulk_graph_is_bell_pairs():
    G = nw.NetworkGraph(["A", "B"], ["A", "B"], [("A", "B")], 3, 2)
    st = nw.build_random_network(G, np.random.default_rng(0))
    assert not st.is_zero and st.log_trace == 0 and st.trace_level == 0
    T = st.tableau
    assert T.n == 4 and T.is_pure
    assert entropy.entropy(T, st.region(["A"])) == 2
    est = nw.nonzero_probability_estimate(G, 20, np.random.default_rng(1))
    assert est["nonzero"] == 1 and est["minimal_trace"] == 1


def test_single_vertex_teleports_tensor(rng):
    for p, N in ((2, 1), (3, 1), (2, 2)):
        G, _ = nw.star_graph(p, N)
        V = sample_uniform(3 * N, p, rng)
        st = nw.build_network(G, {"x": V})
        assert not st.is_zero and st.tableau.is_pure
        assert st.log_trace == -3 * N  # each leg projected once
        for a in "ABC":
            assert entropy.entropy(st.tableau, st.region([a])) <= N
        # leg entropies are those of the vertex tensor itself
        vq = G.vertex_qudits("x")
        for a in "ABC":
            legs = [vq.index(q) for q in _partner_set(G, a)]
            assert entropy.entropy(st.tableau, st.region([a])) == entropy.entropy(V, legs)


def _partner_set(G, a):
    """Vertex-side qudits of the edge(s) joining x to boundary vertex a."""
    out = set()
    for i, (u, v) in enumerate(G.edges):
        if a in (u, v):
            out |= set(G.endpoint_qudits(i, "x"))
    return out


def test_dense_contraction_path(rng):
    G, _ = nw.path_graph(2, 1, bulk=2)
    for _ in range(50):
        tensors = {x: sample_uniform(len(G.vertex_qudits(x)), 2, rng) for x in G.bulk}
        st = nw.build_network(G, tensors)
        v = dense.dense_contract(G, {x: dense.tableau_to_dense(V).amplitudes for x, V in tensors.items()})
        rho = np.outer(v, v.conj())
        if st.is_zero:
            assert np.allclose(rho, 0)
        else:
            assert np.allclose(rho, dense.tableau_density(st.tableau))
            assert np.isclose(np.trace(rho).real, 2.0 ** st.log_trace)


@pytest.mark.parametrize("builder,p", [(nw.star_graph, 2), (nw.dumbbell_graph, 2), (nw.path_graph, 3)])
def test_dense_contraction_other_shapes(builder, p, rng):
    G, _ = builder(p, 1)
    for _ in range(10):
        tensors = {x: sample_uniform(len(G.vertex_qudits(x)), p, rng) for x in G.bulk}
        st = nw.build_network(G, tensors)
        v = dense.dense_contract(G, {x: dense.tableau_to_dense(V).amplitudes for x, V in tensors.items()})
        rho = np.outer(v, v.conj())
        expect = 0 if st.is_zero else dense.tableau_density(st.tableau)
        assert np.allclose(rho, expect)


@pytest.mark.parametrize("builder", [nw.star_graph, nw.grid_graph, nw.dumbbell_graph, nw.path_graph])
def test_trace_quantization(builder, rng):
    G, regions = builder(2, 1)
    for _ in range(200):
        st = nw.build_random_network(G, rng)
        if st.is_zero:
            continue
        assert 0 <= st.trace_level <= G.N_b
        assert st.log_trace == st.trace_level - G.N_b


def test_entropy_below_min_cut(rng):
    for builder in (nw.grid_graph, nw.dumbbell_graph):
        G, regions = builder(3, 2)
        cuts = {k: geometry.min_cut(G, r).s_rt for k, r in regions.items()}
        for _ in range(30):
            st = nw.build_random_network(G, rng)
            if st.is_zero:
                continue
            for k, r in regions.items():
                assert entropy.entropy(st.tableau, st.region(r)) <= cuts[k]


def test_boundary_subsystem():
    G, regions = nw.grid_graph(2, 2)
    assert nw.boundary_subsystem(G, []) == []
    assert nw.boundary_subsystem(G, G.boundary) == list(range(len(G.boundary_qudits())))
    a = set(nw.boundary_subsystem(G, ["A"]))
    b = set(nw.boundary_subsystem(G, ["B", "C"]))
    assert not a & b and len(a) == 2
    with pytest.raises(ValueError):
        nw.boundary_subsystem(G, ["x00"])


def test_json_round_trip(tmp_path):
    G, regions = nw.dumbbell_graph(3, 2)
    d = nw.graph_to_dict(G, regions)
    path = tmp_path / "g.json"
    path.write_text(json.dumps(d))
    for src in (str(path), json.dumps(d), d):
        H, R = nw.load_graph(src)
        assert H.edges == G.edges and H.p == 3 and H.N == 2 and R == regions
    bad = dict(d, regions={"A": ["x"]})
    with pytest.raises(ValueError):
        nw.load_graph(bad)


def test_nonzero_probability_fields(rng):
    G, _ = nw.star_graph(5, 3)
    est = nw.nonzero_probability_estimate(G, 50, rng)
    assert est["trials"] == 50 and 0 <= est["minimal_trace"] <= est["nonzero"] <= 1
    assert est["epsilon"] == 16 / 125
    assert all(0 <= k <= G.N_b for k in est["trace_levels"])
    with pytest.raises(ValueError):
        nw.nonzero_probability_estimate(G, 0, rng)

"""Random stabilizer tensor networks.

The network state is ``|Psi> = (prod_{x bulk} <V_x|) (prod_e |e>)`` where
each edge carries ``N`` maximally entangled qudit pairs and each bulk vertex
an independent uniformly random stabilizer state.  It is built by projecting
the Bell-pair lattice onto the vertex tensors one generator at a time and
then tracing out the bulk qudits; the tableau's ``log_trace`` is the exact
``log_p tr Psi``.

Qudit layout: edge ``i`` (in input order) owns qudits ``2Ni .. 2Ni+2N-1``;
the first ``N`` belong to its first endpoint, the last ``N`` to its second.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .gf import is_prime
from .tableau import (ZERO, StabilizerTableau, _postselect_raw, bell_pairs,
                      restrict_trace_out, sample_uniform)

__all__ = [
    "NetworkGraph",
    "NetworkState",
    "load_graph",
    "graph_to_dict",
    "build_network",
    "build_random_network",
    "nonzero_probability_estimate",
    "boundary_subsystem",
    "star_graph",
    "path_graph",
    "grid_graph",
    "cross_graph",
    "bell_lattice",
    "dumbbell_graph",
]


@dataclass
class NetworkGraph:
    vertices: list
    boundary: list
    edges: list
    p: int
    N: int = 1

    def __post_init__(self):
        self.vertices = list(self.vertices)
        self.boundary = list(self.boundary)
        self.edges = [tuple(e) for e in self.edges]
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex labels must be unique")
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.N < 1:
            raise ValueError("bond exponent N must be at least 1")
        if not self.boundary:
            raise ValueError("boundary must be nonempty")
        vs = set(self.vertices)
        if not set(self.boundary) <= vs:
            raise ValueError("boundary vertices must be vertices")
        for u, v in self.edges:
            if u not in vs or v not in vs:
                raise ValueError(f"edge ({u}, {v}) uses an unknown vertex")
            if u == v:
                raise ValueError("self-loops are not allowed")
        if not self._connected():
            raise ValueError("graph must be connected")

    def _connected(self):
        adj = self.adjacency()
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def adjacency(self):
        adj = defaultdict(list)
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    @property
    def bulk(self) -> list:
        b = set(self.boundary)
        return [v for v in self.vertices if v not in b]

    def degree(self, x) -> int:
        return sum((u == x) + (v == x) for u, v in self.edges)

    @property
    def num_qudits(self) -> int:
        return 2 * self.N * len(self.edges)

    @property
    def N_b(self) -> int:
        return self.N * sum(self.degree(x) for x in self.bulk)

    def endpoint_qudits(self, i: int, x) -> list:
        u, v = self.edges[i]
        base = 2 * self.N * i + (0 if x == u else self.N)
        return list(range(base, base + self.N))

    def vertex_qudits(self, x) -> list:
        out = []
        for i, (u, v) in enumerate(self.edges):
            if x in (u, v):
                out += self.endpoint_qudits(i, x)
        return out

    def bell_pairs(self) -> list:
        N = self.N
        return [(2 * N * i + r, 2 * N * i + N + r) for i in range(len(self.edges)) for r in range(N)]

    def boundary_qudits(self) -> list:
        return sorted(q for x in self.boundary for q in self.vertex_qudits(x))

    def qudit_map(self) -> dict:
        """Boundary vertex -> indices in the boundary state's qudit order."""
        pos = {q: i for i, q in enumerate(self.boundary_qudits())}
        return {x: [pos[q] for q in self.vertex_qudits(x)] for x in self.boundary}

    def with_params(self, p: int | None = None, N: int | None = None) -> "NetworkGraph":
        return NetworkGraph(self.vertices, self.boundary, self.edges,
                            self.p if p is None else p, self.N if N is None else N)


def boundary_subsystem(G: NetworkGraph, region) -> list:
    """Qudit indices (in boundary-state order) carried by a boundary region."""
    qmap = G.qudit_map()
    out = []
    for x in region:
        if x not in qmap:
            raise ValueError(f"{x!r} is not a boundary vertex")
        out += qmap[x]
    return sorted(out)


@dataclass
class NetworkState:
    graph: NetworkGraph
    tableau: object  # StabilizerTableau or ZERO
    vertex_tensors: dict = field(default_factory=dict, repr=False)

    @property
    def is_zero(self) -> bool:
        return self.tableau is ZERO

    @property
    def log_trace(self):
        return None if self.is_zero else self.tableau.log_trace

    @property
    def trace_level(self):
        """``k`` in ``tr Psi = p^(k - N_b)``."""
        return None if self.is_zero else self.tableau.log_trace + self.graph.N_b

    @property
    def qudit_map(self) -> dict:
        return self.graph.qudit_map()

    def region(self, names) -> list:
        return boundary_subsystem(self.graph, names)


def build_network(G: NetworkGraph, tensors: dict) -> NetworkState:
    """Contract the Bell-pair lattice with the given bulk vertex tableaux."""
    p = G.p
    nq = G.num_qudits
    T = bell_pairs(G.bell_pairs(), nq, p)
    gens, phases, log_trace = T.gens, T.phases, 0
    for x in G.bulk:
        V = tensors[x]
        qs = np.asarray(G.vertex_qudits(x), dtype=np.int64)
        if V.n != len(qs) or V.p != p:
            raise ValueError(f"tensor for {x!r} has the wrong shape")
        cols = np.concatenate([qs, qs + nq])
        for i in range(V.k):
            gv = np.zeros(2 * nq, dtype=np.int64)
            gv[cols] = V.gens[i]
            out = _postselect_raw(gens, phases, gv, int(V.phases[i]), p)
            if out is None:
                return NetworkState(G, ZERO, tensors)
            gens, phases, d = out
            log_trace += d
        log_trace += V.log_trace
    T = StabilizerTableau(gens, phases, p, log_trace, nq, check=False)
    bulk_q = [q for x in G.bulk for q in G.vertex_qudits(x)]
    return NetworkState(G, restrict_trace_out(T, bulk_q), tensors)


def build_random_network(G: NetworkGraph, rng) -> NetworkState:
    tensors = {x: sample_uniform(len(G.vertex_qudits(x)), G.p, rng) for x in G.bulk}
    return build_network(G, tensors)


def nonzero_probability_estimate(G: NetworkGraph, trials: int, rng) -> dict:
    """Fractions of samples with ``Psi != 0`` and with ``tr Psi = p^-N_b``."""
    if trials < 1:
        raise ValueError("trials must be positive")
    nonzero = minimal = 0
    levels = []
    for _ in range(trials):
        st = build_random_network(G, rng)
        if st.is_zero:
            continue
        nonzero += 1
        levels.append(st.trace_level)
        minimal += st.trace_level == 0
    return {
        "trials": trials,
        "nonzero": nonzero / trials,
        "minimal_trace": minimal / trials,
        "trace_levels": levels,
        "epsilon": 2 ** len(G.vertices) / G.p ** G.N,
    }


# --- graph I/O -------------------------------------------------------------

def load_graph(source):
    """Read the JSON graph format; returns ``(graph, regions)``.

    ``source`` is a path, a JSON string, or an already-parsed dict.
    """
    if isinstance(source, dict):
        d = source
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            text = Path(source).read_text()
        d = json.loads(text)
    G = NetworkGraph(d["vertices"], d["boundary"], [tuple(e) for e in d["edges"]],
                     int(d["p"]), int(d["N"]))
    regions = {k: list(v) for k, v in d.get("regions", {}).items()}
    for name, reg in regions.items():
        bad = set(reg) - set(G.boundary)
        if bad:
            raise ValueError(f"region {name} contains non-boundary vertices {sorted(bad)}")
    return G, regions


def graph_to_dict(G: NetworkGraph, regions: dict | None = None) -> dict:
    return {
        "p": G.p,
        "N": G.N,
        "vertices": list(G.vertices),
        "boundary": list(G.boundary),
        "edges": [list(e) for e in G.edges],
        "regions": {k: list(v) for k, v in (regions or {}).items()},
    }


# --- standard shapes -------------------------------------------------------

def star_graph(p: int, N: int, legs: int = 3):
    names = [chr(ord("A") + i) for i in range(legs)]
    G = NetworkGraph(["x"] + names, names, [(a, "x") for a in names], p, N)
    return G, {a: [a] for a in names}


def cross_graph(p: int, N: int):
    """One bulk vertex with four boundary arms."""
    return star_graph(p, N, legs=4)


def path_graph(p: int, N: int, bulk: int = 2):
    xs = [f"x{i}" for i in range(bulk)]
    vs = ["A"] + xs + ["B"]
    edges = list(zip(vs[:-1], vs[1:]))
    return NetworkGraph(vs, ["A", "B"], edges, p, N), {"A": ["A"], "B": ["B"]}


def grid_graph(p: int, N: int):
    """2x2 bulk grid, each bulk vertex carrying one boundary leg."""
    xs = ["x00", "x01", "x11", "x10"]
    bs = ["A", "B", "C", "D"]
    edges = [(xs[i], xs[(i + 1) % 4]) for i in range(4)] + list(zip(bs, xs))
    regions = {"A": ["A"], "B": ["B"], "C": ["C"], "D": ["D"], "AB": ["A", "B"], "AC": ["A", "C"]}
    return NetworkGraph(xs + bs, bs, edges, p, N), regions


def bell_lattice(p: int, N: int):
    """No bulk: boundary triangle A-B-C."""
    G = NetworkGraph(["A", "B", "C"], ["A", "B", "C"], [("A", "B"), ("B", "C"), ("A", "C")], p, N)
    return G, {"A": ["A"], "B": ["B"], "C": ["C"]}


def dumbbell_graph(p: int, N: int):
    """Two bulk vertices joined by a double edge; A, B on one side, C on the other."""
    vs = ["x", "y", "A", "B", "C"]
    edges = [("A", "x"), ("B", "x"), ("x", "y"), ("x", "y"), ("y", "C")]
    return NetworkGraph(vs, ["A", "B", "C"], edges, p, N), {"A": ["A"], "B": ["B"], "C": ["C"]}

"""Quick invariant suite behind ``stabnet verify``.

Each check returns ``(ok, detail)``.  All checks run; the caller reports
the first failure.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from . import dense, entropy, geometry, gf, moments, spin
from . import network as nw
from .tableau import count_pure_states, enumerate_all, sample_uniform
from .weyl import WeylOperator


def _gf_kernel(rng):
    for p in (2, 3, 5):
        for _ in range(20):
            M = rng.integers(0, p, size=(rng.integers(1, 6), rng.integers(1, 7)))
            K = gf.kernel(M, p)
            if K.size and np.any((M @ K.T) % p):
                return False, f"kernel vector not annihilated (p={p})"
            if gf.rank(M, p) + len(K) != M.shape[1]:
                return False, f"rank-nullity fails (p={p})"
    return True, ""


def _weyl_dense(rng):
    for p in (2, 3, 5):
        for _ in range(10):
            a = WeylOperator.from_vector(rng.integers(0, p, 4), p, int(rng.integers(0, 4)))
            b = WeylOperator.from_vector(rng.integers(0, p, 4), p, int(rng.integers(0, 4)))
            if not np.allclose(dense.weyl_matrix(a * b), dense.weyl_matrix(a) @ dense.weyl_matrix(b)):
                return False, f"product mismatch (p={p})"
            if not np.allclose(dense.weyl_matrix(a.inverse()) @ dense.weyl_matrix(a), np.eye(p * p)):
                return False, f"inverse mismatch (p={p})"
    return True, ""


def _state_counts(rng):
    for n, p in ((1, 2), (1, 3), (2, 2), (2, 3)):
        got = len(enumerate_all(n, p))
        if got != count_pure_states(n, p):
            return False, f"n={n} p={p}: {got} states"
    return True, ""


def _sampler_valid(rng):
    for p in (2, 3):
        for n in (1, 2, 3):
            T = sample_uniform(n, p, rng)
            T.validate()
            P = dense.tableau_projector(T)
            if not np.isclose(np.trace(P).real, 1):
                return False, f"not pure (n={n}, p={p})"
    return True, ""


def _entropy_dense(rng):
    for p in (2, 3):
        for _ in range(10):
            n = int(rng.integers(2, 5))
            T = sample_uniform(n, p, rng)
            rho = dense.tableau_density(T)
            A = [q for q in range(n) if rng.random() < 0.5]
            if entropy.entropy(T, A) != round(dense.dense_entropy(rho, p, n, A)):
                return False, f"entropy mismatch (p={p}, A={A})"
    return True, ""


def _ghz_dense(rng):
    for p in (2, 3):
        for _ in range(10):
            n = int(rng.integers(3, 5))
            T = sample_uniform(n, p, rng)
            cut = sorted(rng.choice(np.arange(1, n), size=2, replace=False))
            A, B, C = list(range(cut[0])), list(range(cut[0], cut[1])), list(range(cut[1], n))
            rho = dense.tableau_density(T)
            m = entropy.pt_moment3(T, A, B)
            val = dense.dense_pt3(rho, p, n, A, B)
            if not np.isclose(val, float(p) ** (-m), rtol=1e-9):
                return False, f"pt3 mismatch (p={p})"
            gc = entropy.ghz_content(T, A, B, C)
            s = sum(entropy.entropy(T, X) for X in (A, B, C))
            if (gc.g - s) % 2:
                return False, "parity identity fails"
    return True, ""


def _network_dense(rng):
    for builder, p in ((nw.path_graph, 2), (nw.star_graph, 2), (nw.path_graph, 3)):
        G, _ = builder(p, 1)
        tensors = {x: sample_uniform(len(G.vertex_qudits(x)), p, rng) for x in G.bulk}
        st = nw.build_network(G, tensors)
        vs = {x: dense.tableau_to_dense(V).amplitudes for x, V in tensors.items()}
        v = dense.dense_contract(G, vs)
        rho = np.outer(v, v.conj())
        if st.is_zero:
            if not np.allclose(rho, 0):
                return False, "zero state has nonzero contraction"
            continue
        if not np.allclose(rho, dense.tableau_density(st.tableau)):
            return False, f"contraction mismatch on {builder.__name__}"
    return True, ""


def _sigma3(rng):
    for p in (2, 3, 5, 7):
        S = spin.build_sigma3(p)
        if len(S) != 2 * p + 2:
            return False, f"|Sigma_3({p})| = {len(S)}"
        if not all(spin.is_lagrangian_stochastic(T.basis, p) for T in S):
            return False, f"non-Lagrangian element for p={p}"
    return True, ""


def _metric(rng):
    for p in (2, 3, 5):
        S = spin.build_sigma3(p)
        D = spin.distance_table(S)
        for i, j in itertools.product(range(len(S)), repeat=2):
            if D[i, j] != spin.parity_distance(S[i], S[j]):
                return False, f"distance table entry ({i},{j}) breaks the parity rule (p={p})"
        K = len(S)
        for i, j, k in itertools.product(range(K), repeat=3):
            if D[i, k] > D[i, j] + D[j, k]:
                return False, f"triangle inequality fails (p={p})"
    return True, ""


def _r_identities(rng):
    for p in (2, 3):
        for n in (1, 2):
            if not moments.inner_product_check(n, p):
                return False, f"inner product identity fails (p={p}, n={n})"
            if not moments.sum_of_traces_check(n, p):
                return False, f"sum of traces fails (p={p}, n={n})"
    return True, ""


def _third_moment(rng):
    for p, n in ((2, 1), (2, 2), (3, 2)):
        rep = moments.third_moment_report(n, p)
        if not rep.passed:
            return False, f"deviation {rep.max_abs_deviation:.2e} (p={p}, n={n})"
    return True, ""


def _commutant(rng):
    for p in (2, 3):
        rep = moments.commutant_check(2, p, 10, rng)
        if not rep.passed:
            return False, f"commutator {rep.max_abs_deviation:.2e} (p={p})"
    neg = moments.commutant_check(2, 3, 0, rng, unitaries=[moments.cubic_phase_gate(2, 3)])
    if neg.passed:
        return False, "non-Clifford control commutes"
    return True, ""


def _min_cut(rng):
    for _ in range(30):
        G, regions = _random_graph(rng)
        for reg in regions:
            if geometry.max_flow_value(G, reg) != int(geometry.cut_sizes_all(G, reg)[0].min()):
                return False, "max flow differs from enumeration"
    return True, ""


def _random_graph(rng, max_bulk=6):
    nb = int(rng.integers(1, max_bulk + 1))
    bulk = [f"x{i}" for i in range(nb)]
    bnd = ["A", "B", "C"]
    edges = [(bulk[i], bulk[int(rng.integers(0, i))]) for i in range(1, nb)]
    edges += [(b, bulk[int(rng.integers(0, nb))]) for b in bnd]
    for _ in range(int(rng.integers(0, 2 * nb + 1)) if nb > 1 else 0):
        u, v = rng.choice(nb, size=2, replace=False)
        edges.append((bulk[u], bulk[v]))
    G = nw.NetworkGraph(bulk + bnd, bnd, edges, 2, 1)
    return G, [["A"], ["B"], ["C"], ["A", "B"]]


def _spin_exact(rng):
    G, _ = nw.star_graph(2, 1)
    pred = spin.moment_prediction(G, ["A"], ["B"], ["C"])
    total = Fraction(0)
    states = enumerate_all(3, 2)
    for V in states:
        st = nw.build_network(G, {"x": V})
        if st.is_zero:
            continue
        m = entropy.pt_moment3(st.tableau, st.region(["A"]), st.region(["B"]))
        total += Fraction(2) ** (3 * st.log_trace - m)
    if total / len(states) != pred.value:
        return False, f"{total / len(states)} != {pred.value}"
    if spin.s3_partition_sum(G, ["A"], ["B"], ["C"]) != pred.partition_sum:
        return False, "S_3 and Sigma_3 partition sums differ"
    return True, ""


CHECKS = [
    ("gf: rank-nullity and kernel", _gf_kernel),
    ("weyl: products match dense matrices", _weyl_dense),
    ("tableau: number of pure stabilizer states", _state_counts),
    ("tableau: uniform sampler yields valid pure states", _sampler_valid),
    ("entropy: rank formula matches dense entropy", _entropy_dense),
    ("entropy: pt moment and parity identity", _ghz_dense),
    ("network: tableau contraction matches dense contraction", _network_dense),
    ("spin: Sigma_3 size and Lagrangian structure", _sigma3),
    ("spin: distance table matches parity rule", _metric),
    ("moments: inner product and sum of traces", _r_identities),
    ("moments: exhaustive third moment", _third_moment),
    ("moments: Clifford commutant", _commutant),
    ("geometry: max flow equals brute-force min cut", _min_cut),
    ("spin: moment prediction equals exhaustive ensemble", _spin_exact),
]


def run_checks(seed: int = 0, log=None):
    """Run every check; returns a list of ``(name, ok, detail)``."""
    out = []
    for i, (name, fn) in enumerate(CHECKS):
        rng = np.random.default_rng([seed, i])
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crash is a failure of that invariant
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, ok, detail))
        if log:
            log(f"{'ok  ' if ok else 'FAIL'} {name}{': ' + detail if detail else ''}")
    return out

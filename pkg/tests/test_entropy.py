import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stabnet import dense, entropy as ent
from stabnet.entropy import GhzAccountingError, ghz_content, pt_moment3
from stabnet.tableau import bell_pairs, ghz_state, restrict_trace_out, sample_uniform, tensor, zero_state

seeds = st.integers(0, 2 ** 32 - 1)


def random_tripartition(n, rng):
    labels = rng.integers(0, 3, size=n)
    return [[q for q in range(n) if labels[q] == k] for k in range(3)]


def test_product_state_has_no_entropy():
    T = zero_state(4, 3)
    for r in range(5):
        for A in itertools.combinations(range(4), r):
            assert ent.entropy(T, A) == 0


def test_bell_pair_entropy_and_information():
    T = bell_pairs([(0, 1)], 2, 3)
    assert ent.entropy(T, [0]) == ent.entropy(T, [1]) == 1
    assert ent.mutual_information(T, [0], [1]) == 2
    with pytest.raises(ValueError):
        ent.mutual_information(T, [0], [0, 1])
    with pytest.raises(ValueError):
        ent.entropy(T, [2])


@given(st.sampled_from([2, 3]), st.integers(1, 5), seeds)
def test_entropy_matches_dense(p, n, seed):
    rng = np.random.default_rng(seed)
    T = sample_uniform(n, p, rng)
    A = [q for q in range(n) if rng.random() < 0.5]
    rho = dense.tableau_density(T)
    s = dense.dense_entropy(rho, p, n, A) if A else 0.0
    assert abs(s - round(s)) < 1e-9
    assert ent.entropy(T, A) == round(s)
    comp = [q for q in range(n) if q not in A]
    assert ent.entropy(T, A) == ent.entropy(T, comp)


def test_mixed_state_entropy_matches_dense(rng):
    for _ in range(20):
        T = sample_uniform(4, 3, rng)
        R = restrict_trace_out(T, [0])
        rho = dense.tableau_density(R)
        for A in ([0], [0, 1], [0, 1, 2]):
            assert ent.entropy(R, A) == round(dense.dense_entropy(rho, 3, 3, A))


def test_ghz_informations():
    for p in (2, 3):
        G = ghz_state(3, p)
        assert ent.mutual_information(G, [0], [1]) == 1
        # pure on ABC: I3 vanishes identically
        assert ent.tripartite_information(G, [0], [1], [2]) == 0
        # GHZ shared with a fourth party: I3 = +1
        G4 = ghz_state(4, p)
        assert ent.tripartite_information(G4, [0], [1], [2]) == 1


def _perfect_tensor(p, rng):
    while True:
        T = sample_uniform(4, p, rng)
        if all(ent.entropy(T, [i]) == 1 for i in range(4)) and \
                all(ent.entropy(T, [0, j]) == 2 for j in (1, 2, 3)):
            return T


def test_perfect_tensor_tripartite_information(rng):
    T = _perfect_tensor(3, rng)
    assert ent.tripartite_information(T, [0], [1], [2]) == -2 * ent.entropy(T, [0])


@given(st.sampled_from([2, 3]), st.integers(0, 2 ** 32 - 1))
def test_pt3_matches_dense(p, seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6 if p == 2 else 5))
    T = sample_uniform(n, p, rng)
    A, B, C = random_tripartition(n, rng)
    m = pt_moment3(T, A, B)
    val = dense.dense_pt3(dense.tableau_density(T), p, n, A, B) if A + B else 1.0
    assert np.isclose(val, float(p) ** -m, rtol=1e-9)
    assert m == pt_moment3(T, A, B, method="enumerate")


def test_pt3_basic_values():
    for p in (2, 3, 5):
        assert pt_moment3(ghz_state(3, p), [0], [1]) == 2
        assert pt_moment3(bell_pairs([(0, 1)], 2, p), [0], [1]) == 2
    with pytest.raises(ValueError):
        pt_moment3(restrict_trace_out(ghz_state(3, 3), [2]), [0], [1])


def test_ghz_content_normal_forms():
    for p in (2, 3):
        assert ghz_content(ghz_state(3, p), [0], [1], [2]).as_tuple() == (0, 0, 0, 1)
        # qudits: A = {0, 2}, B = {1, 4}, C = {3, 5}; pairs AB, AC, BC
        T = bell_pairs([(0, 1), (2, 3), (4, 5)], 6, p)
        assert ghz_content(T, [0, 2], [1, 4], [3, 5]).as_tuple() == (1, 1, 1, 0)
        # two GHZ triples plus one extra Bell pair between A and B
        T = tensor(tensor(ghz_state(3, p), ghz_state(3, p)), bell_pairs([(0, 1)], 2, p))
        gc = ghz_content(T, [0, 3, 6], [1, 4, 7], [2, 5])
        assert gc.as_tuple() == (0, 0, 1, 2)


@given(st.sampled_from([2, 3]), seeds)
def test_ghz_content_invariants(p, seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 6 if p == 2 else 5))
    T = sample_uniform(n, p, rng)
    A, B, C = random_tripartition(n, rng)
    gc = ghz_content(T, A, B, C)
    S = [ent.entropy(T, X) for X in (A, B, C)]
    assert sum(S) == 2 * (gc.a + gc.b + gc.c) + 3 * gc.g
    assert (sum(S) - gc.g) % 2 == 0
    assert ent.mutual_information(T, A, B) == 2 * gc.c + gc.g
    assert ent.mutual_information(T, A, C) == 2 * gc.b + gc.g
    assert ent.mutual_information(T, B, C) == 2 * gc.a + gc.g
    assert pt_moment3(T, A, B) == 2 * (gc.a + gc.b + gc.c + gc.g)


def test_ghz_accounting_failure_is_loud(monkeypatch):
    T = ghz_state(3, 3)
    monkeypatch.setattr(ent, "pt_moment3", lambda *a, **k: 3)  # odd remainder
    with pytest.raises(GhzAccountingError):
        ghz_content(T, [0], [1], [2])
    monkeypatch.setattr(ent, "pt_moment3", lambda *a, **k: 5)  # negative g
    with pytest.raises(GhzAccountingError):
        ghz_content(T, [0], [1], [2])


def test_ghz_content_rejects_non_partition():
    with pytest.raises(ValueError):
        ghz_content(ghz_state(3, 2), [0], [1], [])


def test_fourpartite_bell_pairing():
    # parties: A1 = {0, 1}, A2 = {2, 3}, A3 = {4, 5}, A4 = {6, 7}
    T = bell_pairs([(0, 2), (1, 3), (4, 6), (5, 7)], 8, 2)
    rep = ent.fourpartite_report(T, [[0, 1], [2, 3], [4, 5], [6, 7]])
    assert rep.t[0, 1] == rep.t[2, 3] == 2
    assert rep.t.sum() == 8
    assert rep.residual_entropies == [0, 0, 0, 0]
    assert rep.i3 == 0 and rep.g_max == 0


def test_fourpartite_two_ghz_matches_dense():
    p = 2
    # GHZ on (A1, A2, A3) and GHZ on (A2, A3, A4); A1 = {0}, A2 = {1, 3}, A3 = {2, 4}, A4 = {5}
    T = tensor(ghz_state(3, p), ghz_state(3, p))
    parts = [[0], [1, 3], [2, 4], [5]]
    rep = ent.fourpartite_report(T, parts)
    rho = dense.tableau_density(T)
    S = lambda X: dense.dense_entropy(rho, p, 6, X) if X else 0.0  # noqa: E731
    A, B, C = parts[:3]
    i3 = S(A) + S(B) + S(C) - S(A + B) - S(A + C) - S(B + C) + S(A + B + C)
    assert rep.i3 == round(i3)


def test_i3_independent_of_party_choice(rng):
    for _ in range(20):
        T = sample_uniform(6, 2, rng)
        parts = [[0, 1], [2], [3, 4], [5]]
        vals = {ent.tripartite_information(T, *[parts[i] for i in trio])
                for trio in itertools.combinations(range(4), 3)}
        assert len(vals) == 1

import numpy as np
import pytest

from stabnet import dense
from stabnet.tableau import ZERO, bell_pairs, ghz_state, sample_uniform, zero_state


def test_zero_tableau_is_basis_vector():
    for p in (2, 3):
        v = dense.tableau_to_dense(zero_state(3, p)).amplitudes
        e = np.zeros(p ** 3)
        e[0] = 1
        assert np.isclose(abs(np.vdot(v, e)), 1)


def test_bell_tableau_vector():
    v = dense.tableau_to_dense(bell_pairs([(0, 1)], 2, 5)).amplitudes
    assert np.allclose(v, np.eye(5).ravel() / np.sqrt(5))


def test_round_trip_stabilizes(rng):
    for _ in range(100):
        p = int(rng.choice([2, 3]))
        n = int(rng.integers(1, 5 if p == 2 else 4))
        T = sample_uniform(n, p, rng)
        s = dense.tableau_to_dense(T)
        assert np.isclose(np.linalg.norm(s.amplitudes), 1)
        assert dense.stabilizes(T, s)
        assert np.allclose(s.projector(), dense.tableau_projector(T))


def test_caps_and_bad_inputs():
    with pytest.raises(ValueError, match="cap"):
        dense.tableau_to_dense(zero_state(6, 3))
    with pytest.raises(ValueError):
        dense.tableau_to_dense(ZERO)
    T = sample_uniform(2, 3, np.random.default_rng(0))
    from stabnet.tableau import restrict_trace_out
    with pytest.raises(ValueError, match="pure"):
        dense.tableau_to_dense(restrict_trace_out(T, [0]))


def test_entropy_of_maximally_mixed_qudit():
    for p in (2, 3, 5):
        assert np.isclose(dense.dense_entropy(np.eye(p) / p, p), 1)


def test_pt3_of_ghz():
    for p in (2, 3):
        rho = dense.tableau_density(ghz_state(3, p))
        assert np.isclose(dense.dense_pt3(rho, p, 3, [0], [1]), p ** -2.0)


def test_stabilizer_spectra_are_flat(rng):
    for _ in range(30):
        p = int(rng.choice([2, 3]))
        n = int(rng.integers(2, 5))
        rho = dense.tableau_density(sample_uniform(n, p, rng))
        A = list(range(int(rng.integers(1, n))))
        s = dense.dense_entropy(rho, p, n, A)
        assert abs(s - round(s)) < 1e-9


def test_partial_transpose_is_involution(rng):
    T = sample_uniform(3, 3, rng)
    rho = dense.tableau_density(T)
    once = dense.partial_transpose(rho, 3, 3, [1])
    assert np.allclose(dense.partial_transpose(once, 3, 3, [1]), rho)
    assert np.isclose(np.trace(once), 1)

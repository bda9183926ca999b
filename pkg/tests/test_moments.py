import itertools

import numpy as np
import pytest

from stabnet import moments, spin


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 2)])
def test_formula_properties(p, n):
    F = moments.third_moment_formula(n, p)
    assert np.isclose(np.trace(F).real, 1, atol=1e-12)
    assert np.allclose(F, F.conj().T)
    assert np.linalg.eigvalsh(F).min() > -1e-12
    for pi in itertools.permutations(range(3)):
        R = spin.r_matrix(spin.permutation_subspace(pi, p), n)
        assert np.allclose(R @ F @ R.T, F)


def test_qubit_formula_is_permutation_sum():
    for n in (1, 2):
        assert np.allclose(moments.third_moment_formula(n, 2), moments.permutation_third_moment(n, 2))


def test_odd_prime_single_qudit_rejected():
    with pytest.raises(ValueError, match="n >= 2"):
        moments.third_moment_formula(1, 3)
    with pytest.raises(ValueError, match="cap"):
        moments.third_moment_formula(3, 3)


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 2)])
def test_exhaustive_third_moment(p, n):
    rep = moments.third_moment_report(n, p)
    assert rep.passed and rep.max_abs_deviation < 1e-10
    assert rep.terms_checked == p ** (6 * n)


def test_qubit_exhaustive_matches_permutations():
    M = moments.empirical_third_moment(1, 2, "exhaustive")
    assert np.abs(M - moments.permutation_third_moment(1, 2)).max() < 1e-12


def test_qutrit_is_not_a_3_design():
    # the permutation formula fails for p = 3, the Sigma_3 formula does not
    M = moments.empirical_third_moment(2, 3, "exhaustive")
    assert np.abs(M - moments.permutation_third_moment(2, 3)).max() > 1e-4


def test_monte_carlo_third_moment():
    rep = moments.third_moment_report(2, 3, "monte-carlo", 20000, np.random.default_rng(11))
    assert rep.passed, rep
    with pytest.raises(ValueError):
        moments.empirical_third_moment(2, 3, "monte-carlo", 1, np.random.default_rng(0))
    with pytest.raises(ValueError):
        moments.empirical_third_moment(2, 3, "bogus")


def test_monte_carlo_detects_wrong_target():
    """A statistical check that cannot fail would be worthless."""
    rng = np.random.default_rng(5)
    M, se = moments.empirical_third_moment(2, 3, "monte-carlo", 20000, rng, return_stderr=True)
    wrong = moments.permutation_third_moment(2, 3)
    z = np.abs(M - wrong) / np.maximum(se, 1 / 20000)
    assert z.max() > 5


def test_commutant_identity_is_exact():
    rep = moments.commutant_check(2, 3, 0, None, unitaries=[np.eye(9)])
    assert rep.max_abs_deviation == 0


@pytest.mark.parametrize("p", [2, 3])
def test_commutant_random_clifford_words(p):
    rep = moments.commutant_check(2, p, 15, np.random.default_rng(p))
    assert rep.passed, rep
    assert rep.terms_checked == 15 * (2 * p + 2)


def test_clifford_generators_are_unitary():
    for p in (2, 3, 5):
        for name, U in moments.clifford_generators(2, p):
            assert np.allclose(U @ U.conj().T, np.eye(p * p)), name


def test_cubic_phase_negative_control():
    rep = moments.commutant_check(2, 3, 0, None, unitaries=[moments.cubic_phase_gate(2, 3)])
    assert not rep.passed and rep.max_abs_deviation > 0.1
    # for qubits the commutant is spanned by permutations, which commute with everything
    rep = moments.commutant_check(2, 2, 0, None, unitaries=[moments.cubic_phase_gate(2, 2)])
    assert rep.passed


@pytest.mark.parametrize("p", [2, 3, 5])
def test_independence(p):
    assert moments.independence_check(2, p)
    with pytest.raises(ValueError):
        moments.independence_check(1, p)


def test_gram_entries_exact():
    for p in (2, 3):
        G = moments.gram_matrix(2, p, dense_check=True)
        S = spin.build_sigma3(p)
        for i, j in itertools.product(range(len(S)), repeat=2):
            assert G[i, j] == p ** 6 // p ** (2 * spin.distance(S[i], S[j]))


def test_r_identity_helpers():
    for p in (2, 3):
        for n in (1, 2):
            assert moments.inner_product_check(n, p)
            assert moments.sum_of_traces_check(n, p)


@pytest.mark.parametrize("p", [2, 3])
def test_second_moment_exhaustive(p):
    rep = moments.second_moment_check(1, p)
    assert rep.passed and rep.max_abs_deviation < 1e-12


def test_second_moment_monte_carlo():
    rep = moments.second_moment_check(2, 5, "monte-carlo", 3000, np.random.default_rng(2))
    assert rep.passed, rep

"""Numerical certificates for the moments of random stabilizer states.

Operators on three replicas of ``(C^p)^n`` use the replica-major basis
``|v1>|v2>|v3>``, so ``|V><V|^{(x)3}`` is ``kron(v, v, v)`` times its adjoint.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.sparse as sp
import sympy

from . import dense, spin
from .tableau import enumerate_all, sample_uniform

__all__ = [
    "MomentReport",
    "DENSE_CAP",
    "third_moment_formula",
    "permutation_third_moment",
    "empirical_third_moment",
    "third_moment_report",
    "clifford_generators",
    "random_clifford",
    "cubic_phase_gate",
    "commutant_check",
    "gram_matrix",
    "independence_check",
    "second_moment_check",
    "inner_product_check",
    "sum_of_traces_check",
]

DENSE_CAP = 3 ** 6


@dataclass
class MomentReport:
    n: int
    p: int
    max_abs_deviation: float
    terms_checked: int
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.max_abs_deviation <= self.tolerance


def _check_cap(p, n, power=3):
    if p ** (power * n) > DENSE_CAP:
        raise ValueError(f"dense cap exceeded: p^{power}n = {p ** (power * n)}")


def third_moment_formula(n: int, p: int) -> np.ndarray:
    """``sum_{T in Sigma_3(p)} R(T) / (D (D+1) (D+p))`` with ``D = p^n``."""
    _check_cap(p, n)
    if p != 2 and n < 2:
        raise ValueError("for odd p the Sigma_3(p) formula needs n >= 2 "
                         "(the R(T) span the Clifford commutant only from two qudits on)")
    D = p ** n
    S = reduce(lambda a, b: a + b, (spin.r_sparse(T, n) for T in spin.build_sigma3(p)))
    return S.toarray() / (D * (D + 1) * (D + p))


def _perm_operator(pi, p, n):
    d = p ** n
    t = np.eye(d ** 3).reshape([d] * 6)
    # |v_0 v_1 v_2> -> slot pi[j] receives v_j
    out_axes = [None] * 3
    for j in range(3):
        out_axes[pi[j]] = j
    return t.transpose(out_axes + [3, 4, 5]).reshape(d ** 3, d ** 3)


def permutation_third_moment(n: int, p: int) -> np.ndarray:
    """``sum_{pi in S_3} R(pi) / (D (D+1) (D+2))``: the 3-design value."""
    _check_cap(p, n)
    D = p ** n
    S = sum(_perm_operator(pi, p, n) for pi in itertools.permutations(range(3)))
    return S / (D * (D + 1) * (D + 2))


def _tally(n, p, trials, rng):
    """Sample ``trials`` uniform states; return distinct dense vectors and their counts."""
    vecs, counts = {}, {}
    for _ in range(trials):
        T = sample_uniform(n, p, rng)
        k = T.key()
        if k not in vecs:
            vecs[k] = dense.tableau_to_dense(T).amplitudes
        counts[k] = counts.get(k, 0) + 1
    keys = list(vecs)
    return np.array([vecs[k] for k in keys]), np.array([counts[k] for k in keys], dtype=float)


def _weighted_moment(W, c, trials, return_stderr):
    """Mean of ``w w^dagger`` over rows ``w`` of ``W`` with multiplicities ``c``.

    Entrywise standard errors come from the sums of squared real and
    imaginary parts, each expanded into products of real matmuls.
    """
    M = (W.T * c) @ W.conj() / trials
    if not return_stderr:
        return M
    a, b = W.real, W.imag
    aa, bb, ab = a * a, b * b, a * b
    ca = lambda X, Y: (X.T * c) @ Y  # noqa: E731
    re2 = ca(aa, aa) + 2 * ca(ab, ab) + ca(bb, bb)
    im2 = ca(bb, aa) - 2 * ca(ab, ab) + ca(aa, bb)
    f = trials / (trials - 1)
    var_r = np.clip((re2 / trials - M.real ** 2) * f, 0, None)
    var_i = np.clip((im2 / trials - M.imag ** 2) * f, 0, None)
    return M, np.sqrt((var_r + var_i) / trials)


def _triple(v):
    return np.kron(np.kron(v, v), v)


def empirical_third_moment(n: int, p: int, mode: str = "exhaustive", trials: int = 0,
                           rng=None, return_stderr: bool = False):
    """Average of ``|V><V|^{(x)3}`` over all states or over ``trials`` uniform samples.

    With ``return_stderr`` (Monte Carlo only) also returns entrywise standard
    errors, ``sqrt(se_re^2 + se_im^2)``.
    """
    _check_cap(p, n)
    if mode == "exhaustive":
        W = np.array([_triple(dense.tableau_to_dense(T).amplitudes) for T in enumerate_all(n, p)])
        M = W.T @ W.conj() / W.shape[0]
        return (M, None) if return_stderr else M
    if mode != "monte-carlo":
        raise ValueError(f"unknown mode {mode!r}")
    if trials < 2 or rng is None:
        raise ValueError("monte-carlo mode needs trials >= 2 and an rng")
    V, c = _tally(n, p, trials, rng)
    W = np.array([_triple(v) for v in V])
    return _weighted_moment(W, c, trials, return_stderr)


def third_moment_report(n: int, p: int, mode: str = "exhaustive", trials: int = 0,
                        rng=None, tol: float = 1e-10, n_se: float = 5.0) -> MomentReport:
    F = third_moment_formula(n, p)
    if mode == "exhaustive":
        M = empirical_third_moment(n, p, "exhaustive")
        dev = float(np.abs(M - F).max())
        return MomentReport(n, p, dev, F.size, tol, "exhaustive average vs formula")
    M, se = empirical_third_moment(n, p, "monte-carlo", trials, rng, return_stderr=True)
    floor = 1.0 / trials  # entries with zero sample variance
    z = np.abs(M - F) / np.maximum(se, floor)
    return MomentReport(n, p, float(z.max()), F.size, n_se, f"max |z| over entries, {trials} trials")


# --- Clifford unitaries ----------------------------------------------------

def _single(p):
    w = np.exp(2j * np.pi / p)
    j = np.arange(p)
    F = w ** np.outer(j, j) / np.sqrt(p)
    if p == 2:
        P = np.diag([1, 1j])
    else:
        half = (p + 1) // 2
        P = np.diag(w ** ((half * j * j) % p))
    gates = {"F": F, "P": P, "X": dense.shift(p), "Z": dense.clock(p)}
    if p > 2:
        M = np.zeros((p, p))
        M[(2 * j) % p, j] = 1
        gates["M2"] = M
    return gates


def _csum(p):
    d = p * p
    U = np.zeros((d, d))
    for a, b in itertools.product(range(p), repeat=2):
        U[a * p + (a + b) % p, a * p + b] = 1
    return U


def _embed1(U, q, n, p):
    mats = [np.eye(p)] * n
    mats[q] = U
    return reduce(np.kron, mats)


def _embed2(U, q1, q2, n, p):
    """Two-qudit gate on (q1, q2) with q1 as the first tensor factor."""
    d = p ** n
    t = np.eye(d).reshape([p] * (2 * n))
    U4 = U.reshape(p, p, p, p)
    # act on output legs q1, q2
    t = np.moveaxis(t, [q1, q2], [0, 1])
    t = np.tensordot(U4, t, axes=([2, 3], [0, 1]))
    t = np.moveaxis(t, [0, 1], [q1, q2])
    return t.reshape(d, d)


def clifford_generators(n: int, p: int) -> list:
    gens = []
    for name, U in _single(p).items():
        for q in range(n):
            gens.append((f"{name}{q}", _embed1(U, q, n, p)))
    C = _csum(p)
    for q1, q2 in itertools.permutations(range(n), 2):
        gens.append((f"CSUM{q1}{q2}", _embed2(C, q1, q2, n, p)))
    return gens


def random_clifford(n: int, p: int, rng, length: int = 20) -> np.ndarray:
    gens = clifford_generators(n, p)
    U = np.eye(p ** n, dtype=complex)
    for i in rng.integers(0, len(gens), size=length):
        U = gens[i][1] @ U
    return U


def cubic_phase_gate(n: int, p: int) -> np.ndarray:
    """``diag(exp(2 pi i j^3 / p^3))`` on qudit 0: not a Clifford gate."""
    j = np.arange(p)
    return _embed1(np.diag(np.exp(2j * np.pi * j ** 3 / p ** 3)), 0, n, p)


def commutant_check(n: int, p: int, samples: int, rng, length: int = 20,
                    unitaries=None, tol: float = 1e-9) -> MomentReport:
    """Max entry of ``[R(T), U^{(x)3}]`` over sampled Clifford words and all ``T``."""
    _check_cap(p, n)
    if unitaries is None:
        unitaries = [random_clifford(n, p, rng, length) for _ in range(samples)]
    Rs = [spin.r_sparse(T, n) for T in spin.build_sigma3(p)]
    worst = 0.0
    for U in unitaries:
        U3 = np.kron(np.kron(U, U), U)
        for R in Rs:
            C = R @ U3 - (R.T @ U3.T).T  # R U3 - U3 R with sparse R
            worst = max(worst, float(np.abs(C).max()))
    return MomentReport(n, p, worst, len(unitaries) * len(Rs), tol, "max |[R(T), U^3]|")


# --- linear independence ----------------------------------------------------

def gram_matrix(n: int, p: int, dense_check: bool = False) -> np.ndarray:
    """``tr R(T_x) R(T_y)^dagger`` as exact integers (object array)."""
    sigma = spin.build_sigma3(p)
    K = len(sigma)
    G = np.empty((K, K), dtype=object)
    for i, j in itertools.product(range(K), repeat=2):
        G[i, j] = p ** (3 * n - n * spin.distance(sigma[i], sigma[j]))
    if dense_check:
        Rs = [spin.r_sparse(T, n) for T in sigma]
        for i, j in itertools.product(range(K), repeat=2):
            v = int(round(Rs[i].multiply(Rs[j]).sum()))
            if v != G[i, j]:
                raise AssertionError(f"Gram entry ({i},{j}) = {v}, expected {G[i, j]}")
    return G


def inner_product_check(n: int, p: int) -> bool:
    """``tr R(T_x) R(T_y)^dagger / p^3n == p^(-n d(T_x, T_y))`` for every pair, exactly."""
    try:
        gram_matrix(n, p, dense_check=True)
    except AssertionError:
        return False
    return True


def sum_of_traces_check(n: int, p: int) -> bool:
    D = p ** n
    total = sum(int(round(spin.r_sparse(T, n).diagonal().sum())) for T in spin.build_sigma3(p))
    return total == D * (D + 1) * (D + p)


def _dual_pairing_ok(p: int) -> bool:
    """``<v1|<v2|<0|...|T'>^n = delta_{T,T'}`` with ``1_6, v1, v2`` a basis of ``T``."""
    from . import gf
    sigma = spin.build_sigma3(p)
    ones = np.ones(6, dtype=np.int64)
    for T in sigma:
        # extend 1_6 to a basis of T
        basis = [ones]
        for row in T.basis:
            if gf.rank(np.vstack(basis + [row]), p) > len(basis):
                basis.append(row % p)
        v1, v2 = basis[1], basis[2]
        for Tp in sigma:
            val = int(v1 in Tp) * int(v2 in Tp)
            if val != int(T == Tp):
                return False
    return True


def independence_check(n: int, p: int) -> bool:
    """Gram matrix nonsingular (exact rational rank) and the dual-vector pairing is diagonal."""
    if n < 2:
        raise ValueError("independence requires n >= 2")
    G = gram_matrix(n, p)
    full = sympy.Matrix(G.tolist()).rank() == G.shape[0]
    return bool(full and _dual_pairing_ok(p))


# --- second moment ---------------------------------------------------------

def second_moment_check(n: int, p: int, mode: str = "exhaustive", trials: int = 0,
                        rng=None, tol: float = 1e-10, n_se: float = 5.0) -> MomentReport:
    """Compare the average of ``|V><V|^{(x)2}`` with ``(I + F) / (D (D+1))``."""
    _check_cap(p, n, power=2)
    D = p ** n
    swap = np.eye(D * D).reshape(D, D, D, D).transpose(1, 0, 2, 3).reshape(D * D, D * D)
    target = (np.eye(D * D) + swap) / (D * (D + 1))
    if mode == "exhaustive":
        W = np.array([np.kron(v, v) for v in
                      (dense.tableau_to_dense(T).amplitudes for T in enumerate_all(n, p))])
        M = W.T @ W.conj() / W.shape[0]
        return MomentReport(n, p, float(np.abs(M - target).max()), target.size, tol, "exhaustive")
    V, c = _tally(n, p, trials, rng)
    M, se = _weighted_moment(np.array([np.kron(v, v) for v in V]), c, trials, True)
    z = np.abs(M - target) / np.maximum(se, 1.0 / trials)
    return MomentReport(n, p, float(z.max()), target.size, n_se, f"max |z|, {trials} trials")

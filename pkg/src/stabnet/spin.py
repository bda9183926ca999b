"""The GHZ spin model: spins in Sigma_3(p), the set of Lagrangian stochastic
subspaces of F_p^3 + F_p^3.

Each subspace ``T`` defines ``r(T) = sum_{(x,y) in T} |x><y|`` on three
replicas of one qudit and ``R(T) = r(T)^{(x) n}``.  The average third
moment of a stabilizer network is a partition function over assignments of
such subspaces to vertices, with energy ``sum_edges d(T_x, T_y)`` where
``d = 3 - dim(T_x & T_y)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from . import geometry, gf

__all__ = [
    "SubspaceT",
    "build_sigma3",
    "permutation_subspace",
    "is_lagrangian_stochastic",
    "identity_element",
    "zeta",
    "zeta_inverse",
    "distance",
    "parity_distance",
    "distance_table",
    "r_matrix",
    "r_sparse",
    "boundary_spins",
    "energy_histogram",
    "ground_state",
    "GroundState",
    "moment_prediction",
    "MomentPrediction",
    "s3_partition_sum",
    "theorem1_bound",
    "Theorem1Bound",
]


@dataclass(frozen=True, eq=False)
class SubspaceT:
    """A 3-dimensional subspace of F_p^3 + F_p^3, given by a 3 x 6 basis."""

    basis: np.ndarray
    p: int
    parity: str
    label: object

    def __post_init__(self):
        B = gf.as_fp(self.basis, self.p)
        R, _ = gf.rref(B, self.p)
        if R.shape[0] != 3:
            raise ValueError("basis must have rank 3")
        object.__setattr__(self, "basis", B)
        object.__setattr__(self, "_canon", R)

    @property
    def canonical(self) -> np.ndarray:
        return self._canon

    def __eq__(self, other):
        if not isinstance(other, SubspaceT):
            return NotImplemented
        return self.p == other.p and np.array_equal(self._canon, other._canon)

    def __hash__(self):
        return hash((self.p, self._canon.tobytes()))

    def elements(self) -> np.ndarray:
        """All ``p^3`` vectors of the subspace, shape ``(p^3, 6)``."""
        coeffs = np.array(list(itertools.product(range(self.p), repeat=3)), dtype=np.int64)
        return (coeffs @ self.basis) % self.p

    def __contains__(self, v) -> bool:
        return gf.in_rowspan(self.basis, v, self.p)

    def __repr__(self):
        return f"SubspaceT({self.label}, {self.parity}, p={self.p})"


def is_lagrangian_stochastic(basis, p: int) -> bool:
    """Definitional check: three-dimensional, ``x.x' = y.y'`` on all basis pairs, contains ``1_6``."""
    B = gf.as_fp(basis, p)
    if gf.rank(B, p) != 3:
        return False
    for v, w in itertools.product(B, repeat=2):
        if (v[:3] @ w[:3] - v[3:] @ w[3:]) % p:
            return False
    return gf.in_rowspan(B, np.ones(6, dtype=np.int64), p)


def permutation_subspace(pi, p: int) -> SubspaceT:
    """``T_pi = {(pi y, y)}`` where ``(pi y)_{pi(j)} = y_j``."""
    rows = np.zeros((3, 6), dtype=np.int64)
    for j in range(3):
        rows[j, pi[j]] = 1
        rows[j, 3 + j] = 1
    inversions = sum(pi[i] > pi[j] for i in range(3) for j in range(i + 1, 3))
    return SubspaceT(rows, p, "even" if inversions % 2 == 0 else "odd", tuple(pi))


def _odd_prime_elements(p):
    out = [
        SubspaceT([[1, 1, 1, 1, 1, 1], [1, 0, 0, 1, 0, 0], [0, 1, 0, 0, 1, 0]], p, "even", "*"),
        SubspaceT([[1, 1, 1, 1, 1, 1], [-1, 0, 1, 1, 0, -1], [0, 1, 0, 0, 1, 0]], p, "odd", "*"),
    ]
    for m in range(p):
        out.append(SubspaceT([[1, 1, 1, 1, 1, 1], [-1, m, 1, 1, m, -1], [m, 1, -1, m, -1, 1]],
                             p, "even", m))
    for m in range(p):
        out.append(SubspaceT([[1, 1, 1, 1, 1, 1], [1, m, 0, 1, m, 0], [-m, 1, m - 1, m, -1, 1 - m]],
                             p, "odd", m))
    # order: even block first, then odd
    return [out[0]] + out[2:2 + p] + [out[1]] + out[2 + p:]


def build_sigma3(p: int) -> list:
    """The 2p+2 spin values; for p = 2 the six permutation subspaces."""
    if not gf.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)]
        return [permutation_subspace(pi, 2) for pi in perms]
    return _odd_prime_elements(p)


def _find(sigma, target):
    for i, T in enumerate(sigma):
        if T == target:
            return i
    raise LookupError("element not in Sigma_3(p)")


def identity_element(sigma) -> int:
    return _find(sigma, permutation_subspace((0, 1, 2), sigma[0].p))


def zeta(sigma) -> int:
    """Index of the cyclic shift 1 -> 2 -> 3 (``T_{1,even}`` for odd p)."""
    return _find(sigma, permutation_subspace((1, 2, 0), sigma[0].p))


def zeta_inverse(sigma) -> int:
    return _find(sigma, permutation_subspace((2, 0, 1), sigma[0].p))


def distance(T1: SubspaceT, T2: SubspaceT) -> int:
    """``3 - dim(T1 & T2)``, via the rank of the stacked bases."""
    if T1.p != T2.p:
        raise ValueError("subspaces over different primes")
    return gf.rank(np.vstack([T1.basis, T2.basis]), T1.p) - 3


def parity_distance(T1: SubspaceT, T2: SubspaceT) -> int:
    if T1 == T2:
        return 0
    return 1 if T1.parity != T2.parity else 2


def distance_table(sigma) -> np.ndarray:
    K = len(sigma)
    D = np.zeros((K, K), dtype=np.int64)
    for i, j in itertools.product(range(K), repeat=2):
        D[i, j] = distance(sigma[i], sigma[j])
    return D


def _replica_index(X, p, n):
    """Replica-major basis index of ``(3, n)`` digit arrays (broadcast over leading axes)."""
    w = p ** np.arange(3 * n - 1, -1, -1, dtype=np.int64)
    return (X.reshape(X.shape[:-2] + (3 * n,)) * w).sum(-1)


def r_sparse(T: SubspaceT, n: int = 1) -> sp.csr_matrix:
    """``R(T) = r(T)^{(x) n}`` in the replica-major basis ``|v1>|v2>|v3>``, ``v_c in F_p^n``."""
    p = T.p
    E = T.elements()  # (p^3, 6)
    idx = np.array(list(itertools.product(range(E.shape[0]), repeat=n)), dtype=np.int64)
    sel = E[idx]  # (p^3n, n, 6) : per qudit an element (x, y)
    X = sel[..., :3].transpose(0, 2, 1)  # (.., 3, n)
    Y = sel[..., 3:].transpose(0, 2, 1)
    rows = _replica_index(X, p, n)
    cols = _replica_index(Y, p, n)
    dim = p ** (3 * n)
    return sp.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(dim, dim))


def r_matrix(T: SubspaceT, n: int = 1, cap: int = 3 ** 9) -> np.ndarray:
    if T.p ** (3 * n) > cap:
        raise ValueError("dense cap exceeded")
    return r_sparse(T, n).toarray()


# --- the spin model --------------------------------------------------------

def boundary_spins(G, A, B, C, sigma):
    """Fixed spins: zeta on A, zeta^-1 on B, identity on C."""
    if sorted(list(A) + list(B) + list(C)) != sorted(G.boundary):
        raise ValueError("A, B, C must partition the boundary")
    z, zi, e = zeta(sigma), zeta_inverse(sigma), identity_element(sigma)
    fixed = {}
    fixed.update({x: z for x in A})
    fixed.update({x: zi for x in B})
    fixed.update({x: e for x in C})
    return fixed


def _default_cap(p):
    return 6 ** 10


def _configs_energy(G, A, B, C, sigma, cap=None, chunk=1 << 17):
    """Yield ``(configs, energies)`` chunks in mixed-radix order over bulk vertices."""
    K = len(sigma)
    D = distance_table(sigma)
    fixed = boundary_spins(G, A, B, C, sigma)
    bulk = G.bulk
    m = len(bulk)
    total = K ** m
    if total > (cap or _default_cap(G.p)):
        raise geometry.EnumerationCapError(f"{total} configurations exceed the cap")
    pos = {x: i for i, x in enumerate(bulk)}
    radix = K ** np.arange(m - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        cfg = (idx[:, None] // radix[None, :]) % K if m else np.zeros((idx.size, 0), np.int64)
        en = np.zeros(idx.size, dtype=np.int64)
        for u, v in G.edges:
            su = cfg[:, pos[u]] if u in pos else fixed[u]
            sv = cfg[:, pos[v]] if v in pos else fixed[v]
            en += D[su, sv]
        yield cfg, en


def energy_histogram(G, A, B, C, cap=None) -> dict:
    sigma = build_sigma3(G.p)
    hist = {}
    for _, en in _configs_energy(G, A, B, C, sigma, cap):
        vals, counts = np.unique(en, return_counts=True)
        for e, c in zip(vals.tolist(), counts.tolist()):
            hist[e] = hist.get(e, 0) + c
    return dict(sorted(hist.items()))


@dataclass
class GroundState:
    E0: int
    degeneracy: int
    configs: list
    sigma: list
    bulk: list


def ground_state(G, A, B, C, cap=None) -> GroundState:
    """Exact minimum energy and all minimizing configurations."""
    sigma = build_sigma3(G.p)
    best = None
    keep = []
    for cfg, en in _configs_energy(G, A, B, C, sigma, cap):
        lo = int(en.min())
        if best is None or lo < best:
            best, keep = lo, []
        if lo == best:
            keep += [tuple(r) for r in cfg[en == best].tolist()]
    return GroundState(best, len(keep), keep, sigma, G.bulk)


@dataclass
class MomentPrediction:
    value: Fraction  # exact <tr (Psi_AB^{T_B})^3>
    careful_bound: Fraction
    partition_sum: Fraction
    histogram: dict
    formula_valid: bool  # every bulk vertex satisfies the third-moment formula's hypothesis


def moment_prediction(G, A, B, C, cap=None) -> MomentPrediction:
    """Exact ensemble average of ``tr (Psi_AB^{T_B})^3`` for the unnormalized network state.

    ``value = prod_x [D_x (D_x+1) (D_x+p)]^-1 * sum_configs p^(-N E)`` and
    ``careful_bound = p^(-3 N_b) * sum_configs p^(-N E)``.
    """
    p, N = G.p, G.N
    hist = energy_histogram(G, A, B, C, cap)
    Z = sum(Fraction(c, p ** (N * e)) for e, c in hist.items())
    pref = Fraction(1)
    valid = True
    for x in G.bulk:
        n = N * G.degree(x)
        Dx = p ** n
        pref /= Dx * (Dx + 1) * (Dx + p)
        if p != 2 and n < 2:
            valid = False
    return MomentPrediction(pref * Z, Fraction(1, p ** (3 * G.N_b)) * Z, Z, hist, valid)


def s3_partition_sum(G, A, B, C) -> Fraction:
    """Permutation-only partition sum ``sum 2^(-N sum d(pi_x, pi_y))`` (transposition distance)."""
    p, N = G.p, G.N
    perms = list(itertools.permutations(range(3)))

    def cycles(q):
        seen, c = set(), 0
        for i in range(3):
            if i not in seen:
                c += 1
                while i not in seen:
                    seen.add(i)
                    i = q[i]
        return c

    def dist(a, b):
        inv_a = [0] * 3
        for i, ai in enumerate(a):
            inv_a[ai] = i
        return 3 - cycles([inv_a[b[i]] for i in range(3)])

    fixed = {}
    fixed.update({x: (1, 2, 0) for x in A})
    fixed.update({x: (2, 0, 1) for x in B})
    fixed.update({x: (0, 1, 2) for x in C})
    bulk = G.bulk
    Z = Fraction(0)
    for assign in itertools.product(perms, repeat=len(bulk)):
        s = dict(fixed)
        s.update(zip(bulk, assign))
        e = sum(dist(s[u], s[v]) for u, v in G.edges)
        Z += Fraction(1, p ** (N * e))
    return Z


@dataclass
class Theorem1Bound:
    num_b: int
    num_A: int
    num_B: int
    num_C: int
    delta: Fraction
    p: int

    @property
    def residual_term(self) -> float:
        return self.num_b * math.log(self.p + 1, self.p)

    @property
    def cut_term(self) -> float:
        return math.log(self.num_A * self.num_B * self.num_C, self.p)

    @property
    def delta_term(self) -> float:
        return 4 * float(self.delta)

    @property
    def value(self) -> float:
        return self.residual_term + self.cut_term + self.delta_term


def theorem1_bound(G, A, B, C, cap=geometry.ENUM_CAP) -> Theorem1Bound:
    """``#_b log_p(p+1) + log_p(#_A #_B #_C) + 4 delta`` with ``delta = (2p+2)^|V_b| / p^N``."""
    counts = [geometry.min_cut(G, R, cap).num_min_cuts for R in (A, B, C)]
    nb, _ = geometry.max_residual_components(G, A, B, C, cap)
    delta = Fraction((2 * G.p + 2) ** len(G.bulk), G.p ** G.N)
    return Theorem1Bound(nb, *counts, delta, G.p)

"""Stabilizer tableaux over GF(p) with exact phase and trace bookkeeping.

A :class:`StabilizerTableau` with generators ``g_1..g_k`` (commuting,
independent Weyl operators) and ``log_trace = t`` represents the operator

    Psi = p^t * rho_G,      rho_G = p^-n * sum_{g in G} g,

so ``tr Psi = p^t``.  Pure states have ``k = n``; a normalized pure state has
``t = 0``.  Projections that annihilate the operator return :data:`ZERO`.
"""
from __future__ import annotations

import itertools

import numpy as np

from . import gf
from .weyl import WeylOperator, _mul, _pow, _sym, phase_modulus

__all__ = [
    "StabilizerTableau",
    "ZeroState",
    "ZERO",
    "canonicalize",
    "sample_uniform",
    "enumerate_all",
    "count_pure_states",
    "postselect",
    "tensor",
    "permute_qudits",
    "restrict_trace_out",
    "bell_pairs",
    "ghz_state",
    "zero_state",
]


class ZeroState:
    """Marker for the zero operator produced by an incompatible projection."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ZERO"

    def __bool__(self):
        return False


ZERO = ZeroState()


class StabilizerTableau:
    """Generator matrix ``gens`` (k x 2n, ``[x | z]`` layout) with phases."""

    __slots__ = ("n", "p", "gens", "phases", "log_trace")

    def __init__(self, gens, phases, p: int, log_trace: int = 0, n: int | None = None,
                 check: bool = True):
        gens = np.array(gens, dtype=np.int64)
        if gens.ndim == 1:
            gens = gens.reshape(0 if gens.size == 0 else 1, -1)
        if n is None:
            n = gens.shape[1] // 2
        if gens.size == 0:
            gens = np.zeros((0, 2 * n), dtype=np.int64)
        self.n = int(n)
        self.p = int(p)
        self.gens = gens % p
        self.phases = np.array(phases, dtype=np.int64).reshape(-1) % phase_modulus(p)
        self.log_trace = int(log_trace)
        if check:
            self.validate()

    @property
    def k(self) -> int:
        return self.gens.shape[0]

    @property
    def is_pure(self) -> bool:
        return self.k == self.n

    def validate(self):
        p = self.p
        if self.gens.shape[1] != 2 * self.n:
            raise ValueError("generator matrix must have 2n columns")
        if self.phases.shape[0] != self.k:
            raise ValueError("one phase per generator required")
        if self.k > self.n:
            raise ValueError("more generators than qudits")
        if p == 2 and np.any(self.phases % 2):
            raise ValueError("qubit stabilizer elements must have phase +-1")
        if self.k:
            S = _sym(self.gens[:, None, :], self.gens[None, :, :]) % p
            if S.any():
                raise ValueError("generators do not commute")
            if gf.rank(self.gens, p) != self.k:
                raise ValueError("generators are not independent")

    def copy(self) -> "StabilizerTableau":
        return StabilizerTableau(self.gens.copy(), self.phases.copy(), self.p,
                                 self.log_trace, self.n, check=False)

    def generator(self, i: int) -> WeylOperator:
        return WeylOperator.from_vector(self.gens[i], self.p, int(self.phases[i]))

    def generators(self):
        return [self.generator(i) for i in range(self.k)]

    def canonical(self) -> "StabilizerTableau":
        return canonicalize(self)

    def key(self) -> bytes:
        """Hashable identity of the represented operator."""
        c = canonicalize(self)
        return c.gens.tobytes() + b"|" + c.phases.tobytes() + b"|%d|%d" % (c.n, c.log_trace)

    def __eq__(self, other):
        if not isinstance(other, StabilizerTableau):
            return NotImplemented
        return self.p == other.p and self.n == other.n and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"StabilizerTableau(n={self.n}, k={self.k}, p={self.p}, log_trace={self.log_trace})"


# --- row reduction with phase tracking -------------------------------------

def _tracked_rref(gens, phases, p, cols=None):
    """RREF of the generator rows, tracking group-element phases.

    Row operations are group multiplications, so every returned row is an
    element of the same stabilizer group.  Returns ``(gens, phases, pivots)``.
    """
    A = gens.copy()
    s = phases.copy()
    nrows, ncols = A.shape
    order = range(ncols) if cols is None else cols
    pivots = []
    r = 0
    for c in order:
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
            s[[r, piv]] = s[[piv, r]]
        if A[r, c] != 1:
            A[r], s[r] = _pow(A[r], s[r], gf.inv(A[r, c], p), p)
        f = A[:, c].copy()
        f[r] = 0
        rows = np.nonzero(f)[0]
        if rows.size:
            b, t = _pow(A[r][None, :], s[r], (-f[rows]) % p, p)
            A[rows], s[rows] = _mul(A[rows], s[rows], b, t, p)
        pivots.append(int(c))
        r += 1
    return A[:r], s[:r], pivots


def canonicalize(T: StabilizerTableau) -> StabilizerTableau:
    """Unique generating set: RREF with pivots scanned X block then Z block."""
    A, s, _ = _tracked_rref(T.gens, T.phases, T.p)
    return StabilizerTableau(A, s, T.p, T.log_trace, T.n, check=False)


def _reduce_against(gens, phases, pivots, v, s, p):
    """Multiply ``tau^s W(v)`` by inverses of RREF rows to clear pivot columns."""
    v = v.copy()
    for i, c in enumerate(pivots):
        if v[c]:
            v, s = _mul(v, s, *_pow(gens[i], phases[i], (-v[c]) % p, p), p)
    return v, int(s)


# --- projection ------------------------------------------------------------

def _postselect_raw(gens, phases, gv, gs, p):
    """Array-level projection; returns ``(gens, phases, dlog)`` or ``None`` for zero.

    ``gens``/``phases`` are modified in place when the generator count is unchanged.
    """
    if not gv.any():
        return None if gs else (gens, phases, 0)
    if gens.shape[0]:
        c = _sym(gens, gv) % p
        nz = np.nonzero(c)[0]
    else:
        nz = ()
    if len(nz):
        j = nz[0]
        others = nz[1:]
        if others.size:
            lam = (-c[others] * gf.inv(c[j], p)) % p
            b, t = _pow(gens[j][None, :], phases[j], lam, p)
            gens[others], phases[others] = _mul(gens[others], phases[others], b, t, p)
        gens[j] = gv
        phases[j] = gs
        return gens, phases, -1
    # g commutes with the whole group
    R, s, piv = _tracked_rref(gens, phases, p)
    v, rem = _reduce_against(R, s, piv, gv, gs, p)
    if not v.any():
        return None if rem else (gens, phases, 0)
    return np.concatenate([gens, gv[None, :]]), np.concatenate([phases, [gs]]), -1


def postselect(T: StabilizerTableau, g: WeylOperator):
    """Apply ``P_g = (1/p) sum_k g^k`` on both sides of the represented operator.

    Returns a new tableau whose ``log_trace`` carries the exact trace, or
    :data:`ZERO` if the projection annihilates the operator.
    """
    if T is ZERO:
        return ZERO
    if g.p != T.p or g.n != T.n:
        raise ValueError("operator does not act on the tableau's qudits")
    if not g.is_stabilizer_eligible:
        raise ValueError("postselected operator must have order dividing p")
    out = _postselect_raw(T.gens.copy(), T.phases.copy(), g.vector, g.phase, T.p)
    if out is None:
        return ZERO
    gens, phases, dlog = out
    return StabilizerTableau(gens, phases, T.p, T.log_trace + dlog, T.n, check=False)


# --- structural operations -------------------------------------------------

def tensor(T1: StabilizerTableau, T2: StabilizerTableau) -> StabilizerTableau:
    if T1 is ZERO or T2 is ZERO:
        return ZERO
    if T1.p != T2.p:
        raise ValueError("cannot tensor tableaux over different primes")
    n1, n2 = T1.n, T2.n
    G = np.zeros((T1.k + T2.k, 2 * (n1 + n2)), dtype=np.int64)
    G[: T1.k, :n1] = T1.gens[:, :n1]
    G[: T1.k, n1 + n2: 2 * n1 + n2] = T1.gens[:, n1:]
    G[T1.k:, n1: n1 + n2] = T2.gens[:, :n2]
    G[T1.k:, 2 * n1 + n2:] = T2.gens[:, n2:]
    phases = np.concatenate([T1.phases, T2.phases])
    return StabilizerTableau(G, phases, T1.p, T1.log_trace + T2.log_trace, n1 + n2, check=False)


def permute_qudits(T: StabilizerTableau, sigma) -> StabilizerTableau:
    """Relabel qudits: new qudit ``j`` is old qudit ``sigma[j]``."""
    sigma = np.asarray(sigma, dtype=np.int64)
    if sorted(sigma.tolist()) != list(range(T.n)):
        raise ValueError("sigma must be a permutation of the qudit indices")
    cols = np.concatenate([sigma, sigma + T.n])
    return StabilizerTableau(T.gens[:, cols], T.phases, T.p, T.log_trace, T.n, check=False)


def _columns(qudits, n):
    q = np.asarray(sorted(qudits), dtype=np.int64)
    return np.concatenate([q, q + n])


def restrict_trace_out(T: StabilizerTableau, subset) -> StabilizerTableau:
    """Partial trace over the qudits in ``subset``; remaining qudits keep their order."""
    if T is ZERO:
        return ZERO
    subset = sorted(set(int(i) for i in subset))
    if any(i < 0 or i >= T.n for i in subset):
        raise IndexError("qudit index out of range")
    if not subset:
        return T.copy()
    keep = [i for i in range(T.n) if i not in set(subset)]
    traced_cols = _columns(subset, T.n)
    keep_cols = _columns(keep, T.n)
    order = list(traced_cols) + list(keep_cols)
    A, s, piv = _tracked_rref(T.gens, T.phases, T.p, cols=order)
    local = [i for i, c in enumerate(piv) if c in set(keep_cols.tolist())]
    G = A[local][:, keep_cols] if local else np.zeros((0, 2 * len(keep)), dtype=np.int64)
    return StabilizerTableau(G, s[local], T.p, T.log_trace, len(keep), check=False)


# --- constructors ----------------------------------------------------------

def zero_state(n: int, p: int) -> StabilizerTableau:
    """The computational basis state |0...0>."""
    G = np.zeros((n, 2 * n), dtype=np.int64)
    G[:, n:] = np.eye(n, dtype=np.int64)
    return StabilizerTableau(G, np.zeros(n), p, 0, n, check=False)


def bell_pairs(pairs, n: int, p: int) -> StabilizerTableau:
    """Product of maximally entangled states ``sum_i |ii>/sqrt(p)`` on the given qudit pairs.

    Qudits not covered by ``pairs`` are left in ``|0>``.
    """
    rows = []
    used = set()
    for u, v in pairs:
        xx = np.zeros(2 * n, dtype=np.int64)
        xx[u] = xx[v] = 1
        zz = np.zeros(2 * n, dtype=np.int64)
        zz[n + u] = 1
        zz[n + v] = p - 1
        rows += [xx, zz]
        used |= {u, v}
    for q in range(n):
        if q not in used:
            r = np.zeros(2 * n, dtype=np.int64)
            r[n + q] = 1
            rows.append(r)
    return StabilizerTableau(np.array(rows).reshape(-1, 2 * n), np.zeros(len(rows)), p, 0, n)


def ghz_state(n: int, p: int) -> StabilizerTableau:
    """``sum_i |i...i>/sqrt(p)`` on ``n`` qudits."""
    rows = []
    x = np.zeros(2 * n, dtype=np.int64)
    x[:n] = 1
    rows.append(x)
    for q in range(n - 1):
        z = np.zeros(2 * n, dtype=np.int64)
        z[n + q] = 1
        z[n + q + 1] = p - 1
        rows.append(z)
    return StabilizerTableau(np.array(rows), np.zeros(n), p, 0, n)


def _random_phases(k, p, rng):
    if p == 2:
        return 2 * rng.integers(0, 2, size=k)
    return rng.integers(0, p, size=k)


def sample_uniform(n: int, p: int, rng) -> StabilizerTableau:
    """Uniformly random pure stabilizer state on ``n`` qudits.

    Builds a Lagrangian subspace one vector at a time: each new vector is
    uniform among the nonzero vectors of the current symplectic complement
    ``W``, after which ``W`` shrinks by the hyperbolic pair containing it.
    Every Lagrangian subspace is reached by the same number of sequences, and
    the phases are then uniform, so the state is uniform.
    """
    if n < 1:
        raise ValueError("n must be positive")
    B = np.eye(2 * n, dtype=np.int64)
    L = np.zeros((n, 2 * n), dtype=np.int64)
    for step in range(n):
        m = B.shape[0]
        while True:
            c = rng.integers(0, p, size=m)
            if c.any():
                break
        w = (c @ B) % p
        L[step] = w
        if step == n - 1:
            break
        bw = _sym(B, w) % p
        j = int(np.nonzero(bw)[0][0])
        u = (B[j] * gf.inv(-bw[j], p)) % p
        bu = _sym(B, u) % p
        B = (B + np.outer(bw, u) - np.outer(bu, w)) % p
        drop_i = next(i for i in range(m) if i != j and c[i])
        B = np.delete(B, [j, drop_i], axis=0)
    return StabilizerTableau(L, _random_phases(n, p, rng), p, 0, n, check=False)


def count_pure_states(n: int, p: int) -> int:
    """Number of pure stabilizer states: ``p^n prod_{i=1..n} (p^i + 1)``."""
    c = p ** n
    for i in range(1, n + 1):
        c *= p ** i + 1
    return c


def _lagrangians(n, p):
    J = np.zeros((2 * n, 2 * n), dtype=np.int64)
    J[:n, n:] = np.eye(n, dtype=np.int64)
    J[n:, :n] = -np.eye(n, dtype=np.int64)
    level = {b"": np.zeros((0, 2 * n), dtype=np.int64)}
    for _ in range(n):
        nxt = {}
        for S in level.values():
            perp = gf.kernel((S @ J) % p, p) if S.shape[0] else np.eye(2 * n, dtype=np.int64)
            for coeffs in itertools.product(range(p), repeat=perp.shape[0]):
                v = (np.asarray(coeffs, dtype=np.int64) @ perp) % p
                if not v.any():
                    continue
                R, _ = gf.rref(np.vstack([S, v]), p)
                if R.shape[0] == S.shape[0]:
                    continue
                key = R.tobytes()
                if key not in nxt:
                    nxt[key] = R
        level = nxt
    return list(level.values())


def enumerate_all(n: int, p: int, cap: int = 27) -> list[StabilizerTableau]:
    """Every pure stabilizer state on ``n`` qudits, each exactly once.

    Raises ``ValueError`` when ``p**n`` exceeds ``cap``.
    """
    if p ** n > cap:
        raise ValueError(f"enumeration cap exceeded: p^n = {p ** n} > {cap}")
    allowed = [0, 2] if p == 2 else list(range(p))
    out = []
    for L in _lagrangians(n, p):
        for ph in itertools.product(allowed, repeat=n):
            out.append(canonicalize(StabilizerTableau(L, ph, p, 0, n, check=False)))
    return out

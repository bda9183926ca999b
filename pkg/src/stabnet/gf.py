"""Dense linear algebra over the prime field GF(p).

Matrices are plain ``numpy`` integer arrays with entries in ``[0, p)``.
All functions are pure and return fresh arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PrimeField",
    "is_prime",
    "inv",
    "as_fp",
    "rref",
    "rank",
    "kernel",
    "solve",
    "in_rowspan",
    "beta_form",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field of residues modulo a prime ``p``."""

    p: int

    def __post_init__(self):
        if not is_prime(int(self.p)):
            raise ValueError(f"{self.p} is not prime")

    def inv(self, a: int) -> int:
        return inv(a, self.p)

    def rref(self, M):
        return rref(M, self.p)

    def rank(self, M) -> int:
        return rank(M, self.p)

    def kernel(self, M):
        return kernel(M, self.p)

    def solve(self, M, b):
        return solve(M, b, self.p)


def inv(a: int, p: int) -> int:
    """Multiplicative inverse via Fermat's little theorem."""
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod p")
    return pow(a, p - 2, p)


def as_fp(M, p: int) -> np.ndarray:
    M = np.array(M, dtype=np.int64)
    if M.ndim == 1:
        M = M[None, :]
    return M % p


def rref(M, p: int, cols=None):
    """Reduced row echelon form of ``M`` over GF(p).

    ``cols`` optionally gives the order in which columns are tried as pivots
    (default: left to right).  Zero rows are dropped from the result.

    Returns
    -------
    R : ndarray, shape (r, ncols)
        The nonzero rows of the reduced form; ``r`` is the rank.
    pivots : list of int
        Pivot column of each row of ``R``.
    """
    A = as_fp(M, p).copy()
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
        A[r] = (A[r] * inv(A[r, c], p)) % p
        f = A[:, c].copy()
        f[r] = 0
        rows = np.nonzero(f)[0]
        if rows.size:
            A[rows] = (A[rows] - np.outer(f[rows], A[r])) % p
        pivots.append(int(c))
        r += 1
    return A[:r], pivots


def rank(M, p: int) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(M, p)[1])


def kernel(M, p: int) -> np.ndarray:
    """Basis (as rows) of the right null space ``{x : M x = 0}``."""
    M = as_fp(M, p)
    ncols = M.shape[1]
    R, pivots = rref(M, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    K = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        K[i, f] = 1
        for row, pc in enumerate(pivots):
            K[i, pc] = (-R[row, f]) % p
    return K


def solve(M, b, p: int):
    """One solution ``x`` of ``M x = b`` over GF(p), or ``None`` if inconsistent."""
    M = as_fp(M, p)
    b = np.asarray(b, dtype=np.int64).reshape(-1) % p
    nrows, ncols = M.shape
    if b.shape[0] != nrows:
        raise ValueError("dimension mismatch between M and b")
    aug = np.concatenate([M, b[:, None]], axis=1)
    R, pivots = rref(aug, p)
    if ncols in pivots:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc] = R[row, ncols]
    return x


def in_rowspan(M, v, p: int) -> bool:
    M = as_fp(M, p)
    v = np.asarray(v, dtype=np.int64).reshape(-1) % p
    if M.shape[0] == 0:
        return not v.any()
    return solve(M.T, v, p) is not None


def beta_form(v, w, p: int) -> int:
    """The split form ``x.x' - y.y'`` on F_p^3 + F_p^3 (or any even length)."""
    v = np.asarray(v, dtype=np.int64)
    w = np.asarray(w, dtype=np.int64)
    if v.shape != w.shape or v.shape[-1] % 2:
        raise ValueError("beta_form expects two vectors of equal even length")
    h = v.shape[-1] // 2
    return int((v[:h] @ w[:h] - v[h:] @ w[h:]) % p)

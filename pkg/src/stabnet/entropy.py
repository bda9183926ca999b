"""Entropies and GHZ/Bell-pair accounting for stabilizer states.

All entropies are integers in units of ``log p``.  The GHZ count uses the
third moment of the partially transposed reduced state,
``tr (rho_AB^{T_B})^3 = p^-m``, which is evaluated exactly from the
stabilizer group: the moment collapses to a character sum over the local
group of ``AB`` whose value is fixed by the rank of the symplectic form
restricted to ``B``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import gf
from .tableau import ZERO, StabilizerTableau, _tracked_rref, restrict_trace_out
from .weyl import _mul, _red, _sym, phase_modulus, tau

__all__ = [
    "GhzAccountingError",
    "GhzContent",
    "FourpartiteReport",
    "entropy",
    "mutual_information",
    "tripartite_information",
    "local_group",
    "pt_moment3",
    "ghz_content",
    "fourpartite_report",
]


class GhzAccountingError(RuntimeError):
    """Raised when the (a, b, c, g) bookkeeping produces a non-integer or negative count."""


def _subset(T, A):
    A = sorted(set(int(i) for i in A))
    if any(i < 0 or i >= T.n for i in A):
        raise ValueError("subset index out of range")
    return A


def _cols(qudits, n):
    q = np.asarray(qudits, dtype=np.int64)
    return np.concatenate([q, q + n])


def entropy(T: StabilizerTableau, A) -> int:
    """``S(A) = |A| - dim G_A`` where ``G_A`` is the subgroup supported on ``A``."""
    if T is ZERO:
        raise ValueError("entropy of the zero operator is undefined")
    A = _subset(T, A)
    comp = [i for i in range(T.n) if i not in set(A)]
    if not comp:
        return T.n - T.k
    r = gf.rank(T.gens[:, _cols(comp, T.n)], T.p) if T.k else 0
    return len(A) - (T.k - r)


def _disjoint(*sets):
    seen = set()
    for s in sets:
        s = set(s)
        if seen & s:
            raise ValueError("subsystems overlap")
        seen |= s


def mutual_information(T, A, B) -> int:
    _disjoint(A, B)
    return entropy(T, A) + entropy(T, B) - entropy(T, list(A) + list(B))


def tripartite_information(T, A, B, C) -> int:
    """``I(A:B) + I(A:C) - I(A:BC)``."""
    _disjoint(A, B, C)
    return (mutual_information(T, A, B) + mutual_information(T, A, C)
            - mutual_information(T, A, list(B) + list(C)))


def local_group(T: StabilizerTableau, keep):
    """Generators of the subgroup supported on ``keep`` (as a tableau on those qudits)."""
    keep = _subset(T, keep)
    traced = [i for i in range(T.n) if i not in set(keep)]
    return restrict_trace_out(T, traced)


def _check_partition(T, A, B):
    A = _subset(T, A)
    B = _subset(T, B)
    _disjoint(A, B)
    if not T.is_pure:
        raise ValueError("input must be a pure stabilizer state")
    return A, B


def pt_moment3(T: StabilizerTableau, A, B, method: str = "rank", cap: int = 1 << 20) -> int:
    """Exponent ``m`` with ``tr (rho_AB^{T_B})^3 = p^-m`` for a pure state.

    ``method="rank"`` uses the closed form ``m = 2|AB| - 2k + rank(Q)`` where
    ``k`` is the dimension of the local group of ``AB`` and ``Q`` the Gram
    matrix of the symplectic form restricted to ``B``.  ``method="enumerate"``
    sums ``tr(g'h'k')`` over all element triples of the local group whose
    vectors cancel (``g'`` is ``g`` with the ``B`` part transposed), using
    explicit Weyl phase arithmetic; it is capped at ``cap`` pairs.
    """
    A, B = _check_partition(T, A, B)
    AB = sorted(A + B)
    G = local_group(T, AB)
    nab = len(AB)
    posB = [AB.index(q) for q in B]
    if method == "rank":
        k = G.k
        if k == 0:
            return 2 * nab
        VB = G.gens[:, _cols(posB, nab)]
        Q = _sym(VB[:, None, :], VB[None, :, :]) % T.p
        return 2 * nab - 2 * k + gf.rank(Q, T.p)
    if method == "enumerate":
        return _pt_moment3_enumerate(G, posB, cap)
    raise ValueError(f"unknown method {method!r}")


def _group_elements(G):
    """All ``(vector, phase)`` elements of the stabilizer group generated by ``G``."""
    p = G.p
    n2 = 2 * G.n
    elems = [(np.zeros(n2, dtype=np.int64), 0)]
    for i in range(G.k):
        g, s = G.gens[i], int(G.phases[i])
        new = []
        for v, t in elems:
            cur_v, cur_s = v, t
            for _ in range(p):
                new.append((cur_v, int(cur_s)))
                cur_v, cur_s = _mul(cur_v, cur_s, g, s, p)
        elems = new
    return elems


def _pt_moment3_enumerate(G, posB, cap):
    p, n = G.p, G.n
    D = phase_modulus(p)
    if p ** (2 * G.k) > cap:
        raise ValueError("enumeration cap exceeded")
    flip = np.zeros(2 * n, dtype=np.int64)
    flip[:] = 1
    flip[np.asarray(posB, dtype=np.int64)] = -1  # negate x on B

    def transpose(v, s):
        w = v * flip
        return w % p, (s + _red(w, p)) % D

    elems = [transpose(v, s) for v, s in _group_elements(G)]
    index = {v.tobytes(): (v, s) for v, s in elems}
    total = 0j
    t = tau(p)
    for (v1, s1), (v2, s2) in itertools.product(elems, repeat=2):
        v12, s12 = _mul(v1, s1, v2, s2, p)
        need = (-v12) % p
        # a third factor exists only if its (transposed) vector cancels v12
        partner = index.get(need.tobytes())
        if partner is None:
            continue
        v3, s3 = partner
        v, s = _mul(v12, s12, v3, s3, p)
        assert not v.any()
        total += t ** int(s)
    # tr(rho^T)^3 = p^{-3n} * p^n * total
    val = total.real / p ** (2 * n)
    m = -np.log(val) / np.log(p)
    mi = int(round(m))
    if abs(m - mi) > 1e-9 or abs(total.imag) > 1e-6:
        raise GhzAccountingError(f"partial-transpose moment is not a power of p: {val}")
    return mi


@dataclass(frozen=True)
class GhzContent:
    """Counts in the normal form ``Phi_AB^c Phi_AC^b Phi_BC^a GHZ^g``."""

    a: int
    b: int
    c: int
    g: int

    def as_tuple(self):
        return (self.a, self.b, self.c, self.g)


def _half(num, what):
    if num < 0 or num % 2:
        raise GhzAccountingError(f"{what} = {num}/2 is not a nonnegative integer")
    return num // 2


def ghz_content(T: StabilizerTableau, A, B, C) -> GhzContent:
    A, B, C = (_subset(T, X) for X in (A, B, C))
    _disjoint(A, B, C)
    if sorted(A + B + C) != list(range(T.n)):
        raise ValueError("A, B, C must partition the qudits")
    if not T.is_pure:
        raise ValueError("input must be a pure stabilizer state")
    SA, SB, SC = entropy(T, A), entropy(T, B), entropy(T, C)
    m = pt_moment3(T, A, B)
    g = SA + SB + SC - m
    if g < 0:
        raise GhzAccountingError(f"negative GHZ count {g}")
    # pure state: S(AB) = S(C) etc.
    c = _half(SA + SB - SC - g, "c")
    b = _half(SA + SC - SB - g, "b")
    a = _half(SB + SC - SA - g, "a")
    return GhzContent(a, b, c, g)


@dataclass
class FourpartiteReport:
    """Bell-pair accounting for a four-party pure state."""

    t: np.ndarray
    i3: int
    residual_entropies: list
    entropies: list
    ghz: dict = field(default_factory=dict)

    @property
    def g_max(self) -> int:
        return max(self.ghz.values()) if self.ghz else 0


def fourpartite_report(T: StabilizerTableau, parts) -> FourpartiteReport:
    parts = [_subset(T, P) for P in parts]
    if len(parts) != 4:
        raise ValueError("need exactly four parts")
    _disjoint(*parts)
    if sorted(sum(parts, [])) != list(range(T.n)):
        raise ValueError("parts must partition the qudits")
    t = np.zeros((4, 4), dtype=np.int64)
    ghz = {}
    for i, j in itertools.combinations(range(4), 2):
        rest = [q for k in range(4) if k not in (i, j) for q in parts[k]]
        gc = ghz_content(T, parts[i], parts[j], rest)
        t[i, j] = t[j, i] = gc.c
        ghz[(i, j)] = gc.g
    S = [entropy(T, P) for P in parts]
    i3 = tripartite_information(T, parts[0], parts[1], parts[2])
    resid = [S[i] - int(t[i].sum()) for i in range(4)]
    return FourpartiteReport(t, i3, resid, S, ghz)

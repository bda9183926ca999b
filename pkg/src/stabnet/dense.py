"""Brute-force state-vector and density-matrix reference computations.

Everything here is deliberately naive: explicit Weyl matrices, explicit
projectors, eigenvalue entropies, reshaped partial transposes.  It exists to
check the algebraic fast paths on small systems.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .tableau import ZERO, StabilizerTableau
from .weyl import WeylOperator, tau

__all__ = [
    "DenseState",
    "VECTOR_CAP",
    "MATRIX_CAP",
    "shift",
    "clock",
    "weyl_matrix",
    "tableau_projector",
    "tableau_density",
    "tableau_to_dense",
    "stabilizes",
    "partial_trace",
    "partial_transpose",
    "dense_entropy",
    "dense_pt3",
    "dense_contract",
]

VECTOR_CAP = 3 ** 5
MATRIX_CAP = 6561


@dataclass
class DenseState:
    p: int
    n: int
    amplitudes: np.ndarray

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def normalized(self) -> "DenseState":
        nrm = np.linalg.norm(self.amplitudes)
        return DenseState(self.p, self.n, self.amplitudes / nrm)

    def projector(self) -> np.ndarray:
        a = self.amplitudes
        return np.outer(a, a.conj())


def shift(p: int) -> np.ndarray:
    return np.roll(np.eye(p), 1, axis=0)


def clock(p: int) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * np.arange(p) / p))


def weyl_matrix(op: WeylOperator) -> np.ndarray:
    """Dense ``tau^s tau^(x.z) X^x Z^z``, built factor by factor."""
    p = op.p
    X, Z = shift(p), clock(p)
    factors = [
        np.linalg.matrix_power(X, int(x)) @ np.linalg.matrix_power(Z, int(z))
        for x, z in zip(op.x, op.z)
    ]
    M = reduce(np.kron, factors, np.eye(1))
    return tau(p) ** (op.phase + int(op.x @ op.z)) * M


def _check_cap(dim, cap):
    if dim > cap:
        raise ValueError(f"dense cap exceeded: dimension {dim} > {cap}")


def tableau_projector(T: StabilizerTableau) -> np.ndarray:
    """``prod_i (1/p) sum_k g_i^k``: the projector onto the stabilized subspace."""
    dim = T.p ** T.n
    _check_cap(dim * dim, MATRIX_CAP * 10)
    P = np.eye(dim, dtype=complex)
    for g in T.generators():
        G = weyl_matrix(g)
        acc = np.zeros_like(P)
        Gk = np.eye(dim, dtype=complex)
        for _ in range(T.p):
            acc += Gk
            Gk = Gk @ G
        P = P @ (acc / T.p)
    return P


def tableau_density(T) -> np.ndarray:
    """The operator ``p^t rho_G`` represented by a tableau (zeros for ZERO)."""
    P = tableau_projector(T)
    return float(T.p) ** T.log_trace * P / np.trace(P).real


def tableau_to_dense(T: StabilizerTableau) -> DenseState:
    """Common +1 eigenvector of all generators (pure tableaux only)."""
    if T is ZERO:
        raise ValueError("zero operator has no state vector")
    _check_cap(T.p ** T.n, VECTOR_CAP)
    if not T.is_pure:
        raise ValueError("tableau is not pure")
    P = tableau_projector(T)
    j = int(np.argmax(np.abs(np.diag(P))))
    v = P[:, j]
    nrm = np.linalg.norm(v)
    if nrm < 1e-9:
        raise ValueError("inconsistent tableau: no common eigenvector")
    v = v / nrm
    v = v * np.exp(-1j * np.angle(v[j]))
    return DenseState(T.p, T.n, v)


def stabilizes(T: StabilizerTableau, state: DenseState, atol: float = 1e-9) -> bool:
    v = state.amplitudes
    return all(np.allclose(weyl_matrix(g) @ v, v, atol=atol) for g in T.generators())


def _as_tensor(rho, p, n):
    return rho.reshape([p] * (2 * n))


def partial_trace(rho: np.ndarray, p: int, n: int, keep) -> np.ndarray:
    """Reduced operator on qudits ``keep`` (kept in ascending order)."""
    keep = sorted(keep)
    t = _as_tensor(rho, p, n)
    traced = [q for q in range(n) if q not in keep]
    # trace pairs one at a time, highest index first so axis numbers stay valid
    m = n
    for q in sorted(traced, reverse=True):
        t = np.trace(t, axis1=q, axis2=q + m)
        m -= 1
    d = p ** len(keep)
    return t.reshape(d, d)


def partial_transpose(rho: np.ndarray, p: int, n: int, qudits) -> np.ndarray:
    t = _as_tensor(rho, p, n)
    axes = list(range(2 * n))
    for q in qudits:
        axes[q], axes[q + n] = axes[q + n], axes[q]
    return t.transpose(axes).reshape(p ** n, p ** n)


def dense_entropy(rho: np.ndarray, p: int, n: int | None = None, subset=None) -> float:
    """von Neumann entropy in units of log p, optionally of a reduced state."""
    if subset is not None:
        rho = partial_trace(rho, p, n, subset)
    rho = rho / np.trace(rho).real
    ev = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    ev = ev[ev > 1e-12]
    return float(-(ev * np.log(ev)).sum() / np.log(p))


def dense_pt3(rho: np.ndarray, p: int, n: int, A, B) -> float:
    """``tr (rho_AB^{T_B})^3`` with rho normalized first."""
    rho = rho / np.trace(rho).real
    AB = sorted(list(A) + list(B))
    red = partial_trace(rho, p, n, AB)
    posB = [AB.index(q) for q in B]
    ptr = partial_transpose(red, p, len(AB), posB)
    return float(np.trace(ptr @ ptr @ ptr).real)


def dense_contract(graph, vertex_states: dict) -> np.ndarray:
    """Contract ``(prod_x <V_x|)(prod_e |e>)`` explicitly.

    ``vertex_states`` maps each bulk vertex to a dense vector on its edge
    qudits (ordered as in :meth:`NetworkGraph.vertex_qudits`).  Returns the
    unnormalized boundary vector, boundary qudits in ascending global order.
    """
    p = graph.p
    nq = graph.num_qudits
    _check_cap(p ** nq, 4 ** 10)
    vec = np.ones(1, dtype=complex)
    order = []
    for u, v in graph.bell_pairs():
        vec = np.kron(vec, np.eye(p).reshape(-1) / np.sqrt(p))
        order += [u, v]
    # axes of vec follow ``order``; move them to global qudit order
    t = vec.reshape([p] * nq).transpose(np.argsort(order))
    letters = [chr(ord("a") + i) if i < 26 else chr(ord("A") + i - 26) for i in range(nq)]
    expr_in = [letters[:]]
    operands = [t]
    for x in graph.bulk:
        qs = graph.vertex_qudits(x)
        V = vertex_states[x].conj().reshape([p] * len(qs))
        operands.append(V)
        expr_in.append([letters[q] for q in qs])
    out = [letters[q] for q in graph.boundary_qudits()]
    expr = ",".join("".join(e) for e in expr_in) + "->" + "".join(out)
    res = np.einsum(expr, *operands)
    return np.asarray(res).reshape(-1)

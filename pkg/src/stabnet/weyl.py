"""Generalized Pauli (Weyl) operators on prime-dimensional qudits.

Convention.  With ``X|j> = |j+1>`` and ``Z|j> = w^j |j>`` (``w = exp(2 pi i/p)``)
the Weyl operator of a symplectic vector ``a = (x, z)`` is

    W(x, z) = tau^(x.z) X^x Z^z,

where ``tau`` is a square root of ``w``: ``tau = w^((p+1)/2)`` (order ``p``)
for odd ``p`` and ``tau = i`` for ``p = 2``.  A general operator is
``tau^s W(a)`` with ``s`` taken modulo :func:`phase_modulus`.  For integer
(unreduced) vectors the product rule reads ``W(a) W(b) = tau^-<a,b> W(a+b)``
with ``<a,b> = x_a.z_b - z_a.x_b``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

__all__ = [
    "phase_modulus",
    "tau",
    "symplectic_product",
    "WeylOperator",
]


def phase_modulus(p: int) -> int:
    return 4 if p == 2 else p


def tau(p: int) -> complex:
    if p == 2:
        return 1j
    return cmath.exp(2j * cmath.pi * ((p + 1) // 2) / p)


def _sym(a, b):
    """Integer symplectic product along the last axis (broadcasting)."""
    n = a.shape[-1] // 2
    return (a[..., :n] * b[..., n:]).sum(-1) - (a[..., n:] * b[..., :n]).sum(-1)


def _red(v, p):
    """Phase picked up when an integer vector is reduced mod p."""
    if p != 2:
        return 0  # always a multiple of p, invisible modulo p
    n = v.shape[-1] // 2
    r = v % p
    return (v[..., :n] * v[..., n:]).sum(-1) - (r[..., :n] * r[..., n:]).sum(-1)


def _mul(a, s, b, t, p):
    """(tau^s W(a)) (tau^t W(b)) for reduced vectors; rows broadcast."""
    v = a + b
    phase = (s + t - _sym(a, b) + _red(v, p)) % phase_modulus(p)
    return v % p, phase


def _pow(a, s, c, p):
    """(tau^s W(a))^c for integer exponents ``c >= 0`` (array or scalar)."""
    c = np.asarray(c, dtype=np.int64) % phase_modulus(p)
    v = c[..., None] * a
    if p == 2 and c.max(initial=0) <= 1:
        return v, (c * s) % 4  # already reduced
    phase = (c * s + _red(v, p)) % phase_modulus(p)
    return v % p, phase


def symplectic_product(a, b, p: int) -> int:
    """``x_a.z_b - z_a.x_b mod p``; zero iff the Weyl operators commute."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape != b.shape or a.shape[-1] % 2:
        raise ValueError("symplectic vectors must have equal even length")
    return int(_sym(a, b) % p)


@dataclass(frozen=True, eq=False)
class WeylOperator:
    """The operator ``tau^phase W(x, z)`` on ``n`` qudits of dimension ``p``."""

    x: np.ndarray
    z: np.ndarray
    phase: int
    p: int

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.int64).reshape(-1) % self.p
        z = np.asarray(self.z, dtype=np.int64).reshape(-1) % self.p
        if x.shape != z.shape:
            raise ValueError("x and z parts must have equal length")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", int(self.phase) % phase_modulus(self.p))

    @classmethod
    def from_vector(cls, vec, p: int, phase: int = 0) -> "WeylOperator":
        vec = np.asarray(vec, dtype=np.int64).reshape(-1)
        n = vec.shape[0] // 2
        return cls(vec[:n], vec[n:], phase, p)

    @classmethod
    def identity(cls, n: int, p: int) -> "WeylOperator":
        return cls(np.zeros(n, np.int64), np.zeros(n, np.int64), 0, p)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.z])

    def _check(self, other):
        if self.p != other.p or self.n != other.n:
            raise ValueError("Weyl operators act on different spaces")

    def __mul__(self, other: "WeylOperator") -> "WeylOperator":
        self._check(other)
        v, s = _mul(self.vector, self.phase, other.vector, other.phase, self.p)
        return WeylOperator.from_vector(v, self.p, int(s))

    def __pow__(self, c: int) -> "WeylOperator":
        if c < 0:
            return self.inverse() ** (-c)
        v, s = _pow(self.vector, self.phase, c, self.p)
        return WeylOperator.from_vector(v, self.p, int(s))

    def inverse(self) -> "WeylOperator":
        # W(a)^-1 = W(-a) for unreduced vectors
        v = -self.vector
        s = (-self.phase + _red(v, self.p)) % phase_modulus(self.p)
        return WeylOperator.from_vector(v % self.p, self.p, int(s))

    def __eq__(self, other):
        if not isinstance(other, WeylOperator):
            return NotImplemented
        return (
            self.p == other.p
            and self.phase == other.phase
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self):
        return hash((self.p, self.phase, self.x.tobytes(), self.z.tobytes()))

    def commutes_with(self, other: "WeylOperator") -> bool:
        self._check(other)
        return symplectic_product(self.vector, other.vector, self.p) == 0

    @property
    def is_stabilizer_eligible(self) -> bool:
        """True if the operator has order dividing ``p`` (for qubits: phase +-1)."""
        return self.p != 2 or self.phase % 2 == 0

    def __repr__(self):
        return f"WeylOperator(x={self.x.tolist()}, z={self.z.tolist()}, phase={self.phase}, p={self.p})"

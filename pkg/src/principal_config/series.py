"""Bivariate polynomials truncated above total degree three.

Used to carry exact third-order Taylor data through composition and series
inversion when extracting the height of a surface over a tangent plane.
"""

from __future__ import annotations

import math

import numpy as np

DEGREE = 3
_TERMS = [(i, j) for i in range(DEGREE + 1) for j in range(DEGREE + 1 - i)]


class Jet3:
    """Polynomial in (s, t) with coefficients ``c[i, j]`` of ``s**i * t**j``."""

    __slots__ = ("c",)

    def __init__(self, c=None):
        self.c = np.zeros((DEGREE + 1, DEGREE + 1)) if c is None else np.asarray(c, dtype=float)

    @classmethod
    def constant(cls, value):
        out = cls()
        out.c[0, 0] = value
        return out

    @classmethod
    def s(cls):
        out = cls()
        out.c[1, 0] = 1.0
        return out

    @classmethod
    def t(cls):
        out = cls()
        out.c[0, 1] = 1.0
        return out

    @classmethod
    def from_derivatives(cls, d):
        """Build the Taylor polynomial from partials keyed by ``(i, j)``."""
        out = cls()
        for (i, j), value in d.items():
            if i + j <= DEGREE:
                out.c[i, j] = value / (math.factorial(i) * math.factorial(j))
        return out

    def __add__(self, other):
        if isinstance(other, Jet3):
            return Jet3(self.c + other.c)
        return self + Jet3.constant(other)

    __radd__ = __add__

    def __neg__(self):
        return Jet3(-self.c)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet3) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet3):
            return Jet3(self.c * other)
        out = np.zeros_like(self.c)
        for i, j in _TERMS:
            a = self.c[i, j]
            if a == 0.0:
                continue
            for k, m in _TERMS:
                if i + j + k + m <= DEGREE:
                    out[i + k, j + m] += a * other.c[k, m]
        return Jet3(out)

    __rmul__ = __mul__

    def linear_part(self):
        out = Jet3()
        out.c[1, 0] = self.c[1, 0]
        out.c[0, 1] = self.c[0, 1]
        return out

    def compose(self, s, t):
        """Substitute ``s`` and ``t`` (jets without constant term)."""
        spow = [Jet3.constant(1.0)]
        tpow = [Jet3.constant(1.0)]
        for _ in range(DEGREE):
            spow.append(spow[-1] * s)
            tpow.append(tpow[-1] * t)
        out = Jet3()
        for i, j in _TERMS:
            if self.c[i, j] != 0.0:
                out = out + self.c[i, j] * (spow[i] * tpow[j])
        return out

    def derivative(self, i, j):
        """Partial derivative of order (i, j) at the origin."""
        return self.c[i, j] * math.factorial(i) * math.factorial(j)


def invert_map(U, V):
    """Series inverse of the planar map (s, t) -> (U, V) near the origin.

    Both jets must vanish at the origin with an invertible linear part.
    Returns jets (S, T) in the new variables with U(S, T) = u, V(S, T) = v
    to third order.
    """
    J = np.array([[U.c[1, 0], U.c[0, 1]], [V.c[1, 0], V.c[0, 1]]])
    Jinv = np.linalg.inv(J)
    Un = U - U.linear_part() - U.c[0, 0]
    Vn = V - V.linear_part() - V.c[0, 0]
    u, v = Jet3.s(), Jet3.t()
    S = Jinv[0, 0] * u + Jinv[0, 1] * v
    T = Jinv[1, 0] * u + Jinv[1, 1] * v
    for _ in range(DEGREE):
        ru = u - Un.compose(S, T)
        rv = v - Vn.compose(S, T)
        S = Jinv[0, 0] * ru + Jinv[0, 1] * rv
        T = Jinv[1, 0] * ru + Jinv[1, 1] * rv
    return S, T

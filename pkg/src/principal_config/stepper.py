"""Embedded Dormand-Prince 5(4) steps for an unoriented principal line field.

The line field is turned into a vector field one step at a time: every stage
takes the sign of ``L_i`` that agrees with the tangent at the start of the
step. After each step the state is projected back onto the surface.
"""

import numpy as np

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
# 5th minus 4th order weights; the last entry multiplies the FSAL stage
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


class FieldEval:
    """Evaluates the oriented chart velocity of ``L_i`` on ``S``."""

    __slots__ = ("S", "i", "evals")

    def __init__(self, S, i):
        self.S = S
        self.i = i
        self.evals = 0

    def __call__(self, q, ref):
        self.evals += 1
        return self.S.direction(q, self.i, ref)


def dp_step(field, q, k1, ref, h):
    """One Dormand-Prince step of size ``h``.

    ``k1`` is the chart velocity at ``q``; ``ref`` the R^3 tangent there.
    Returns ``(q5, stages)`` with the five-stage intermediate slopes, for
    use by :func:`dp_error`.
    """
    ks = [k1]
    for j in range(1, 6):
        y = q.copy()
        for a, k in zip(_A[j], ks):
            if a:
                y += (h * a) * k
        ks.append(field(y, ref)[0])
    y5 = q.copy()
    for b, k in zip(_B5, ks):
        if b:
            y5 += (h * b) * k
    return y5, ks


def dp_error(ks, k7, h):
    err = (h * _E[6]) * k7
    for e, k in zip(_E, ks):
        if e:
            err = err + (h * e) * k
    return err


def chart_length(S, q, dq):
    """Approximate R^3 length of a chart displacement."""
    if S.chart_dim == 3:
        return float(np.sqrt(dq @ dq))
    return float(np.linalg.norm(S.tangent_from_chart(q, dq)))

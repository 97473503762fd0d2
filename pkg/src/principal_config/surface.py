"""Surface models with analytic third-order jets and the pointwise curvature kernel.

Three representations are supported:

* :class:`MongePatch` -- graph ``z = h(u, v)`` over a rectangle,
* :class:`ParametricPatch` -- a map ``X(u, v)`` into R^3,
* :class:`ImplicitQuadric` -- the zero set of a quadric polynomial.

Curvature sign convention: the second fundamental form is ``<X_ij, N>``, so a
surface bending towards its unit normal has positive normal curvature. With
the outward normal a sphere of radius ``r`` therefore has ``k1 = k2 = -1/r``;
flipping the orientation gives ``+1/r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import sympy as sp

from .errors import OutOfDomain, SingularPoint, UmbilicReference
from .series import Jet3, invert_map

DEFAULT_TOL_UMB = 1e-9
_REG_TOL = 1e-14

# index of each partial derivative in a jet array of shape (10, 3, ...)
JET_ORDER = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3))


@dataclass(frozen=True)
class CurvatureFrame:
    """Pointwise curvature data.

    ``L1``/``L2`` are ``None`` when the point is flagged umbilic.
    """

    point: np.ndarray
    chart: tuple
    E: float
    F: float
    G: float
    e: float
    f: float
    g: float
    k1: float
    k2: float
    H: float
    K: float
    normal: np.ndarray
    L1: np.ndarray | None
    L2: np.ndarray | None
    umbilic: bool

    @property
    def gap(self):
        return self.k2 - self.k1


class Shape(NamedTuple):
    """Second fundamental form in an orthonormal tangent frame (e1, e2)."""

    point: np.ndarray
    normal: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    s11: float
    s12: float
    s22: float
    forms: tuple  # (E, F, G, e, f, g) in the chart basis


def _principal(s11, s12, s22):
    """Principal curvatures and the angle of the maximal direction.

    Works elementwise on arrays. The half-gap is computed from the traceless
    part so that ``H**2 - K`` never goes negative.
    """
    H = 0.5 * (s11 + s22)
    half = 0.5 * (s11 - s22)
    D = np.hypot(half, s12)
    K = H * H - D * D
    alpha = 0.5 * np.arctan2(s12, half)
    return H - D, H + D, H, K, alpha


class Surface:
    """Common interface of all surface variants."""

    kind = "surface"
    chart_dim = 2
    orientation = 1
    diameter = 1.0
    closed = False  # True when the chart region is the whole compact surface

    # -- geometry hooks implemented by the variants -------------------------
    def point(self, q):
        raise NotImplementedError

    def shape(self, q, ref=None):
        raise NotImplementedError

    def chart_velocity(self, q, t3):
        raise NotImplementedError

    def mean_curvature_rate(self, q, t3):
        raise NotImplementedError

    def height_jet(self, q, ref=None):
        raise NotImplementedError

    def search_grid(self, n):
        raise NotImplementedError

    def gap_field(self, Q):
        raise NotImplementedError

    def contains(self, q):
        return True

    def wrap(self, q):
        return q

    def retract(self, q):
        return q

    def chart_of_point(self, x):
        raise NotImplementedError

    @property
    def curvature_scale(self):
        return 1.0 / self.diameter

    def umbilic_floor(self, k1, k2, tol_umb=DEFAULT_TOL_UMB):
        return tol_umb * max(abs(k1), abs(k2), self.curvature_scale)

    def direction(self, q, i, ref=None):
        """Unit principal direction ``L_i`` at ``q``.

        Returns ``(dq, t3, gap, scale)``: the chart velocity, the unit tangent
        in R^3 (sign chosen to agree with ``ref`` when given), ``k2 - k1`` and
        the curvature magnitude used for umbilic flagging.
        """
        sh = self.shape(q)
        k1, k2, _, _, alpha = _principal(sh.s11, sh.s12, sh.s22)
        ca, sa = math.cos(alpha), math.sin(alpha)
        if i == 2:
            t3 = ca * sh.e1 + sa * sh.e2
        else:
            t3 = -sa * sh.e1 + ca * sh.e2
        if ref is not None and float(np.dot(t3, ref)) < 0.0:
            t3 = -t3
        return self.chart_velocity(q, t3), t3, k2 - k1, max(abs(k1), abs(k2))

    def oriented(self, orientation):
        raise NotImplementedError

    def describe(self):
        return {"kind": self.kind, "orientation": self.orientation}


# ---------------------------------------------------------------------------
# chart-based patches
# ---------------------------------------------------------------------------


def _dot(a, b):
    return np.sum(a * b, axis=0)


def _patch_shape_arrays(xj, sigma):
    """Vectorised forms and orthonormal-frame shape matrix from jet arrays."""
    Xu, Xv, Xuu, Xuv, Xvv = xj[1], xj[2], xj[3], xj[4], xj[5]
    n = np.cross(Xu, Xv, axis=0)
    nn = np.sqrt(_dot(n, n))
    N = sigma * n / nn
    E, F, G = _dot(Xu, Xu), _dot(Xu, Xv), _dot(Xv, Xv)
    e, f, g = _dot(Xuu, N), _dot(Xuv, N), _dot(Xvv, N)
    det = E * G - F * F
    sqE = np.sqrt(E)
    e1 = Xu / sqE
    e2 = np.cross(N, e1, axis=0)
    w = _dot(Xv, e2) / det
    c2u, c2v = -F * w, E * w
    s11 = e / E
    s12 = (e * c2u + f * c2v) / sqE
    s22 = e * c2u * c2u + 2.0 * f * c2u * c2v + g * c2v * c2v
    return N, e1, e2, (E, F, G, e, f, g), det, (s11, s12, s22)


class _Patch(Surface):
    """A surface given by a single chart over a rectangle."""

    def __init__(self, jet, domain, periodic=(False, False), orientation=1, diameter=None, name=None):
        self._jet = jet
        self.domain = tuple((float(lo), float(hi)) for lo, hi in domain)
        self.periodic = tuple(bool(p) for p in periodic)
        self.orientation = 1 if orientation >= 0 else -1
        self.name = name or self.kind
        self.closed = all(self.periodic)
        if diameter is None:
            diameter = self._estimate_diameter()
        self.diameter = float(diameter)

    def _estimate_diameter(self):
        (u0, u1), (v0, v1) = self.domain
        U, V = np.meshgrid(np.linspace(u0, u1, 21), np.linspace(v0, v1, 21))
        X = self.jet(U, V)[0].reshape(3, -1)
        span = X.max(axis=1) - X.min(axis=1)
        return max(float(np.linalg.norm(span)), 1e-12)

    def jet(self, u, v):
        """Array of shape (10, 3, ...) of X and its partials up to order 3."""
        return self._jet(u, v)

    def oriented(self, orientation):
        return type(self)._rebuild(self, orientation)

    @staticmethod
    def _rebuild(obj, orientation):
        clone = object.__new__(type(obj))
        clone.__dict__.update(obj.__dict__)
        clone.orientation = 1 if orientation >= 0 else -1
        return clone

    def contains(self, q):
        for k in range(2):
            if self.periodic[k]:
                continue
            lo, hi = self.domain[k]
            if not lo <= q[k] <= hi:
                return False
        return True

    def wrap(self, q):
        q = np.array(q, dtype=float)
        for k in range(2):
            if self.periodic[k]:
                lo, hi = self.domain[k]
                q[k] = lo + (q[k] - lo) % (hi - lo)
        return q

    def _check(self, q):
        if not self.contains(q):
            raise OutOfDomain(f"chart point {tuple(q)} outside {self.domain}")

    def point(self, q):
        return np.asarray(self.jet(q[0], q[1])[0], dtype=float)

    def shape(self, q, ref=None):
        self._check(q)
        xj = np.asarray(self.jet(float(q[0]), float(q[1])), dtype=float)
        N, e1, e2, forms, det, (s11, s12, s22) = _patch_shape_arrays(xj, self.orientation)
        if not det > _REG_TOL * forms[0] * forms[2]:
            raise SingularPoint(f"EG - F^2 = {det:g} at {tuple(q)}")
        return Shape(xj[0], N, e1, e2, float(s11), float(s12), float(s22), tuple(float(x) for x in forms))

    def chart_velocity(self, q, t3):
        xj = self.jet(float(q[0]), float(q[1]))
        Xu, Xv = np.asarray(xj[1], float), np.asarray(xj[2], float)
        E, F, G = Xu @ Xu, Xu @ Xv, Xv @ Xv
        a, b = Xu @ t3, Xv @ t3
        det = E * G - F * F
        return np.array([(G * a - F * b) / det, (E * b - F * a) / det])

    def tangent_from_chart(self, q, c):
        xj = self.jet(float(q[0]), float(q[1]))
        return c[0] * np.asarray(xj[1], float) + c[1] * np.asarray(xj[2], float)

    def mean_curvature_rate(self, q, t3):
        xj = np.asarray(self.jet(float(q[0]), float(q[1])), dtype=float)
        X, Xu, Xv, Xuu, Xuv, Xvv, Xuuu, Xuuv, Xuvv, Xvvv = xj
        n = np.cross(Xu, Xv)
        N = self.orientation * n / np.linalg.norm(n)
        E, F, G = Xu @ Xu, Xu @ Xv, Xv @ Xv
        e, f, g = Xuu @ N, Xuv @ N, Xvv @ N
        det = E * G - F * F
        # Weingarten: dN = -(W11 Xu + W21 Xv) du - ...
        W = np.linalg.solve(np.array([[E, F], [F, G]]), np.array([[e, f], [f, g]]))
        Nu = -(W[0, 0] * Xu + W[1, 0] * Xv)
        Nv = -(W[0, 1] * Xu + W[1, 1] * Xv)
        dE = (2 * Xuu @ Xu, 2 * Xuv @ Xu)
        dF = (Xuu @ Xv + Xu @ Xuv, Xuv @ Xv + Xu @ Xvv)
        dG = (2 * Xuv @ Xv, 2 * Xvv @ Xv)
        de = (Xuuu @ N + Xuu @ Nu, Xuuv @ N + Xuu @ Nv)
        df = (Xuuv @ N + Xuv @ Nu, Xuvv @ N + Xuv @ Nv)
        dg = (Xuvv @ N + Xvv @ Nu, Xvvv @ N + Xvv @ Nv)
        num = e * G - 2 * f * F + g * E
        grad = []
        for k in range(2):
            dnum = de[k] * G + e * dG[k] - 2 * (df[k] * F + f * dF[k]) + dg[k] * E + g * dE[k]
            ddet = dE[k] * G + E * dG[k] - 2 * F * dF[k]
            grad.append((dnum * det - num * ddet) / (2 * det * det))
        c = self.chart_velocity(q, t3)
        return float(grad[0] * c[0] + grad[1] * c[1])

    def height_jet(self, q, ref=None):
        """Height over the tangent plane at ``q`` as a cubic jet.

        Returns ``(p0, N, e1, e2, h)`` where ``h`` is a :class:`Jet3` in the
        orthonormal tangent coordinates along ``e1``, ``e2``.
        """
        xj = np.asarray(self.jet(float(q[0]), float(q[1])), dtype=float)
        sh = self.shape(q)
        N = sh.normal
        e1 = sh.e1 if ref is None else _tangent_from_ref(N, ref)
        e2 = np.cross(N, e1)
        comps = []
        for axis in (e1, e2, N):
            d = {ij: float(xj[k] @ axis) for k, ij in enumerate(JET_ORDER) if k > 0}
            comps.append(Jet3.from_derivatives(d))
        S, T = invert_map(comps[0], comps[1])
        return xj[0], N, e1, e2, comps[2].compose(S, T)

    def search_grid(self, n):
        axes = []
        for k in range(2):
            lo, hi = self.domain[k]
            if self.periodic[k]:
                axes.append(lo + (hi - lo) * np.arange(n) / n)
            else:
                axes.append(np.linspace(lo, hi, n + 2)[1:-1])
        U, V = np.meshgrid(axes[0], axes[1], indexing="ij")
        Q = np.stack([U.ravel(), V.ravel()], axis=1)
        return Q, U.shape, self.periodic

    def gap_field(self, Q):
        xj = np.asarray(self.jet(Q[:, 0], Q[:, 1]), dtype=float)
        _, _, _, _, _, (s11, s12, s22) = _patch_shape_arrays(xj, self.orientation)
        k1, k2, *_ = _principal(s11, s12, s22)
        return k2 - k1, np.maximum(np.abs(k1), np.abs(k2))

    def chart_of_point(self, x):
        from scipy.optimize import least_squares

        Q, _, _ = self.search_grid(40)
        X = np.asarray(self.jet(Q[:, 0], Q[:, 1])[0], dtype=float)
        q0 = Q[np.argmin(np.sum((X.T - x) ** 2, axis=1))]
        sol = least_squares(lambda q: self.point(q) - x, q0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        return self.wrap(sol.x)

    def describe(self):
        return {"kind": self.kind, "name": self.name, "orientation": self.orientation,
                "domain": [list(d) for d in self.domain], "periodic": list(self.periodic)}


def _tangent_from_ref(N, ref):
    t = np.asarray(ref, float) - (np.asarray(ref, float) @ N) * N
    return t / np.linalg.norm(t)


def _broadcast_list(values, u):
    shape = np.shape(u)
    return np.array([np.broadcast_to(np.asarray(v, dtype=float), shape) for v in values])


class MongePatch(_Patch):
    """Graph ``(u, v, h(u, v))``; ``hjet(u, v)`` returns the ten partials of ``h``.

    The partials are ordered as in :data:`JET_ORDER`.
    """

    kind = "monge"

    def __init__(self, hjet, domain, orientation=1, diameter=None, name=None, params=None):
        self.hjet = hjet
        self.params = params

        def jet(u, v):
            h = _broadcast_list(hjet(u, v), u)
            zero, one = np.zeros_like(h[0]), np.ones_like(h[0])
            rows = [
                [u * one, v * one, h[0]],
                [one, zero, h[1]],
                [zero, one, h[2]],
            ] + [[zero, zero, h[k]] for k in range(3, 10)]
            return np.array([np.array(r) for r in rows])

        super().__init__(jet, domain, (False, False), orientation, diameter, name)

    @classmethod
    def polynomial(cls, coef, domain, **kw):
        """Height given as ``sum coef[i, j] u**i v**j``."""
        from numpy.polynomial import polynomial as P

        coef = np.atleast_2d(np.asarray(coef, dtype=float))
        ders = []
        for i, j in JET_ORDER:
            c = coef
            if i:
                c = P.polyder(c, i, axis=0) if c.shape[0] > i else np.zeros((1, 1))
            if j:
                c = P.polyder(c, j, axis=1) if c.shape[1] > j else np.zeros((1, 1))
            ders.append(c)

        def hjet(u, v):
            return [P.polyval2d(u, v, c) for c in ders]

        kw.setdefault("params", {"coefficients": coef.tolist()})
        return cls(hjet, domain, **kw)

    @classmethod
    def cubic_normal_form(cls, k, a, b, c, d=0.0, half_width=0.5, rotation=0.0, **kw):
        """``(k/2)(u^2+v^2) + (a/6)u^3 + (d/2)u^2 v + (b/2)u v^2 + (c/6)v^3``.

        ``rotation`` (radians) rotates the whole graph about the z-axis.
        """
        coef = np.zeros((4, 4))
        coef[2, 0] = coef[0, 2] = k / 2.0
        cubic = {(3, 0): a / 6.0, (2, 1): d / 2.0, (1, 2): b / 2.0, (0, 3): c / 6.0}
        if rotation:
            # h_new(x) = h(R^-1 x): substitute u -> cu + sv, v -> -su + cv
            cs, sn = math.cos(rotation), math.sin(rotation)
            u, v = sp.symbols("u v")
            expr = sum(val * (cs * u + sn * v) ** i * (-sn * u + cs * v) ** j for (i, j), val in cubic.items())
            poly = sp.Poly(sp.expand(expr), u, v)
            for (i, j), val in poly.terms():
                coef[i, j] += float(val)
        else:
            for (i, j), val in cubic.items():
                coef[i, j] += val
        w = float(half_width)
        kw.setdefault("name", "monge-cubic")
        kw.setdefault("params", {"k": k, "a": a, "b": b, "c": c, "d": d, "rotation": rotation})
        return cls.polynomial(coef, ((-w, w), (-w, w)), **kw)

    @classmethod
    def plane(cls, half_width=1.0):
        return cls.polynomial([[0.0]], ((-half_width, half_width),) * 2, name="plane", diameter=2 * half_width * math.sqrt(2))

    def describe(self):
        out = super().describe()
        if self.params is not None:
            out["params"] = self.params
        return out


class ParametricPatch(_Patch):
    """Parametrised patch ``X(u, v)``; ``jet(u, v)`` returns a (10, 3, ...) array."""

    kind = "parametric"

    @classmethod
    def from_sympy(cls, exprs, symbols, domain, **kw):
        """Build the analytic jet callback from sympy expressions of X."""
        u, v = symbols
        entries = []
        for i, j in JET_ORDER:
            for e in exprs:
                d = e
                if i:
                    d = sp.diff(d, u, i)
                if j:
                    d = sp.diff(d, v, j)
                entries.append(d if d.free_symbols else sp.Float(d))
        fn = sp.lambdify((u, v), entries, modules="numpy", cse=True)

        def jet(uu, vv):
            flat = _broadcast_list(fn(uu, vv), uu)
            return flat.reshape((10, 3) + np.shape(uu))

        obj = cls(jet, domain, **kw)
        obj.exprs = [str(e) for e in exprs]
        return obj

    @classmethod
    def sphere(cls, r=1.0, margin=0.05, **kw):
        u, v = sp.symbols("u v")
        X = [r * sp.sin(u) * sp.cos(v), r * sp.sin(u) * sp.sin(v), r * sp.cos(u)]
        kw.setdefault("name", "sphere-patch")
        return cls.from_sympy(X, (u, v), ((margin, math.pi - margin), (0.0, 2 * math.pi)),
                              periodic=(False, True), diameter=2 * r, **kw)

    @classmethod
    def ellipsoid(cls, a, b, c, axis="z", margin=0.05, **kw):
        """Ellipsoid in polar angles about ``axis``; outward normal by default."""
        u, v = sp.symbols("u v")
        if axis == "z":
            X = [a * sp.sin(u) * sp.cos(v), b * sp.sin(u) * sp.sin(v), c * sp.cos(u)]
        elif axis == "x":
            X = [a * sp.cos(u), b * sp.sin(u) * sp.cos(v), c * sp.sin(u) * sp.sin(v)]
        else:
            raise ValueError(axis)
        kw.setdefault("name", f"ellipsoid-patch-{axis}")
        return cls.from_sympy(X, (u, v), ((margin, math.pi - margin), (0.0, 2 * math.pi)),
                              periodic=(False, True), diameter=2 * max(a, b, c), **kw)

    @classmethod
    def cylinder(cls, r=1.0, height=2.0, **kw):
        u, v = sp.symbols("u v")
        X = [r * sp.cos(u), r * sp.sin(u), v]
        kw.setdefault("name", "cylinder")
        return cls.from_sympy(X, (u, v), ((0.0, 2 * math.pi), (-height / 2, height / 2)),
                              periodic=(True, False), **kw)

    @classmethod
    def torus(cls, R=2.0, r=1.0, bump=0.0, **kw):
        """Torus of revolution, tube radius ``r + bump*cos(u)*sin(v)^2``.

        A nonzero ``bump`` breaks the rotational symmetry; used to obtain
        principal cycles that are not integrable.
        """
        if not R > r + abs(bump) > 0 or r <= abs(bump):
            raise ValueError("torus needs R > r + |bump| and r > |bump|")
        u, v = sp.symbols("u v")
        rho = r + bump * sp.cos(u) * sp.sin(v) ** 2
        X = [(R + rho * sp.cos(v)) * sp.cos(u), (R + rho * sp.cos(v)) * sp.sin(u), rho * sp.sin(v)]
        kw.setdefault("name", "torus")
        return cls.from_sympy(X, (u, v), ((0.0, 2 * math.pi), (0.0, 2 * math.pi)),
                              periodic=(True, True), diameter=2 * (R + r), **kw)


# ---------------------------------------------------------------------------
# implicit quadrics
# ---------------------------------------------------------------------------

COEFF_NAMES = ("xx", "yy", "zz", "xy", "xz", "yz", "x", "y", "z", "1")


def quadric_matrices(coeffs):
    """``(A, b, c)`` with ``F(x) = x.A.x + 2 b.x + c``."""
    xx, yy, zz, xy, xz, yz, x, y, z, c = (float(v) for v in coeffs)
    A = np.array([[xx, xy / 2, xz / 2], [xy / 2, yy, yz / 2], [xz / 2, yz / 2, zz]])
    return A, np.array([x, y, z]) / 2.0, c


def classify_quadric(coeffs, tol=1e-12):
    """Name of the real quadric by signature of its quadratic part."""
    A, b, c = quadric_matrices(coeffs)
    lam = np.linalg.eigvalsh(A)
    scale = max(np.max(np.abs(lam)), 1e-300)
    pos, neg = int(np.sum(lam > tol * scale)), int(np.sum(lam < -tol * scale))
    if pos + neg < 3:
        return "degenerate" if pos + neg < 2 else "paraboloid-or-cylinder"
    center = -np.linalg.solve(A, b)
    r = float(b @ -center - c)  # x.A.x = b.A^-1.b - c about the center
    if pos == 3 or neg == 3:
        sign = 1.0 if pos == 3 else -1.0
        return "ellipsoid" if sign * r > 0 else "empty"
    if abs(r) <= tol * max(abs(c), 1.0):
        return "cone"
    few = min(pos, neg)
    lone_sign = 1.0 if pos == 1 else -1.0
    return "hyperboloid-two-sheets" if (lone_sign * r > 0 and few == 1) else "hyperboloid-one-sheet"


class ImplicitQuadric(Surface):
    """Quadric ``F = 0`` with coefficients ordered as :data:`COEFF_NAMES`.

    Chart points are points of R^3 on the surface; locally the surface is
    viewed as a graph over its tangent plane, so ``E = G = 1`` and ``F = 0``
    at the evaluated point.
    """

    kind = "quadric"
    chart_dim = 3

    def __init__(self, coeffs, orientation=None, name=None):
        self.coeffs = tuple(float(c) for c in coeffs)
        if len(self.coeffs) != 10:
            raise ValueError("a quadric needs 10 coefficients")
        self.A, self.b, self.c = quadric_matrices(self.coeffs)
        self.type = classify_quadric(self.coeffs)
        lam = np.linalg.eigvalsh(self.A)
        if orientation is None:
            # outward normal for ellipsoids
            orientation = -1 if self.type == "ellipsoid" and lam[0] < 0 else 1
        self.orientation = 1 if orientation >= 0 else -1
        self.name = name or self.type
        self.closed = self.type == "ellipsoid"
        self._Af = tuple(float(x) for x in self.A.ravel())
        self._bf = tuple(float(x) for x in self.b)
        if self.type == "ellipsoid":
            self.center, self.axes, self.semi_axes = self._ellipsoid_frame()
            self.diameter = 2.0 * float(np.max(self.semi_axes))
        else:
            self.center = self.axes = self.semi_axes = None
            self.diameter = 1.0

    @classmethod
    def ellipsoid(cls, a, b, c, orientation=1):
        coeffs = (1 / a**2, 1 / b**2, 1 / c**2, 0, 0, 0, 0, 0, 0, -1)
        return cls(coeffs, orientation=orientation, name=f"ellipsoid({a:g},{b:g},{c:g})")

    @classmethod
    def sphere(cls, r=1.0, orientation=1):
        return cls((1, 1, 1, 0, 0, 0, 0, 0, 0, -r * r), orientation=orientation, name=f"sphere({r:g})")

    def oriented(self, orientation):
        return ImplicitQuadric(self.coeffs, orientation=orientation, name=self.name)

    def _ellipsoid_frame(self):
        lam, R = np.linalg.eigh(self.A)
        center = -np.linalg.solve(self.A, self.b)
        r = float(self.b @ -center - self.c)
        semi = np.sqrt(r / lam)
        order = np.argsort(-semi)
        return center, R[:, order], semi[order]

    def value(self, x):
        x = np.asarray(x, float)
        return float(x @ self.A @ x + 2 * self.b @ x + self.c)

    def gradient(self, x):
        return 2.0 * (self.A @ np.asarray(x, float) + self.b)

    def point(self, q):
        return np.asarray(q, dtype=float)

    def retract(self, q, max_iter=50):
        """Newton projection onto ``F = 0`` along the gradient."""
        x = np.asarray(q, dtype=float)
        for _ in range(max_iter):
            g = self.gradient(x)
            gg = g @ g
            if gg == 0.0:
                raise SingularPoint(f"vanishing gradient at {tuple(x)}")
            step = self.value(x) * g / gg
            x = x - step
            if np.max(np.abs(step)) <= 1e-16 * max(1.0, np.max(np.abs(x))):
                break
        return x

    def _frame_vectors(self, x, ref=None):
        g = self.gradient(x)
        gn = math.sqrt(g @ g)
        if not gn > _REG_TOL:
            raise SingularPoint(f"vanishing gradient at {tuple(x)}")
        n = g / gn
        if ref is None:
            axis = np.zeros(3)
            axis[int(np.argmin(np.abs(n)))] = 1.0
            e1 = np.cross(n, axis)
            e1 /= np.linalg.norm(e1)
        else:
            e1 = _tangent_from_ref(n, ref)
        N = self.orientation * n
        e2 = np.cross(N, e1)
        return N, e1, e2, gn

    def shape(self, q, ref=None):
        x = np.asarray(q, dtype=float)
        N, e1, e2, gn = self._frame_vectors(x, ref)
        M = 2.0 * self.A
        w = -self.orientation / gn
        s11, s12, s22 = w * (e1 @ M @ e1), w * (e1 @ M @ e2), w * (e2 @ M @ e2)
        return Shape(x, N, e1, e2, float(s11), float(s12), float(s22), (1.0, 0.0, 1.0, float(s11), float(s12), float(s22)))

    def chart_velocity(self, q, t3):
        return t3

    def tangent_from_chart(self, q, c):
        return np.asarray(c, float)

    def direction(self, q, i, ref=None):
        # pure-float fast path; this is the integrator's inner loop
        A = self._Af
        bx, by, bz = self._bf
        x, y, z = q[0], q[1], q[2]
        gx = 2.0 * (A[0] * x + A[1] * y + A[2] * z + bx)
        gy = 2.0 * (A[3] * x + A[4] * y + A[5] * z + by)
        gz = 2.0 * (A[6] * x + A[7] * y + A[8] * z + bz)
        gn = math.sqrt(gx * gx + gy * gy + gz * gz)
        if not gn > _REG_TOL:
            raise SingularPoint("vanishing gradient")
        nx, ny, nz = gx / gn, gy / gn, gz / gn
        ax, ay, az = abs(nx), abs(ny), abs(nz)
        if ax <= ay and ax <= az:
            ux, uy, uz = 0.0, nz, -ny
        elif ay <= az:
            ux, uy, uz = -nz, 0.0, nx
        else:
            ux, uy, uz = ny, -nx, 0.0
        un = math.sqrt(ux * ux + uy * uy + uz * uz)
        ux, uy, uz = ux / un, uy / un, uz / un
        sg = self.orientation
        Nx, Ny, Nz = sg * nx, sg * ny, sg * nz
        vx, vy, vz = Ny * uz - Nz * uy, Nz * ux - Nx * uz, Nx * uy - Ny * ux
        Mux = 2.0 * (A[0] * ux + A[1] * uy + A[2] * uz)
        Muy = 2.0 * (A[3] * ux + A[4] * uy + A[5] * uz)
        Muz = 2.0 * (A[6] * ux + A[7] * uy + A[8] * uz)
        Mvx = 2.0 * (A[0] * vx + A[1] * vy + A[2] * vz)
        Mvy = 2.0 * (A[3] * vx + A[4] * vy + A[5] * vz)
        Mvz = 2.0 * (A[6] * vx + A[7] * vy + A[8] * vz)
        w = -sg / gn
        s11 = w * (ux * Mux + uy * Muy + uz * Muz)
        s12 = w * (ux * Mvx + uy * Mvy + uz * Mvz)
        s22 = w * (vx * Mvx + vy * Mvy + vz * Mvz)
        H = 0.5 * (s11 + s22)
        half = 0.5 * (s11 - s22)
        D = math.hypot(half, s12)
        alpha = 0.5 * math.atan2(s12, half)
        ca, sa = math.cos(alpha), math.sin(alpha)
        if i == 2:
            t = np.array([ca * ux + sa * vx, ca * uy + sa * vy, ca * uz + sa * vz])
        else:
            t = np.array([-sa * ux + ca * vx, -sa * uy + ca * vy, -sa * uz + ca * vz])
        if ref is not None and t[0] * ref[0] + t[1] * ref[1] + t[2] * ref[2] < 0.0:
            t = -t
        return t, t, 2.0 * D, abs(H) + D

    def mean_curvature_rate(self, q, t3):
        x = np.asarray(q, float)
        g = self.gradient(x)
        gn = math.sqrt(g @ g)
        n = g / gn
        M = 2.0 * self.A
        Mt = M @ t3
        Pmt = Mt - n * (n @ Mt)
        trq = np.trace(M) - n @ M @ n
        return float(self.orientation / gn**2 * ((M @ n) @ Pmt + 0.5 * trq * (n @ Mt)))

    def height_jet(self, q, ref=None):
        """Height over the tangent plane at ``q`` to third order.

        Solves ``g0 h + Q(u e1 + v e2 + h N) = 0`` by fixed-point iteration
        in truncated series, where ``Q`` is the quadratic part of ``F``.
        """
        x = np.asarray(q, float)
        N, e1, e2, gn = self._frame_vectors(x, ref)
        g0 = self.orientation * gn
        A = self.A
        Q2 = Jet3()
        Q2.c[2, 0], Q2.c[1, 1], Q2.c[0, 2] = e1 @ A @ e1, 2 * e1 @ A @ e2, e2 @ A @ e2
        L = Jet3()
        L.c[1, 0], L.c[0, 1] = e1 @ A @ N, e2 @ A @ N
        nan = float(N @ A @ N)
        h = Jet3()
        for _ in range(3):
            h = -(1.0 / g0) * (Q2 + 2.0 * h * L + nan * (h * h))
        return x, N, e1, e2, h

    def search_grid(self, n):
        if self.type != "ellipsoid":
            raise NotImplementedError("global search needs an ellipsoid")
        th = (np.arange(n) + 0.5) * math.pi / n
        ph = np.arange(2 * n) * math.pi / n
        T, P = np.meshgrid(th, ph, indexing="ij")
        d = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1).reshape(-1, 3)
        X = self.center + (d * self.semi_axes) @ self.axes.T
        return X, T.shape, (False, True)

    def gap_field(self, Q):
        X = np.asarray(Q, float)
        G = 2.0 * (X @ self.A.T + self.b)
        gn = np.linalg.norm(G, axis=1)
        n = G / gn[:, None]
        # tangent frame per point from the least aligned coordinate axis
        axis = np.zeros_like(n)
        axis[np.arange(len(n)), np.argmin(np.abs(n), axis=1)] = 1.0
        e1 = np.cross(n, axis)
        e1 /= np.linalg.norm(e1, axis=1)[:, None]
        e2 = np.cross(n, e1)
        M = 2.0 * self.A
        w = -self.orientation / gn
        s11 = w * np.einsum("ni,ij,nj->n", e1, M, e1)
        s12 = w * np.einsum("ni,ij,nj->n", e1, M, e2)
        s22 = w * np.einsum("ni,ij,nj->n", e2, M, e2)
        k1, k2, *_ = _principal(s11, s12, s22)
        return k2 - k1, np.maximum(np.abs(k1), np.abs(k2))

    def surface_points(self, d):
        """Map unit directions (m, 3) in the principal frame onto the ellipsoid."""
        return self.center + (np.asarray(d) * self.semi_axes) @ self.axes.T

    def chart_of_point(self, x):
        return self.retract(x)

    def describe(self):
        return {"kind": self.kind, "name": self.name, "type": self.type,
                "orientation": self.orientation, "coefficients": list(self.coeffs)}


# ---------------------------------------------------------------------------
# kernel operations
# ---------------------------------------------------------------------------


def fundamental_forms(S, q):
    """First and second fundamental forms ``(E, F, G, e, f, g)`` at ``q``."""
    return S.shape(q).forms


def principal_data(S, q, tol_umb=DEFAULT_TOL_UMB):
    """Full :class:`CurvatureFrame` at chart point ``q``."""
    sh = S.shape(q)
    k1, k2, H, K, alpha = _principal(sh.s11, sh.s12, sh.s22)
    k1, k2, H, K, alpha = (float(x) for x in (k1, k2, H, K, alpha))
    umb = (k2 - k1) <= S.umbilic_floor(k1, k2, tol_umb)
    if umb:
        L1 = L2 = None
    else:
        ca, sa = math.cos(alpha), math.sin(alpha)
        L2 = ca * sh.e1 + sa * sh.e2
        L1 = -sa * sh.e1 + ca * sh.e2
    E, F, G, e, f, g = sh.forms
    return CurvatureFrame(np.asarray(sh.point, float), tuple(float(v) for v in np.ravel(q)),
                          E, F, G, e, f, g, k1, k2, H, K, sh.normal, L1, L2, bool(umb))


def normal_curvature(S, q, theta, tol_umb=DEFAULT_TOL_UMB):
    """Normal curvature along the direction at angle ``theta`` from ``L1``."""
    fr = principal_data(S, q, tol_umb)
    if fr.umbilic:
        raise UmbilicReference(f"principal directions undefined at {fr.chart}")
    c2 = math.cos(theta) ** 2
    return fr.k1 * c2 + fr.k2 * (1.0 - c2)


def normal_curvature_quotient(S, q, t3):
    """Normal curvature along tangent ``t3`` as ``II(t, t) / I(t, t)``.

    Independent of the principal decomposition: the chart components of
    ``t3`` are fed to the chart fundamental forms (for quadrics the
    curvature of the normal section is evaluated from the Hessian).
    """
    t3 = np.asarray(t3, float)
    if isinstance(S, ImplicitQuadric):
        x = np.asarray(q, float)
        g = S.gradient(x)
        return float(-S.orientation * (t3 @ (2 * S.A) @ t3) / (np.linalg.norm(g) * (t3 @ t3)))
    E, F, G, e, f, g = fundamental_forms(S, q)
    c = S.chart_velocity(q, t3)
    num = e * c[0] ** 2 + 2 * f * c[0] * c[1] + g * c[1] ** 2
    den = E * c[0] ** 2 + 2 * F * c[0] * c[1] + G * c[1] ** 2
    return float(num / den)

"""Umbilic points: location, adapted cubic jet, Darboux classification and
the resolution of the curvature-line equation on the slope line.

The adapted chart puts the surface in the form::

    h(u, v) = (k/2)(u^2 + v^2) + (a/6) u^3 + (b/2) u v^2 + (c/6) v^3 + O(4)

and the classification reads off the conditions on ``(a, b, c)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import least_squares

from .errors import DegenerateFlat, JetUnstable, RootConditioning
from .surface import DEFAULT_TOL_UMB, Surface

DEFAULT_TOL_CLASS = 1e-7
DEFAULT_MERGE_REL = 1e-5
DARBOUXIAN = ("D1", "D2", "D3")


@dataclass(frozen=True)
class CubicJet:
    """Adapted third-order jet at an umbilic.

    ``frame`` holds ``(point, normal, E1, E2)`` of the adapted chart and
    ``phis`` every rotation in [0, pi) that cancels the ``u^2 v`` term.
    """

    k: float
    a: float
    b: float
    c: float
    phi: float = 0.0
    residual: float = 0.0
    phis: tuple = ()
    frame: tuple | None = None

    @property
    def coefficients(self):
        return (self.k, self.a, self.b, self.c)


@dataclass(frozen=True)
class Classification:
    verdict: str
    reason: str | None
    condition_values: dict
    margin: float

    @property
    def darbouxian(self):
        return self.verdict in DARBOUXIAN


@dataclass(frozen=True)
class LiftSingularity:
    """Equilibrium of the lifted field on the exceptional slope line."""

    slope: float
    angle: float
    eigenvalues: tuple
    type: str  # "saddle" | "node"
    multiplicity: int = 1


@dataclass
class UmbilicPoint:
    id: int
    chart: tuple
    point: np.ndarray
    gap: float
    residual: float
    jet: CubicJet | None = None
    verdict: str | None = None
    reason: str | None = None
    condition_values: dict = field(default_factory=dict)
    margin: float | None = None
    separatrices: list = field(default_factory=list)

    @property
    def darbouxian(self):
        return self.verdict in DARBOUXIAN

    @property
    def separatrix_count(self):
        return sum(1 for s in self.separatrices if s.type == "saddle")


@dataclass
class UmbilicSet:
    """Result of an umbilic search."""

    points: list
    everywhere_umbilic: bool = False
    coverage_complete: bool = True
    samples: int = 0
    diagnostics: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------


def _grid_minima(values, shape, wrap):
    """Indices of grid points not exceeded by any of their 8 neighbours."""
    V = values.reshape(shape)
    pad = np.pad(V, 1, mode="constant", constant_values=np.inf)
    if wrap[0]:
        pad[0, 1:-1], pad[-1, 1:-1] = V[-1], V[0]
    if wrap[1]:
        pad[1:-1, 0], pad[1:-1, -1] = V[:, -1], V[:, 0]
    if wrap[0] and wrap[1]:
        pad[0, 0], pad[0, -1], pad[-1, 0], pad[-1, -1] = V[-1, -1], V[-1, 0], V[0, -1], V[0, 0]
    is_min = np.ones(shape, dtype=bool)
    n0, n1 = shape
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            is_min &= V <= pad[1 + di : 1 + di + n0, 1 + dj : 1 + dj + n1]
    return np.flatnonzero(is_min.ravel())


def _local_chart(S, q0):
    """Map local coordinates w in R^2 near ``q0`` to chart points."""
    if S.chart_dim == 3:
        sh = S.shape(q0)
        p0, t1, t2 = np.asarray(q0, float), sh.e1, sh.e2

        def to_chart(w):
            return S.retract(p0 + w[0] * t1 + w[1] * t2)

        return to_chart, t1
    base = np.asarray(q0, float)
    return (lambda w: S.wrap(base + np.asarray(w))), None


def refine_umbilic(S, q0, xtol=1e-15):
    """Drive the traceless shape matrix to zero near ``q0``.

    Minimises ``(k2 - k1)^2 = (s11 - s22)^2 + 4 s12^2`` by Levenberg-Marquardt
    in local coordinates. Returns ``(q, gap, kscale)``.
    """
    to_chart, ref = _local_chart(S, q0)
    kscale = max(abs(S.shape(q0).s11), abs(S.shape(q0).s22), S.curvature_scale)

    def resid(w):
        q = to_chart(w)
        if not S.contains(q):
            return np.array([1e3, 1e3])
        sh = S.shape(q, ref=ref)
        return np.array([sh.s11 - sh.s22, 2.0 * sh.s12]) / kscale

    sol = least_squares(resid, np.zeros(2), method="lm", xtol=xtol, ftol=1e-15, gtol=1e-15,
                        x_scale=S.diameter * 1e-2)
    q = to_chart(sol.x)
    r = resid(sol.x)
    return q, float(np.hypot(*r) * kscale), kscale


def find_umbilics(S: Surface, n=90, tol_umb=DEFAULT_TOL_UMB, merge_rel=DEFAULT_MERGE_REL,
                  accept_rel=1e-8, max_candidates=64):
    """Locate the isolated umbilics of ``S`` over its chart region.

    Candidates are the local minima of ``k2 - k1`` on a sampling grid; each
    is refined and accepted when the relative gap falls below
    ``accept_rel``. Results closer than ``merge_rel * diameter`` collapse.
    """
    Q, shape, wrap = S.search_grid(n)
    gap, kmag = S.gap_field(Q)
    floor = tol_umb * np.maximum(kmag, S.curvature_scale)
    out = UmbilicSet([], samples=len(Q), coverage_complete=bool(getattr(S, "closed", False)))
    if not out.coverage_complete:
        out.diagnostics.append("CoverageIncomplete: search limited to the chart region")
    if np.all(gap <= floor):
        out.everywhere_umbilic = True
        out.diagnostics.append("EverywhereUmbilic: k2 - k1 below floor at every sample")
        return out
    idx = _grid_minima(gap / np.maximum(kmag, S.curvature_scale), shape, wrap)
    idx = idx[np.argsort(gap[idx])][:max_candidates]
    merge = merge_rel * S.diameter
    found = []
    for j in idx:
        try:
            q, g, ks = refine_umbilic(S, Q[j])
        except Exception as exc:  # noqa: BLE001 - refinement failures are diagnostics
            out.diagnostics.append(f"refinement failed from sample {int(j)}: {exc}")
            continue
        if not S.contains(q) or g > accept_rel * ks:
            continue
        x = S.point(q)
        if any(np.linalg.norm(x - y) < merge for _, y, _, _ in found):
            continue
        found.append((q, x, g, g / ks))
    found.sort(key=lambda t: tuple(np.round(t[1], 9)))
    out.points = [UmbilicPoint(i, tuple(float(v) for v in q), x, g, r) for i, (q, x, g, r) in enumerate(found)]
    return out


# ---------------------------------------------------------------------------
# adapted jet
# ---------------------------------------------------------------------------


def _cubic_tensor(A, B, C, D):
    T = np.zeros((2, 2, 2))
    T[0, 0, 0], T[1, 1, 1] = A, D
    T[0, 0, 1] = T[0, 1, 0] = T[1, 0, 0] = B
    T[0, 1, 1] = T[1, 0, 1] = T[1, 1, 0] = C
    return T


def _rotate(T, phi):
    c, s = math.cos(phi), math.sin(phi)
    R = np.array([[c, -s], [s, c]])  # columns are the rotated axes
    return np.einsum("ijk,ia,jb,kc->abc", T, R, R, R)


def adapted_rotations(A, B, C, D):
    """All phi in [0, pi) cancelling the u^2 v coefficient, ascending.

    The coefficient after rotating by phi is
    ``B c^3 + (2C - A) c^2 s + (D - 2B) c s^2 - C s^3`` with ``c, s = cos, sin``.
    """
    norm = max(abs(A), abs(B), abs(C), abs(D))
    coeffs = [-C, D - 2 * B, 2 * C - A, B]
    while coeffs and abs(coeffs[0]) <= 1e-14 * norm:
        coeffs.pop(0)
    phis = []
    if len(coeffs) < 4:
        phis.append(math.pi / 2)  # the cubic in tan(phi) lost its leading term
    if len(coeffs) > 1:
        for t in np.roots(coeffs):
            if abs(t.imag) <= 1e-9 * max(1.0, abs(t)):
                phis.append(math.atan(t.real) % math.pi)

    def f(p):
        c, s = math.cos(p), math.sin(p)
        return B * c**3 + (2 * C - A) * c * c * s + (D - 2 * B) * c * s * s - C * s**3

    def fp(p):
        c, s = math.cos(p), math.sin(p)
        return (-3 * B * c * c * s + (2 * C - A) * (c**3 - 2 * c * s * s)
                + (D - 2 * B) * (2 * c * c * s - s**3) - 3 * C * s * s * c)

    polished = []
    for p in phis:
        for _ in range(4):
            d = fp(p)
            if d == 0.0:
                break
            p -= f(p) / d
        p %= math.pi
        if all(min(abs(p - r), math.pi - abs(p - r)) > 1e-10 for r in polished):
            polished.append(p)
    polished.sort()
    return polished, f, fp


def jet_from_height(h, frame=None, length_scale=1.0):
    """Adapted :class:`CubicJet` from the height jet over a tangent plane."""
    k = 0.5 * (h.derivative(2, 0) + h.derivative(0, 2))
    A, B = h.derivative(3, 0), h.derivative(2, 1)
    C, D = h.derivative(1, 2), h.derivative(0, 3)
    scale = max(k * k, 1.0 / length_scale**2)
    norm = max(abs(A), abs(B), abs(C), abs(D))
    if norm < 1e-12 * scale:
        raise DegenerateFlat(f"cubic coefficients vanish (max {norm:.3g})")
    phis, f, fp = adapted_rotations(A, B, C, D)
    if not phis:
        raise JetUnstable("no real rotation cancels the u^2 v term")
    phi = phis[0]
    if abs(fp(phi)) < 1e-8 * norm:
        raise JetUnstable(f"double root of the rotation condition at phi={phi:.6g}")
    R = _rotate(_cubic_tensor(A, B, C, D), phi)
    if frame is not None:
        p0, N, e1, e2 = frame
        c, s = math.cos(phi), math.sin(phi)
        frame = (p0, N, c * e1 + s * e2, -s * e1 + c * e2)
    return CubicJet(float(k), float(R[0, 0, 0]), float(R[0, 1, 1]), float(R[1, 1, 1]), float(phi),
                    float(abs(R[0, 0, 1])), tuple(float(p) for p in phis), frame)


def adapted_jet(S, q):
    """Adapted cubic jet of ``S`` at the umbilic chart point ``q``."""
    p0, N, e1, e2, h = S.height_jet(q)
    return jet_from_height(h, (np.asarray(p0, float), N, e1, e2), S.diameter)


def rotated_jet(jet, phi):
    """Coefficients (a, d, b, c) after rotating the adapted chart by ``phi``."""
    R = _rotate(_cubic_tensor(jet.a, 0.0, jet.b, jet.c), phi)
    return R[0, 0, 0], R[0, 0, 1], R[0, 1, 1], R[1, 1, 1]


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def condition_values(a, b, c):
    if b == 0:
        return {"b(b-a)": 0.0, "a/b": None, "(c/2b)^2+2": None, "a-2b": a - 2 * b}
    return {"b(b-a)": b * (b - a), "a/b": a / b, "(c/2b)^2+2": (c / (2 * b)) ** 2 + 2, "a-2b": a - 2 * b}


def classify_darbouxian(jet, tol_class=DEFAULT_TOL_CLASS):
    """Darboux verdict for a jet or an ``(a, b, c)`` triple.

    Margins within ``tol_class`` (relative) of an inequality give
    ``NonDarbouxian`` with the near-violated condition named.
    """
    k = 0.0
    if isinstance(jet, CubicJet):
        a, b, c, k = jet.a, jet.b, jet.c, jet.k
    else:
        a, b, c = (float(x) for x in jet)
    vals = condition_values(a, b, c)
    s = max(abs(a), abs(b), abs(c))
    if s == 0.0:
        return Classification("DegenerateFlat", "cubic part vanishes", vals, 0.0)
    # a cubic that is tiny next to k^2 is unresolved location noise
    s = max(s, k * k)
    tval = b * (b - a)
    if abs(tval) <= tol_class * s * s:
        return Classification("NonDarbouxian", "T: b(b-a)=0", vals, abs(tval) / (s * s))
    r = a / b
    q = (c / (2 * b)) ** 2 + 2
    sc = max(1.0, abs(r), q)
    tol = tol_class * sc
    m1, m3 = r - q, 1 - r
    m2 = min(q - r, r - 1)
    m2b = abs(a - 2 * b) / abs(b)
    if m1 > tol:
        return Classification("D1", None, vals, m1 / sc)
    if m3 > tol:
        return Classification("D3", None, vals, m3 / sc)
    if m2 > tol:
        if m2b > tol:
            return Classification("D2", None, vals, min(m2, m2b) / sc)
        return Classification("NonDarbouxian", "BoundaryCase: a=2b", vals, m2b / sc)
    if abs(m1) <= tol:
        return Classification("NonDarbouxian", "BoundaryCase: a/b=(c/2b)^2+2", vals, abs(m1) / sc)
    return Classification("NonDarbouxian", "BoundaryCase: a/b=1", vals, abs(m3) / sc)


# ---------------------------------------------------------------------------
# lifted field
# ---------------------------------------------------------------------------


def curvature_line_equation(jet, d=0.0):
    """First-order curvature-line equation ``Phi(u, v, p) = u alpha(p) + v beta(p)``.

    From ``f du^2 + (g - e) du dv - f dv^2 = 0`` with the linear parts of the
    second fundamental form of the jet graph: ``e = k + a u + d v``,
    ``f = d u + b v``, ``g = k + b u + c v`` and ``E = G = 1, F = 0``.
    Returns the polynomial coefficient arrays (ascending in p) of alpha, beta.
    """
    a, b, c = jet.a, jet.b, jet.c
    alpha = np.array([d, b - a, -d])
    beta = np.array([b, c - d, -b])
    return alpha, beta


def lifted_field_jacobian(alpha, beta, p0):
    """Jacobian at ``(0, 0, p0)`` of ``X = (Phi_p, p Phi_p, -(Phi_u + p Phi_v))``."""
    P = np.polynomial.polynomial
    da, db = P.polyder(alpha), P.polyder(beta)
    psi = P.polyadd(alpha, P.polymulx(beta))
    dpsi = P.polyder(psi)
    a1, b1 = P.polyval(p0, da), P.polyval(p0, db)
    return np.array([[a1, b1, 0.0], [p0 * a1, p0 * b1, 0.0], [0.0, 0.0, -P.polyval(p0, dpsi)]])


def lie_cartan_resolution(jet, tol_root=1e-9):
    """Equilibria of the lifted curvature-line field over the umbilic.

    The implicit equation is lifted to (u, v, p) with p = dv/du; the
    exceptional line u = v = 0 carries equilibria at the real roots of
    ``psi(p) = alpha(p) + p beta(p)``. Each is linearised on the tangent
    plane of the lifted surface and typed by the sign of its eigenvalues.
    """
    P = np.polynomial.polynomial
    alpha, beta = curvature_line_equation(jet)
    psi = P.polyadd(alpha, P.polymulx(beta))
    psi = np.trim_zeros(psi, "b")
    norm = max(abs(jet.a), abs(jet.b), abs(jet.c))
    if len(psi) < 4 or abs(psi[-1]) <= tol_root * norm:
        raise RootConditioning("slope cubic degenerates (b = 0): equilibrium at p = infinity")
    roots = P.polyroots(psi)
    dpsi = P.polyder(psi)
    real = sorted(float(r.real) for r in roots if abs(r.imag) <= 1e-7 * max(1.0, abs(r)))
    out = []
    for p0 in real:
        if abs(P.polyval(p0, dpsi)) <= tol_root * norm * (1 + p0 * p0):
            raise RootConditioning(f"multiple root of the slope cubic at p={p0:.6g}")
        J = lifted_field_jacobian(alpha, beta, p0)
        T = np.array([[1.0, p0, 0.0], [0.0, 0.0, 1.0]]).T
        T[:, 0] /= np.linalg.norm(T[:, 0])
        B = np.linalg.lstsq(T, J @ T, rcond=None)[0]
        ev = np.linalg.eigvals(B)
        ev = tuple(float(x.real) for x in sorted(ev, key=lambda z: z.real))
        if min(abs(x) for x in ev) <= tol_root * norm:
            raise RootConditioning(f"non-hyperbolic equilibrium at p={p0:.6g}")
        kind = "saddle" if ev[0] * ev[1] < 0 else "node"
        out.append(LiftSingularity(p0, math.atan(p0), ev, kind, 1))
    return out


def separatrix_count(resolution):
    return sum(1 for s in resolution if s.type == "saddle")


# ---------------------------------------------------------------------------
# per-umbilic pipeline and condition (a)
# ---------------------------------------------------------------------------


def classify_umbilic(S, U, tol_class=DEFAULT_TOL_CLASS):
    """Return a copy of ``U`` with jet, verdict and resolved separatrices."""
    q = np.asarray(U.chart, float)
    try:
        jet = adapted_jet(S, q)
    except DegenerateFlat as exc:
        return replace(U, verdict="DegenerateFlat", reason=str(exc),
                       condition_values=condition_values(0.0, 0.0, 0.0), margin=0.0)
    except JetUnstable as exc:
        return replace(U, verdict="NonDarbouxian", reason=f"JetUnstable: {exc}")
    cl = classify_darbouxian(jet, tol_class)
    seps = []
    if cl.darbouxian:
        try:
            seps = lie_cartan_resolution(jet)
        except RootConditioning as exc:
            return replace(U, jet=jet, verdict="NonDarbouxian", reason=f"RootConditioning: {exc}",
                           condition_values=cl.condition_values, margin=cl.margin)
    return replace(U, jet=jet, verdict=cl.verdict, reason=cl.reason,
                   condition_values=cl.condition_values, margin=cl.margin, separatrices=seps)


def classify_umbilics(S, umbilics, tol_class=DEFAULT_TOL_CLASS):
    out = replace(umbilics) if isinstance(umbilics, UmbilicSet) else UmbilicSet(list(umbilics))
    out.points = [classify_umbilic(S, U, tol_class) for U in umbilics]
    return out


def sigma_membership_local(points):
    """Condition (a): every umbilic is isolated and Darbouxian."""
    pts = list(points)
    per_point = [{"id": U.id, "verdict": U.verdict, "reason": U.reason, "margin": U.margin} for U in pts]
    if isinstance(points, UmbilicSet) and points.everywhere_umbilic:
        return {"condition": "a", "status": "fails", "holds": False,
                "reason": "EverywhereUmbilic", "points": per_point}
    bad = [U.id for U in pts if not U.darbouxian]
    if bad:
        return {"condition": "a", "status": "fails", "holds": False,
                "reason": f"non-Darbouxian umbilics {bad}", "points": per_point}
    if isinstance(points, UmbilicSet) and not points.coverage_complete:
        return {"condition": "a", "status": "holds-on-region", "holds": True,
                "reason": "search covered the chart region only", "points": per_point}
    return {"condition": "a", "status": "holds", "holds": True, "reason": None, "points": per_point}

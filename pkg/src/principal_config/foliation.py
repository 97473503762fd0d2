"""Global principal foliations: line integration, umbilic separatrices,
principal cycles and the assembled principal configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import (ChartTransitionFailure, GeometryError, OutOfDomain, SectionDegenerate,
                     SeedAtUmbilic, SingularPoint)
from .stepper import FieldEval, chart_length, dp_error, dp_step
from .surface import DEFAULT_TOL_UMB
from .umbilic import (DEFAULT_MERGE_REL, DEFAULT_TOL_CLASS, classify_umbilics, find_umbilics,
                      sigma_membership_local)

CLOSED = "ClosedCycle"
REACHED = "ReachedUmbilic"
LEFT = "LeftDomain"
BUDGET = "StepBudget"
NEAR = "NearUmbilic"

_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(3)
_GAUSS_X = 0.5 * (_GAUSS_X + 1.0)
_GAUSS_W = 0.5 * _GAUSS_W


@dataclass(frozen=True)
class Controls:
    """Integration and matching tolerances; lengths are relative to the diameter."""

    tol_ode: float = 1e-10
    hmax_rel: float = 0.02
    h0_rel: float = 1e-3
    max_length_rel: float = 40.0
    max_steps: int = 200_000
    tol_close_rel: float = 1e-7
    merge_rel: float = DEFAULT_MERGE_REL
    eps_umb_factor: float = 10.0
    match_rel: float = 1e-5
    section_radius_rel: float = 0.05
    return_delta_rel: float = 1e-3
    tol_umb: float = DEFAULT_TOL_UMB
    tol_hyp: float = 1e-6
    clamp: float = 1e-14

    @property
    def lmin_rel(self):
        return 10.0 * self.hmax_rel

    @property
    def eps_umb_rel(self):
        return self.eps_umb_factor * self.merge_rel

    def as_dict(self):
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out["lmin_rel"] = self.lmin_rel
        out["eps_umb_rel"] = self.eps_umb_rel
        return out


@dataclass
class PrincipalLine:
    """Polyline of one principal foliation, parametrised by arclength ``s``."""

    foliation: int
    seed: tuple
    q: np.ndarray
    x: np.ndarray
    t: np.ndarray
    s: np.ndarray
    termination: str
    period: float | None = None
    umbilic: int | None = None
    incoming: np.ndarray | None = None
    miss: float | None = None
    returns: list = field(default_factory=list)
    origin: int | None = None
    branch: float | None = None
    evals: int = 0
    start_termination: str | None = None

    @property
    def length(self):
        return float(self.s[-1])


@dataclass
class PrincipalCycle:
    line: PrincipalLine
    foliation: int
    length: float
    rho: float
    log_rho: float
    integral: float
    hyperbolic: bool
    clamped: bool = False
    orientation_reversing: bool = False

    @property
    def predicted_log_rho(self):
        """``log rho`` implied by the integral: -I/2 on L1 cycles, +I/2 on L2 cycles."""
        return 0.5 * self.integral * (1.0 if self.foliation == 2 else -1.0)


@dataclass
class PrincipalConfiguration:
    surface: object
    umbilics: object
    separatrices: list
    connections: list
    near_misses: list
    cycles: list
    leaves: list
    sigma: dict
    controls: Controls
    degenerate: bool = False
    diagnostics: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# integration
# ---------------------------------------------------------------------------


def _umbilic_table(umbilics):
    pts = [u for u in umbilics]
    if not pts:
        return np.zeros((0, 3)), []
    return np.array([np.asarray(u.point, float) for u in pts]), [u.id for u in pts]


def _move(S, q, chart_dir, h):
    return S.retract(S.wrap(q + h * chart_dir))


def integrate_line(S, seed, i, controls=None, umbilics=(), direction=None, origin=None,
                   section=None, stop_at_return=False, max_length=None):
    """Integrate the principal line field ``L_i`` from ``seed``.

    Stops on closure at the seed section, on entering an umbilic ball, on
    leaving the chart, or on the arclength/step budget. ``section`` may be
    ``(x0, t0, n0)`` to measure returns on another transversal.
    """
    c = controls or Controls()
    diam = S.diameter
    q = S.retract(S.wrap(np.asarray(seed, float)))
    fld = FieldEval(S, i)
    dq, t, gap, kmag = fld(q, direction)
    if gap <= S.umbilic_floor(kmag, kmag, c.tol_umb):
        raise SeedAtUmbilic(f"k2 - k1 = {gap:.3g} at seed {tuple(np.round(q, 12))}")
    x = S.point(q)
    if section is None:
        sec_x, sec_t, sec_n = x, t, S.direction(q, 3 - i, None)[1]
    else:
        sec_x, sec_t, sec_n = (np.asarray(v, float) for v in section)
    hmax = c.hmax_rel * diam
    h = min(hmax, c.h0_rel * diam)
    tol = c.tol_ode * diam
    lmin = c.lmin_rel * diam
    rsec = c.section_radius_rel * diam
    tol_close = c.tol_close_rel * diam
    eps = c.eps_umb_rel * diam
    budget = (max_length if max_length is not None else c.max_length_rel * diam)
    U, uid = _umbilic_table(umbilics)
    origin_clear = origin is None

    qs, xs, ts, ss = [q], [x], [t], [0.0]
    s = 0.0
    d_prev = float((x - sec_x) @ sec_t)
    returns = []
    term, extra = BUDGET, {}
    steps = 0
    while True:
        if s >= budget or steps >= c.max_steps:
            term = BUDGET
            break
        h = min(h, budget - s + 1e-12 * diam)
        try:
            y5, ks = dp_step(fld, q, dq, t, h)
            qn = S.retract(S.wrap(y5))
            inside = S.contains(qn)
        except OutOfDomain:
            inside = False
        except SingularPoint as exc:
            raise ChartTransitionFailure(str(exc)) from exc
        if not inside:
            if h > 1e-7 * diam:
                h *= 0.25
                continue
            term = LEFT
            break
        try:
            dqn, tn, gapn, kn = fld(qn, t)
        except (OutOfDomain, SingularPoint):
            h *= 0.25
            if h < 1e-9 * diam:
                term = LEFT
                break
            continue
        err = chart_length(S, q, dp_error(ks, dqn, h))
        if err > tol:
            h *= max(0.2, 0.9 * (tol / err) ** 0.2)
            continue
        steps += 1
        s_new = s + h
        xn = S.point(qn)
        d_new = float((xn - sec_x) @ sec_t)
        if (d_prev < 0.0 <= d_new and s_new > lmin and float(tn @ sec_t) > 0.0
                and np.linalg.norm(xn - sec_x) < rsec):
            sc, qc, xc, tc = _section_crossing(S, fld, q, dq, t, h, s, sec_x, sec_t)
            delta = float((xc - sec_x) @ sec_n)
            returns.append((sc, delta))
            closed = (np.linalg.norm(xc - sec_x) < tol_close and float(tc @ sec_t) > 1.0 - 1e-6)
            if closed or stop_at_return:
                qs.append(qc)
                xs.append(xc)
                ts.append(tc)
                ss.append(sc)
                term = CLOSED if closed else BUDGET
                if closed:
                    extra["period"] = sc
                break
        q, dq, t, s, d_prev = qn, dqn, tn, s_new, d_new
        qs.append(q)
        xs.append(xn)
        ts.append(t)
        ss.append(s)
        if len(U):
            dist = np.linalg.norm(U - xn, axis=1)
            j = int(np.argmin(dist))
            if origin is not None and uid[j] == origin and not origin_clear:
                if dist[j] > 1.01 * eps:
                    origin_clear = True
            elif dist[j] < eps:
                rel = U[j] - xn
                extra.update(umbilic=uid[j], incoming=t.copy(),
                             miss=float(np.linalg.norm(rel - (rel @ t) * t)))
                term = REACHED
                break
            if origin is not None and not origin_clear and uid[j] != origin:
                origin_clear = True
        if gapn <= S.umbilic_floor(kn, kn, c.tol_umb):
            term = NEAR
            break
        h = min(hmax, h * min(5.0, 0.9 * (tol / max(err, 1e-300)) ** 0.2))

    return PrincipalLine(i, tuple(float(v) for v in np.ravel(seed)), np.array(qs), np.array(xs),
                         np.array(ts), np.array(ss), term, returns=returns, origin=origin,
                         evals=fld.evals, **extra)


def _section_crossing(S, fld, q, dq, t, h, s, sec_x, sec_t):
    """Locate the section crossing inside a step by root finding on the step size."""

    def state(hh):
        y, _ = dp_step(fld, q, dq, t, hh)
        qq = S.retract(S.wrap(y))
        return qq, S.point(qq)

    def dist(hh):
        return float((state(hh)[1] - sec_x) @ sec_t)

    lo_val = float((S.point(q) - sec_x) @ sec_t)
    hi_val = dist(h)
    if hi_val == 0.0:
        hc = h
    elif lo_val == 0.0:
        hc = 0.0
    else:
        hc = brentq(dist, 0.0, h, xtol=1e-15 * S.diameter)
    qc, xc = state(hc)
    tc = fld(qc, t)[1]
    return s + hc, qc, xc, tc


def integrate_leaf(S, seed, i, controls=None, umbilics=()):
    """Leaf through ``seed`` traced in both directions unless it closes.

    The backward half is prepended so that arclength increases along the
    joined polyline; ``termination`` refers to the forward end and
    ``start_termination`` to the backward end.
    """
    fwd = integrate_line(S, seed, i, controls, umbilics)
    if fwd.termination == CLOSED:
        return fwd
    back = integrate_line(S, seed, i, controls, umbilics, direction=-fwd.t[0])
    s_back = back.s[-1] - back.s[::-1]
    fwd.q = np.vstack([back.q[:0:-1], fwd.q])
    fwd.x = np.vstack([back.x[:0:-1], fwd.x])
    fwd.t = np.vstack([-back.t[:0:-1], fwd.t])
    fwd.s = np.concatenate([s_back[:-1], back.s[-1] + fwd.s])
    fwd.start_termination = back.termination
    fwd.evals += back.evals
    if back.termination == REACHED and fwd.termination != REACHED:
        fwd.umbilic = back.umbilic
    return fwd


def reverse_line(S, line, controls=None, umbilics=()):
    """Re-integrate ``line`` backwards from its last vertex over the same length."""
    return integrate_line(S, line.q[-1], line.foliation, controls, umbilics,
                          direction=-line.t[-1], max_length=line.length)


# ---------------------------------------------------------------------------
# separatrices
# ---------------------------------------------------------------------------


def separatrix_launches(S, U, controls=None):
    """Launch data ``(chart point, foliation, R^3 direction, slope)`` per saddle ray."""
    c = controls or Controls()
    if U.jet is None or U.jet.frame is None:
        return []
    p0, N, E1, E2 = U.jet.frame
    q0 = np.asarray(U.chart, float)
    eps = c.eps_umb_rel * S.diameter
    out = []
    for sing in U.separatrices:
        if sing.type != "saddle":
            continue
        ray = math.cos(sing.angle) * E1 + math.sin(sing.angle) * E2
        for sign in (1.0, -1.0):
            d = sign * ray
            if S.chart_dim == 3:
                q = S.retract(q0 + eps * d)
            else:
                q = S.wrap(q0 + eps * S.chart_velocity(q0, d))
            al = [abs(float(S.direction(q, i)[1] @ d)) for i in (1, 2)]
            i = 1 if al[0] >= al[1] else 2
            out.append((q, i, d, sing.slope if sign > 0 else sing.slope, sign))
    return out


def trace_separatrices(S, U, controls=None, umbilics=()):
    """Integrate every separatrix ray of umbilic ``U`` outwards."""
    lines = []
    for q, i, d, slope, sign in separatrix_launches(S, U, controls):
        line = integrate_line(S, q, i, controls, umbilics, direction=d, origin=U.id)
        line.branch = sign
        lines.append(line)
    return lines


# ---------------------------------------------------------------------------
# cycles
# ---------------------------------------------------------------------------


def hyperbolicity_integral(S, line, controls=None):
    """``int dH / sqrt(H^2 - K)`` along ``line`` by 3-point Gauss per vertex interval.

    States at the Gauss nodes come from partial steps of the integrator.
    Returns ``(value, clamped)``.
    """
    c = controls or Controls()
    fld = FieldEval(S, line.foliation)
    total = 0.0
    clamped = False
    for j in range(len(line.s) - 1):
        h = line.s[j + 1] - line.s[j]
        if h <= 0.0:
            continue
        q, t = line.q[j], line.t[j]
        dq = fld(q, t)[0]
        for xg, wg in zip(_GAUSS_X, _GAUSS_W):
            y, _ = dp_step(fld, q, dq, t, xg * h)
            qm = S.retract(S.wrap(y))
            _, tm, gap, _ = fld(qm, t)
            d2 = 0.25 * gap * gap
            if d2 < c.clamp:
                clamped = True
                d2 = c.clamp
            total += wg * h * S.mean_curvature_rate(qm, tm) / math.sqrt(d2)
    return total, clamped


def _offset(S, q0, n0, delta, t0=None):
    """Point at transversal offset ``delta`` from ``q0``.

    With ``t0`` given, the point is placed on the section plane through
    ``q0`` normal to ``t0`` with section coordinate ``(x - x0).n0 = delta``.
    """
    q0 = np.asarray(q0, float)

    def place(dn, tau):
        w = dn * n0 + tau * (0.0 if t0 is None else t0)
        if S.chart_dim == 3:
            return S.retract(q0 + w)
        return S.wrap(q0 + S.chart_velocity(q0, w))

    q = place(delta, 0.0)
    if t0 is None:
        return q
    x0 = S.point(q0)
    dn, tau = delta, 0.0
    for _ in range(12):
        r = S.point(q) - x0
        et, en = float(r @ t0), float(r @ n0) - delta
        if max(abs(et), abs(en)) < 1e-15 * S.diameter:
            break
        tau -= et
        dn -= en
        q = place(dn, tau)
    return q


def return_map(S, q0, i, t0, n0, delta, controls=None, umbilics=()):
    """First return to the section through ``q0`` from offset ``delta``.

    Returns ``(start, end, line)`` with the section coordinates of the start
    point and of the return.
    """
    c = controls or Controls()
    q = _offset(S, q0, n0, delta, t0)
    x0 = S.point(np.asarray(q0, float))
    start = float((S.point(q) - x0) @ n0)
    line = integrate_line(S, q, i, c, umbilics, direction=t0, section=(x0, t0, n0),
                          stop_at_return=True)
    if not line.returns:
        raise SectionDegenerate(f"no return to the section (termination {line.termination})")
    return start, line.returns[0][1], line


def return_derivative(S, q0, i, t0, n0, delta, controls=None, umbilics=()):
    """Richardson-extrapolated central difference of the return map."""

    def central(d):
        s_p, p, _ = return_map(S, q0, i, t0, n0, d, controls, umbilics)
        s_m, m, _ = return_map(S, q0, i, t0, n0, -d, controls, umbilics)
        return (p - m) / (s_p - s_m)

    coarse = central(delta)
    fine = central(0.5 * delta)
    return (4.0 * fine - coarse) / 3.0


def cycle_from_line(S, line, controls=None, umbilics=()):
    """Return-map derivative and hyperbolicity integral of a closed line."""
    c = controls or Controls()
    i = line.foliation
    q0, t0 = line.q[0], line.t[0]
    n0 = S.direction(q0, 3 - i)[1]
    dlt = c.return_delta_rel * S.diameter
    eps = c.eps_umb_rel * S.diameter
    if len(umbilics):
        U, _ = _umbilic_table(umbilics)
        if np.min(np.linalg.norm(U - S.point(q0), axis=1)) < 2 * (dlt + eps):
            raise SectionDegenerate("cycle base too close to an umbilic")
    rho = return_derivative(S, q0, i, t0, n0, dlt, c, umbilics)
    integral, clamped = hyperbolicity_integral(S, line, c)
    log_rho = math.log(abs(rho)) if rho != 0 else -math.inf
    return PrincipalCycle(line, i, line.period or line.length, rho, log_rho, integral,
                          abs(integral) > c.tol_hyp, clamped, rho < 0)


def find_limit_cycle(S, line, controls=None, umbilics=(), max_iter=12):
    """Secant search for a fixed point of the seed-section return map.

    ``line`` must have at least two recorded returns. Returns a closed
    :class:`PrincipalLine` or ``None``.
    """
    c = controls or Controls()
    if len(line.returns) < 2:
        return None
    i = line.foliation
    q0, t0 = line.q[0], line.t[0]
    x0 = S.point(q0)
    n0 = S.direction(q0, 3 - i)[1]
    tol_close = c.tol_close_rel * S.diameter
    d0, g0 = 0.0, line.returns[0][1]
    d1 = line.returns[0][1]
    g1 = line.returns[1][1] - line.returns[0][1]
    # aim well below the closure tolerance: weakly hyperbolic cycles close
    # long before the section offset is small
    for _ in range(max_iter):
        if abs(g1) < 1e-3 * tol_close:
            break
        if g1 == g0:
            break
        d2 = d1 - g1 * (d1 - d0) / (g1 - g0)
        try:
            s2, p2, _ = return_map(S, q0, i, t0, n0, d2, c, umbilics)
        except GeometryError:
            return None
        d0, g0, d1, g1 = d1, g1, s2, p2 - s2
    if abs(g1) >= 0.5 * tol_close:
        return None
    seed = _offset(S, q0, n0, d1, t0)
    cand = integrate_line(S, seed, i, c, umbilics, direction=t0)
    return cand if cand.termination == CLOSED else None


def sample_seeds(S, n, rng_seed=0, avoid=(), min_dist_rel=5e-3):
    """Deterministic seed points spread over the surface (or chart region)."""
    rng = np.random.default_rng(rng_seed)
    U, _ = _umbilic_table(avoid)
    seeds = []
    if S.chart_dim == 2:
        lo = np.array([d[0] for d in S.domain])
        hi = np.array([d[1] for d in S.domain])
        margin = np.where(S.periodic, 0.0, 0.1) * (hi - lo)
        if not S.closed:
            # a jittered grid over the chart
            m = max(1, int(math.ceil(math.sqrt(n))))
            cells = [(a, b) for a in range(m) for b in range(m)]
            for a, b in cells[:n]:
                frac = (np.array([a, b]) + 0.25 + 0.5 * rng.random(2)) / m
                q = lo + margin + frac * (hi - lo - 2 * margin)
                if len(U) and np.min(np.linalg.norm(U - S.point(q), axis=1)) < min_dist_rel * S.diameter:
                    continue
                seeds.append(q)
            return seeds
    tries = 0
    while len(seeds) < n and tries < 100 * max(n, 1):
        tries += 1
        if S.chart_dim == 3:
            d = rng.normal(size=3)
            q = S.surface_points(d / np.linalg.norm(d))
        else:
            q = lo + margin + rng.random(2) * (hi - lo - 2 * margin)
        x = S.point(q)
        if len(U) and np.min(np.linalg.norm(U - x, axis=1)) < min_dist_rel * S.diameter:
            continue
        seeds.append(np.asarray(q, float))
    return seeds


def _same_cycle(a, b, tol):
    if a.foliation != b.foliation:
        return False
    d = np.min(np.linalg.norm(b.line.x - a.line.x[0], axis=1))
    return d < tol


def detect_cycles(S, seeds=None, n_seeds=6, foliations=(1, 2), controls=None, umbilics=(),
                  rng_seed=0, lines=None, diagnostics=None):
    """Principal cycles reached from a deterministic seed set.

    Closed leaves are used directly; leaves with repeated returns to their
    seed section are handed to :func:`find_limit_cycle`.
    """
    c = controls or Controls()
    diag = diagnostics if diagnostics is not None else []
    if lines is None:
        if seeds is None:
            seeds = sample_seeds(S, n_seeds, rng_seed, umbilics)
        lines = []
        for k, q in enumerate(seeds):
            for i in foliations:
                try:
                    lines.append(integrate_line(S, q, i, c, umbilics))
                except SeedAtUmbilic as exc:
                    diag.append(f"seed {k} foliation {i}: {exc}")
    cycles = []
    dedupe = 1e-4 * S.diameter
    for line in lines:
        closed = line if line.termination == CLOSED else None
        if closed is None and len(line.returns) >= 2:
            closed = find_limit_cycle(S, line, c, umbilics)
        if closed is None:
            continue
        try:
            cyc = cycle_from_line(S, closed, c, umbilics)
        except GeometryError as exc:
            diag.append(f"cycle through {tuple(np.round(closed.x[0], 6))}: {exc}")
            continue
        if any(_same_cycle(cyc, other, dedupe) for other in cycles):
            continue
        cycles.append(cyc)
    return cycles


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def _status(holds, undetermined=False):
    if undetermined:
        return "undetermined"
    return "holds" if holds else "fails"


def assemble_configuration(S, controls=None, tol_class=DEFAULT_TOL_CLASS, n_leaves=4,
                           rng_seed=0, search_n=90, with_cycles=True):
    """Umbilics, separatrices, cycles and sampled leaves with the genericity report."""
    c = controls or Controls()
    diag = []
    found = find_umbilics(S, n=search_n, tol_umb=c.tol_umb, merge_rel=c.merge_rel)
    diag.extend(found.diagnostics)
    if found.everywhere_umbilic:
        sigma = {
            "a": {"status": "fails", "reason": "EverywhereUmbilic"},
            "b": {"status": "undetermined", "reason": "no principal foliation"},
            "c": {"status": "undetermined", "reason": "no principal foliation"},
            "d": {"status": "undetermined", "reason": "no isolated umbilics"},
            "member": False,
        }
        return PrincipalConfiguration(S, found, [], [], [], [], [], sigma, c, True, diag)
    umbs = classify_umbilics(S, found, tol_class)
    seps = []
    for U in umbs:
        if not U.darbouxian:
            continue
        try:
            seps.extend(trace_separatrices(S, U, c, umbs))
        except GeometryError as exc:
            diag.append(f"separatrices of umbilic {U.id}: {exc}")
    match = c.match_rel * S.diameter
    connections, near = [], []
    for k, line in enumerate(seps):
        if line.termination != REACHED or line.umbilic == line.origin:
            continue
        rec = {"separatrices": [k], "from": line.origin, "to": line.umbilic,
               "foliation": line.foliation, "miss": line.miss, "length": line.length}
        bucket = connections if line.miss <= match else near
        for other in bucket:
            # the same connection traced from its other end
            if ({other["from"], other["to"]} == {rec["from"], rec["to"]}
                    and other["foliation"] == rec["foliation"]
                    and abs(other["length"] - rec["length"]) < 1e-4 * S.diameter):
                other["separatrices"].append(k)
                other["miss"] = max(other["miss"], rec["miss"])
                break
        else:
            bucket.append(rec)
    leaves, cycles = [], []
    if n_leaves:
        seeds = sample_seeds(S, n_leaves, rng_seed, umbs)
        for k, q in enumerate(seeds):
            for i in (1, 2):
                try:
                    leaves.append(integrate_leaf(S, q, i, c, umbs))
                except SeedAtUmbilic as exc:
                    diag.append(f"leaf seed {k}: {exc}")
        if with_cycles:
            cycles = detect_cycles(S, controls=c, umbilics=umbs, lines=leaves, diagnostics=diag)
    sig_a = sigma_membership_local(umbs)
    sig_b = {"status": _status(all(cy.hyperbolic for cy in cycles), not with_cycles),
             "cycles": len(cycles), "non_hyperbolic": sum(1 for cy in cycles if not cy.hyperbolic)}
    if not cycles and with_cycles:
        sig_b["reason"] = "no cycles found among sampled leaves"
    tame = [ln.termination == CLOSED or (ln.termination in (REACHED, NEAR)
                                         and ln.start_termination in (REACHED, NEAR))
            for ln in leaves]
    if leaves and all(tame):
        sig_c = {"status": "supported", "reason": "every sampled leaf closed or reached an umbilic"}
    else:
        sig_c = {"status": "undetermined",
                 "reason": f"{len(tame) - sum(tame)} of {len(tame)} sampled leaves neither closed nor reached an umbilic"}
    sig_d = {"status": _status(not connections), "connections": len(connections), "near_misses": len(near)}
    sigma = {"a": {k: v for k, v in sig_a.items() if k not in ("condition", "holds")},
             "b": sig_b, "c": sig_c, "d": sig_d}
    sigma["member"] = (sigma["a"]["status"] == "holds" and sig_b["status"] == "holds"
                       and sig_c["status"] == "supported" and sig_d["status"] == "holds")
    return PrincipalConfiguration(S, umbs, seps, connections, near, cycles, leaves, sigma, c, False, diag)


def connection_graph(config):
    """networkx multigraph of umbilics (by verdict) joined by connections."""
    import networkx as nx

    G = nx.MultiGraph()
    for U in config.umbilics:
        G.add_node(U.id, verdict=U.verdict or "")
    for rec in config.connections:
        G.add_edge(rec["from"], rec["to"], foliation=rec["foliation"])
    return G

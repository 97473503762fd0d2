"""Versioned JSON reports for principal configurations.

Layout (``schema`` = ``principal-config/1``)::

    schema, generated (UTC timestamp, excluded from comparisons), command,
    surface {spec, kind, name, orientation, diameter, ...},
    tolerances {tol_ode, tol_class, tol_umb, tol_close, merge_radius, ...},
    seed, degenerate, local,
    umbilics {tolerance, items[...]}, separatrices {tolerance, items[...]},
    connections {tolerance, items[...], near_misses[...]},
    cycles {tolerance, items[...]}, leaves {tolerance, items[...]},
    sigma {a, b, c, d, member}, diagnostics [...]

Lengths are in surface units; tolerances are given both relative to the
diameter and as absolute values. Keys are sorted and floats written with
``repr`` so equal runs give byte-identical text apart from ``generated``.
"""

from __future__ import annotations

import datetime as _dt
import json
import math

import numpy as np

SCHEMA = "principal-config/1"


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def tolerance_block(controls, tol_class, diameter):
    d = controls.as_dict()
    d["tol_class"] = tol_class
    d["diameter"] = diameter
    d["absolute"] = {
        "tol_ode": controls.tol_ode * diameter,
        "hmax": controls.hmax_rel * diameter,
        "lmin": controls.lmin_rel * diameter,
        "tol_close": controls.tol_close_rel * diameter,
        "merge_radius": controls.merge_rel * diameter,
        "eps_umb": controls.eps_umb_rel * diameter,
        "eps_sep": controls.eps_umb_rel * diameter,
        "match": controls.match_rel * diameter,
        "return_delta": controls.return_delta_rel * diameter,
    }
    return d


def _jet(j):
    if j is None:
        return None
    return {"k": j.k, "a": j.a, "b": j.b, "c": j.c, "phi": j.phi, "phis": list(j.phis),
            "residual": j.residual,
            "frame": None if j.frame is None else [list(v) for v in j.frame]}


def umbilic_items(umbilics):
    out = []
    for U in umbilics:
        out.append({
            "id": U.id, "point": list(U.point), "chart": list(np.ravel(U.chart)), "gap": U.gap,
            "residual": U.residual, "jet": _jet(U.jet), "verdict": U.verdict, "reason": U.reason,
            "condition_values": U.condition_values, "margin": U.margin,
            "separatrix_directions": [
                {"slope": s.slope, "angle": s.angle, "eigenvalues": list(s.eigenvalues),
                 "type": s.type} for s in (U.separatrices or [])],
            "separatrix_count": U.separatrix_count,
        })
    return out


def _line(line, stride=1):
    x = line.x[::stride]
    if stride > 1 and len(line.x) and not np.array_equal(x[-1], line.x[-1]):
        x = np.vstack([x, line.x[-1:]])
    return {"foliation": line.foliation, "termination": line.termination,
            "start_termination": line.start_termination, "length": line.length,
            "period": line.period, "umbilic": line.umbilic, "origin": line.origin,
            "miss": line.miss, "seed": list(line.seed), "vertices": len(line.s), "points": x}


def cycle_item(cy):
    return {"foliation": cy.foliation, "length": cy.length, "rho": cy.rho, "log_rho": cy.log_rho,
            "integral": cy.integral, "predicted_log_rho": cy.predicted_log_rho,
            "hyperbolic": cy.hyperbolic, "clamped": cy.clamped,
            "orientation_reversing": cy.orientation_reversing, "base": list(cy.line.x[0])}


def configuration_report(config, surface_spec, tol_class, seed, command="analyze", local=False,
                         include_leaves=True):
    """Plain-data report of a :class:`PrincipalConfiguration`."""
    S = config.surface
    c = config.controls
    diam = S.diameter
    tol = tolerance_block(c, tol_class, diam)
    surface = dict(S.describe())
    surface.update(spec=surface_spec, diameter=diam, closed=bool(S.closed))
    if getattr(S, "center", None) is not None:
        surface["center"] = list(S.center)
    rep = {
        "schema": SCHEMA,
        "command": command,
        "surface": surface,
        "tolerances": tol,
        "seed": seed,
        "local": local,
        "degenerate": config.degenerate,
        "umbilics": {
            "tolerance": {"tol_umb": c.tol_umb, "merge_radius": tol["absolute"]["merge_radius"],
                          "tol_class": tol_class},
            "everywhere_umbilic": bool(getattr(config.umbilics, "everywhere_umbilic", False)),
            "items": umbilic_items(config.umbilics) if not config.degenerate else [],
        },
        "separatrices": {
            "tolerance": {"tol_ode": tol["absolute"]["tol_ode"], "eps_sep": tol["absolute"]["eps_sep"]},
            "items": [_line(s) for s in config.separatrices],
        },
        "connections": {
            "tolerance": {"match": tol["absolute"]["match"]},
            "items": config.connections,
            "near_misses": config.near_misses,
        },
        "cycles": {
            "tolerance": {"tol_close": tol["absolute"]["tol_close"], "tol_hyp": c.tol_hyp,
                          "return_delta": tol["absolute"]["return_delta"], "clamp": c.clamp},
            "items": [cycle_item(cy) for cy in config.cycles],
        },
        "leaves": {
            "tolerance": {"tol_ode": tol["absolute"]["tol_ode"], "hmax": tol["absolute"]["hmax"]},
            "items": [_line(ln) for ln in config.leaves] if include_leaves else [],
        },
        "sigma": config.sigma,
        "diagnostics": list(config.diagnostics),
    }
    return rep


def dumps(report, timestamp=True):
    """Serialise with sorted keys; ``generated`` is added unless ``timestamp`` is false."""
    rep = dict(report)
    if timestamp:
        rep["generated"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return json.dumps(_clean(rep), sort_keys=True, indent=1) + "\n"


def loads(text):
    rep = json.loads(text)
    if not isinstance(rep, dict) or not str(rep.get("schema", "")).startswith("principal-config/"):
        raise ValueError("not a principal-config report")
    return rep


def strip_timestamp(text):
    """Report text with the ``generated`` field removed, for comparisons."""
    rep = json.loads(text)
    rep.pop("generated", None)
    return json.dumps(rep, sort_keys=True, indent=1) + "\n"

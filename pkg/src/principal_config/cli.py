"""Command-line front end.

Surface specifications (``--surface``)::

    ellipsoid:A,B,C          axis-aligned ellipsoid with semi-axes A, B, C
    sphere:R                 sphere of radius R
    quadric:C1,...,C10       coefficients of xx yy zz xy xz yz x y z 1
    monge:k=K,a=A,b=B,c=C    cubic normal form graph; optional d=, w= (half width)
    torus:R,r[,bump]         torus of revolution, optionally bumped
    cylinder:R[,H]           circular cylinder patch of height H
    plane                    the flat plane (everywhere umbilic)

Exit codes: 0 success, 2 degenerate surface, 1 error, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import GeometryError, NoContent
from .foliation import Controls, assemble_configuration, detect_cycles, sample_seeds
from .report import configuration_report, cycle_item, dumps, loads, tolerance_block, umbilic_items
from .surface import ImplicitQuadric, MongePatch, ParametricPatch
from .umbilic import DEFAULT_TOL_CLASS, classify_umbilics, find_umbilics

EXIT_OK, EXIT_ERROR, EXIT_DEGENERATE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(ValueError):
    pass


def _floats(text, n=None):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc
    if n is not None and len(vals) not in (n if isinstance(n, tuple) else (n,)):
        raise UsageError(f"expected {n} numbers, got {len(vals)} in {text!r}")
    return vals


def parse_surface(spec):
    """Build a surface from the mini-grammar in the module docstring."""
    name, _, params = spec.partition(":")
    name = name.strip().lower()
    try:
        if name == "ellipsoid":
            a, b, c = _floats(params, 3)
            if min(a, b, c) <= 0:
                raise UsageError("semi-axes must be positive")
            return ImplicitQuadric.ellipsoid(a, b, c)
        if name == "sphere":
            (r,) = _floats(params or "1", 1)
            if r <= 0:
                raise UsageError("radius must be positive")
            return ImplicitQuadric.sphere(r)
        if name == "quadric":
            return ImplicitQuadric(_floats(params, 10))
        if name == "monge":
            kv = {}
            for item in params.split(","):
                if not item.strip():
                    continue
                key, eq, val = item.partition("=")
                if not eq:
                    raise UsageError(f"monge parameters are key=value, got {item!r}")
                kv[key.strip()] = float(val)
            unknown = set(kv) - set("kabcdw")
            if unknown or not {"k", "a", "b", "c"} <= set(kv):
                raise UsageError("monge needs k=,a=,b=,c= (optional d=, w=)")
            return MongePatch.cubic_normal_form(kv["k"], kv["a"], kv["b"], kv["c"], kv.get("d", 0.0),
                                                half_width=kv.get("w", 0.2))
        if name == "torus":
            vals = _floats(params, (2, 3))
            return ParametricPatch.torus(*vals)
        if name == "cylinder":
            vals = _floats(params or "1", (1, 2))
            return ParametricPatch.cylinder(*vals)
        if name == "plane":
            return MongePatch.plane()
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(f"bad surface {spec!r}: {exc}") from exc
    raise UsageError(f"unknown surface {spec!r}")


def _controls(args):
    if args.tol_ode <= 0 or args.tol_class <= 0:
        raise UsageError("tolerances must be positive")
    return Controls(tol_ode=args.tol_ode)


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_analyze(args):
    """Full pipeline; writes a report (or a figure with ``--format figure``)."""
    S = parse_surface(args.surface)
    c = _controls(args)
    cfg = assemble_configuration(S, c, tol_class=args.tol_class, n_leaves=args.leaves,
                                 rng_seed=args.seed, with_cycles=not args.local)
    rep = configuration_report(cfg, args.surface, args.tol_class, args.seed, "analyze", args.local)
    if args.format == "figure":
        from .render import render_report

        if args.out in (None, "-"):
            raise UsageError("--format figure needs --out FILE")
        render_report(rep, args.out, view=args.view)
    else:
        _emit(dumps(rep, timestamp=not args.no_timestamp), args.out)
    return EXIT_DEGENERATE if cfg.degenerate else EXIT_OK


def cmd_render(args):
    from .render import render_report

    rep = loads(Path(args.report).read_text())
    out = args.out or str(Path(args.report).with_suffix(".svg"))
    render_report(rep, out, view=args.view)
    return EXIT_OK


def cmd_umbilics(args):
    S = parse_surface(args.surface)
    c = _controls(args)
    found = find_umbilics(S, tol_umb=c.tol_umb, merge_rel=c.merge_rel)
    rep = {"schema": "principal-config/1", "command": "umbilics", "seed": args.seed,
           "surface": dict(S.describe(), spec=args.surface, diameter=S.diameter),
           "tolerances": tolerance_block(c, args.tol_class, S.diameter),
           "degenerate": found.everywhere_umbilic,
           "umbilics": {"everywhere_umbilic": found.everywhere_umbilic,
                        "coverage_complete": found.coverage_complete,
                        "items": [] if found.everywhere_umbilic
                        else umbilic_items(classify_umbilics(S, found, args.tol_class))},
           "diagnostics": list(found.diagnostics)}
    _emit(dumps(rep, timestamp=not args.no_timestamp), args.out)
    return EXIT_DEGENERATE if found.everywhere_umbilic else EXIT_OK


def cmd_cycles(args):
    S = parse_surface(args.surface)
    c = _controls(args)
    found = find_umbilics(S, tol_umb=c.tol_umb, merge_rel=c.merge_rel)
    if found.everywhere_umbilic:
        cycles, diag = [], ["everywhere umbilic: no principal foliation"]
    else:
        diag = []
        seeds = sample_seeds(S, args.leaves, args.seed, found)
        cycles = detect_cycles(S, seeds=seeds, controls=c, umbilics=found, diagnostics=diag)
    rep = {"schema": "principal-config/1", "command": "cycles", "seed": args.seed,
           "surface": dict(S.describe(), spec=args.surface, diameter=S.diameter),
           "tolerances": tolerance_block(c, args.tol_class, S.diameter),
           "degenerate": found.everywhere_umbilic,
           "cycles": {"items": [cycle_item(cy) for cy in cycles]}, "diagnostics": diag}
    _emit(dumps(rep, timestamp=not args.no_timestamp), args.out)
    return EXIT_DEGENERATE if found.everywhere_umbilic else EXIT_OK


def cmd_probe(args):
    from .quadric import stability_probe

    S = parse_surface(args.surface)
    if not isinstance(S, ImplicitQuadric):
        raise UsageError("probe-stability needs a quadric surface")
    rep = stability_probe(S, args.magnitude, args.trials, seed=args.seed, controls=_controls(args))
    rep.update(schema="principal-config/1", command="probe-stability",
               surface={"spec": args.surface, **S.describe()})
    _emit(dumps(rep, timestamp=not args.no_timestamp), args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def build_parser():
    p = _Parser(prog="principal-config",
                description="Lines of curvature, umbilics and principal cycles on surfaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, surface=True):
        if surface:
            sp.add_argument("--surface", required=True, help="surface spec, e.g. ellipsoid:3,2,1")
        sp.add_argument("--tol-ode", type=float, default=1e-10, help="integration tolerance (relative)")
        sp.add_argument("--tol-class", type=float, default=DEFAULT_TOL_CLASS,
                        help="relative margin for the Darboux inequalities")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--no-timestamp", action="store_true", help="omit the generated field")

    a = sub.add_parser("analyze", help="full principal configuration report")
    common(a)
    a.add_argument("--format", choices=("report", "figure"), default="report")
    a.add_argument("--view", choices=("x", "y", "z"), default="z")
    a.add_argument("--local", action="store_true", help="local chart analysis; skip cycle search")
    a.add_argument("--leaves", type=int, default=6, help="number of leaf seeds per foliation")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("render", help="draw a figure from a report")
    r.add_argument("report")
    r.add_argument("--out", default=None)
    r.add_argument("--view", choices=("x", "y", "z"), default="z")
    r.set_defaults(func=cmd_render)

    u = sub.add_parser("umbilics", help="locate and classify umbilic points")
    common(u)
    u.set_defaults(func=cmd_umbilics)

    cy = sub.add_parser("cycles", help="principal cycles with return map and integral")
    common(cy)
    cy.add_argument("--leaves", type=int, default=4)
    cy.set_defaults(func=cmd_cycles)

    ps = sub.add_parser("probe-stability", help="perturbation census on the coefficient sphere")
    common(ps)
    ps.add_argument("--magnitude", type=float, default=1e-3)
    ps.add_argument("--trials", type=int, default=20)
    ps.set_defaults(func=cmd_probe)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"principal-config: usage error: {exc}\n")
        return EXIT_USAGE
    except NoContent as exc:
        sys.stderr.write(f"principal-config: nothing to draw: {exc}\n")
        return EXIT_ERROR
    except (GeometryError, OSError, ValueError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"principal-config: error: {type(exc).__name__}: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

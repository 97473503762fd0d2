"""Quadric tools: confocal ellipsoidal coordinates, perturbations on the
coefficient sphere and a perturbation census of principal configurations.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateLocation, GeometryError, Unsupported
from .foliation import Controls, assemble_configuration, connection_graph
from .surface import ImplicitQuadric, classify_quadric


@dataclass(frozen=True)
class ConfocalCoordinates:
    """Roots ``l1 < l2 < l3`` of ``x^2/(a^2+l) + y^2/(b^2+l) + z^2/(c^2+l) = 1``."""

    lambdas: tuple
    semi_axes: tuple
    degenerate: bool = False

    def reconstruct(self):
        """Squared coordinates ``(x^2, y^2, z^2)`` recovered from the roots."""
        a2 = np.square(self.semi_axes)
        lam = np.asarray(self.lambdas)
        out = []
        for k in range(3):
            others = [a2[k] - a2[j] for j in range(3) if j != k]
            out.append(np.prod(a2[k] + lam) / (others[0] * others[1]))
        return np.array(out)


def _confocal_cubic(p2, a2):
    x2, y2, z2 = p2
    A, B, C = a2

    def P(lam):
        return ((A + lam) * (B + lam) * (C + lam) - x2 * (B + lam) * (C + lam)
                - y2 * (A + lam) * (C + lam) - z2 * (A + lam) * (B + lam))

    return P


def confocal_of(point, abc, strict=False, rel_degenerate=1e-12):
    """Confocal coordinates of ``point`` relative to semi-axes ``a > b > c``.

    Each root is bracketed in its interlacing interval
    ``(-a^2, -b^2)``, ``(-b^2, -c^2)``, ``(-c^2, inf)`` and found by Brent's
    method on the cleared cubic. Points on a coordinate plane put a root on
    an interval endpoint; they are returned with ``degenerate=True``, or
    raise :class:`DegenerateLocation` when ``strict``.
    """
    a, b, c = (float(v) for v in abc)
    if not a > b > c > 0:
        raise ValueError("semi-axes must satisfy a > b > c > 0")
    p = np.asarray(point, float)
    p2 = p * p
    a2 = np.array([a * a, b * b, c * c])
    scale = a * a
    degenerate = bool(np.any(np.abs(p) <= rel_degenerate * a))
    if degenerate and strict:
        raise DegenerateLocation(f"point {tuple(p)} lies on a coordinate plane")
    P = _confocal_cubic(p2, a2)
    xtol = 1e-15 * scale
    ends = [-a2[0], -a2[1], -a2[2], float(p2.sum()) + scale]
    roots = []
    for lo, hi in zip(ends[:-1], ends[1:]):
        flo, fhi = P(lo), P(hi)
        if flo == 0.0:
            roots.append(lo)
        elif fhi == 0.0:
            roots.append(hi)
        elif flo * fhi > 0:
            # a vanishing coordinate pins the root to an endpoint
            roots.append(lo if abs(flo) < abs(fhi) else hi)
            degenerate = True
        else:
            roots.append(brentq(P, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps))
    return ConfocalCoordinates(tuple(float(r) for r in roots), (a, b, c), degenerate)


def confocal_normals(point, coords):
    """Unit gradients of the three confocal quadrics through ``point``."""
    p = np.asarray(point, float)
    a2 = np.square(coords.semi_axes)
    out = []
    for lam in coords.lambdas:
        g = p / (a2 + lam)
        out.append(g / np.linalg.norm(g))
    return np.array(out)


def confocal_on_surface(E: ImplicitQuadric, x):
    """Confocal coordinates of a point of a (possibly rotated, shifted) ellipsoid."""
    if E.type != "ellipsoid":
        raise Unsupported(f"confocal coordinates need an ellipsoid, got {E.type}")
    local = E.axes.T @ (np.asarray(x, float) - E.center)
    return confocal_of(local, E.semi_axes)


# ---------------------------------------------------------------------------
# coefficient sphere
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadricPoint9:
    """Unit coefficient 10-vector, i.e. a point of the nine-sphere."""

    coeffs: tuple

    @classmethod
    def from_coeffs(cls, coeffs):
        v = np.asarray(coeffs, float)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("zero coefficient vector")
        return cls(tuple(float(x) for x in v / n))

    @classmethod
    def of(cls, Q: ImplicitQuadric):
        return cls.from_coeffs(Q.coeffs)

    @property
    def vector(self):
        return np.array(self.coeffs)

    def surface(self, orientation=None, name=None):
        return ImplicitQuadric(self.coeffs, orientation=orientation, name=name)

    def signature(self):
        return classify_quadric(self.coeffs)


def perturb_quadric(q: QuadricPoint9, magnitude, seed):
    """Move ``magnitude`` along a random tangent direction of the sphere and renormalise."""
    if not 0 <= magnitude < 0.1:
        raise ValueError("magnitude must lie in [0, 0.1)")
    v = q.vector
    if magnitude == 0:
        return QuadricPoint9(tuple(v))
    rng = np.random.default_rng(seed)
    g = rng.normal(size=10)
    g -= (g @ v) * v
    g /= np.linalg.norm(g)
    return QuadricPoint9.from_coeffs(v + magnitude * g)


# ---------------------------------------------------------------------------
# stability census
# ---------------------------------------------------------------------------


def _graph_label(G):
    import networkx as nx

    H = nx.Graph()
    for n, d in G.nodes(data=True):
        H.add_node(n, verdict=d.get("verdict", ""))
    for u, v, d in G.edges(data=True):
        if H.has_edge(u, v):
            H[u][v]["label"] = ",".join(sorted(H[u][v]["label"].split(",") + [str(d["foliation"])]))
        else:
            H.add_edge(u, v, label=str(d["foliation"]))
    return H


def configuration_invariants(config):
    """Discrete invariants: umbilic count, verdict multiset, connection-graph class."""
    import networkx as nx

    if config.degenerate:
        return {"degenerate": True, "umbilics": None, "verdicts": None, "graph_hash": None}
    verdicts = sorted(Counter(u.verdict for u in config.umbilics).items())
    H = _graph_label(connection_graph(config))
    return {
        "degenerate": False,
        "umbilics": len(config.umbilics),
        "verdicts": [[k, v] for k, v in verdicts],
        "graph_hash": nx.weisfeiler_lehman_graph_hash(H, node_attr="verdict", edge_attr="label"),
        "graph": H,
    }


def same_graph(inv_a, inv_b):
    import networkx as nx

    if inv_a["degenerate"] or inv_b["degenerate"]:
        return inv_a["degenerate"] == inv_b["degenerate"]
    return nx.is_isomorphic(inv_a["graph"], inv_b["graph"],
                            node_match=lambda x, y: x["verdict"] == y["verdict"],
                            edge_match=lambda x, y: x["label"] == y["label"])


def _public(inv):
    return {k: v for k, v in inv.items() if k != "graph"}


def stability_probe(Q, magnitude, trials, seed=0, controls=None, n_leaves=0, search_n=60):
    """Census of configuration invariants over random coefficient perturbations.

    Trial ``k`` uses seed ``(seed, k)``. Per-trial failures are recorded in
    the report rather than raised.
    """
    if isinstance(Q, QuadricPoint9):
        q = Q
        Q = q.surface()
    else:
        q = QuadricPoint9.of(Q)
    if Q.type != "ellipsoid":
        raise Unsupported(f"stability probe supports ellipsoids only, got {Q.type}")
    c = controls or Controls()
    base_cfg = assemble_configuration(Q, c, n_leaves=n_leaves, search_n=search_n,
                                      with_cycles=bool(n_leaves))
    base = configuration_invariants(base_cfg)
    rows = []
    for k in range(trials):
        qk = perturb_quadric(q, magnitude, [seed, k])
        row = {"trial": k, "coeffs": list(qk.coeffs), "signature": qk.signature()}
        try:
            Sk = qk.surface()
            if Sk.type != "ellipsoid":
                raise Unsupported(f"perturbation left the ellipsoids: {Sk.type}")
            inv = configuration_invariants(
                assemble_configuration(Sk, c, n_leaves=n_leaves, search_n=search_n,
                                       with_cycles=bool(n_leaves)))
            row.update(_public(inv))
            row["same_as_base"] = bool(inv["umbilics"] == base["umbilics"]
                                       and inv["verdicts"] == base["verdicts"]
                                       and same_graph(inv, base))
            row["_inv"] = inv
        except GeometryError as exc:
            row.update(error=f"{type(exc).__name__}: {exc}", same_as_base=False)
        rows.append(row)
    invs = [r.pop("_inv") for r in rows if "_inv" in r]
    mutual = all(
        a["umbilics"] == invs[0]["umbilics"] and a["verdicts"] == invs[0]["verdicts"]
        and same_graph(a, invs[0]) for a in invs) if invs else True
    return {
        "base": _public(base),
        "magnitude": magnitude,
        "trials": trials,
        "seed": seed,
        "rows": rows,
        "all_equal_to_base": all(r["same_as_base"] for r in rows),
        "all_trials_equal": mutual and len(invs) == len(rows),
        "failures": sum(1 for r in rows if "error" in r),
    }

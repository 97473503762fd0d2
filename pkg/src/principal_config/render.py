"""Static vector figures of principal configurations drawn from reports."""

from __future__ import annotations

import numpy as np

from .errors import NoContent

_PLANES = {"x": (1, 2, 0), "y": (0, 2, 1), "z": (0, 1, 2)}
_STYLE = {1: dict(color="tab:blue", lw=0.8, ls="-"), 2: dict(color="tab:red", lw=0.8, ls="--")}
_MARK = {"D1": "o", "D2": "s", "D3": "^"}


def _split_visible(P, depth_axis, center, slack):
    """Runs of consecutive vertices on the near and far side of the view."""
    front = P[:, depth_axis] >= center - slack
    runs = []
    start = 0
    for k in range(1, len(P) + 1):
        if k == len(P) or front[k] != front[start]:
            seg = P[max(start - 1, 0):k]
            runs.append((bool(front[start]), seg))
            start = k
    return runs


def render_report(report, out, view="z", title=None):
    """Write an orthographic figure of ``report`` to ``out`` (format from suffix).

    Leaves of the two foliations get distinct styles, separatrices are drawn
    heavy and umbilics are marked by verdict. On closed surfaces the far side
    is drawn faintly.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    leaves = report.get("leaves", {}).get("items", [])
    seps = report.get("separatrices", {}).get("items", [])
    umbs = report.get("umbilics", {}).get("items", [])
    if not (leaves or seps or umbs):
        raise NoContent("report has no leaves, separatrices or umbilics to draw")
    if view not in _PLANES:
        raise ValueError(f"view must be one of {sorted(_PLANES)}")
    i, j, depth = _PLANES[view]
    closed = bool(report.get("surface", {}).get("closed", False))
    pts = [np.asarray(ln["points"], float) for ln in leaves + seps if len(ln["points"])]
    allp = np.vstack(pts) if pts else np.asarray([u["point"] for u in umbs], float)
    if "center" in report.get("surface", {}):
        center = float(report["surface"]["center"][depth])
    else:
        center = 0.5 * (allp[:, depth].max() + allp[:, depth].min())
    # silhouette curves sit on the centre plane up to rounding
    slack = 1e-6 * float(np.ptp(allp, axis=0).max())

    plt.rcParams["svg.hashsalt"] = "principal-config"
    fig, ax = plt.subplots(figsize=(6, 6))

    def draw(P, style, heavy=False):
        runs = _split_visible(P, depth, center, slack) if closed else [(True, P)]
        for front, seg in runs:
            kw = dict(style)
            if heavy:
                kw.update(color="black", lw=2.2, ls="-")
            ax.plot(seg[:, i], seg[:, j], alpha=1.0 if front else 0.15, **kw)

    for ln in leaves:
        draw(np.asarray(ln["points"], float), _STYLE[ln["foliation"]])
    for ln in seps:
        draw(np.asarray(ln["points"], float), _STYLE[ln["foliation"]], heavy=True)
    for u in umbs:
        p = u["point"]
        front = (not closed) or p[depth] >= center - slack
        ax.plot(p[i], p[j], _MARK.get(u["verdict"], "x"), ms=7, mfc="gold" if front else "none",
                mec="black", zorder=5)
        ax.annotate(u["verdict"] or "?", (p[i], p[j]), textcoords="offset points", xytext=(5, 5),
                    fontsize=7)
    ax.set_aspect("equal")
    names = "xyz"
    ax.set_xlabel(names[i])
    ax.set_ylabel(names[j])
    ax.set_title(title or report.get("surface", {}).get("name") or report.get("surface", {}).get("spec", ""))
    ax.plot([], [], **_STYLE[1], label="L1")
    ax.plot([], [], **_STYLE[2], label="L2")
    ax.plot([], [], color="black", lw=2.2, label="separatrix")
    fig.tight_layout(rect=(0, 0.06, 1, 1))
    fig.legend(loc="lower center", ncol=3, fontsize=7, frameon=False)
    fig.savefig(out, metadata={"Date": None} if str(out).endswith(".svg") else None)
    plt.close(fig)
    return out

"""Figure builders over the sweep CSV schemas.

Inputs are the CSV files written by the `shadowcell` command-line runner;
this package never imports the simulator, the file format is the whole
contract.  Three figure kinds are supported:

* ``f_vs_v``: mean interference factor against shadowing log-SD v, one
  curve per (model, beta, grid_order) group, error bars from the se_f
  column, horizontal reference lines at the Poisson closed-form values;
* ``l_vs_v``: mean path-loss factor in dB (dB of the mean) against v,
  same grouping, error bars propagated from se_l;
* ``blocking_surface``: heatmap of mean blocking over (beta, v), one
  panel per traffic density.

Rendering is deterministic: fixed figure geometry and fonts, a pinned SVG
hash salt, and no timestamps in the output files.
"""

import csv
import math
import sys
from dataclasses import dataclass

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

F_VS_V = "f_vs_v"
L_VS_V = "l_vs_v"
BLOCKING_SURFACE = "blocking_surface"
FIGURE_KINDS = (BLOCKING_SURFACE, F_VS_V, L_VS_V)

_RC = {
    "figure.figsize": (7.0, 4.5),
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "svg.hashsalt": "shadowcell-plots",
    "svg.fonttype": "none",
}


class RenderError(ValueError):
    pass


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    kind: str
    out_path: str
    grouping: tuple = ("model", "beta", "grid_order")

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise RenderError(f"unknown figure kind {self.kind!r}; pick one of {FIGURE_KINDS}")


@dataclass(frozen=True)
class RenderResult:
    paths: tuple  # written image files (png, svg)
    curve_labels: tuple
    skipped: tuple  # group labels dropped for lack of plottable rows


def read_rows(path):
    """Rows of a sweep CSV as dicts; '#' comment lines are tolerated."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            lines = [line for line in fh if not line.startswith("#")]
    except OSError as exc:
        raise RenderError(f"cannot read {path}: {exc}") from None
    rows = list(csv.DictReader(lines))
    if not rows:
        raise RenderError(f"{path}: no data rows")
    return rows


def _require(rows, columns, path):
    missing = [c for c in columns if c not in rows[0]]
    if missing:
        raise RenderError(f"{path}: missing required columns {', '.join(missing)}")


def _value(row, column):
    raw = (row.get(column) or "").strip()
    if not raw:
        return None
    try:
        out = float(raw)
    except ValueError:
        return None
    return out if math.isfinite(out) else None


def _group_label(key):
    model, beta, grid_order = key
    return f"{model} N={grid_order:g} beta={beta:g}"


def _curve_groups(rows):
    """Rows keyed by (model, beta, grid_order), each sorted by v."""
    groups = {}
    for row in rows:
        beta = _value(row, "beta")
        grid = _value(row, "grid_order")
        if beta is None or grid is None:
            continue
        key = (row.get("model", ""), beta, grid)
        groups.setdefault(key, []).append(row)
    for bucket in groups.values():
        bucket.sort(key=lambda r: _value(r, "v_db") or 0.0)
    return dict(sorted(groups.items()))


def _plot_curves(ax, rows, y_col, se_to_err):
    labels, skipped = [], []
    for key, bucket in _curve_groups(rows).items():
        xs, ys, es = [], [], []
        for row in bucket:
            x, y = _value(row, "v_db"), _value(row, y_col)
            if x is None or y is None:
                continue
            xs.append(x)
            ys.append(y)
            es.append(se_to_err(row) or 0.0)
        label = _group_label(key)
        if not xs:
            skipped.append(label)
            print(f"warning: no plottable rows for group {label}; skipped", file=sys.stderr)
            continue
        ax.errorbar(xs, ys, yerr=es, marker="o", markersize=3, capsize=2, label=label)
        labels.append(label)
    if not labels:
        raise RenderError("no plottable curves in the input")
    return labels, skipped


def _poisson_reference_lines(ax, rows):
    """Dashed horizontal lines at the Poisson closed-form f values."""
    refs = {}
    for row in rows:
        if row.get("model") != "poisson":
            continue
        beta, value = _value(row, "beta"), _value(row, "oracle_f")
        if beta is not None and value is not None:
            refs[beta] = value
    labels = []
    for beta, value in sorted(refs.items()):
        label = f"Poisson limit beta={beta:g}"
        ax.axhline(value, linestyle="--", linewidth=1, color="0.4")
        ax.annotate(
            label,
            xy=(1.0, value),
            xycoords=("axes fraction", "data"),
            xytext=(-2, 2),
            textcoords="offset points",
            ha="right",
            fontsize=7,
            color="0.3",
        )
        labels.append(label)
    return labels


def _figure_f_vs_v(rows, path):
    _require(rows, ("model", "grid_order", "beta", "v_db", "mean_f", "se_f"), path)
    fig, ax = plt.subplots()
    labels, skipped = _plot_curves(ax, rows, "mean_f", lambda r: _value(r, "se_f"))
    if "oracle_f" in rows[0]:
        labels += _poisson_reference_lines(ax, rows)
    ax.set_xlabel("shadowing log-SD v (dB)")
    ax.set_ylabel("mean interference factor f")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    return fig, labels, skipped


def _db_error(row):
    # se of l mapped onto the dB-of-mean axis: 10/ln10 * se_l/mean_l
    mean_l, se_l = _value(row, "mean_l"), _value(row, "se_l")
    if mean_l is None or se_l is None or mean_l <= 0:
        return None
    return 10.0 / math.log(10.0) * se_l / mean_l


def _figure_l_vs_v(rows, path):
    _require(
        rows, ("model", "grid_order", "beta", "v_db", "mean_l", "se_l", "mean_l_db"), path
    )
    fig, ax = plt.subplots()
    labels, skipped = _plot_curves(ax, rows, "mean_l_db", _db_error)
    ax.set_xlabel("shadowing log-SD v (dB)")
    ax.set_ylabel("mean path-loss factor (dB)")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    return fig, labels, skipped


def _figure_blocking_surface(rows, path):
    _require(rows, ("beta", "v_db", "traffic_erlang_km2", "mean_blocking"), path)
    cells = {}
    for row in rows:
        t = _value(row, "traffic_erlang_km2")
        beta = _value(row, "beta")
        v = _value(row, "v_db")
        b = _value(row, "mean_blocking")
        if None in (t, beta, v, b):
            continue
        cells.setdefault(t, {}).setdefault((beta, v), []).append(b)
    if not cells:
        raise RenderError("no plottable blocking rows in the input")
    traffics = sorted(cells, reverse=True)
    fig, axes = plt.subplots(
        1, len(traffics), figsize=(3.2 * len(traffics) + 1.2, 3.6), squeeze=False
    )
    vmax = max(max(np.mean(v) for v in panel.values()) for panel in cells.values())
    labels, mesh = [], None
    for ax, t in zip(axes[0], traffics):
        panel = cells[t]
        betas = sorted({b for b, _ in panel})
        vs = sorted({v for _, v in panel})
        grid = np.full((len(betas), len(vs)), np.nan)
        for (beta, v), values in panel.items():
            grid[betas.index(beta), vs.index(v)] = np.mean(values)
        mesh = ax.pcolormesh(
            vs, betas, np.ma.masked_invalid(grid), shading="nearest", vmin=0.0, vmax=vmax
        )
        ax.set_xlabel("v (dB)")
        ax.set_ylabel("beta")
        label = f"{t:g} Erlang/km2"
        ax.set_title(label, fontsize=9)
        labels.append(label)
    fig.colorbar(mesh, ax=axes[0].tolist(), label="mean blocking probability")
    return fig, labels, ()


_BUILDERS = {
    F_VS_V: _figure_f_vs_v,
    L_VS_V: _figure_l_vs_v,
    BLOCKING_SURFACE: _figure_blocking_surface,
}


def render(spec):
    """Render one figure to its PNG and SVG siblings; returns RenderResult."""
    rows = read_rows(spec.csv_path)
    base = spec.out_path
    for ext in (".png", ".svg"):
        if base.endswith(ext):
            base = base[: -len(ext)]
    with plt.rc_context(_RC):
        fig, labels, skipped = _BUILDERS[spec.kind](rows, spec.csv_path)
        png, svg = base + ".png", base + ".svg"
        try:
            fig.savefig(png, metadata={"Software": "shadowcell-plots"})
            fig.savefig(svg, metadata={"Date": None})
        finally:
            plt.close(fig)
    return RenderResult((png, svg), tuple(labels), tuple(skipped))

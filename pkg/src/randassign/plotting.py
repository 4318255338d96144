"""Static SVG figures rendered from the experiment CSV files.

Heat figures colour an (n, m) grid of fractions on a fixed 0..1 viridis
scale with an embedded colourbar; dominance figures are line charts with
one series per m; the envy figure is a boxplot per n built from the
distribution dump. Rendering is byte-deterministic: a fixed SVG hash salt,
no embedded timestamps, and input-ordered data only.
"""

import csv

import matplotlib
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from .model import RandAssignError

matplotlib.rcParams["svg.hashsalt"] = "randassign"

HEATMAP_CMAP = "viridis"

FIGURE_COLUMNS = {
    "sd_dom": "frac_ps_sd_dom",
    "ld_dom": "frac_ps_ld_dom",
    "envy_heat": "mean_envy_frac",
    "manip": "frac_manip",
    "sd_manip": "frac_sd_manip",
    "ld_manip": "frac_ld_manip",
}
LINE_FIGURES = ("sd_dom", "ld_dom")
FIGURE_KINDS = tuple(FIGURE_COLUMNS) + ("envy_box",)

FIGURE_TITLES = {
    "sd_dom": "PS stochastically dominates RSD",
    "ld_dom": "PS lexicographically dominates RSD",
    "envy_heat": "Mean fraction of weakly envious agents under RSD",
    "envy_box": "Weakly envious agents under RSD (n = m)",
    "manip": "PS manipulable profiles",
    "sd_manip": "PS sd-manipulable profiles",
    "ld_manip": "PS ld-manipulable profiles",
}


class CsvSchemaError(RandAssignError):
    """Input CSV does not match the expected schema."""


def _parse_fraction(text: str) -> float:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return int(num) / int(den)
    return float(text)


def _read_rows(csv_path, required):
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise CsvSchemaError(f"missing required column {column!r} in {csv_path}")
        rows = list(reader)
    if not rows:
        raise CsvSchemaError(f"no data rows in {csv_path}")
    return rows


def _cell_values(rows, column):
    values = {}
    for row in rows:
        if row.get("mode") == "failed" or not row[column]:
            continue
        values[(int(row["n"]), int(row["m"]))] = _parse_fraction(row[column])
    if not values:
        raise CsvSchemaError(f"no usable values in column {column!r}")
    return values


def _new_figure():
    fig = Figure(figsize=(6.0, 4.5))
    FigureCanvasSVG(fig)
    return fig


def _save(fig, out_path):
    fig.savefig(out_path, format="svg", metadata={"Date": None})


def _render_heatmap(values, title, out_path):
    ns = sorted({n for n, _ in values})
    ms = sorted({m for _, m in values})
    grid = [[float("nan")] * len(ms) for _ in ns]
    for (n, m), v in values.items():
        grid[ns.index(n)][ms.index(m)] = v
    fig = _new_figure()
    ax = fig.subplots()
    image = ax.imshow(
        grid, origin="lower", aspect="auto", vmin=0.0, vmax=1.0, cmap=HEATMAP_CMAP
    )
    ax.set_xticks(range(len(ms)), [str(m) for m in ms])
    ax.set_yticks(range(len(ns)), [str(n) for n in ns])
    ax.set_xlabel("m (objects)")
    ax.set_ylabel("n (agents)")
    ax.set_title(title)
    bar = fig.colorbar(image, ax=ax)
    bar.set_label("fraction of profiles")
    fig.tight_layout()
    _save(fig, out_path)


def _render_lines(values, title, out_path):
    ms = sorted({m for _, m in values})
    fig = _new_figure()
    ax = fig.subplots()
    for m in ms:
        series = sorted((n, v) for (n, mm), v in values.items() if mm == m)
        ax.plot(
            [n for n, _ in series],
            [v for _, v in series],
            marker="o",
            label=f"m = {m}",
        )
    ax.set_xlabel("n (agents)")
    ax.set_ylabel("fraction of profiles")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    _save(fig, out_path)


def _render_envy_box(csv_path, out_path):
    rows = _read_rows(csv_path, required=("n", "fraction", "multiplicity"))
    groups = {}
    for row in rows:
        n = int(row["n"])
        value = _parse_fraction(row["fraction"])
        groups.setdefault(n, []).extend([value] * int(row["multiplicity"]))
    ns = sorted(groups)
    fig = _new_figure()
    ax = fig.subplots()
    ax.boxplot([groups[n] for n in ns])
    ax.set_xticks(range(1, len(ns) + 1), [str(n) for n in ns])
    ax.set_xlabel("n = m")
    ax.set_ylabel("fraction of weakly envious agents")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(FIGURE_TITLES["envy_box"])
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    _save(fig, out_path)


def render_figure(kind: str, csv_path, out_path) -> None:
    """Render one figure kind from a CSV file to a self-contained SVG.

    The CSV is validated (and the figure data assembled) before anything is
    written, so schema errors never leave a partial output file behind.
    """
    if kind not in FIGURE_KINDS:
        raise ValueError(f"unknown figure {kind!r}; choose from {', '.join(FIGURE_KINDS)}")
    if kind == "envy_box":
        _render_envy_box(csv_path, out_path)
        return
    column = FIGURE_COLUMNS[kind]
    rows = _read_rows(csv_path, required=("n", "m", column))
    values = _cell_values(rows, column)
    if kind in LINE_FIGURES:
        _render_lines(values, FIGURE_TITLES[kind], out_path)
    else:
        _render_heatmap(values, FIGURE_TITLES[kind], out_path)

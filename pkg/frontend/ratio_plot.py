"""
Ratio-versus-iterations chart from a checkpoint CSV, written as standalone SVG.

The chart holds exactly one <polyline> (the estimate ratios) and one <line>
(the reference at 1.0); the frame is a <rect> and the labels are <text>.
"""

import csv
from xml.sax.saxutils import escape

from algorithms.checkpoint import CheckpointError, read_checkpoints

WIDTH = 800
HEIGHT = 480
MARGIN_LEFT = 90
MARGIN_RIGHT = 30
MARGIN_TOP = 40
MARGIN_BOTTOM = 60
# fraction of the y-span added above and below the data
Y_PAD = 0.08
MIN_Y_SPAN = 1e-6

COLOR_SERIES = "#1f5fa8"
COLOR_REFERENCE = "#c0392b"


def read_ratio_series(csv_path, conjecture_value=None):
    """
    (n, ratio) pairs from a checkpoint CSV.

    With conjecture_value the ratio is p_ppt / conjecture_value, otherwise the
    CSV's conjecture_ratio column is used.
    """
    checkpoints = read_checkpoints(csv_path)
    if not checkpoints:
        raise CheckpointError(f"no checkpoint rows in {csv_path}")
    with open(csv_path, "r", newline="") as f:
        ratio_column = [row["conjecture_ratio"] for row in csv.DictReader(f)]

    points = []
    for cp, stored in zip(checkpoints, ratio_column):
        if conjecture_value is not None:
            ratio = None if cp.p_ppt is None else cp.p_ppt / conjecture_value
        else:
            ratio = float(stored) if stored else None
        if ratio is not None:
            points.append((cp.n, ratio))
    if not points:
        raise CheckpointError(f"{csv_path} has no conjecture ratios; pass a conjecture name")
    return points


def _y_range(values):
    low = min(min(values), 1.0)
    high = max(max(values), 1.0)
    span = max(high - low, MIN_Y_SPAN)
    return low - Y_PAD * span, high + Y_PAD * span


def render_svg(points, title=""):
    """SVG text for the (n, ratio) points."""
    ns = [n for n, _ in points]
    ratios = [r for _, r in points]
    x_low, x_high = min(ns), max(ns)
    x_span = (x_high - x_low) or 1
    y_low, y_high = _y_range(ratios)

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(n):
        return MARGIN_LEFT + plot_w * (n - x_low) / x_span

    def sy(r):
        return MARGIN_TOP + plot_h * (y_high - r) / (y_high - y_low)

    coords = " ".join(f"{sx(n):.2f},{sy(r):.2f}" for n, r in points)
    ref_y = sy(1.0)

    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        f'fill="white" stroke="black"/>',
        f'<line x1="{MARGIN_LEFT}" y1="{ref_y:.2f}" x2="{MARGIN_LEFT + plot_w}" y2="{ref_y:.2f}" '
        f'stroke="{COLOR_REFERENCE}" stroke-dasharray="6,4"/>',
        f'<polyline points="{coords}" fill="none" stroke="{COLOR_SERIES}" stroke-width="1.5"/>',
        f'<text x="{WIDTH / 2:.0f}" y="{MARGIN_TOP - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{escape(title)}</text>',
        f'<text x="{WIDTH / 2:.0f}" y="{HEIGHT - 15}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">iterations</text>',
        f'<text x="{MARGIN_LEFT - 8}" y="{MARGIN_TOP + 5}" text-anchor="end" '
        f'font-family="sans-serif" font-size="11">{y_high:.6g}</text>',
        f'<text x="{MARGIN_LEFT - 8}" y="{MARGIN_TOP + plot_h}" text-anchor="end" '
        f'font-family="sans-serif" font-size="11">{y_low:.6g}</text>',
        f'<text x="{MARGIN_LEFT}" y="{MARGIN_TOP + plot_h + 18}" text-anchor="start" '
        f'font-family="sans-serif" font-size="11">{x_low:,}</text>',
        f'<text x="{MARGIN_LEFT + plot_w}" y="{MARGIN_TOP + plot_h + 18}" text-anchor="end" '
        f'font-family="sans-serif" font-size="11">{x_high:,}</text>',
        "</svg>",
        "",
    ])


def write_ratio_plot(csv_path, out_path, conjecture_value=None, title=""):
    """Read the series, render and write the SVG; returns the number of points."""
    points = read_ratio_series(csv_path, conjecture_value)
    with open(out_path, "w") as f:
        f.write(render_svg(points, title))
    return len(points)

import csv
import logging
from collections import defaultdict
from typing import Dict, List, Sequence, Tuple

from reportlab.graphics import renderSVG
from reportlab.graphics.charts.barcharts import VerticalBarChart
from reportlab.graphics.charts.legends import Legend
from reportlab.graphics.charts.lineplots import LinePlot
from reportlab.graphics.shapes import Drawing, String
from reportlab.lib import colors

from ..errors import InputError
from ..models import Isa
from ..schemas import BenchResult

"""
Benchmark reports: the CSV table and the speedup / strip-iteration chart.
"""

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["kernel", "n", "isa", "dyn_count", "strip_iters", "speedup"]
SERIES_COLORS = [colors.HexColor("#1f77b4"), colors.HexColor("#ff7f0e"), colors.HexColor("#2ca02c")]

PANEL_WIDTH = 760
PANEL_HEIGHT = 200
MARGIN = 50


def csv_rows(results: Sequence[BenchResult]) -> List[List[str]]:
    rows = []
    for r in results:
        rows.append([
            r.case.kernel.value,
            str(r.case.n),
            r.case.isa.value,
            str(r.stats.dynamic_count),
            str(r.stats.strip_iterations),
            f"{r.speedup:.2f}" if r.speedup is not None else "",
        ])
    return rows


def emit_csv(results: Sequence[BenchResult], path: str) -> None:
    try:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(CSV_COLUMNS)
            writer.writerows(csv_rows(results))
    except OSError as e:
        raise InputError(f"cannot write {path}: {e.strerror}")
    logger.info("wrote %d rows to %s", len(results), path)


# =================================================================
# Chart
# =================================================================

def _mean(values: List[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _top(values: List[float]) -> float:
    # axes need a nonzero range even when every value is 0
    return max(values + [0.0]) * 1.1 or 1.0


def read_csv(path: str) -> List[List[str]]:
    """Rows of a CSV written by emit_csv (header checked and dropped)."""
    try:
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}")
    if not rows or rows[0] != CSV_COLUMNS:
        raise InputError(f"{path}: expected header {','.join(CSV_COLUMNS)}")
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(CSV_COLUMNS):
            raise InputError(f"{path}:{line_no}: expected {len(CSV_COLUMNS)} columns, got {len(row)}")
    return rows[1:]


def _series(rows: Sequence[Sequence[str]]) -> Dict[str, Dict[int, Tuple[float, float]]]:
    """kernel -> n -> (mean speedup, mean rvv strip iterations)."""
    speedups: Dict[Tuple[str, int], List[float]] = defaultdict(list)
    strips: Dict[Tuple[str, int], List[float]] = defaultdict(list)
    for kernel, n, isa, _, strip_iters, speedup in rows:
        key = (kernel, int(n))
        if isa == Isa.ZOOZVE.value and speedup:
            speedups[key].append(float(speedup))
        if isa == Isa.RVV.value:
            strips[key].append(float(strip_iters))

    out: Dict[str, Dict[int, Tuple[float, float]]] = defaultdict(dict)
    for kernel, n in sorted(set(speedups) | set(strips)):
        out[kernel][n] = (_mean(speedups[(kernel, n)]), _mean(strips[(kernel, n)]))
    return out


def _panel(drawing: Drawing, y: int, sizes: List[int], kernels: List[str],
           series: Dict[str, Dict[int, Tuple[float, float]]]) -> None:
    chart_width = (PANEL_WIDTH - 3 * MARGIN) // 2
    chart_height = PANEL_HEIGHT - 70
    drawing.add(String(MARGIN, y + PANEL_HEIGHT - 14, f"{', '.join(kernels)}: speedup and RVV strip iterations",
                       fontName="Helvetica-Bold", fontSize=10))

    bars = VerticalBarChart()
    bars.x, bars.y = MARGIN, y + 30
    bars.width, bars.height = chart_width, chart_height
    bars.data = [tuple(series[k].get(n, (0.0, 0.0))[0] for n in sizes) for k in kernels]
    bars.categoryAxis.categoryNames = [str(n) for n in sizes]
    bars.categoryAxis.labels.fontSize = 7
    bars.valueAxis.valueMin = 0
    bars.valueAxis.valueMax = _top([v for row in bars.data for v in row])
    bars.valueAxis.labels.fontSize = 7
    for i in range(len(kernels)):
        bars.bars[i].fillColor = SERIES_COLORS[i % len(SERIES_COLORS)]
    drawing.add(bars)

    lines = LinePlot()
    lines.x, lines.y = 2 * MARGIN + chart_width, y + 30
    lines.width, lines.height = chart_width, chart_height
    # x is log2(n) so the doubling sweep is evenly spaced
    lines.data = [[(n.bit_length() - 1, series[k].get(n, (0.0, 0.0))[1]) for n in sizes] for k in kernels]
    lines.xValueAxis.valueMin = sizes[0].bit_length() - 1
    lines.xValueAxis.valueMax = max(sizes[-1].bit_length() - 1, lines.xValueAxis.valueMin + 1)
    lines.xValueAxis.valueStep = 1
    lines.xValueAxis.labelTextFormat = lambda v: str(2 ** int(round(v)))
    lines.xValueAxis.labels.fontSize = 7
    lines.yValueAxis.valueMin = 0
    lines.yValueAxis.valueMax = _top([y for line in lines.data for _, y in line])
    lines.yValueAxis.labels.fontSize = 7
    for i in range(len(kernels)):
        lines.lines[i].strokeColor = SERIES_COLORS[i % len(SERIES_COLORS)]
    drawing.add(lines)

    legend = Legend()
    legend.x, legend.y = PANEL_WIDTH - MARGIN - 60, y + PANEL_HEIGHT - 10
    legend.fontSize = 7
    legend.colorNamePairs = [(SERIES_COLORS[i % len(SERIES_COLORS)], k) for i, k in enumerate(kernels)]
    drawing.add(legend)


def build_chart(rows: Sequence[Sequence[str]]) -> Drawing:
    """One panel per distinct size sweep; kernels sharing a sweep are grouped bars."""
    series = _series(rows)
    panels: Dict[Tuple[int, ...], List[str]] = defaultdict(list)
    for kernel, points in series.items():
        panels[tuple(sorted(points))].append(kernel)

    drawing = Drawing(PANEL_WIDTH, max(len(panels), 1) * PANEL_HEIGHT)
    for i, (sizes, kernels) in enumerate(sorted(panels.items())):
        _panel(drawing, (len(panels) - 1 - i) * PANEL_HEIGHT, list(sizes), kernels, series)
    return drawing


def emit_plot(results: Sequence[BenchResult], path: str) -> None:
    plot_rows(csv_rows(results), path)


def plot_rows(rows: Sequence[Sequence[str]], path: str) -> None:
    drawing = build_chart(rows)
    try:
        renderSVG.drawToFile(drawing, path)
    except OSError as e:
        raise InputError(f"cannot write {path}: {e.strerror}")
    logger.info("wrote chart to %s", path)

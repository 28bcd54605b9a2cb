import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd
from jinja2 import Environment

logger = logging.getLogger(__name__)

# BER values below this are drawn on the floor of the log axis
FLOOR = 1e-8

COLORS = {
    "theory": "#1f77b4",
    "oracle": "#2ca02c",
    "sim":    "#d62728",
}

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 30, 50

_SVG = Environment(autoescape=True).from_string("""\
<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{{ width }}" height="{{ height }}" viewBox="0 0 {{ width }} {{ height }}">
  <title>{{ title }}</title>
  <rect x="{{ left }}" y="{{ top }}" width="{{ plot_w }}" height="{{ plot_h }}" fill="white" stroke="black"/>
{%- for t in y_ticks %}
  <line x1="{{ left }}" y1="{{ t.y }}" x2="{{ left + plot_w }}" y2="{{ t.y }}" stroke="#dddddd"/>
  <text x="{{ left - 6 }}" y="{{ t.y + 4 }}" font-size="11" text-anchor="end">{{ t.label }}</text>
{%- endfor %}
{%- for t in x_ticks %}
  <line x1="{{ t.x }}" y1="{{ top }}" x2="{{ t.x }}" y2="{{ top + plot_h }}" stroke="#dddddd"/>
  <text x="{{ t.x }}" y="{{ top + plot_h + 16 }}" font-size="11" text-anchor="middle">{{ t.label }}</text>
{%- endfor %}
  <text x="{{ left + plot_w / 2 }}" y="{{ height - 10 }}" font-size="12" text-anchor="middle">Eb/N0 (dB)</text>
  <text x="16" y="{{ top + plot_h / 2 }}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {{ top + plot_h / 2 }})">BER</text>
{%- for s in series %}
  <polyline class="{{ s.name }}" fill="none" stroke="{{ s.color }}" stroke-width="2" points="{{ s.points }}"/>
  <text x="{{ left + plot_w - 8 }}" y="{{ top + 16 + loop.index0 * 14 }}" font-size="11" text-anchor="end" fill="{{ s.color }}">{{ s.name }}</text>
{%- endfor %}
</svg>
""")


class ChartUtils:

    @staticmethod
    def _series(df: pd.DataFrame) -> Dict[str, List[Tuple[float, float]]]:
        """source -> [(ebn0_db, ber)], in first-appearance order of the sources."""
        out: Dict[str, List[Tuple[float, float]]] = {}
        for source, group in df.groupby("source", sort=False):
            out[str(source)] = [(float(x), float(y)) for x, y in zip(group["ebn0_db"], group["ber"])]
        return out

    @staticmethod
    def _log_ber(value: float) -> float:
        if value is None or math.isnan(value) or value < FLOOR:
            return math.log10(FLOOR)
        return math.log10(min(value, 1.0))

    @staticmethod
    def waterfall_svg(df: pd.DataFrame, title: Optional[str] = None) -> str:
        """BER against Eb/N0 on a log y axis; one polyline per source."""
        series = ChartUtils._series(df)
        xs = [x for pts in series.values() for x, _ in pts]
        ys = [ChartUtils._log_ber(y) for pts in series.values() for _, y in pts]
        x_lo, x_hi = min(xs), max(xs)
        if x_hi == x_lo:
            x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
        y_lo, y_hi = math.floor(min(ys)), min(math.ceil(max(ys)), 0)
        if y_hi <= y_lo:
            y_lo = y_hi - 1

        plot_w, plot_h = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

        def px(x: float) -> float:
            return LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

        def py(log_y: float) -> float:
            return TOP + (y_hi - log_y) / (y_hi - y_lo) * plot_h

        rendered = []
        for name, pts in series.items():
            coords = " ".join(f"{px(x):.2f},{py(ChartUtils._log_ber(y)):.2f}" for x, y in pts)
            rendered.append({"name": name, "color": COLORS.get(name, "#000000"), "points": coords})

        y_ticks = [{"y": round(py(k), 2), "label": f"1e{k}"} for k in range(y_lo, y_hi + 1)]
        x_ticks = [{"x": round(px(x), 2), "label": "%g" % x} for x in sorted(set(xs))]

        return _SVG.render(
            width=WIDTH, height=HEIGHT, left=LEFT, top=TOP, plot_w=plot_w, plot_h=plot_h,
            title=title or "BER waterfall", series=rendered, x_ticks=x_ticks, y_ticks=y_ticks,
        )

    @staticmethod
    def waterfall_png(df: pd.DataFrame, out_path: Path, title: Optional[str] = None) -> str:
        plt.figure(figsize=(8, 5))
        for name, pts in ChartUtils._series(df).items():
            xs = [x for x, _ in pts]
            ys = [max(y, FLOOR) for _, y in pts]
            plt.semilogy(xs, ys, marker="o", label=name, color=COLORS.get(name))
        plt.title(title or "BER waterfall")
        plt.xlabel("Eb/N0 (dB)")
        plt.ylabel("BER")
        plt.grid(True, which="both", alpha=0.3)
        plt.legend()
        plt.tight_layout()
        plt.savefig(out_path)
        plt.close()
        return str(out_path)

    @staticmethod
    def save_plot(df: pd.DataFrame, out_path: Union[str, Path], title: Optional[str] = None) -> str:
        """PNG when the path ends in .png, SVG otherwise."""
        out_path = Path(out_path)
        logger.info("plotting %d rows to %s", len(df), out_path)
        if out_path.suffix.lower() == ".png":
            return ChartUtils.waterfall_png(df, out_path, title)
        out_path.write_text(ChartUtils.waterfall_svg(df, title), encoding="utf-8")
        return str(out_path)

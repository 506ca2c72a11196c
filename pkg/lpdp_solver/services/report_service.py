"""
Benchmark reports: cactus series, scatter points, speedups, solved counts and SVG plots
"""

import math
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import structlog
from jinja2 import Environment, PackageLoader

from ..core.exceptions import EmptySeriesError, NoCommonInstancesError
from ..models.bench import RunRecord, RunStatus, ScatterPoint, SpeedupReport

logger = structlog.get_logger(__name__)

CactusSeries = List[Tuple[int, float]]

# Seconds below this are drawn on the floor of the log axis
LOG_FLOOR = 1e-3
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]
WIDTH, HEIGHT = 640, 440
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 72, 24, 32, 56

_env = Environment(
    loader=PackageLoader("lpdp_solver", "templates"),
    autoescape=True,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


def aggregate_runs(records: Sequence[RunRecord]) -> Dict[Tuple[str, str], RunRecord]:
    """One record per (instance, solver): Solved only if every repetition solved,
    seconds are the median over repetitions."""
    groups: Dict[Tuple[str, str], List[RunRecord]] = {}
    for record in records:
        groups.setdefault((record.instance, record.solver), []).append(record)

    merged: Dict[Tuple[str, str], RunRecord] = {}
    for key, runs in groups.items():
        seconds = float(np.median([r.seconds for r in runs]))
        unsolved = [r for r in runs if not r.solved]
        representative = unsolved[0] if unsolved else runs[0]
        merged[key] = representative.model_copy(update={"seconds": seconds})
    return merged


def cactus_data(records: Sequence[RunRecord], solver: str) -> CactusSeries:
    """(rank, seconds) of the solver's Solved instances, fastest first; rank is 1-based."""
    times = sorted(r.seconds for (_, name), r in aggregate_runs(records).items() if name == solver and r.solved)
    return [(rank, seconds) for rank, seconds in enumerate(times, start=1)]


def speedup_report(records: Sequence[RunRecord], baseline: str, subject: str) -> SpeedupReport:
    """Baseline seconds over subject seconds on instances both solved."""
    runs = aggregate_runs(records)
    ratios: Dict[str, float] = {}
    for instance in sorted({inst for inst, _ in runs}):
        base, subj = runs.get((instance, baseline)), runs.get((instance, subject))
        if base is None or subj is None or not (base.solved and subj.solved):
            continue
        ratios[instance] = base.seconds / max(subj.seconds, 1e-9)
    if not ratios:
        raise NoCommonInstancesError(
            "Solvers share no commonly solved instance",
            details={"baseline": baseline, "subject": subject},
        )
    values = np.array(list(ratios.values()), dtype=float)
    report = SpeedupReport(
        baseline=baseline,
        subject=subject,
        ratios=ratios,
        mean=float(values.mean()),
        geometric_mean=float(np.exp(np.log(values).mean())),
    )
    logger.info("Speedup computed", baseline=baseline, subject=subject, instances=len(ratios), mean=report.mean)
    return report


def scatter_data(
    records: Sequence[RunRecord],
    solver_a: str,
    solver_b: str,
    time_limit: float,
) -> List[ScatterPoint]:
    """(t_A, t_B) per instance both solvers ran; unfinished runs sit on the limit rail."""
    runs = aggregate_runs(records)
    instances = list(dict.fromkeys(inst for inst, _ in runs))
    points = []
    for instance in instances:
        a, b = runs.get((instance, solver_a)), runs.get((instance, solver_b))
        if a is None or b is None:
            continue
        a_rail = a.status not in (RunStatus.SOLVED, RunStatus.NO_PATH)
        b_rail = b.status not in (RunStatus.SOLVED, RunStatus.NO_PATH)
        points.append(
            ScatterPoint(
                instance=instance,
                a_seconds=time_limit if a_rail else min(a.seconds, time_limit),
                b_seconds=time_limit if b_rail else min(b.seconds, time_limit),
                a_rail=a_rail,
                b_rail=b_rail,
            )
        )
    return points


def solved_counts(records: Sequence[RunRecord]) -> pd.DataFrame:
    """Solved instance counts, one row per family and one column per solver."""
    rows = [
        {"family": r.family, "solver": solver, "solved": int(r.solved)}
        for (_, solver), r in aggregate_runs(records).items()
    ]
    if not rows:
        return pd.DataFrame()
    frame = pd.DataFrame(rows)
    table = frame.pivot_table(index="family", columns="solver", values="solved", aggfunc="sum", fill_value=0)
    return table.sort_index().sort_index(axis=1).astype(int)


# SVG rendering


def _fmt(value: float) -> str:
    return "%.2f" % value


def _log_range(values: Sequence[float]) -> Tuple[int, int]:
    logs = [math.log10(max(v, LOG_FLOOR)) for v in values]
    lo, hi = math.floor(min(logs)), math.ceil(max(logs))
    return (lo, hi) if hi > lo else (lo, lo + 1)


def _log_position(value: float, lo: int, hi: int, start: float, length: float) -> float:
    return start + (math.log10(max(value, LOG_FLOOR)) - lo) / (hi - lo) * length


def _decade_label(exponent: int) -> str:
    return f"{10.0 ** exponent:g}"


def _plot_box() -> Dict[str, str]:
    return {
        "width": str(WIDTH),
        "height": str(HEIGHT),
        "left": _fmt(MARGIN_LEFT),
        "right": _fmt(WIDTH - MARGIN_RIGHT),
        "top": _fmt(MARGIN_TOP),
        "bottom": _fmt(HEIGHT - MARGIN_BOTTOM),
    }


def render_cactus_svg(series: Mapping[str, CactusSeries], title: str = "Solved instances") -> str:
    """Cactus plot: rank on x, seconds on a log y axis. Solvers are drawn in name order."""
    names = sorted(series)
    all_points = [p for name in names for p in series[name]]
    if not all_points:
        raise EmptySeriesError("Cactus plot needs at least one solved instance")

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    bottom = HEIGHT - MARGIN_BOTTOM
    max_rank = max(rank for rank, _ in all_points)
    lo, hi = _log_range([seconds for _, seconds in all_points])

    def x_of(rank: int) -> float:
        return MARGIN_LEFT + rank / max_rank * plot_w

    def y_of(seconds: float) -> float:
        return bottom - (_log_position(seconds, lo, hi, 0.0, plot_h))

    drawn = []
    for i, name in enumerate(names):
        points = [{"x": _fmt(x_of(r)), "y": _fmt(y_of(s)), "rank": r, "seconds": _fmt(s)} for r, s in series[name]]
        drawn.append(
            {
                "name": name,
                "color": PALETTE[i % len(PALETTE)],
                "points": points,
                "polyline": " ".join(f"{p['x']},{p['y']}" for p in points),
                "legend_y": _fmt(MARGIN_TOP + 16 * (i + 1)),
            }
        )
    y_ticks = [{"pos": _fmt(y_of(10.0 ** e)), "label": _decade_label(e)} for e in range(lo, hi + 1)]
    step = max(1, math.ceil(max_rank / 10))
    x_ticks = [{"pos": _fmt(x_of(r)), "label": str(r)} for r in range(0, max_rank + 1, step)]

    return _env.get_template("cactus.svg.j2").render(
        box=_plot_box(),
        title=title,
        series=drawn,
        y_ticks=y_ticks,
        x_ticks=x_ticks,
        legend_x=_fmt(MARGIN_LEFT + 12),
    )


def render_scatter_svg(
    points: Sequence[ScatterPoint],
    solver_a: str,
    solver_b: str,
    time_limit: float,
) -> str:
    """Log-log scatter of per-instance seconds; rail points are flagged with class `rail`."""
    if not points:
        raise EmptySeriesError("Scatter plot needs at least one instance")

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    bottom = HEIGHT - MARGIN_BOTTOM
    values = [p.a_seconds for p in points] + [p.b_seconds for p in points] + [time_limit]
    lo, hi = _log_range(values)

    def x_of(seconds: float) -> float:
        return _log_position(seconds, lo, hi, MARGIN_LEFT, plot_w)

    def y_of(seconds: float) -> float:
        return bottom - _log_position(seconds, lo, hi, 0.0, plot_h)

    drawn = [
        {
            "x": _fmt(x_of(p.a_seconds)),
            "y": _fmt(y_of(p.b_seconds)),
            "rail": p.a_rail or p.b_rail,
            "instance": p.instance,
        }
        for p in points
    ]
    ticks = [
        {"x": _fmt(x_of(10.0 ** e)), "y": _fmt(y_of(10.0 ** e)), "label": _decade_label(e)}
        for e in range(lo, hi + 1)
    ]
    return _env.get_template("scatter.svg.j2").render(
        box=_plot_box(),
        solver_a=solver_a,
        solver_b=solver_b,
        points=drawn,
        ticks=ticks,
        diagonal={"x1": _fmt(x_of(10.0 ** lo)), "y1": _fmt(y_of(10.0 ** lo)),
                  "x2": _fmt(x_of(10.0 ** hi)), "y2": _fmt(y_of(10.0 ** hi))},
        limit={"x": _fmt(x_of(time_limit)), "y": _fmt(y_of(time_limit))},
    )


def emit_plots(
    records: Sequence[RunRecord],
    out_dir: Union[str, Path],
    time_limit: float,
    pair: Optional[Tuple[str, str]] = None,
) -> List[Path]:
    """Write cactus.svg for every solver and, for a solver pair, scatter.svg."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    solvers = sorted({r.solver for r in records})
    written = []

    cactus = out / "cactus.svg"
    cactus.write_text(render_cactus_svg({s: cactus_data(records, s) for s in solvers}), encoding="utf-8")
    written.append(cactus)

    if pair is None and len(solvers) == 2:
        pair = (solvers[0], solvers[1])
    if pair is not None:
        scatter = out / "scatter.svg"
        points = scatter_data(records, pair[0], pair[1], time_limit)
        scatter.write_text(render_scatter_svg(points, pair[0], pair[1], time_limit), encoding="utf-8")
        written.append(scatter)

    logger.info("Plots written", files=[str(p) for p in written])
    return written

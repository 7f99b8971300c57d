"""Replicate orchestration and FP / FN / minimum-model-size reporting."""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .baselines import BASELINES
from .core import ScreenConfig, screen
from .errors import InvalidInput, WLSError
from .simgen import ScenarioConfig, generate
from .spectrum import center_columns

log = logging.getLogger(__name__)

METRICS = ("fp", "fn", "m", "elapsed")
METHOD_LABELS = {"wls": "WLS", "sirs": "SIRS", "dcsis": "DC-SIS", "sis": "SIS"}


@dataclass(frozen=True)
class ReplicateOutcome:
    method: str
    fp: int
    fn: int
    m: int
    elapsed: float
    selected: int = 0
    d_hat: int | None = None


@dataclass
class MethodSummary:
    mean: dict
    sd: dict
    replicates: int
    failures: int = 0


@dataclass
class ScenarioReport:
    scenario: str
    methods: dict = field(default_factory=dict)  # method -> MethodSummary
    outcomes: dict = field(default_factory=dict, repr=False)  # method -> [ReplicateOutcome]


def fp_fn(selected, true_set, p: int | None = None) -> tuple[int, int]:
    sel = {int(j) for j in selected}
    truth = {int(j) for j in true_set}
    if p is not None and any(not 0 <= j < p for j in sel):
        raise InvalidInput("selected index outside [0, p)")
    return len(sel - truth), len(truth - sel)


def min_model_size(ranking, true_set) -> int:
    """Length of the shortest ranking prefix that contains every true index."""
    ranking = np.asarray(ranking)
    position = np.empty(ranking.size, dtype=int)
    position[ranking] = np.arange(1, ranking.size + 1)
    return int(position[list(true_set)].max())


def wls_config_for(config: ScenarioConfig, base: ScreenConfig | None = None) -> ScreenConfig:
    """WLS settings for a scenario: AR(1) designs have no spikes, so all
    singular triplets are used there."""
    base = base or ScreenConfig()
    if config.setting == "ar1":
        return ScreenConfig(**{**base.__dict__, "d_mode": "full", "d_fixed": None})
    return base


def _evaluate(method, X, y, config, screen_config):
    t0 = time.perf_counter()
    d_hat = None
    if method == "wls":
        res = screen(X, y, screen_config)
        selected, ranking, d_hat = res.selected, res.ranking, res.d_hat
    elif method in BASELINES:
        res = BASELINES[method](X.values, y)
        selected, ranking = res.selected, res.ranking
    else:
        raise InvalidInput(f"unknown method {method!r}")
    elapsed = time.perf_counter() - t0
    fp, fn = fp_fn(selected, config.true_set, config.p)
    hits = len(config.true_set) - fn
    assert fp + hits == len(selected) and fn + hits == len(config.true_set)
    m = min_model_size(ranking, config.true_set)
    return ReplicateOutcome(method, fp, fn, m, elapsed, len(selected), d_hat)


def run_replicate(config: ScenarioConfig, replicate: int, methods, screen_config=None):
    """Outcome (or the raised error) per method for one replicate."""
    X_raw, y = generate(config, replicate)
    X = center_columns(X_raw)
    wls_cfg = wls_config_for(config, screen_config)
    out = {}
    for method in methods:
        try:
            out[method] = _evaluate(method, X, y, config, wls_cfg)
        except WLSError as exc:
            log.warning("scenario %s replicate %d %s failed: %s", config.id, replicate, method, exc)
            out[method] = exc
    return out


def summarize(outcomes) -> MethodSummary:
    ok = [o for o in outcomes if isinstance(o, ReplicateOutcome)]
    mean, sd = {}, {}
    for key in METRICS:
        vals = np.array([getattr(o, key) for o in ok], dtype=float)
        mean[key] = float(vals.mean()) if vals.size else float("nan")
        sd[key] = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
    return MethodSummary(mean, sd, len(ok), len(outcomes) - len(ok))


def run_scenario(
    config: ScenarioConfig,
    methods=("wls",),
    replicates: int | None = None,
    threads: int = 1,
    screen_config: ScreenConfig | None = None,
) -> ScenarioReport:
    methods = list(methods)
    if not methods:
        raise InvalidInput("no methods requested")
    for m in methods:
        if m != "wls" and m not in BASELINES:
            raise InvalidInput(f"unknown method {m!r}")
    reps = config.replicates if replicates is None else replicates

    def job(r):
        return run_replicate(config, r, methods, screen_config)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, range(reps)))
    else:
        results = [job(r) for r in range(reps)]

    report = ScenarioReport(config.id)
    for method in methods:
        outs = [res[method] for res in results]
        report.outcomes[method] = outs
        report.methods[method] = summarize(outs)
    return report


CSV_FIELDS = ["scenario", "method", "replicates", "failures"] + [
    f"{k}_{stat}" for k in METRICS for stat in ("mean", "sd")
]


def report_rows(report: ScenarioReport) -> list[dict]:
    rows = []
    for method, s in report.methods.items():
        row = {
            "scenario": report.scenario,
            "method": method,
            "replicates": s.replicates,
            "failures": s.failures,
        }
        for k in METRICS:
            row[f"{k}_mean"] = s.mean[k]
            row[f"{k}_sd"] = s.sd[k]
        rows.append(row)
    return rows


def render_csv(report: ScenarioReport) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in report_rows(report):
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def parse_report_csv(text: str) -> ScenarioReport:
    report = None
    for row in csv.DictReader(io.StringIO(text)):
        if report is None:
            report = ScenarioReport(row["scenario"])
        mean = {k: float(row[f"{k}_mean"]) for k in METRICS}
        sd = {k: float(row[f"{k}_sd"]) for k in METRICS}
        report.methods[row["method"]] = MethodSummary(
            mean, sd, int(row["replicates"]), int(row["failures"])
        )
    if report is None:
        raise InvalidInput("empty report")
    return report


def render_table(report: ScenarioReport, metrics=("fp", "fn", "m", "elapsed")) -> str:
    """Aligned text table with ``mean (sd)`` cells."""
    names = {"fp": "FP", "fn": "FN", "m": "M", "elapsed": "Time (s)"}
    header = ["Scenario", "Method"] + [names[k] for k in metrics]
    body = []
    for method, s in report.methods.items():
        cells = [f"{s.mean[k]:.2f} ({s.sd[k]:.2f})" for k in metrics]
        body.append([report.scenario, METHOD_LABELS.get(method, method)] + cells)
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    failed = {m: s.failures for m, s in report.methods.items() if s.failures}
    if failed:
        lines.append(f"failed replicates excluded: {failed}")
    return "\n".join(lines) + "\n"


def render_report(report: ScenarioReport, fmt: str = "table") -> str:
    if fmt == "csv":
        return render_csv(report)
    if fmt == "table":
        return render_table(report)
    raise InvalidInput(f"unknown report format {fmt!r}")

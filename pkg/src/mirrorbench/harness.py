"""Model chains: repeated fit -> generate, scored against the source.

A chain starts from a source graph G0 and, for i = 1..length, fits the model
to G(i-1) and samples G(i) from the fit.  Every configured metric is scored
in two modes: ``cumulative`` compares G0 with G(i), ``iterative`` compares
G(i-1) with G(i).  A fit or generation failure ends the chain early; the
iterations completed so far are kept.
"""
from __future__ import annotations

import csv
import io
import json
import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from scipy import stats

from . import models
from .errors import MirrorError
from .graph import Graph, average_clustering, count_triangles, path_length_stats
from .graphlets import GRAPHLET_NAMES, graphlet_counts
from .metrics import METRICS, compare, pca_2d

log = logging.getLogger(__name__)

MODES = ("cumulative", "iterative")
RAW_COLUMNS = ("model", "dataset", "trial", "iteration", "metric", "mode", "value", "truncated")
AGG_COLUMNS = ("model", "dataset", "metric", "mode", "iteration", "mean", "ci95_lo", "ci95_hi", "n")
GRAPHLET_COLUMNS = ("model", "dataset", "trial", "iteration") + GRAPHLET_NAMES
CI_METHOD = "student-t"


@dataclass(frozen=True)
class ChainConfig:
    model: str
    length: int = 10
    trials: int = 50
    master_seed: int = 0
    metrics: tuple = tuple(METRICS)
    jobs: int = 1
    dataset: str = "source"
    record_graphlets: bool = False
    keep_graphs: bool = False

    def __post_init__(self):
        if self.length < 1 or self.trials < 1:
            raise ValueError("length and trials must be >= 1")
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")
        unknown = [m for m in self.metrics if m not in METRICS]
        if unknown:
            raise ValueError(f"unknown metrics: {', '.join(unknown)}")
        object.__setattr__(self, "model", models.canonical_model(self.model))
        object.__setattr__(self, "metrics", tuple(self.metrics))

    @property
    def wants_graphlets(self) -> bool:
        return self.record_graphlets or any(m.startswith("rgfd") for m in self.metrics)


@dataclass
class IterationRecord:
    iteration: int
    summary: dict
    params: dict
    cumulative: dict
    iterative: dict
    graphlets: tuple | None = None
    edges: np.ndarray | None = None


@dataclass
class ChainRecord:
    trial: int
    iterations: list = field(default_factory=list)
    truncated_at: int | None = None
    reason: str | None = None

    @property
    def truncated(self) -> bool:
        return self.truncated_at is not None


def iteration_seed(master_seed: int, trial: int, iteration: int) -> np.random.SeedSequence:
    """Generation seed for one (trial, iteration); hashing keeps streams independent."""
    return np.random.SeedSequence(master_seed, spawn_key=(trial, iteration))


def graph_summary(g: Graph) -> dict:
    return {
        "n": g.n,
        "m": g.m,
        "triangles": count_triangles(g),
        "avg_cc": average_clustering(g),
        "avg_pl": path_length_stats(g).average,
    }


def run_chain(config: ChainConfig, trial_id: int, source: Graph) -> ChainRecord:
    record = ChainRecord(trial_id)
    prev = source
    for i in range(1, config.length + 1):
        try:
            params = models.fit(config.model, prev)
            g = models.generate(params, iteration_seed(config.master_seed, trial_id, i))
            cumulative = {m: compare(source, g, m) for m in config.metrics}
            # at i = 1 both modes compare the same pair
            iterative = cumulative if i == 1 else {m: compare(prev, g, m) for m in config.metrics}
        except MirrorError as exc:
            log.info("trial %d truncated at iteration %d: %s", trial_id, i, exc)
            record.truncated_at = i
            record.reason = exc.code
            break
        record.iterations.append(IterationRecord(
            iteration=i,
            summary=graph_summary(g),
            params=models.params_to_dict(params),
            cumulative=cumulative,
            iterative=dict(iterative),
            graphlets=tuple(int(x) for x in graphlet_counts(g)) if config.wants_graphlets else None,
            edges=g.edges() if config.keep_graphs else None,
        ))
        prev = g
    return record


def run_trials(config: ChainConfig, source: Graph) -> list[ChainRecord]:
    """All trials, ordered by trial id whatever the worker count."""
    ids = range(config.trials)
    if config.jobs <= 1 or config.trials == 1:
        return [run_chain(config, t, source) for t in ids]
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        try:
            return list(pool.map(partial(run_chain, config, source=source), ids))
        except BaseException:
            pool.shutdown(wait=False, cancel_futures=True)
            raise


# ---------------------------------------------------------------------------
# aggregation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AggregateRow:
    metric: str
    mode: str
    iteration: int
    mean: float
    ci95_lo: float
    ci95_hi: float
    n: int
    degenerate: bool = False


def confidence_interval(values) -> tuple[float, float, float, bool]:
    """Mean and Student-t 95% interval; a single sample gives a zero-width interval."""
    x = np.asarray(values, dtype=np.float64)
    mean = float(x.mean())
    if len(x) < 2:
        return mean, mean, mean, True
    if np.all(x == x[0]):
        return float(x[0]), float(x[0]), float(x[0]), False
    half = float(stats.t.ppf(0.975, len(x) - 1) * x.std(ddof=1) / np.sqrt(len(x)))
    return mean, mean - half, mean + half, False


def aggregate_values(groups) -> list[AggregateRow]:
    """``groups`` maps ``(metric, mode, iteration)`` to the per-trial values."""
    rows = []
    for (metric, mode, it), vals in groups.items():
        mean, lo, hi, degen = confidence_interval(vals)
        rows.append(AggregateRow(metric, mode, it, mean, lo, hi, len(vals), degen))
    return rows


def aggregate(records: list[ChainRecord]) -> list[AggregateRow]:
    if not records:
        raise ValueError("nothing to aggregate")
    groups = defaultdict(list)
    for rec in records:
        for it in rec.iterations:
            for mode in MODES:
                for metric, val in getattr(it, mode).items():
                    groups[(metric, mode, it.iteration)].append(val)
    return aggregate_values(groups)


def mean_series(rows, metric: str, mode: str = "cumulative") -> np.ndarray:
    """Aggregate means of one metric/mode ordered by iteration."""
    pick = sorted((r.iteration, r.mean) for r in rows if r.metric == metric and r.mode == mode)
    return np.array([m for _, m in pick])


# ---------------------------------------------------------------------------
# graphlet PCA
# ---------------------------------------------------------------------------


def _normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    s = v.sum()
    return v / s if s > 0 else v


@dataclass(frozen=True)
class PcaReport:
    points: dict  # iteration -> (x, y), iteration 0 is the source
    weights: np.ndarray  # (2, 9)
    degenerate: bool


def pca_report_from_vectors(vectors: dict) -> PcaReport:
    """``vectors`` maps iteration -> list of graphlet count vectors."""
    its = sorted(vectors)
    pooled, owner = [], []
    for it in its:
        for v in vectors[it]:
            pooled.append(_normalize(v))
            owner.append(it)
    if len(pooled) < 2:
        pooled.append(pooled[0])
        owner.append(owner[0])
    res = pca_2d(np.array(pooled))
    owner = np.array(owner)
    points = {it: tuple(float(c) for c in res.coords[owner == it].mean(axis=0)) for it in its}
    return PcaReport(points, res.weights, res.degenerate)


def graphlet_pca_report(records: list[ChainRecord], source: Graph) -> PcaReport:
    vectors = {0: [graphlet_counts(source)]}
    for rec in records:
        for it in rec.iterations:
            if it.graphlets is None:
                raise ValueError("records were produced without graphlet vectors")
            vectors.setdefault(it.iteration, []).append(it.graphlets)
    return pca_report_from_vectors(vectors)


# ---------------------------------------------------------------------------
# CSV / JSONL writers
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    return repr(float(x))


def raw_rows(config: ChainConfig, records: list[ChainRecord]):
    for rec in records:
        trunc = "true" if rec.truncated else "false"
        for it in rec.iterations:
            for metric in config.metrics:
                for mode in MODES:
                    yield (config.model, config.dataset, rec.trial, it.iteration, metric, mode,
                           _fmt(getattr(it, mode)[metric]), trunc)


def write_raw_csv(fh, config: ChainConfig, records) -> None:
    w = csv.writer(fh, lineterminator="\r\n")
    w.writerow(RAW_COLUMNS)
    w.writerows(raw_rows(config, records))


def agg_csv_rows(model: str, dataset: str, rows, metric_order=None):
    order = {m: i for i, m in enumerate(metric_order or METRICS)}
    rows = sorted(rows, key=lambda r: (order.get(r.metric, len(order)), r.metric,
                                       MODES.index(r.mode), r.iteration))
    for r in rows:
        yield (model, dataset, r.metric, r.mode, r.iteration,
               _fmt(r.mean), _fmt(r.ci95_lo), _fmt(r.ci95_hi), r.n)


def write_agg_csv(fh, model: str, dataset: str, rows, metric_order=None) -> None:
    w = csv.writer(fh, lineterminator="\r\n")
    w.writerow(AGG_COLUMNS)
    w.writerows(agg_csv_rows(model, dataset, rows, metric_order))


def write_graphlets_csv(fh, config: ChainConfig, records, source: Graph) -> None:
    w = csv.writer(fh, lineterminator="\r\n")
    w.writerow(GRAPHLET_COLUMNS)
    w.writerow((config.model, config.dataset, -1, 0, *graphlet_counts(source)))
    for rec in records:
        for it in rec.iterations:
            w.writerow((config.model, config.dataset, rec.trial, it.iteration, *it.graphlets))


def write_params_jsonl(fh, config: ChainConfig, records) -> None:
    for rec in records:
        for it in rec.iterations:
            fh.write(json.dumps({
                "model": config.model,
                "dataset": config.dataset,
                "trial": rec.trial,
                "iteration": it.iteration,
                "params": it.params,
                "summary": it.summary,
            }, sort_keys=True) + "\n")
        if rec.truncated:
            fh.write(json.dumps({
                "model": config.model,
                "dataset": config.dataset,
                "trial": rec.trial,
                "iteration": rec.truncated_at,
                "truncated": rec.reason,
            }, sort_keys=True) + "\n")


def raw_csv_text(config: ChainConfig, records) -> str:
    buf = io.StringIO()
    write_raw_csv(buf, config, records)
    return buf.getvalue()


def read_raw_csv(fh):
    """Rows of a raw CSV as dicts with typed ``trial``/``iteration``/``value``."""
    reader = csv.DictReader(fh)
    missing = set(RAW_COLUMNS) - set(reader.fieldnames or ())
    if missing:
        raise ValueError(f"raw CSV lacks columns: {', '.join(sorted(missing))}")
    for row in reader:
        row["trial"] = int(row["trial"])
        row["iteration"] = int(row["iteration"])
        row["value"] = float(row["value"])
        yield row


def aggregate_raw(rows):
    """Group raw CSV rows into ``{(model, dataset): [AggregateRow, ...]}``
    plus the metric order of first appearance."""
    groups = defaultdict(lambda: defaultdict(list))
    order = []
    for row in rows:
        if row["metric"] not in order:
            order.append(row["metric"])
        key = (row["metric"], row["mode"], row["iteration"])
        groups[(row["model"], row["dataset"])][key].append(row["value"])
    return {k: aggregate_values(v) for k, v in groups.items()}, order

"""Monte Carlo harness for the dense and sparse two-community settings.

A trial samples one graph, decomposes its normalized Laplacian, and compares
the result with the closed-form mean model. Sweeps run trials over a
``(k, s)`` grid; every trial seed is derived from the master seed and the
cell coordinates alone, so results do not depend on scheduling.
"""

from __future__ import annotations

import csv
import io
import math
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from typing import Iterable, List, Sequence

import numpy as np

from .errors import ValidationError
from .frustration import misclassification, sign_estimator
from .graphcore import adjacency, degrees, normalized_laplacian
from .models import BisectionSpec, closed_form_mean
from .sampler import Seed, sample_bisection
from .spectra import alignment, eigendecompose, eigenvalues, operator_norm_diff

SETTINGS = ("dense", "sparse")
DEFAULT_MAX_NODES = 5000
DESK_K_GRID = (250, 500, 1000)
DESK_TRIALS = 25
PAPER_K_GRID = tuple(range(50, 2501, 50))
PAPER_TRIALS = 1000

RESULT_FIELDS = (
    "setting", "k", "s", "trial", "lambda1", "gap_error", "lambda_top_adj", "adj_norm_dev",
    "lap_norm_dev", "align_dist", "misclass_rate", "d_min", "simple_lambda1",
)
SUMMARY_STATS = ("mean", "std", "q05", "q95")
NUMERIC_FIELDS = (
    "lambda1", "gap_error", "lambda_top_adj", "adj_norm_dev", "lap_norm_dev",
    "align_dist", "misclass_rate", "d_min", "simple_lambda1",
)


def fmt_float(x: float) -> str:
    return f"{x:.10g}"


@dataclass(frozen=True)
class ExperimentConfig:
    setting: str
    k_grid: tuple
    gamma1: float
    gamma2: float
    s_grid: tuple
    trials: int
    master_seed: int
    max_nodes: int = DEFAULT_MAX_NODES

    def __post_init__(self):
        if self.setting not in SETTINGS:
            raise ValidationError(f"setting: expected one of {SETTINGS}, got {self.setting!r}")
        object.__setattr__(self, "k_grid", tuple(int(k) for k in self.k_grid))
        object.__setattr__(self, "s_grid", tuple(float(s) for s in self.s_grid))
        if not self.k_grid:
            raise ValidationError("k_grid: must be nonempty")
        if not self.s_grid:
            raise ValidationError("s_grid: must be nonempty")
        if not (self.gamma1 > self.gamma2 > 0):
            raise ValidationError(f"gamma1, gamma2: need gamma1 > gamma2 > 0, got {self.gamma1}, {self.gamma2}")
        for s in self.s_grid:
            if not 0.0 < s < 0.5:
                raise ValidationError(f"s_grid: values must lie in (0, 1/2), got {s}")
        if isinstance(self.trials, bool) or int(self.trials) != self.trials or self.trials < 1:
            raise ValidationError(f"trials: must be a positive integer, got {self.trials!r}")
        Seed(self.master_seed)
        largest = 2 * max(self.k_grid)
        if largest > self.max_nodes:
            raise ValidationError(
                f"k_grid: largest graph has {largest} nodes, above the dense-matrix cap of {self.max_nodes}"
            )
        for k in self.k_grid:
            for s in self.s_grid:
                try:
                    BisectionSpec.from_setting(self.setting, k, self.gamma1, self.gamma2, s)
                except ValidationError as exc:
                    raise ValidationError(f"k={k}: {exc}") from None

    def cells(self):
        return [(k, s) for k in sorted(self.k_grid) for s in sorted(self.s_grid)]


@dataclass(frozen=True)
class ExperimentRecord:
    setting: str
    k: int
    s: float
    trial: int
    lambda1: float
    gap_error: float
    lambda_top_adj: float
    adj_norm_dev: float
    lap_norm_dev: float
    align_dist: float
    misclass_rate: float
    d_min: int
    simple_lambda1: bool

    @property
    def misclass_count(self) -> int:
        return int(round(self.misclass_rate * 2 * self.k))

    def csv_row(self):
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool):
                out.append("true" if v else "false")
            elif isinstance(v, float):
                out.append(fmt_float(v))
            else:
                out.append(str(v))
        return out


def cell_seed(master_seed: int, k: int, s: float, trial: int) -> Seed:
    """Sub-seed for trial ``trial`` of cell ``(k, s)``."""
    s_bits = struct.unpack("<Q", struct.pack("<d", float(s)))[0]
    seq = np.random.SeedSequence([int(master_seed), int(k), s_bits])
    return Seed(int(seq.generate_state(1, dtype=np.uint64)[0]), trial)


def alpha_scale(spec: BisectionSpec) -> float:
    """Smallest admissible ``alpha = n * max |mean a_ij|`` for the bisection model."""
    return spec.n * max(spec.p, spec.q) * (1.0 - 2.0 * spec.s)


def run_trial(setting, k, gamma1, gamma2, s, seed: Seed) -> ExperimentRecord:
    spec = BisectionSpec.from_setting(setting, k, gamma1, gamma2, s)
    g, truth = sample_bisection(spec, seed)
    mean, _ = closed_form_mean(spec)

    A = adjacency(g)
    lap = normalized_laplacian(g)
    summary = eigendecompose(lap)
    _, dist = alignment(summary.u1, mean.mean_leading_vector)
    _, rate = misclassification(sign_estimator(summary.u1), truth)
    return ExperimentRecord(
        setting=setting,
        k=int(k),
        s=float(s),
        trial=int(seed.trial),
        lambda1=summary.lambda1,
        gap_error=abs(summary.lambda1 - 2.0 * s),
        lambda_top_adj=float(eigenvalues(A)[-1]),
        adj_norm_dev=operator_norm_diff(A, mean.mean_adjacency),
        lap_norm_dev=operator_norm_diff(lap, mean.mean_normalized_laplacian),
        align_dist=dist,
        misclass_rate=rate,
        d_min=degrees(g).d_min,
        simple_lambda1=summary.simple,
    )


def _run_task(task):
    return run_trial(*task)


def run_sweep(config: ExperimentConfig, jobs: int = 1) -> List[ExperimentRecord]:
    """All trials of every cell, ordered by ``(k, s, trial)``."""
    tasks = [
        (config.setting, k, config.gamma1, config.gamma2, s, cell_seed(config.master_seed, k, s, t))
        for k, s in config.cells()
        for t in range(config.trials)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_task, tasks, chunksize=1))
    else:
        records = [_run_task(t) for t in tasks]
    return sorted(records, key=lambda r: (r.k, r.s, r.trial))


def format_records(records: Iterable[ExperimentRecord], comments: Iterable[str] = ()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_FIELDS)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def write_records(path, records, comments=()) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_records(records, comments))


def _uncomment(fh):
    for line in fh:
        if not line.startswith("#"):
            yield line


def read_records(path) -> List[ExperimentRecord]:
    out = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(_uncomment(fh))
        if tuple(reader.fieldnames or ()) != RESULT_FIELDS:
            raise ValidationError(f"{path}: unexpected header {reader.fieldnames}")
        for row in reader:
            out.append(ExperimentRecord(
                setting=row["setting"],
                k=int(row["k"]),
                s=float(row["s"]),
                trial=int(row["trial"]),
                lambda1=float(row["lambda1"]),
                gap_error=float(row["gap_error"]),
                lambda_top_adj=float(row["lambda_top_adj"]),
                adj_norm_dev=float(row["adj_norm_dev"]),
                lap_norm_dev=float(row["lap_norm_dev"]),
                align_dist=float(row["align_dist"]),
                misclass_rate=float(row["misclass_rate"]),
                d_min=int(row["d_min"]),
                simple_lambda1=row["simple_lambda1"] == "true",
            ))
    return out


def nearest_rank(sorted_values: Sequence[float], q: float) -> float:
    """Nearest-rank quantile: the ``ceil(q * N)``-th smallest value (1-based)."""
    n = len(sorted_values)
    rank = max(1, math.ceil(q * n))
    return sorted_values[rank - 1]


def _stats(values):
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return {"mean": math.nan, "std": math.nan, "q05": math.nan, "q95": math.nan}
    srt = sorted(arr.tolist())
    return {
        "mean": float(arr.mean()),
        "std": float(arr.std()),
        "q05": float(nearest_rank(srt, 0.05)),
        "q95": float(nearest_rank(srt, 0.95)),
    }


def summarize(records: Sequence[ExperimentRecord]):
    """Per-cell mean, population standard deviation and 5%/95% quantiles.

    Trials with ``d_min == 0`` are left out of the ``lap_norm_dev``
    statistics. Returns a list of dicts keyed ``setting, k, s, trials`` plus
    ``<field>_<stat>``, ordered by ``(setting, k, s)``.
    """
    if not records:
        raise ValidationError("summarize: no records")
    cells = {}
    for r in records:
        cells.setdefault((r.setting, r.k, r.s), []).append(r)
    rows = []
    for (setting, k, s) in sorted(cells):
        group = cells[(setting, k, s)]
        row = {"setting": setting, "k": k, "s": s, "trials": len(group)}
        for name in NUMERIC_FIELDS:
            pool = group
            if name == "lap_norm_dev":
                pool = [r for r in group if r.d_min > 0]
            stats = _stats([float(getattr(r, name)) for r in pool])
            for stat in SUMMARY_STATS:
                row[f"{name}_{stat}"] = stats[stat]
        rows.append(row)
    return rows


def summary_fields():
    return ["setting", "k", "s", "trials"] + [f"{n}_{st}" for n in NUMERIC_FIELDS for st in SUMMARY_STATS]


def format_summary(rows, comments=()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    header = summary_fields()
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(row[h]) if isinstance(row[h], float) else str(row[h]) for h in header])
    return buf.getvalue()


@dataclass(frozen=True)
class MinDegreeReport:
    setting: str
    trials: int
    violations: int
    violation_fraction: float
    empirical_constant: float


def min_degree_check(records: Sequence[ExperimentRecord], setting: str, gamma1: float, gamma2: float):
    """Compare observed minimum degrees with the high-probability lower bounds.

    Dense: fraction of trials with ``d_min < (gamma1 + gamma2) sqrt(k) / 2``.
    Sparse: the bound is ``C ((gamma1 + gamma2) log k - gamma1 log k / k)`` with
    ``C`` free; the report gives the largest ``C`` (capped at 1) that holds on
    at least 99% of trials, and the violation fraction at that ``C``.
    """
    if setting not in SETTINGS:
        raise ValidationError(f"setting: expected one of {SETTINGS}, got {setting!r}")
    if not records:
        raise ValidationError("min_degree_check: no records")
    if any(r.setting != setting for r in records):
        raise ValidationError("min_degree_check: records mix settings")
    n = len(records)
    if setting == "dense":
        bounds = [(gamma1 + gamma2) * math.sqrt(r.k) / 2.0 for r in records]
        bad = sum(r.d_min < b for r, b in zip(records, bounds))
        worst = min(r.d_min / b for r, b in zip(records, bounds))
        return MinDegreeReport(setting, n, bad, bad / n, worst)
    ratios = sorted(
        r.d_min / ((gamma1 + gamma2) * math.log(r.k) - gamma1 * math.log(r.k) / r.k) for r in records
    )
    # the j-th smallest ratio is met by n - j + 1 trials
    j = n - math.ceil(0.99 * n) + 1
    c = min(ratios[j - 1], 1.0)
    bad = sum(x < c for x in ratios)
    return MinDegreeReport(setting, n, bad, bad / n, c)

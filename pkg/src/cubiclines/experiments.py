"""Monte Carlo drivers and flat-file output for the line-count experiments.

A run is described by a MeasureSpec (which sampling measure, at which prime
and precision, or at which interpolation parameter for the real family) and
produces a LineCountDistribution or a list of SimplexCurvePoint.  Every
sample draws from its own RNG stream keyed by (seed, sample index), so a run
is reproducible bit for bit regardless of the worker count or the order in
which workers finish.  Samples that end in a solver failure are tallied and
reported, never imputed and never silently dropped.
"""

from __future__ import annotations

import concurrent.futures
import json
from collections import Counter
from dataclasses import dataclass

from .blowup import blowup_line_count
from .errors import CubicLinesError
from .padic import check_odd_prime
from .realcubics import REAL_LINE_COUNTS, SimplexCurvePoint, estimate_curve
from .sampling import DEFAULT_PRECISION, sample_rng, sample_sextic, sample_surface
from .surfaces import PADIC_LINE_COUNTS, count_padic_lines

PADIC_MEASURES = ("haar", "blowup", "tropical", "tropical-generic")
MEASURE_KINDS = PADIC_MEASURES + ("real",)


@dataclass(frozen=True)
class MeasureSpec:
    """Which distribution on cubic surfaces an experiment samples from."""

    kind: str
    p: int | None = None
    precision: int | None = None
    lam: float | None = None

    def __post_init__(self):
        if self.kind not in MEASURE_KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if self.kind == "real":
            if self.lam is None or not 0.0 < self.lam < 1.0:
                raise ValueError("real measure needs lam strictly between 0 and 1")
            if self.p is not None or self.precision is not None:
                raise ValueError("real measure takes neither p nor precision")
        else:
            if self.p is None:
                raise ValueError(f"{self.kind} measure needs a prime p")
            check_odd_prime(self.p)
            if self.lam is not None:
                raise ValueError("lam only applies to the real measure")
            if self.precision is not None and self.precision < 1:
                raise ValueError("precision must be at least 1")

    @property
    def support(self) -> tuple[int, ...]:
        return REAL_LINE_COUNTS if self.kind == "real" else PADIC_LINE_COUNTS


@dataclass(frozen=True)
class LineCountDistribution:
    """Empirical distribution of line counts from one experiment run."""

    spec: MeasureSpec
    seed: int
    n_samples: int
    n_failures: int
    counts: dict[int, int]
    probabilities: dict[int, float]
    mean: float
    n_resamples: int = 0

    def __post_init__(self):
        bad = set(self.counts) - set(self.spec.support)
        if bad:
            raise ValueError(f"counts outside the admissible set: {sorted(bad)}")
        if self.n_samples - self.n_failures != sum(self.counts.values()):
            raise ValueError("failures and counted samples do not add up")
        if self.counts and abs(sum(self.probabilities.values()) - 1.0) > 1e-12:
            raise ValueError("probabilities do not sum to 1")

    @classmethod
    def from_counts(cls, spec, seed, n_samples, tally, n_resamples=0):
        counts = {k: tally[k] for k in sorted(tally) if k >= 0}
        failures = n_samples - sum(counts.values())
        good = max(sum(counts.values()), 1)
        probabilities = {k: v / good for k, v in counts.items()}
        mean = sum(k * q for k, q in probabilities.items())
        return cls(spec, seed, n_samples, failures, counts, probabilities,
                   mean, n_resamples)


def _padic_sample(task: tuple[MeasureSpec, int, int]) -> tuple[int, int]:
    """One sample for a p-adic measure: (line count or -1, resample count)."""
    spec, seed, index = task
    rng = sample_rng(seed, index)
    precision = DEFAULT_PRECISION if spec.precision is None else spec.precision
    try:
        if spec.kind == "blowup":
            f, resamples = sample_sextic(spec.p, rng, precision)
            return blowup_line_count(f), resamples
        surface = sample_surface(spec.kind, spec.p, rng, precision)
        return count_padic_lines(surface), 0
    except CubicLinesError:
        return -1, 0


def run_padic_experiment(spec: MeasureSpec, n_samples: int, seed: int,
                         workers: int = 1) -> LineCountDistribution:
    """Sample n_samples surfaces from spec and tally their line counts."""
    if spec.kind == "real":
        raise ValueError("use run_real_experiment for the real measure")
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    tasks = [(spec, seed, i) for i in range(n_samples)]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(workers) as pool:
            outcomes = list(
                pool.map(_padic_sample, tasks, chunksize=max(1, n_samples // (4 * workers)))
            )
    else:
        outcomes = [_padic_sample(t) for t in tasks]
    tally = Counter(count for count, _ in outcomes)
    resamples = sum(r for _, r in outcomes)
    return LineCountDistribution.from_counts(spec, seed, n_samples, tally, resamples)


def run_real_experiment(lambdas, n_samples: int, seed: int,
                        workers: int = 1) -> list[SimplexCurvePoint]:
    """Estimate the real-line distribution at each interpolation parameter."""
    return estimate_curve(lambdas, n_samples, seed, workers)


def distribution_csv(dist: LineCountDistribution) -> str:
    """The distribution as count,probability rows over the admissible set."""
    lines = ["count,probability"]
    for count in dist.spec.support:
        lines.append(f"{count},{dist.probabilities.get(count, 0.0):.5f}")
    return "\n".join(lines) + "\n"


def curve_csv(points: list[SimplexCurvePoint]) -> str:
    """Curve points as one lambda,pi3,pi7,pi15,pi27,n_samples,n_failures row each."""
    lines = ["lambda,pi3,pi7,pi15,pi27,n_samples,n_failures"]
    for pt in points:
        probs = ",".join(f"{q:.5f}" for q in pt.probabilities)
        lines.append(f"{pt.lam:.5f},{probs},{pt.n_samples},{pt.n_failures}")
    return "\n".join(lines) + "\n"


def write_distribution(dist: LineCountDistribution, path) -> None:
    """Write the CSV and its metadata sidecar <path>.meta.json."""
    with open(path, "w") as fh:
        fh.write(distribution_csv(dist))
    meta = {
        "measure": dist.spec.kind,
        "p": dist.spec.p,
        "N": DEFAULT_PRECISION if dist.spec.precision is None else dist.spec.precision,
        "lambda": None,
        "samples": dist.n_samples,
        "seed": dist.seed,
        "failures": dist.n_failures,
        "mean": dist.mean,
    }
    if dist.spec.kind == "blowup":
        meta["resamples"] = dist.n_resamples
    _write_meta(path, meta)


def write_curve(points: list[SimplexCurvePoint], seed: int, path) -> None:
    """Write the curve CSV and its metadata sidecar <path>.meta.json."""
    with open(path, "w") as fh:
        fh.write(curve_csv(points))
    meta = {
        "measure": "real",
        "p": None,
        "N": None,
        "lambda": [pt.lam for pt in points],
        "samples": points[0].n_samples if points else 0,
        "seed": seed,
        "failures": sum(pt.n_failures for pt in points),
        "mean": [pt.mean for pt in points],
    }
    _write_meta(path, meta)


def _write_meta(path, meta) -> None:
    with open(f"{path}.meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")

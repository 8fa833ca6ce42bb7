"""Counting real lines on random real cubic surfaces.

A smooth cubic surface with real coefficients has 27 lines over the
complex numbers, and the ones fixed by conjugation are real; their number
is always 3, 7, 15 or 27.  The count is computed numerically: rotate the
surface by a Haar-random orthogonal matrix (so that with probability one
every line is visible in the first Grassmannian chart and no line hugs the
chart's hyperplane at infinity), solve the chart system with the homotopy
solver, and classify each of the 27 homogeneous solutions as real or
complex by the imaginary part of its scale-normalized representative.
A solve that fails or classifies to an impossible count is retried with a
fresh rotation.

Random surfaces come from the harmonic/radial interpolation family
f = lam * (xi . harmonic basis) + (1 - lam) * (eta . radial basis) with
independent standard Gaussian coordinates xi, eta; lam = 1/3 reproduces
the invariant Gaussian ensemble whose expected number of real lines is
6*sqrt(2) - 3.
"""

from __future__ import annotations

import concurrent.futures
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import CubicLinesError, NonAdmissibleCount, SolveFailure
from .harmonic import harmonic_model
from .homotopy import solve_chart_homogeneous
from .surfaces import CHART_TABLES, transform_cubic

REAL_LINE_COUNTS = (3, 7, 15, 27)

_CHART0 = CHART_TABLES[0].astype(float)
_REAL_TOL = 1e-6


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """A Haar-distributed 4x4 rotation (QR of a Gaussian matrix)."""
    g = rng.normal(size=(4, 4))
    q, r = np.linalg.qr(g)
    return q * np.sign(np.diag(r))


def sample_real_cubic(lam: float, rng: np.random.Generator) -> np.ndarray:
    """A random cubic from the harmonic/radial family, as 20 coefficients."""
    model = harmonic_model()
    xi = rng.normal(size=model.harmonic.shape[0])
    eta = rng.normal(size=model.radial.shape[0])
    return lam * (xi @ model.harmonic) + (1.0 - lam) * (eta @ model.radial)


def count_real_lines(coeffs, rng: np.random.Generator, attempts: int = 3) -> int:
    """The number of real lines on the surface with the given coefficients.

    The surface must be smooth with 27 distinct complex lines; otherwise
    every attempt fails and the last error propagates.  A classification
    that lands outside {3, 7, 15, 27} is retried and then reported as
    NonAdmissibleCount.
    """
    w = [float(x) for x in coeffs]
    if len(w) != 20:
        raise ValueError("expected 20 cubic coefficients")
    last_error: Exception = SolveFailure("no attempt was made")
    for _ in range(attempts):
        q = random_rotation(rng)
        rotated = np.asarray(transform_cubic(w, q), dtype=float)
        system = np.tensordot(_CHART0, rotated, axes=([1], [0]))
        try:
            hom = solve_chart_homogeneous(system, rng)
        except SolveFailure as exc:
            last_error = exc
            continue
        if (np.abs(hom[:, 4]) < 1e-8).any():
            # a line sits numerically at the chart's hyperplane at
            # infinity; a fresh rotation will move it inside
            last_error = SolveFailure("a line is invisible in the chart")
            continue
        n_real = int((np.abs(hom.imag).max(axis=1) < _REAL_TOL).sum())
        if n_real in REAL_LINE_COUNTS:
            return n_real
        last_error = NonAdmissibleCount(
            f"classified {n_real} real lines, expected one of {REAL_LINE_COUNTS}"
        )
    raise last_error


@dataclass(frozen=True)
class SimplexCurvePoint:
    """Empirical real-line distribution at one interpolation parameter."""

    lam: float
    pi3: float
    pi7: float
    pi15: float
    pi27: float
    n_samples: int
    n_failures: int

    def __post_init__(self):
        probs = self.probabilities
        if min(probs) < 0:
            raise ValueError("negative probability")
        if self.n_samples > self.n_failures and abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError("probabilities do not sum to 1")

    @property
    def probabilities(self) -> tuple[float, float, float, float]:
        return (self.pi3, self.pi7, self.pi15, self.pi27)

    @property
    def mean(self) -> float:
        return sum(c * q for c, q in zip(REAL_LINE_COUNTS, self.probabilities))


def _curve_sample(task: tuple[int, int, float, int]) -> int:
    """Count real lines for one (seed, lambda index, lambda, sample) task.

    Returns -1 for a sample whose retries are exhausted, so the result is
    picklable for pool workers.
    """
    base, lam_index, lam, index = task
    rng = np.random.default_rng(np.random.SeedSequence((base, lam_index, index)))
    try:
        return count_real_lines(sample_real_cubic(lam, rng), rng)
    except CubicLinesError:
        return -1


def estimate_curve(lambdas, n_samples: int, rng, workers: int = 1):
    """Estimate (pi3, pi7, pi15, pi27) for each interpolation parameter.

    ``rng`` may be a Generator (one integer is drawn from it to key the
    per-sample streams) or a plain integer seed.  Every sample gets its own
    stream derived from (seed, lambda index, sample index), so the result
    does not depend on the worker count or on completion order.  Samples
    whose solver retries are exhausted land in ``n_failures`` and are left
    out of the probabilities.
    """
    lambdas = [float(lam) for lam in lambdas]
    for lam in lambdas:
        if not 0.0 < lam < 1.0:
            raise ValueError(f"lambda must lie strictly between 0 and 1, got {lam}")
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    if isinstance(rng, np.random.Generator):
        base = int(rng.integers(2**63))
    else:
        base = int(rng)

    points = []
    for j, lam in enumerate(lambdas):
        tasks = [(base, j, lam, i) for i in range(n_samples)]
        if workers > 1:
            with concurrent.futures.ProcessPoolExecutor(workers) as pool:
                outcomes = list(
                    pool.map(_curve_sample, tasks, chunksize=max(1, n_samples // (4 * workers)))
                )
        else:
            outcomes = [_curve_sample(t) for t in tasks]
        tally = Counter(outcomes)
        failures = tally.pop(-1, 0)
        good = n_samples - failures
        denom = max(good, 1)
        points.append(
            SimplexCurvePoint(
                lam=lam,
                pi3=tally.get(3, 0) / denom,
                pi7=tally.get(7, 0) / denom,
                pi15=tally.get(15, 0) / denom,
                pi27=tally.get(27, 0) / denom,
                n_samples=n_samples,
                n_failures=failures,
            )
        )
    return points

"""Coefficient measures for random p-adic surfaces and sextics.

All measures draw integer coefficients determined by their residues modulo
p^(N+1), where N is the working precision (default 5); this discretizes
the Haar measure on p-adic integers to the accuracy at which the counting
algorithms operate.  Three surface measures are provided:

* ``haar``: all 20 cubic coefficients uniform on [0, p^(N+1)).
* ``tropical``: each coefficient is p^v with the valuation v uniform on
  {0, ..., N}, the monomial skeleton of a tropical coefficient
  distribution.
* ``tropical-generic``: u * p^v with v as above and u a uniform unit, so
  the valuations follow the tropical skeleton but the units are generic.

The blow-up measure draws the 7 coefficients of a degree-6 polynomial the
same way and resamples until the polynomial is in general position (degree
exactly 6, squarefree, nonzero root sum, no vanishing triple sum).

Every sample gets its own generator derived from (seed, index), so results
are reproducible and independent of how work is batched across processes.
"""

from __future__ import annotations

import numpy as np

from .blowup import general_position_check
from .errors import InternalInconsistency
from .polynomials import PadicPolynomial
from .surfaces import CubicSurface

DEFAULT_PRECISION = 5
SURFACE_MEASURES = ("haar", "tropical", "tropical-generic")
MEASURES = SURFACE_MEASURES + ("blowup",)

_MAX_RESAMPLES = 1000


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """A deterministic per-sample generator keyed by (seed, index)."""
    return np.random.default_rng(np.random.SeedSequence((seed, index)))


def _uniform_int(p: int, ndigits: int, rng: np.random.Generator) -> int:
    """Uniform integer on [0, p^ndigits), built digit by digit."""
    value = 0
    for d in reversed(rng.integers(0, p, size=ndigits)):
        value = value * p + int(d)
    return value


def _uniform_unit(p: int, ndigits: int, rng: np.random.Generator) -> int:
    """Uniform unit (lowest digit nonzero) on [0, p^ndigits)."""
    low = int(rng.integers(1, p))
    return low + p * _uniform_int(p, ndigits - 1, rng)


def haar_coefficients(
    p: int, rng: np.random.Generator, precision: int = DEFAULT_PRECISION
) -> tuple:
    return tuple(_uniform_int(p, precision + 1, rng) for _ in range(20))


def tropical_coefficients(
    p: int,
    rng: np.random.Generator,
    precision: int = DEFAULT_PRECISION,
    generic: bool = False,
) -> tuple:
    out = []
    for _ in range(20):
        v = int(rng.integers(0, precision + 1))
        unit = _uniform_unit(p, precision + 1, rng) if generic else 1
        out.append(unit * p**v)
    return tuple(out)


def sample_surface(
    measure: str,
    p: int,
    rng: np.random.Generator,
    precision: int = DEFAULT_PRECISION,
) -> CubicSurface:
    """A random cubic surface drawn from one of the surface measures."""
    if measure == "haar":
        coeffs = haar_coefficients(p, rng, precision)
    elif measure == "tropical":
        coeffs = tropical_coefficients(p, rng, precision)
    elif measure == "tropical-generic":
        coeffs = tropical_coefficients(p, rng, precision, generic=True)
    else:
        raise ValueError(f"unknown surface measure {measure!r}")
    return CubicSurface(p, coeffs, precision)


def sample_sextic(
    p: int, rng: np.random.Generator, precision: int = DEFAULT_PRECISION
) -> tuple[PadicPolynomial, int]:
    """A general-position random sextic and the number of resamples used."""
    for resamples in range(_MAX_RESAMPLES):
        coeffs = tuple(_uniform_int(p, precision + 1, rng) for _ in range(7))
        if coeffs[6] == 0:
            continue
        f = PadicPolynomial(p, coeffs)
        if general_position_check(f).in_general_position:
            return f, resamples
    raise InternalInconsistency(
        f"no general-position sextic found in {_MAX_RESAMPLES} draws"
    )

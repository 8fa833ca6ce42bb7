"""Exact harmonic decomposition of real cubic forms in four variables.

The space of cubics splits orthogonally (for the Gaussian L2 inner product)
as a 16-dimensional space of harmonic cubics plus the 4-dimensional image
of multiplication by |x|^2 on linear forms. Everything here is computed
over the rationals: the Gram matrix has integer entries (products of double
factorials), the Laplacian kernel is solved exactly, and Gram-Schmidt is
run without normalization so each basis vector is a rational vector paired
with its rational squared norm. Floating point appears only at the very
end, when the orthonormal bases are materialized for sampling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .surfaces import MONOMIALS, MONOMIAL_INDEX


def _gaussian_moment(k: int) -> int:
    """E[g^k] for g standard normal: (k-1)!! for even k, zero for odd."""
    if k % 2:
        return 0
    out = 1
    for j in range(k - 1, 0, -2):
        out *= j
    return out


def gaussian_gram() -> list[list[int]]:
    """Gram matrix of the 20 cubic monomials in L2 of the standard Gaussian."""
    n = len(MONOMIALS)
    g = [[0] * n for _ in range(n)]
    for i, a in enumerate(MONOMIALS):
        for j, b in enumerate(MONOMIALS):
            v = 1
            for ea, eb in zip(a, b):
                v *= _gaussian_moment(ea + eb)
                if v == 0:
                    break
            g[i][j] = v
    return g


def gaussian_inner_product(f, g) -> Fraction:
    """<f, g> for two cubics given as 20 rational coefficient vectors."""
    if len(f) != len(MONOMIALS) or len(g) != len(MONOMIALS):
        raise ValueError("expected 20 cubic coefficients")
    gram = gaussian_gram()
    total = Fraction(0)
    for i, a in enumerate(f):
        if not a:
            continue
        row = gram[i]
        for j, b in enumerate(g):
            if b and row[j]:
                total += Fraction(a) * Fraction(b) * row[j]
    return total


def laplacian_matrix() -> list[list[int]]:
    """4 x 20 matrix of the Laplacian from cubics to linear forms."""
    rows = [[0] * len(MONOMIALS) for _ in range(4)]
    for idx, alpha in enumerate(MONOMIALS):
        for i in range(4):
            if alpha[i] >= 2:
                target = list(alpha)
                target[i] -= 2
                (j,) = [v for v, e in enumerate(target) if e]
                rows[j][idx] += alpha[i] * (alpha[i] - 1)
    return rows


def _kernel_basis(rows) -> list[list[Fraction]]:
    """Exact null space of a small integer matrix (rows of Fractions out)."""
    m = [[Fraction(c) for c in row] for row in rows]
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    basis = []
    free = [c for c in range(ncols) if c not in pivots]
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            v[pc] = -m[ri][fc]
        basis.append(v)
    return basis


def _dot(gram, u, v) -> Fraction:
    acc = Fraction(0)
    for i, ui in enumerate(u):
        if ui:
            row = gram[i]
            acc += ui * sum(row[j] * vj for j, vj in enumerate(v) if vj)
    return acc


def orthogonalize(vectors, gram):
    """Gram-Schmidt without normalization; returns (vector, norm^2) pairs.

    Everything stays rational, so orthogonality is exact and the squared
    norms are exact positive rationals.
    """
    out: list[tuple[list[Fraction], Fraction]] = []
    for v in vectors:
        w = [Fraction(x) for x in v]
        for u, n2 in out:
            coeff = _dot(gram, w, u) / n2
            if coeff:
                w = [wi - coeff * ui for wi, ui in zip(w, u)]
        n2 = _dot(gram, w, w)
        if n2 <= 0:
            raise ValueError("vectors are linearly dependent")
        out.append((w, n2))
    return out


def radial_vectors() -> list[list[int]]:
    """The four cubics |x|^2 x_j as integer coefficient vectors."""
    out = []
    for j in range(4):
        v = [0] * len(MONOMIALS)
        for i in range(4):
            mono = [0, 0, 0, 0]
            mono[i] += 2
            mono[j] += 1
            v[MONOMIAL_INDEX[tuple(mono)]] += 1
        out.append(v)
    return out


@dataclass(frozen=True)
class HarmonicModel:
    """Orthonormal bases for the harmonic and radial pieces of the cubics.

    ``harmonic`` is (16, 20) and ``radial`` is (4, 20); rows are orthonormal
    in the Gaussian inner product and orthogonal across the two blocks. The
    exact rational pairs they were derived from are kept for verification.
    """

    harmonic: np.ndarray
    radial: np.ndarray
    exact_harmonic: tuple
    exact_radial: tuple


@lru_cache(maxsize=1)
def harmonic_model() -> HarmonicModel:
    gram = gaussian_gram()
    kernel = _kernel_basis(laplacian_matrix())
    if len(kernel) != 16:
        raise ValueError("harmonic subspace has unexpected dimension")
    exact_h = tuple(orthogonalize(kernel, gram))
    exact_r = tuple(orthogonalize(radial_vectors(), gram))
    h = np.array(
        [[float(c) for c in vec] for vec, _ in exact_h], dtype=float
    ) / np.sqrt([[float(n2)] for _, n2 in exact_h])
    r = np.array(
        [[float(c) for c in vec] for vec, _ in exact_r], dtype=float
    ) / np.sqrt([[float(n2)] for _, n2 in exact_r])
    return HarmonicModel(
        harmonic=h, radial=r, exact_harmonic=exact_h, exact_radial=exact_r
    )

"""Cubic surfaces in P^3 and exact line counting over Q_p.

A surface is a vector of 20 integer coefficients against the degree-3
monomials in x0..x3 (graded lexicographic order, see MONOMIALS). Lines in
P^3 are handled through six affine charts of the Grassmannian G(2, 4): chart
(i, j) parametrizes lines spanned by two rows carrying an identity block in
columns i and j and four free parameters (a, b, c, d) elsewhere. Restricting
the cubic to the spanned line gives a binary cubic in the span coordinates
(s, t); its four coefficients are the chart equations, polynomials in
a, b, c, d that are linear in the surface coefficients. These tables are
precomputed once, so both the mod-p scans and the exact lifting work from
the same data.

Counting over Q_p proceeds digit by digit: residue solutions of the chart
equations are enumerated on the F_p grid, a solution with invertible
Jacobian mod p is an isolated line (multivariate Hensel) and counts exactly
once, and a solution with singular Jacobian is refined by substituting
x -> x0 + p*y into the exact integer equations and recursing. Lines are
never double counted across charts: a residue candidate is kept only in the
first chart whose pivot minor is a unit on it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import DepthExceeded, SingularSurface, ZeroReduction
from .padic import check_odd_prime, valuation_int
from .polynomials import PADIC_LINE_COUNTS

# ---------------------------------------------------------------------------
# monomial bookkeeping


def _degree_tuples(nvars: int, total: int):
    out = []
    for t in product(range(total + 1), repeat=nvars):
        if sum(t) == total:
            out.append(t)
    out.sort(reverse=True)
    return out


#: the 20 cubic monomials in x0..x3, graded lexicographic
MONOMIALS: tuple[tuple[int, int, int, int], ...] = tuple(_degree_tuples(4, 3))
MONOMIAL_INDEX = {m: i for i, m in enumerate(MONOMIALS)}

#: the 10 quadratic monomials (gradient components live here)
DEG2_MONOMIALS: tuple[tuple[int, int, int, int], ...] = tuple(_degree_tuples(4, 2))
DEG2_INDEX = {m: i for i, m in enumerate(DEG2_MONOMIALS)}

#: monomial bases used by the Macaulay-rank smoothness test
_DEG4_MONOMIALS = tuple(_degree_tuples(4, 4))
_DEG5_INDEX = {m: i for i, m in enumerate(_degree_tuples(4, 5))}
_DEG6_INDEX = {m: i for i, m in enumerate(_degree_tuples(4, 6))}


def _product_index_table(base_a, base_b, index) -> "np.ndarray":
    """Column index of the product of each (row, column) monomial pair."""
    return np.array(
        [[index[tuple(x + y for x, y in zip(ma, mb))] for mb in base_b] for ma in base_a],
        dtype=np.int64,
    )


#: cubic x quadric -> degree-5 columns; quartic x quadric and cubic x cubic
#: -> degree-6 columns (the char-3 smoothness variant needs the surface itself)
_MACAULAY_D3D2 = _product_index_table(MONOMIALS, DEG2_MONOMIALS, _DEG5_INDEX)
_MACAULAY_D4D2 = _product_index_table(_DEG4_MONOMIALS, DEG2_MONOMIALS, _DEG6_INDEX)
_MACAULAY_D3D3 = _product_index_table(MONOMIALS, MONOMIALS, _DEG6_INDEX)

#: all 35 monomials of degree <= 3 in the chart parameters (a, b, c, d)
ABCD_MONOMIALS: tuple[tuple[int, int, int, int], ...] = tuple(
    m for d in range(4) for m in _degree_tuples(4, d)
)
ABCD_INDEX = {m: i for i, m in enumerate(ABCD_MONOMIALS)}

#: pivot column pairs of the six Grassmannian charts, in search order
CHART_PIVOTS: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _dict_mul(u: dict, v: dict) -> dict:
    out: dict = {}
    for mu, cu in u.items():
        for mv, cv in v.items():
            key = tuple(a + b for a, b in zip(mu, mv))
            out[key] = out.get(key, 0) + cu * cv
    return {k: c for k, c in out.items() if c}


def _st_mul(big: list[dict], lin: list[dict]) -> list[dict]:
    """Multiply a poly in (s, t) by a linear one; entries are abcd-polys."""
    out = [dict() for _ in range(len(big) + 1)]
    for i, coeff in enumerate(big):
        for j, lc in enumerate(lin):
            if not coeff or not lc:
                continue
            prod = _dict_mul(coeff, lc)
            tgt = out[i + j]
            for k, c in prod.items():
                tgt[k] = tgt.get(k, 0) + c
    return out


_ZERO4 = (0, 0, 0, 0)
_SYM = {
    "1": {_ZERO4: 1},
    "a": {(1, 0, 0, 0): 1},
    "b": {(0, 1, 0, 0): 1},
    "c": {(0, 0, 1, 0): 1},
    "d": {(0, 0, 0, 1): 1},
}


def _chart_rows(ci: int):
    i, j = CHART_PIVOTS[ci]
    free = [k for k in range(4) if k not in (i, j)]
    row0 = [dict() for _ in range(4)]
    row1 = [dict() for _ in range(4)]
    row0[i], row1[j] = dict(_SYM["1"]), dict(_SYM["1"])
    row0[free[0]], row0[free[1]] = dict(_SYM["a"]), dict(_SYM["b"])
    row1[free[0]], row1[free[1]] = dict(_SYM["c"]), dict(_SYM["d"])
    return row0, row1


def _build_tables():
    tables = np.zeros((6, 4, 20, 35), dtype=np.int64)
    minors = np.zeros((6, 6, 35), dtype=np.int64)
    for ci in range(6):
        row0, row1 = _chart_rows(ci)
        for ai, alpha in enumerate(MONOMIALS):
            st = [{_ZERO4: 1}]
            for var in range(4):
                for _ in range(alpha[var]):
                    st = _st_mul(st, [row0[var], row1[var]])
            for k in range(4):  # k = power of t
                for mono, c in st[k].items():
                    tables[ci, k, ai, ABCD_INDEX[mono]] = c
        for mi, (k, l) in enumerate(CHART_PIVOTS):
            m = _dict_mul(row0[k], row1[l])
            neg = _dict_mul(row0[l], row1[k])
            for mono, c in neg.items():
                m[mono] = m.get(mono, 0) - c
            for mono, c in m.items():
                if c:
                    minors[ci, mi, ABCD_INDEX[mono]] = c
    return tables, minors


#: CHART_TABLES[ci, k, alpha, m]: coefficient of abcd-monomial m in the
#: s^(3-k) t^k coefficient of the restriction of x^alpha to chart ci
CHART_TABLES, CHART_MINORS = _build_tables()

#: derivative action on abcd-monomials: per variable, (src, dst, multiplier)
_ABCD_DERIV: tuple[tuple[tuple[int, int, int], ...], ...] = tuple(
    tuple(
        (src, ABCD_INDEX[tuple(e - (1 if v == w else 0) for w, e in enumerate(mono))], mono[v])
        for src, mono in enumerate(ABCD_MONOMIALS)
        if mono[v] > 0
    )
    for v in range(4)
)

#: gradient action on cubic monomials: per variable, (src, deg2 index, mult)
_GRAD_TERMS: tuple[tuple[tuple[int, int, int], ...], ...] = tuple(
    tuple(
        (src, DEG2_INDEX[tuple(e - (1 if v == w else 0) for w, e in enumerate(mono))], mono[v])
        for src, mono in enumerate(MONOMIALS)
        if mono[v] > 0
    )
    for v in range(4)
)


# ---------------------------------------------------------------------------
# per-prime grids (cached)

_GRID_CACHE: dict[int, dict] = {}
_MAX_GRID_PRIME = 23


def _grids(p: int) -> dict:
    check_odd_prime(p)
    if p in _GRID_CACHE:
        return _GRID_CACHE[p]
    if p > _MAX_GRID_PRIME:
        raise ValueError(
            f"residue enumeration over F_p is supported for p <= {_MAX_GRID_PRIME}"
        )
    n = p**4
    coords = np.indices((p, p, p, p), dtype=np.int64).reshape(4, n)
    powers = [np.ones((4, n), dtype=np.int64)]
    for _ in range(3):
        powers.append(powers[-1] * coords % p)
    mono_vals = np.empty((35, n), dtype=np.int64)
    for mi, mono in enumerate(ABCD_MONOMIALS):
        acc = np.ones(n, dtype=np.int64)
        for v, e in enumerate(mono):
            if e:
                acc = acc * powers[e][v] % p
        mono_vals[mi] = acc
    # minor values on the grid for each chart (used for cross-chart dedupe)
    minor_vals = CHART_MINORS @ mono_vals % p  # (6, 6, n)

    # canonical representatives of P^3(F_p) and monomial values there
    pts = []
    for lead in range(4):
        ranges = [range(1, 2)] + [range(p)] * (3 - lead)
        for tail in product(*ranges):
            pts.append((0,) * lead + tail)
    pts3 = np.array(pts, dtype=np.int64).T  # (4, p^3 + p^2 + p + 1)
    ppow = [np.ones_like(pts3)]
    for _ in range(3):
        ppow.append(ppow[-1] * pts3 % p)
    m3 = np.empty((20, pts3.shape[1]), dtype=np.int64)
    for mi, mono in enumerate(MONOMIALS):
        acc = np.ones(pts3.shape[1], dtype=np.int64)
        for v, e in enumerate(mono):
            if e:
                acc = acc * ppow[e][v] % p
        m3[mi] = acc
    m2 = np.empty((10, pts3.shape[1]), dtype=np.int64)
    for mi, mono in enumerate(DEG2_MONOMIALS):
        acc = np.ones(pts3.shape[1], dtype=np.int64)
        for v, e in enumerate(mono):
            if e:
                acc = acc * ppow[e][v] % p
        m2[mi] = acc
    out = {
        "coords": coords,
        "mono_vals": mono_vals,
        "minor_vals": minor_vals,
        "pts3": pts3,
        "m3": m3,
        "m2": m2,
    }
    _GRID_CACHE[p] = out
    return out


# ---------------------------------------------------------------------------
# surfaces


@dataclass(frozen=True)
class CubicSurface:
    """A cubic surface over Q_p given by 20 integer coefficients."""

    p: int
    coeffs: tuple[int, ...]
    precision: int | None = None

    def __post_init__(self):
        check_odd_prime(self.p)
        if len(self.coeffs) != 20:
            raise ValueError("a cubic surface needs exactly 20 coefficients")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if not any(self.coeffs):
            raise ValueError("the zero form does not define a surface")

    def content_normalized(self) -> "CubicSurface":
        g = min(valuation_int(c, self.p) for c in self.coeffs if c)
        if g == 0:
            return self
        q = self.p**g
        return CubicSurface(self.p, tuple(c // q for c in self.coeffs), self.precision)

    def to_dict(self) -> dict:
        out = {"p": self.p, "coeffs": list(self.coeffs)}
        if self.precision is not None:
            out["precision"] = self.precision
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "CubicSurface":
        return cls(
            p=int(data["p"]),
            coeffs=tuple(int(c) for c in data["coeffs"]),
            precision=data.get("precision"),
        )

    def save_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load_json(cls, path) -> "CubicSurface":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def fermat_cubic() -> tuple[int, ...]:
    """Coefficients of x0^3 + x1^3 + x2^3 + x3^3."""
    w = [0] * 20
    for v in range(4):
        mono = tuple(3 if i == v else 0 for i in range(4))
        w[MONOMIAL_INDEX[mono]] = 1
    return tuple(w)


def clebsch_cubic() -> tuple[int, ...]:
    """The diagonal surface sum(y_i^3) on the hyperplane sum(y_i) = 0.

    Eliminating the fifth coordinate leaves -3*sum_{i != j} x_i^2 x_j
    - 6*sum_{i<j<k} x_i x_j x_k (the pure cubes cancel).
    """
    w = [0] * 20
    for i in range(4):
        for j in range(4):
            if i == j:
                continue
            mono = [0, 0, 0, 0]
            mono[i] += 2
            mono[j] += 1
            w[MONOMIAL_INDEX[tuple(mono)]] -= 3
    for i in range(4):
        for j in range(i + 1, 4):
            for k in range(j + 1, 4):
                mono = [0, 0, 0, 0]
                mono[i] += 1
                mono[j] += 1
                mono[k] += 1
                w[MONOMIAL_INDEX[tuple(mono)]] -= 6
    return tuple(w)


def cayley_cubic() -> tuple[int, ...]:
    """The four-nodal surface x0 x1 x2 + x0 x1 x3 + x0 x2 x3 + x1 x2 x3."""
    w = [0] * 20
    for i in range(4):
        mono = tuple(0 if v == i else 1 for v in range(4))
        w[MONOMIAL_INDEX[mono]] = 1
    return tuple(w)


def transform_cubic(coeffs, matrix):
    """Coefficients of f(M x); works over any commutative coefficient ring."""
    rows = [list(r) for r in matrix]
    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        raise ValueError("expected a 4x4 matrix")
    out: dict = {}
    for alpha, c in zip(MONOMIALS, coeffs):
        if not c:
            continue
        acc = {_ZERO4: c}
        for v in range(4):
            lin = {}
            for j in range(4):
                if rows[v][j] != 0:
                    key = tuple(1 if w == j else 0 for w in range(4))
                    lin[key] = rows[v][j]
            for _ in range(alpha[v]):
                acc = _dict_mul(acc, lin)
        for mono, val in acc.items():
            out[mono] = out.get(mono, 0) + val
    return [out.get(m, 0) for m in MONOMIALS]


# ---------------------------------------------------------------------------
# residue-level counting


def _reduced(coeffs, p: int) -> np.ndarray:
    w = np.array([c % p for c in coeffs], dtype=np.int64)
    if not w.any():
        raise ZeroReduction("all coefficients vanish mod p; normalize the content first")
    return w


def fp_line_count(coeffs, p: int) -> int:
    """Number of lines on the reduced surface over the residue field F_p."""
    g = _grids(p)
    w = _reduced(coeffs, p)
    total = 0
    for ci in range(6):
        eqs = np.tensordot(CHART_TABLES[ci], w, axes=([1], [0]))  # (4, 35)
        vals = eqs @ g["mono_vals"] % p  # (4, n)
        mask = ~vals.any(axis=0)
        for cj in range(ci):
            mask &= g["minor_vals"][ci, cj] == 0
        total += int(mask.sum())
    return total


def _rank_mod(matrix: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over F_p (entries stay below p**2)."""
    m = matrix % p
    rank = 0
    for col in range(m.shape[1]):
        pivots = np.nonzero(m[rank:, col])[0]
        if pivots.size == 0:
            continue
        r = rank + int(pivots[0])
        if r != rank:
            m[[rank, r]] = m[[r, rank]]
        m[rank] = m[rank] * pow(int(m[rank, col]), -1, p) % p
        others = np.nonzero(m[:, col])[0]
        others = others[others != rank]
        if others.size:
            m[others] = (m[others] - np.outer(m[others, col], m[rank])) % p
        rank += 1
        if rank == m.shape[0]:
            break
    return rank


def is_smooth_over_fp(coeffs, p: int) -> bool:
    """True iff the reduction mod p is smooth over the algebraic closure.

    Smoothness is decided exactly by a Macaulay rank test: the singular
    system has no projective zero over any extension of F_p iff multiples of
    its forms span the whole space of forms at the system's saturation
    degree.  Rank over F_p is unchanged by field extension, so singular
    points at conjugate non-rational places are caught as well as rational
    ones.  Away from characteristic 3 the singular system is the four
    partial derivatives (the surface equation is their Euler combination);
    in characteristic 3 the surface equation is added explicitly.
    """
    check_odd_prime(p)
    w = _reduced(coeffs, p)
    quadrics = np.zeros((4, 10), dtype=np.int64)
    for v in range(4):
        for src, dst, mult in _GRAD_TERMS[v]:
            quadrics[v, dst] += int(w[src]) * mult
    quadrics %= p
    if p != 3:
        rows = np.zeros((80, 56), dtype=np.int64)
        for v in range(4):
            block = rows[20 * v : 20 * (v + 1)]
            block[np.arange(20)[:, None], _MACAULAY_D3D2] = quadrics[v]
        return _rank_mod(rows, p) == 56
    rows = np.zeros((160, 84), dtype=np.int64)
    for v in range(4):
        block = rows[35 * v : 35 * (v + 1)]
        block[np.arange(35)[:, None], _MACAULAY_D4D2] = quadrics[v]
    fblock = rows[140:160]
    fblock[np.arange(20)[:, None], _MACAULAY_D3D3] = w
    return _rank_mod(rows, p) == 84


# ---------------------------------------------------------------------------
# exact lifting


def _exact_chart_system(coeffs, ci: int) -> list[list[int]]:
    table = CHART_TABLES[ci]
    sys_polys = []
    for k in range(4):
        poly = [0] * 35
        for ai, c in enumerate(coeffs):
            if not c:
                continue
            row = table[k, ai]
            for m in range(35):
                if row[m]:
                    poly[m] += c * int(row[m])
        sys_polys.append(poly)
    return sys_polys


def _normalize_system(sys_polys, p: int) -> list[list[int]]:
    out = []
    for poly in sys_polys:
        nz = [c for c in poly if c]
        if not nz:
            out.append(list(poly))
            continue
        g = min(valuation_int(c, p) for c in nz)
        if g:
            q = p**g
            poly = [c // q for c in poly]
        out.append(list(poly))
    return out


def _shift_system(sys_polys, center, p: int) -> list[list[int]]:
    """Substitute x = center + p*y exactly, equation by equation."""
    shifted = []
    for poly in sys_polys:
        new = [0] * 35
        for m_idx, c in enumerate(poly):
            if not c:
                continue
            ea, eb, ec, ed = ABCD_MONOMIALS[m_idx]
            for ia in range(ea + 1):
                fa = math.comb(ea, ia) * center[0] ** (ea - ia) * p**ia
                for ib in range(eb + 1):
                    fb = math.comb(eb, ib) * center[1] ** (eb - ib) * p**ib
                    for ic in range(ec + 1):
                        fc = math.comb(ec, ic) * center[2] ** (ec - ic) * p**ic
                        for idd in range(ed + 1):
                            fd = math.comb(ed, idd) * center[3] ** (ed - idd) * p**idd
                            new[ABCD_INDEX[(ia, ib, ic, idd)]] += c * fa * fb * fc * fd
        shifted.append(new)
    return shifted


def _mono_values_at(point, p: int) -> list[int]:
    vals = []
    for mono in ABCD_MONOMIALS:
        acc = 1
        for v, e in enumerate(mono):
            for _ in range(e):
                acc = acc * point[v] % p
        vals.append(acc)
    return vals


def _system_values_mod(sys_polys, mono_vals_pt, p: int) -> list[int]:
    return [sum(c * v for c, v in zip(poly, mono_vals_pt)) % p for poly in sys_polys]


def _jacobian_mod(sys_polys, mono_vals_pt, p: int) -> list[list[int]]:
    jac = []
    for poly in sys_polys:
        row = []
        for v in range(4):
            acc = 0
            for src, dst, mult in _ABCD_DERIV[v]:
                c = poly[src]
                if c:
                    acc += c * mult * mono_vals_pt[dst]
            row.append(acc % p)
        jac.append(row)
    return jac


def _det4_mod(rows, p: int) -> int:
    m = [r[:] for r in rows]
    det = 1
    for col in range(4):
        piv = None
        for r in range(col, 4):
            if m[r][col] % p:
                piv = r
                break
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        inv = pow(m[col][col], -1, p)
        det = det * m[col][col] % p
        for r in range(col + 1, 4):
            factor = m[r][col] * inv % p
            if factor:
                for cc in range(col, 4):
                    m[r][cc] = (m[r][cc] - factor * m[col][cc]) % p
    return det % p


def _residue_solutions(sys_polys, p: int, grid) -> list[tuple[int, int, int, int]]:
    vecs = np.array([[c % p for c in poly] for poly in sys_polys], dtype=np.int64)
    vals = vecs @ grid["mono_vals"] % p
    mask = ~vals.any(axis=0)
    idx = np.flatnonzero(mask)
    coords = grid["coords"]
    return [tuple(int(coords[v, i]) for v in range(4)) for i in idx]


@dataclass(frozen=True)
class PadicCountReport:
    """Diagnostics from an exact line count over Q_p."""

    count: int
    residue_candidates: int
    max_depth: int
    content_removed: int

    @property
    def depth0_only(self) -> bool:
        return self.max_depth == 0


def count_padic_lines(
    coeffs,
    p: int | None = None,
    max_depth: int = 60,
    max_live: int = 4000,
    report: bool = False,
):
    """Exact number of lines on the surface over Q_p.

    ``coeffs`` may be a CubicSurface (which carries its own prime) or a
    plain coefficient sequence together with ``p``.  A common power of p in
    the coefficients is divided out first.  A count outside the admissible
    set raises SingularSurface, and refinement that fails to isolate lines
    within the depth or branch budget raises DepthExceeded (both indicate
    the surface is not smooth, up to the very generous budgets).
    """
    if isinstance(coeffs, CubicSurface):
        p = coeffs.p
        coeffs = coeffs.coeffs
    if p is None:
        raise ValueError("p is required unless coeffs is a CubicSurface")
    check_odd_prime(p)
    coeffs = [int(c) for c in coeffs]
    if not any(coeffs):
        raise ZeroReduction("the zero form does not define a surface")
    content = min(valuation_int(c, p) for c in coeffs if c)
    if content:
        q = p**content
        coeffs = [c // q for c in coeffs]
    grid = _grids(p)
    w_red = _reduced(coeffs, p)

    total = 0
    n_candidates = 0
    deepest = 0
    live = 0

    def refine(sys_polys, depth, candidates):
        nonlocal total, deepest, live
        deepest = max(deepest, depth)
        for point in candidates:
            mv = _mono_values_at(point, p)
            # the depth-0 candidate mask is built from the raw reduction,
            # which is weaker than the content-normalized system when a
            # chart equation is divisible by p; re-test before lifting
            if any(_system_values_mod(sys_polys, mv, p)):
                continue
            jac = _jacobian_mod(sys_polys, mv, p)
            if _det4_mod(jac, p):
                total += 1
                continue
            if depth + 1 > max_depth:
                raise DepthExceeded(
                    f"line refinement exceeded depth {max_depth}"
                )
            live += 1
            if live > max_live:
                raise DepthExceeded(
                    f"line refinement exceeded {max_live} active branches"
                )
            child = _normalize_system(_shift_system(sys_polys, point, p), p)
            refine(child, depth + 1, _residue_solutions(child, p, grid))

    for ci in range(6):
        eqs_mod = np.tensordot(CHART_TABLES[ci], w_red, axes=([1], [0]))
        vals = eqs_mod @ grid["mono_vals"] % p
        mask = ~vals.any(axis=0)
        for cj in range(ci):
            mask &= grid["minor_vals"][ci, cj] == 0
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            continue
        candidates = [
            tuple(int(grid["coords"][v, i]) for v in range(4)) for i in idx
        ]
        n_candidates += len(candidates)
        exact = _normalize_system(_exact_chart_system(coeffs, ci), p)
        refine(exact, 0, candidates)

    if total not in PADIC_LINE_COUNTS:
        raise SingularSurface(
            f"line count {total} is outside the admissible set; "
            "the surface cannot be smooth"
        )
    if report:
        return PadicCountReport(
            count=total,
            residue_candidates=n_candidates,
            max_depth=deepest,
            content_removed=content,
        )
    return total

"""Integer polynomials read p-adically: Newton polygons, exact root counts
in Q_p and its quadratic extensions, and degree-6 factorization patterns.

Coefficients are exact integers throughout, so every valuation computed here
is exact; truncated p-adic arithmetic never enters. Root counting stratifies
by Newton-polygon slope, rescales each stratum so its roots become units of
the relevant ring of integers, and then refines digit by digit: a residue
digit is accepted exactly when the branch polynomial has a simple root there
(value valuation positive, derivative valuation zero, which is the Hensel
criterion at the candidate), and otherwise the next digit is enumerated. The
refinement depth is bounded in terms of the polynomial discriminant; going
past the bound raises DepthExceeded rather than looping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import intpoly
from .errors import DepthExceeded, InternalInconsistency, NotSquarefree
from .padic import (
    ExtensionDescriptor,
    check_odd_prime,
    quadratic_extensions,
    valuation_int,
)

#: counts a degree-6 pattern can produce (the admissible set over Q_p)
PADIC_LINE_COUNTS = frozenset({0, 1, 2, 3, 5, 7, 9, 15, 27})

_INF = math.inf
_DEPTH_SLACK = 16


@dataclass
class PadicPolynomial:
    """An integer-coefficient polynomial together with a prime p."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        check_odd_prime(self.p)
        c = intpoly.trim(self.coeffs)
        if not c:
            raise ValueError("the zero polynomial is not allowed")
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, x):
        return intpoly.poly_eval(self.coeffs, x)

    def derivative(self) -> "PadicPolynomial":
        return PadicPolynomial(self.p, tuple(intpoly.derivative(self.coeffs)))

    @cached_property
    def discriminant(self) -> int:
        if self.degree < 1:
            return 1
        return intpoly.discriminant(self.coeffs)

    @cached_property
    def newton_polygon(self) -> "NewtonPolygon":
        return newton_polygon(self)

    def __repr__(self) -> str:
        return f"PadicPolynomial(p={self.p}, coeffs={self.coeffs})"


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of (i, v_p(c_i)); segments as (slope, length)."""

    segments: tuple[tuple[Fraction, int], ...]
    first_index: int  # index of the first nonzero coefficient

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        return tuple(s for s, _ in self.segments)

    @property
    def total_length(self) -> int:
        return sum(n for _, n in self.segments)


def newton_polygon(f: PadicPolynomial) -> NewtonPolygon:
    pts = [
        (i, valuation_int(c, f.p)) for i, c in enumerate(f.coeffs) if c != 0
    ]
    first = pts[0][0]
    # monotone-chain lower hull; points are already sorted by abscissa
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2]..pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segments = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segments.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return NewtonPolygon(tuple(segments), first)


# ---------------------------------------------------------------------------
# digit-refinement contexts
#
# Elements are exact: plain ints for Q_p, integer pairs (x, y) = x + y*sqrt(d)
# for the quadratic extensions. Valuations are normalized so the uniformizer
# has valuation 1 (so they double relative to v_p in the ramified cases).


class _BaseContext:
    __slots__ = ("p", "digits", "unit_digits")

    ramification = 1

    def __init__(self, p: int):
        self.p = p
        self.digits = tuple(range(p))
        self.unit_digits = tuple(range(1, p))

    def val(self, x):
        return valuation_int(x, self.p) if x else _INF

    def eval_at(self, coeffs, x):
        acc = 0
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    def scale_index(self, c, i):
        return c * i

    def compose(self, coeffs, delta):
        """Coefficients of H(delta + p*Y)."""
        return intpoly.compose_linear(coeffs, delta, self.p)


class _ExtContext:
    __slots__ = ("p", "d", "ram", "digits", "unit_digits")

    def __init__(self, ext: ExtensionDescriptor):
        self.p = ext.p
        self.d = ext.radicand
        self.ram = ext.is_ramified
        p = ext.p
        if self.ram:
            self.digits = tuple((a, 0) for a in range(p))
            self.unit_digits = tuple((a, 0) for a in range(1, p))
        else:
            self.digits = tuple((a, b) for a in range(p) for b in range(p))
            self.unit_digits = tuple(
                (a, b) for a in range(p) for b in range(p) if a or b
            )

    def val(self, z):
        x, y = z
        if self.ram:
            vx = 2 * valuation_int(x, self.p) if x else _INF
            vy = 2 * valuation_int(y, self.p) + 1 if y else _INF
        else:
            vx = valuation_int(x, self.p) if x else _INF
            vy = valuation_int(y, self.p) if y else _INF
        return min(vx, vy)

    def mul(self, z, w):
        a, b = z
        c, e = w
        return (a * c + self.d * b * e, a * e + b * c)

    def mul_uniformizer(self, z):
        x, y = z
        if self.ram:
            return (self.d * y, x)
        return (self.p * x, self.p * y)

    def eval_at(self, coeffs, z):
        acc = (0, 0)
        for c in reversed(coeffs):
            acc = self.mul(acc, z)
            acc = (acc[0] + c[0], acc[1] + c[1])
        return acc

    def scale_index(self, c, i):
        return (i * c[0], i * c[1])

    def compose(self, coeffs, delta):
        """Coefficients of H(delta + pi*Y) in pair arithmetic."""
        out: list[tuple[int, int]] = []
        for c in reversed(coeffs):
            nxt = [(0, 0)] * (len(out) + 1)
            for j, oc in enumerate(out):
                t = self.mul(oc, delta)
                nxt[j] = (nxt[j][0] + t[0], nxt[j][1] + t[1])
                u = self.mul_uniformizer(oc)
                nxt[j + 1] = (nxt[j + 1][0] + u[0], nxt[j + 1][1] + u[1])
            nxt[0] = (nxt[0][0] + c[0], nxt[0][1] + c[1])
            out = nxt
        return out


def _count_integral(ctx, coeffs, depth, bound, units_only):
    """Roots of the branch polynomial in the ring of integers of K.

    ``coeffs`` is unnormalized (content is subtracted on the fly, never
    divided out, so everything stays an exact integer).
    """
    content = min(ctx.val(c) for c in coeffs)
    if content == _INF:
        raise InternalInconsistency("branch polynomial vanished identically")
    deriv = [ctx.scale_index(c, i) for i, c in enumerate(coeffs)][1:]
    total = 0
    digit_set = ctx.unit_digits if units_only else ctx.digits
    for delta in digit_set:
        if ctx.val(ctx.eval_at(coeffs, delta)) - content < 1:
            continue
        if ctx.val(ctx.eval_at(deriv, delta)) - content == 0:
            # simple residue root: exactly one root of the branch lifts it
            total += 1
            continue
        if depth + 1 > bound:
            raise DepthExceeded(
                f"refinement past depth {bound}; input may be pathological"
            )
        total += _count_integral(
            ctx, ctx.compose(coeffs, delta), depth + 1, bound, False
        )
    return total


def _stratum_coeffs_base(ctx, coeffs, t):
    """F(p^t * Y) scaled to integer coefficients with content removed."""
    d = len(coeffs) - 1
    shift = -t * d if t < 0 else 0
    out = [c * ctx.p ** (t * i + shift) for i, c in enumerate(coeffs)]
    g = min(valuation_int(c, ctx.p) for c in out if c)
    if g:
        q = ctx.p**g
        out = [c // q for c in out]
    return out


def _stratum_coeffs_ext(ctx, coeffs, m_pi):
    """F(pi^m * Y) * pi^shift as exact pairs (no content division).

    The uniformizer is p itself in the unramified extension and sqrt(d)
    (whose square is the radicand) in the ramified ones.
    """
    d = len(coeffs) - 1
    shift = -m_pi * d if m_pi < 0 else 0
    out = []
    for i, c in enumerate(coeffs):
        e = m_pi * i + shift
        if not ctx.ram:
            out.append((c * ctx.p**e, 0))
        elif e % 2 == 0:
            out.append((c * ctx.d ** (e // 2), 0))
        else:
            out.append((0, c * ctx.d ** ((e - 1) // 2)))
    return out


def count_roots(f: PadicPolynomial, ext: ExtensionDescriptor | None = None) -> int:
    """Number of distinct roots of f in Q_p (ext=None) or in Q_p(sqrt d).

    Requires f squarefree (nonzero discriminant); raises NotSquarefree
    otherwise. Counts are exact.
    """
    if ext is not None and ext.p != f.p:
        raise ValueError("extension and polynomial disagree on p")
    if f.degree >= 1 and f.discriminant == 0:
        raise NotSquarefree("polynomial has a repeated root")
    coeffs = list(f.coeffs)
    total = 0
    zeros = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        zeros += 1
    if zeros > 1:
        raise NotSquarefree("X^2 divides the polynomial")
    total += zeros  # 0 lies in every K
    if len(coeffs) <= 1:
        return total

    e = 1 if ext is None else ext.ramification_index
    ctx = _BaseContext(f.p) if ext is None else _ExtContext(ext)
    vdisc = valuation_int(f.discriminant, f.p) if f.discriminant not in (1, -1) else 0
    stripped = PadicPolynomial(f.p, tuple(coeffs))
    for slope, _length in stripped.newton_polygon.segments:
        s = -slope  # valuation of the roots collected by this segment
        m = s * e
        if m.denominator != 1:
            continue  # valuation outside the value group of K
        m_pi = int(m)
        if ext is None:
            stratum = _stratum_coeffs_base(ctx, coeffs, m_pi)
        else:
            stratum = _stratum_coeffs_ext(ctx, coeffs, m_pi)
        bound = 2 * e * vdisc + 2 * len(coeffs) * abs(m_pi) + _DEPTH_SLACK
        total += _count_integral(ctx, stratum, 0, bound, units_only=True)
    return total


@dataclass(frozen=True)
class FactorPattern:
    """Counts of linear and irreducible quadratic factors over Q_p."""

    linear: int
    quadratic: int


def factor_pattern(f: PadicPolynomial) -> FactorPattern:
    """(number of roots in Q_p, number of irreducible quadratic factors).

    Quadratic factors are counted through the three quadratic extensions:
    each contributes two extra roots to exactly one of them.
    """
    ell = count_roots(f)
    q = 0
    for ext in quadratic_extensions(f.p):
        n_ext = count_roots(f, ext)
        extra = n_ext - ell
        if extra < 0 or extra % 2:
            raise InternalInconsistency(
                f"extension root count {n_ext} incompatible with {ell} rational roots"
            )
        q += extra // 2
    rest = f.degree - ell - 2 * q
    if rest < 0 or rest in (1, 2):
        raise InternalInconsistency(
            f"pattern ({ell}, {q}) impossible for degree {f.degree}"
        )
    return FactorPattern(ell, q)


def line_count_from_pattern(pattern: FactorPattern) -> int:
    """Line count determined by a degree-6 factorization pattern."""
    ell, q = pattern.linear, pattern.quadratic
    return 2 * ell + q + ell * (ell - 1) // 2

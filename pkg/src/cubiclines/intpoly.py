"""Exact arithmetic on integer polynomials and integer matrices.

Polynomials are lists/tuples of Python ints in ascending degree order
(``c[0]`` is the constant term). Everything here is exact: determinants via
fraction-free Bareiss elimination, resultants via the Sylvester matrix,
interpolation through rationals with an integrality check at the end.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import InternalInconsistency


# ---------------------------------------------------------------------------
# basic polynomial ops


def trim(coeffs) -> list[int]:
    """Drop trailing zero coefficients; the zero polynomial becomes []."""
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return c


def degree(coeffs) -> int:
    c = trim(coeffs)
    return len(c) - 1 if c else -1


def poly_add(a, b) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def poly_mul(a, b) -> list[int]:
    a, b = trim(a), trim(b)
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


def poly_scale(a, c) -> list[int]:
    return trim([c * x for x in a])


def poly_eval(a, x):
    acc = 0
    for c in reversed(list(a)):
        acc = acc * x + c
    return acc


def poly_eval_mod(a, x, m) -> int:
    acc = 0
    for c in reversed(list(a)):
        acc = (acc * x + c) % m
    return acc


def derivative(a) -> list[int]:
    return trim([i * c for i, c in enumerate(a)][1:])


def compose_linear(a, s, t) -> list[int]:
    """Return coefficients of a(s + t*X)."""
    out: list[int] = []
    for c in reversed(trim(a)):
        # out <- out*(s + t*X) + c
        nxt = [0] * (len(out) + 1)
        for j, oc in enumerate(out):
            nxt[j] += s * oc
            nxt[j + 1] += t * oc
        nxt[0] += c
        out = nxt
    return trim(out)


def content(a) -> int:
    g = 0
    for c in a:
        g = gcd(g, abs(c))
    return g


def poly_divexact(a, b) -> list[int]:
    """Exact division a / b over Q, errors if the division is not exact."""
    a = [Fraction(c) for c in trim(a)]
    b = [Fraction(c) for c in trim(b)]
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return []
    if len(a) < len(b):
        raise InternalInconsistency("polynomial division is not exact")
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = a[:]
    lb = b[-1]
    for k in range(len(q) - 1, -1, -1):
        q[k] = r[len(b) - 1 + k] / lb
        if q[k]:
            for j, cb in enumerate(b):
                r[j + k] -= q[k] * cb
    if any(x != 0 for x in r):
        raise InternalInconsistency("polynomial division is not exact")
    out = []
    for x in q:
        if x.denominator != 1:
            raise InternalInconsistency("exact quotient is not integral")
        out.append(int(x))
    return trim(out)


# ---------------------------------------------------------------------------
# determinants, resultants


def bareiss_det(rows) -> int:
    """Determinant of an integer matrix, fraction-free (exact)."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * piv - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = piv
    return sign * m[n - 1][n - 1]


def det_mod(rows, p) -> int:
    """Determinant modulo a prime p (Gaussian elimination)."""
    m = [[c % p for c in r] for r in rows]
    n = len(m)
    det = 1
    for k in range(n):
        piv = None
        for i in range(k, n):
            if m[i][k]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = (-det) % p
        a = m[k][k]
        det = det * a % p
        inv = pow(a, -1, p)
        for i in range(k + 1, n):
            f = m[i][k] * inv % p
            if f:
                row_i = m[i]
                row_k = m[k]
                for j in range(k, n):
                    row_i[j] = (row_i[j] - f * row_k[j]) % p
    return det


def sylvester_matrix(a, b) -> list[list[int]]:
    a, b = trim(a), trim(b)
    da, db = len(a) - 1, len(b) - 1
    if da < 0 or db < 0:
        raise ValueError("sylvester matrix of the zero polynomial")
    n = da + db
    rows = []
    ra = list(reversed(a))
    rb = list(reversed(b))
    for i in range(db):
        rows.append([0] * i + ra + [0] * (n - da - 1 - i))
    for i in range(da):
        rows.append([0] * i + rb + [0] * (n - db - 1 - i))
    return rows


def resultant(a, b) -> int:
    """Res(a, b) for integer polynomials, exact."""
    a, b = trim(a), trim(b)
    if not a or not b:
        return 0
    da, db = len(a) - 1, len(b) - 1
    if da == 0 and db == 0:
        return 1
    if da == 0:
        return a[0] ** db
    if db == 0:
        return b[0] ** da
    return bareiss_det(sylvester_matrix(a, b))


def resultant_mod(a, b, p) -> int:
    """Res(a, b) mod p. Degrees must match the integer polynomials' degrees."""
    a, b = trim(a), trim(b)
    if not a or not b:
        return 0
    da, db = len(a) - 1, len(b) - 1
    if da == 0 and db == 0:
        return 1
    if da == 0:
        return pow(a[0], db, p)
    if db == 0:
        return pow(b[0], da, p)
    return det_mod(sylvester_matrix(a, b), p)


def discriminant(f) -> int:
    """Discriminant of an integer polynomial (exact integer)."""
    f = trim(f)
    d = len(f) - 1
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    if d == 1:
        return 1
    res = resultant(f, derivative(f))
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    num = sign * res
    lc = f[-1]
    if num % lc:
        raise InternalInconsistency("discriminant division not exact")
    return num // lc


# ---------------------------------------------------------------------------
# interpolation

def interpolate_integer(xs, ys) -> list[int]:
    """Exact polynomial through (xs[i], ys[i]); result must be integral."""
    n = len(xs)
    if n != len(ys):
        raise ValueError("mismatched interpolation data")
    # Newton divided differences over Q
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # expand Newton form to monomial coefficients
    poly = [Fraction(0)] * n
    acc = [Fraction(1)]  # product of (X - xs[i]) built up
    for j in range(n):
        for k, c in enumerate(acc):
            poly[k] += coef[j] * c
        nxt = [Fraction(0)] * (len(acc) + 1)
        for k, c in enumerate(acc):
            nxt[k] -= xs[j] * c
            nxt[k + 1] += c
        acc = nxt
    out = []
    for c in poly:
        if c.denominator != 1:
            raise InternalInconsistency("interpolant is not integral")
        out.append(int(c))
    return trim(out)


# ---------------------------------------------------------------------------
# symmetric-function machinery (Newton identities)


def power_sums_from_monic(coeffs, k_max) -> list[int]:
    """Power sums p_0..p_k_max of the roots of a monic integer polynomial.

    ``coeffs`` ascending with coeffs[-1] == 1.
    """
    c = trim(coeffs)
    if not c or c[-1] != 1:
        raise ValueError("polynomial must be monic")
    d = len(c) - 1
    # signed elementary symmetric functions: e_k = (-1)^k * c[d-k]
    e = [0] * (d + 1)
    e[0] = 1
    for k in range(1, d + 1):
        e[k] = (-1) ** k * c[d - k]
    p = [d]
    for k in range(1, k_max + 1):
        acc = 0
        for i in range(1, min(k, d) + 1):
            acc += (-1) ** (i - 1) * e[i] * p[k - i]
        if k <= d:
            # the i == k term used p_0 = d, Newton's identity wants k*e_k
            acc += (-1) ** (k - 1) * e[k] * (k - d)
        p.append(acc)
    return p


def elementary_from_power_sums(s, k_max) -> list[int]:
    """Elementary symmetric functions E_0..E_k_max from power sums.

    ``s[i]`` is the i-th power sum (s[0] unused). All E_k must come out
    integral, which holds when the underlying multiset consists of algebraic
    integers closed under conjugation.
    """
    e = [1]
    for k in range(1, k_max + 1):
        acc = 0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * s[i]
        if acc % k:
            raise InternalInconsistency("Newton identity division not exact")
        e.append(acc // k)
    return e


def power_sums_from_monic_mod(coeffs, k_max, m) -> list[int]:
    """power_sums_from_monic reduced mod m (m prime, larger than the degree)."""
    c = trim(coeffs)
    d = len(c) - 1
    e = [0] * (d + 1)
    e[0] = 1
    for k in range(1, d + 1):
        e[k] = (-1) ** k * c[d - k] % m
    p = [d % m]
    for k in range(1, k_max + 1):
        acc = 0
        for i in range(1, min(k, d) + 1):
            acc += (-1) ** (i - 1) * e[i] * p[k - i]
        if k <= d:
            acc += (-1) ** (k - 1) * e[k] * (k - d)
        p.append(acc % m)
    return p


def elementary_from_power_sums_mod(s, k_max, m) -> list[int]:
    e = [1]
    for k in range(1, k_max + 1):
        acc = 0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * s[i]
        e.append(acc * pow(k, -1, m) % m)
    return e

"""Scalars of Q_p and its quadratic extensions, for odd primes p.

A nonzero scalar is stored canonically as unit * p^v with the unit known to
``precision`` base-p digits (relative precision). Zero is a distinguished
element with infinite valuation and no unit part. Elements of the three
quadratic extensions Q_p(sqrt d), d in {u, p, u*p} with u the smallest
positive non-residue mod p, are pairs a + b*sqrt(d) of scalars.

Everything errors loudly: requesting digits that were never there raises
PrecisionExhausted, dividing by zero raises ZeroDivisionError.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import PrecisionExhausted

DEFAULT_PRECISION = 32

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond machine-word range."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_odd_prime(p: int) -> int:
    if p == 2:
        raise ValueError("p = 2 is not supported (quadratic extension zoo differs)")
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    return p


def valuation_int(n: int, p: int) -> int:
    """v_p(n) for a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_quadratic_residue(u: int, p: int) -> bool:
    """Is the unit u a square mod the odd prime p."""
    return pow(u % p, (p - 1) // 2, p) == 1


def smallest_nonresidue(p: int) -> int:
    for u in range(2, p):
        if not is_quadratic_residue(u, p):
            return u
    raise ValueError(f"no quadratic non-residue found mod {p}")


@dataclass(frozen=True)
class PadicScalar:
    """Canonical unit * p^v with the unit known mod p^precision."""

    p: int
    v: int
    unit: int
    precision: int

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def valuation(self):
        return math.inf if self.is_zero else self.v

    @classmethod
    def zero(cls, p: int) -> "PadicScalar":
        return cls(p, 0, 0, 0)

    def _check_compatible(self, other: "PadicScalar") -> None:
        if self.p != other.p:
            raise ValueError("mixed primes in scalar arithmetic")

    def with_precision(self, n: int) -> "PadicScalar":
        """Truncate to n digits; raises if n digits were never known."""
        if self.is_zero:
            return self
        if n < 1:
            raise ValueError("precision must be at least one digit")
        if n > self.precision:
            raise PrecisionExhausted(
                f"requested {n} digits, only {self.precision} available"
            )
        return PadicScalar(self.p, self.v, self.unit % self.p**n, n)

    def scale_by_int(self, n: int) -> "PadicScalar":
        """Multiply by an exact integer without precision loss."""
        if n == 0 or self.is_zero:
            return PadicScalar.zero(self.p)
        w = valuation_int(n, self.p)
        u = (self.unit * (n // self.p**w)) % self.p**self.precision
        return PadicScalar(self.p, self.v + w, u, self.precision)

    def __neg__(self) -> "PadicScalar":
        if self.is_zero:
            return self
        return PadicScalar(
            self.p, self.v, (-self.unit) % self.p**self.precision, self.precision
        )

    def __add__(self, other: "PadicScalar") -> "PadicScalar":
        self._check_compatible(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        p = self.p
        v0 = min(self.v, other.v)
        avail = min(self.v + self.precision, other.v + other.precision)
        k = avail - v0
        s = (
            self.unit * p ** (self.v - v0) + other.unit * p ** (other.v - v0)
        ) % p**k
        if s == 0:
            # full cancellation: zero at the available precision
            return PadicScalar.zero(p)
        t = valuation_int(s, p)
        return PadicScalar(p, v0 + t, (s // p**t) % p ** (k - t), k - t)

    def __sub__(self, other: "PadicScalar") -> "PadicScalar":
        return self + (-other)

    def __mul__(self, other: "PadicScalar") -> "PadicScalar":
        self._check_compatible(other)
        if self.is_zero or other.is_zero:
            return PadicScalar.zero(self.p)
        n = min(self.precision, other.precision)
        return PadicScalar(
            self.p, self.v + other.v, (self.unit * other.unit) % self.p**n, n
        )

    def __truediv__(self, other: "PadicScalar") -> "PadicScalar":
        self._check_compatible(other)
        if other.is_zero:
            raise ZeroDivisionError("division by p-adic zero")
        if self.is_zero:
            return self
        n = min(self.precision, other.precision)
        pn = self.p**n
        u = self.unit * pow(other.unit, -1, pn) % pn
        return PadicScalar(self.p, self.v - other.v, u, n)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PadicScalar):
            return NotImplemented
        if self.p != other.p:
            return False
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        if self.v != other.v:
            return False
        n = min(self.precision, other.precision)
        return self.unit % self.p**n == other.unit % self.p**n

    def __hash__(self):
        # units compare modulo the *minimum* precision, so hash only on (p, v)
        return hash((self.p, self.v, self.is_zero))

    def lift(self) -> Fraction:
        """A rational representative agreeing to the known precision."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.v

    def __repr__(self) -> str:
        if self.is_zero:
            return f"PadicScalar(0, p={self.p})"
        return (
            f"PadicScalar({self.unit}*{self.p}^{self.v}"
            f" + O({self.p}^{self.v + self.precision}))"
        )


def make_scalar(n, p: int, precision: int = DEFAULT_PRECISION) -> PadicScalar:
    """Canonical scalar from an integer or Fraction."""
    check_odd_prime(p)
    if precision < 1:
        raise ValueError("precision must be at least one digit")
    if isinstance(n, Fraction):
        if n == 0:
            return PadicScalar.zero(p)
        num = make_scalar(n.numerator, p, precision)
        den = make_scalar(n.denominator, p, precision)
        return num / den
    n = int(n)
    if n == 0:
        return PadicScalar.zero(p)
    v = valuation_int(n, p)
    unit = (n // p**v) % p**precision
    return PadicScalar(p, v, unit, precision)


def is_square(x: PadicScalar) -> bool:
    """Is x a square in Q_p (p odd). Zero counts as a square."""
    if x.is_zero:
        return True
    if x.v % 2:
        return False
    return is_quadratic_residue(x.unit, x.p)


@dataclass(frozen=True)
class ExtensionDescriptor:
    """One of the three quadratic extensions Q_p(sqrt(radicand))."""

    p: int
    radicand: int
    ramification_index: int  # 1 (unramified) or 2 (ramified)
    residue_size: int  # p^2 or p
    name: str

    @property
    def is_ramified(self) -> bool:
        return self.ramification_index == 2


def quadratic_extensions(p: int) -> tuple[ExtensionDescriptor, ...]:
    """The three quadratic extensions of Q_p, for odd p."""
    check_odd_prime(p)
    u = smallest_nonresidue(p)
    return (
        ExtensionDescriptor(p, u, 1, p * p, f"Q_{p}(sqrt {u})"),
        ExtensionDescriptor(p, p, 2, p, f"Q_{p}(sqrt {p})"),
        ExtensionDescriptor(p, u * p, 2, p, f"Q_{p}(sqrt {u * p})"),
    )


@dataclass(frozen=True)
class QuadExtScalar:
    """a + b*sqrt(d) with a, b scalars of Q_p and d the extension radicand."""

    ext: ExtensionDescriptor
    a: PadicScalar
    b: PadicScalar

    @property
    def is_zero(self) -> bool:
        return self.a.is_zero and self.b.is_zero

    @property
    def valuation(self):
        """Element of (1/e)Z, as a Fraction (math.inf for zero)."""
        if self.is_zero:
            return math.inf
        if self.ext.ramification_index == 1:
            return Fraction(min(self.a.valuation, self.b.valuation))
        vb = math.inf if self.b.is_zero else Fraction(self.b.v) + Fraction(1, 2)
        va = math.inf if self.a.is_zero else Fraction(self.a.v)
        return min(va, vb)

    def _check(self, other: "QuadExtScalar") -> None:
        if self.ext != other.ext:
            raise ValueError("mixed extensions in arithmetic")

    def __add__(self, other: "QuadExtScalar") -> "QuadExtScalar":
        self._check(other)
        return QuadExtScalar(self.ext, self.a + other.a, self.b + other.b)

    def __neg__(self) -> "QuadExtScalar":
        return QuadExtScalar(self.ext, -self.a, -self.b)

    def __sub__(self, other: "QuadExtScalar") -> "QuadExtScalar":
        return self + (-other)

    def __mul__(self, other: "QuadExtScalar") -> "QuadExtScalar":
        self._check(other)
        d = self.ext.radicand
        a = self.a * other.a + (self.b * other.b).scale_by_int(d)
        b = self.a * other.b + self.b * other.a
        return QuadExtScalar(self.ext, a, b)

    def conjugate(self) -> "QuadExtScalar":
        return QuadExtScalar(self.ext, self.a, -self.b)

    def norm(self) -> PadicScalar:
        """Field norm a^2 - d*b^2, an element of Q_p."""
        return self.a * self.a - (self.b * self.b).scale_by_int(self.ext.radicand)

    def inverse(self) -> "QuadExtScalar":
        if self.is_zero:
            raise ZeroDivisionError("inverting zero in a quadratic extension")
        n = self.norm()
        if n.is_zero:
            # the norm of a nonzero element cannot vanish in a field, so the
            # computed digits simply ran out
            raise PrecisionExhausted("norm vanished to available precision")
        conj = self.conjugate()
        return QuadExtScalar(self.ext, conj.a / n, conj.b / n)

    def __truediv__(self, other: "QuadExtScalar") -> "QuadExtScalar":
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("division by zero in a quadratic extension")
        return self * other.inverse()

    def __repr__(self) -> str:
        return f"QuadExtScalar({self.a!r} + ({self.b!r})*sqrt({self.ext.radicand}))"


def ext_scalar(ext: ExtensionDescriptor, a, b, precision: int = DEFAULT_PRECISION) -> QuadExtScalar:
    """Convenience constructor from integers/Fractions."""
    return QuadExtScalar(
        ext, make_scalar(a, ext.p, precision), make_scalar(b, ext.p, precision)
    )

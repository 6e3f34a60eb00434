"""Exact cyclotomic-rational numbers and float tolerance helpers.

A :class:`CycloNumber` is an element of Q(zeta_N) stored as its remainder
modulo the N-th cyclotomic polynomial, i.e. as a coefficient vector of length
phi(N) over the power basis 1, zeta, ..., zeta^(phi(N)-1).  Numbers of
different orders combine by promotion to the lcm order.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence, Union

DEFAULT_TOL = 1e-10

RationalLike = Union[int, Fraction]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients (lowest degree first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    # x^n - 1 divided by Phi_d for every proper divisor d
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _exact_divide(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _exact_divide(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    quot = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for shift in range(len(quot) - 1, -1, -1):
        c = num[shift + len(den) - 1] // lead
        quot[shift] = c
        if c:
            for j, dj in enumerate(den):
                num[shift + j] -= c * dj
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return quot


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


def _reduce_poly(order: int, raw: Sequence[Fraction]) -> tuple[Fraction, ...]:
    phi = cyclotomic_polynomial(order)
    deg = len(phi) - 1
    coeffs = [Fraction(c) for c in raw]
    # Phi_N is monic, so long division needs no rational inversion
    for top in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[top]
        if c:
            base = top - deg
            for j in range(deg):
                if phi[j]:
                    coeffs[base + j] -= c * phi[j]
            coeffs[top] = Fraction(0)
    coeffs = coeffs[:deg] + [Fraction(0)] * max(0, deg - len(coeffs))
    return tuple(coeffs)


def _coerce_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class CycloNumber:
    """Immutable element of the cyclotomic field Q(zeta_order)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable):
        # trusted constructor: coeffs already reduced, length phi(order)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("CycloNumber is immutable")

    # -- construction -----------------------------------------------------
    @classmethod
    def rational(cls, value, order: int = 1) -> "CycloNumber":
        deg = euler_phi(order)
        return cls(order, (_coerce_fraction(value),) + (Fraction(0),) * (deg - 1))

    @classmethod
    def root_of_unity(cls, order: int, power: int = 1) -> "CycloNumber":
        raw = [Fraction(0)] * order
        raw[power % order] = Fraction(1)
        return cyclo_reduce(order, raw)

    @classmethod
    def coerce(cls, value) -> "CycloNumber":
        if isinstance(value, CycloNumber):
            return value
        if isinstance(value, dict):
            order = int(value["order"])
            coeffs = [_coerce_fraction(c) for c in value["coeffs"]]
            if len(coeffs) > order:
                raise ValueError(f"at most {order} coefficients expected, got {len(coeffs)}")
            # reduced (phi(order)) and raw (order) coefficient lists are both accepted
            return cyclo_reduce(order, coeffs + [Fraction(0)] * (order - len(coeffs)))
        return cls.rational(value)

    # -- promotion --------------------------------------------------------
    def promote(self, order: int) -> "CycloNumber":
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot promote order {self.order} to {order}")
        if self.is_rational():
            return CycloNumber.rational(self.coeffs[0], order)
        step = order // self.order
        raw = [Fraction(0)] * order
        for j, c in enumerate(self.coeffs):
            raw[j * step] = c
        return cyclo_reduce(order, raw)

    def _common(self, other) -> tuple["CycloNumber", "CycloNumber"]:
        if not isinstance(other, CycloNumber):
            other = CycloNumber.rational(_coerce_fraction(other), self.order)
            return self, other
        if other.order == self.order:
            return self, other
        if self.is_rational():
            return CycloNumber.rational(self.coeffs[0], other.order), other
        if other.is_rational():
            return self, CycloNumber.rational(other.coeffs[0], self.order)
        order = math.lcm(self.order, other.order)
        return self.promote(order), other.promote(order)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return CycloNumber(a.order, (x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.order, (-c for c in self.coeffs))

    def __sub__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return CycloNumber(a.order, (x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CycloNumber):
            try:
                r = _coerce_fraction(other)
            except TypeError:
                return NotImplemented
            return CycloNumber(self.order, (c * r for c in self.coeffs))
        if other.is_rational():
            r = other.coeffs[0]
            return CycloNumber(self.order, (c * r for c in self.coeffs))
        if self.is_rational():
            r = self.coeffs[0]
            return CycloNumber(other.order, (c * r for c in other.coeffs))
        a, b = self._common(other)
        deg = len(a.coeffs)
        if deg == 1:
            return CycloNumber(a.order, (a.coeffs[0] * b.coeffs[0],))
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycloNumber(a.order, _reduce_poly(a.order, prod))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, CycloNumber):
            return self * other.inverse()
        try:
            r = _coerce_fraction(other)
        except TypeError:
            return NotImplemented
        if r == 0:
            raise ZeroDivisionError("division by zero")
        return CycloNumber(self.order, (c / r for c in self.coeffs))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloNumber.rational(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, k: int) -> "CycloNumber":
        """Apply the automorphism zeta -> zeta^k (k coprime to the order)."""
        if math.gcd(k, self.order) != 1:
            raise ValueError("Galois exponent must be coprime to the order")
        raw = [Fraction(0)] * self.order
        for j, c in enumerate(self.coeffs):
            if c:
                raw[(j * k) % self.order] += c
        return cyclo_reduce(self.order, raw)

    def conjugate(self) -> "CycloNumber":
        return self.galois(-1 % self.order) if self.order > 2 else self

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return CycloNumber.rational(1 / self.coeffs[0], self.order)
        # x^{-1} = (product of the other Galois conjugates) / norm(x)
        others = CycloNumber.rational(1, self.order)
        for k in range(2, self.order):
            if math.gcd(k, self.order) == 1:
                others = others * self.galois(k)
        norm = self * others
        return others / norm.to_fraction()

    # -- comparison / embedding --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (CycloNumber, int, Fraction)):
            try:
                a, b = self._common(other)
            except TypeError:
                return NotImplemented
            return a.coeffs == b.coeffs
        return NotImplemented

    def __hash__(self):
        # equal numbers hash equal when they share an order or are rational
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def sort_key(self) -> tuple:
        return (self.order, self.coeffs)

    def to_complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.order)
        total = 0j
        for j, c in enumerate(self.coeffs):
            if c:
                total += float(c) * z**j
        return total

    __complex__ = to_complex

    def __float__(self):
        return self.to_complex().real

    def __repr__(self):
        return f"CycloNumber({self.order}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        return format_cyclo(self)


def cyclo_reduce(order: int, raw: Sequence) -> CycloNumber:
    """Canonical form of sum_j raw[j] * zeta_order^j."""
    if order < 1:
        raise ValueError("cyclotomic order must be a positive integer")
    if len(raw) != order:
        raise ValueError(f"raw vector must have length {order}, got {len(raw)}")
    return CycloNumber(order, _reduce_poly(order, [_coerce_fraction(c) for c in raw]))


def cyclo_conjugate(x: CycloNumber) -> CycloNumber:
    return x.conjugate()


def zeta(order: int, power: int = 1) -> CycloNumber:
    return CycloNumber.root_of_unity(order, power)


ONE = CycloNumber.rational(1)
ZERO = CycloNumber.rational(0)


def rational_sqrt(value) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if isinstance(value, CycloNumber):
        if not value.is_rational():
            return None
        value = value.to_fraction()
    value = Fraction(value)
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def format_fraction(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def format_cyclo(x: CycloNumber) -> str:
    if x.is_rational():
        return format_fraction(x.coeffs[0])
    terms = []
    for j, c in enumerate(x.coeffs):
        if not c:
            continue
        mono = "" if j == 0 else (f"z{x.order}" if j == 1 else f"z{x.order}^{j}")
        if not mono:
            terms.append(format_fraction(c))
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{format_fraction(c)}*{mono}")
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def approx_equal(a: complex, b: complex, tol: float = DEFAULT_TOL) -> bool:
    return abs(complex(a) - complex(b)) <= tol

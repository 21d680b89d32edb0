"""p-adic floating point scalars and exact ultrametric magnitudes.

A nonzero :class:`PadicScalar` is ``p^val * unit + O(p^(val + digits))`` where
``unit`` is prime to ``p`` and ``digits`` (at most the context precision N) is
the number of base-p digits actually known.  Zeros carry the absolute
precision to which they are known to vanish, or ``None`` for an exact zero.

Magnitudes are never floats: :class:`UltraMag` stores the exponent ``e`` of
``p^(-e)`` as a :class:`fractions.Fraction` (or +/-inf), so comparisons such
as ``alpha < 1`` are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Union

from sympy import isprime

from .errors import (
    DivisionByZero,
    IndeterminateProduct,
    InsufficientPrecision,
    NegativeValuation,
    PrecisionExhausted,
    ZeroDenominator,
)

Rational = Union[int, Fraction]


def split_valuation(n: int, p: int) -> tuple[int, int]:
    """Return ``(v, m)`` with ``n == p**v * m`` and ``m`` prime to ``p``; ``n != 0``."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def valuation(q: Rational, p: int) -> float | int:
    """p-adic valuation of a rational; ``math.inf`` for zero."""
    q = Fraction(q)
    if q == 0:
        return math.inf
    return split_valuation(q.numerator, p)[0] - split_valuation(q.denominator, p)[0]


def legendre(m: int, p: int) -> int:
    """v_p(m!) by Legendre's formula."""
    total, q = 0, p
    while q <= m:
        total += m // q
        q *= p
    return total


@dataclass(frozen=True)
class PrimeContext:
    """The field Q_p together with the number of significant digits carried."""

    p: int
    precision: int = 32
    modulus: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 2 or not isprime(self.p):
            raise ValueError(f"p = {self.p!r} is not a prime")
        if not isinstance(self.precision, int) or self.precision < 1:
            raise ValueError(f"precision must be a positive integer, got {self.precision!r}")
        object.__setattr__(self, "modulus", self.p**self.precision)

    def __call__(self, value: Rational | str | PadicScalar) -> PadicScalar:
        if isinstance(value, PadicScalar):
            if value.ctx != self:
                raise ValueError("scalar belongs to a different context")
            return value
        q = Fraction(value)
        return scalar_from_rational(q.numerator, q.denominator, self)

    def zero(self, abs_prec: int | None = None) -> PadicScalar:
        return PadicScalar._zero(self, abs_prec)

    def vector(self, values) -> tuple[PadicScalar, ...]:
        return tuple(self(v) for v in values)

    def with_precision(self, precision: int) -> PrimeContext:
        return PrimeContext(self.p, precision)


class PadicScalar:
    """Immutable element of Q_p known to finite relative precision."""

    __slots__ = ("ctx", "val", "unit", "digits", "_zero_prec")

    def __init__(self, ctx: PrimeContext, val: int | None, unit: int, digits: int,
                 zero_prec: int | None = None):
        self.ctx = ctx
        self.val = val
        self.unit = unit
        self.digits = digits
        self._zero_prec = zero_prec

    @classmethod
    def _zero(cls, ctx: PrimeContext, abs_prec: int | None = None) -> PadicScalar:
        return cls(ctx, None, 0, 0, abs_prec)

    @classmethod
    def _normalize(cls, ctx: PrimeContext, m: int, v: int, prec: int) -> PadicScalar:
        # value p^v * m known modulo p^prec
        p = ctx.p
        r = prec - v
        if r <= 0:
            return cls._zero(ctx, prec)
        m %= p**r
        if m == 0:
            return cls._zero(ctx, prec)
        w, m = split_valuation(m, p)
        return cls(ctx, v + w, m, r - w)

    @property
    def is_zero(self) -> bool:
        return self.val is None

    @property
    def is_exact_zero(self) -> bool:
        return self.val is None and self._zero_prec is None

    @property
    def abs_prec(self) -> int | float:
        """Absolute precision: the value is known modulo p^abs_prec."""
        if self.val is None:
            return math.inf if self._zero_prec is None else self._zero_prec
        return self.val + self.digits

    def _coerce(self, other) -> PadicScalar:
        if isinstance(other, PadicScalar):
            if other.ctx != self.ctx:
                raise ValueError("cannot mix scalars from different prime contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx(other)
        return NotImplemented

    def _truncate(self, prec: int | float) -> PadicScalar:
        if prec >= self.abs_prec:
            return self
        if self.val is None:
            return PadicScalar._zero(self.ctx, prec)
        return PadicScalar._normalize(self.ctx, self.unit, self.val, prec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.val is None:
            return other._truncate(self.abs_prec)
        if other.val is None:
            return self._truncate(other.abs_prec)
        p = self.ctx.p
        v = min(self.val, other.val)
        m = self.unit * p ** (self.val - v) + other.unit * p ** (other.val - v)
        return PadicScalar._normalize(self.ctx, m, v, min(self.abs_prec, other.abs_prec))

    __radd__ = __add__

    def __neg__(self) -> PadicScalar:
        if self.val is None:
            return self
        return PadicScalar(self.ctx, self.val, (-self.unit) % self.ctx.p**self.digits, self.digits)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact_zero or other.is_exact_zero:
            return PadicScalar._zero(self.ctx)
        if self.val is None or other.val is None:
            a = self.abs_prec if self.val is None else self.val
            b = other.abs_prec if other.val is None else other.val
            return PadicScalar._zero(self.ctx, a + b)
        d = min(self.digits, other.digits)
        return PadicScalar(self.ctx, self.val + other.val,
                           self.unit * other.unit % self.ctx.p**d, d)

    __rmul__ = __mul__

    def inverse(self) -> PadicScalar:
        return invert(self)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * invert(other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * invert(self)

    def __pow__(self, e: int) -> PadicScalar:
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return invert(self) ** (-e)
        result = self.ctx(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def magnitude(self) -> UltraMag:
        return magnitude(self)

    def lift(self) -> Fraction:
        """The rational representative ``p^val * unit`` (0 for zeros)."""
        if self.val is None:
            return Fraction(0)
        return Fraction(self.ctx.p) ** self.val * self.unit

    def agrees_with(self, other) -> bool:
        """True when the two values coincide to their common known precision."""
        return (self - other).is_zero

    def __repr__(self) -> str:
        p = self.ctx.p
        if self.val is None:
            return "0" if self._zero_prec is None else f"O({p}^{self._zero_prec})"
        return f"{p}^{self.val}*{self.unit} + O({p}^{self.abs_prec})"

    def __hash__(self):
        return hash((self.ctx.p, self.val, self.unit, self.digits, self._zero_prec))

    def __eq__(self, other):
        if not isinstance(other, PadicScalar):
            return NotImplemented
        return (self.ctx, self.val, self.unit, self.digits, self._zero_prec) == (
            other.ctx, other.val, other.unit, other.digits, other._zero_prec)


def scalar_from_rational(num: int, den: int, ctx: PrimeContext) -> PadicScalar:
    """Embed ``num/den`` into Q_p with N known digits."""
    if den == 0:
        raise ZeroDenominator("denominator is zero")
    if num == 0:
        return PadicScalar._zero(ctx)
    p, N = ctx.p, ctx.precision
    vn, un = split_valuation(num, p)
    vd, ud = split_valuation(den, p)
    unit = un * pow(ud, -1, ctx.modulus) % ctx.modulus
    return PadicScalar(ctx, vn - vd, unit, N)


def arith(a: PadicScalar, b: PadicScalar, op: str, *, strict: bool = False) -> PadicScalar:
    """Apply ``op`` in {'add', 'sub', 'mul'}.

    A total cancellation yields a zero carrying its absolute precision; with
    ``strict=True`` it raises :class:`PrecisionExhausted` instead.
    """
    if op == "add":
        result = a + b
    elif op == "sub":
        result = a - b
    elif op == "mul":
        return a * b
    else:
        raise ValueError(f"unknown operation {op!r}")
    if strict and result.is_zero and not result.is_exact_zero:
        raise PrecisionExhausted(
            f"all known digits cancelled; result is O({a.ctx.p}^{result.abs_prec})")
    return result


def invert(a: PadicScalar) -> PadicScalar:
    if a.is_zero:
        raise DivisionByZero(f"cannot invert {a!r}")
    mod = a.ctx.p**a.digits
    return PadicScalar(a.ctx, -a.val, pow(a.unit, -1, mod), a.digits)


def magnitude(a: PadicScalar) -> UltraMag:
    return UltraMag.ZERO if a.is_zero else UltraMag(a.val)


def residue(a: PadicScalar, k: int) -> int:
    """The value modulo p^k, as an integer in [0, p^k)."""
    mod = a.ctx.p**k
    if a.is_zero:
        if a.abs_prec < k:
            raise InsufficientPrecision(f"zero is only known modulo p^{a.abs_prec}")
        return 0
    if a.val < 0:
        raise NegativeValuation(f"valuation {a.val} < 0: not a p-adic integer")
    if k > a.abs_prec:
        raise InsufficientPrecision(f"only {a.abs_prec} absolute digits are known, asked for {k}")
    return a.ctx.p**a.val * a.unit % mod


@total_ordering
@dataclass(frozen=True)
class UltraMag:
    """The magnitude ``p^(-exp)``.

    ``exp = +inf`` is the magnitude zero, ``exp = -inf`` the infinite
    magnitude used for Smale parameters at singular points.  Ordering follows
    the magnitude, so a larger exponent compares as smaller.
    """

    exp: Fraction | float

    def __post_init__(self):
        e = self.exp
        if isinstance(e, float):
            if not math.isinf(e):
                raise ValueError("finite exponents must be rational, not float")
        else:
            object.__setattr__(self, "exp", Fraction(e))

    ZERO = None  # type: UltraMag
    ONE = None  # type: UltraMag
    INFINITE = None  # type: UltraMag

    @property
    def is_zero(self) -> bool:
        return self.exp == math.inf

    @property
    def is_infinite(self) -> bool:
        return self.exp == -math.inf

    @property
    def is_finite(self) -> bool:
        return not isinstance(self.exp, float)

    def __lt__(self, other: UltraMag) -> bool:
        if not isinstance(other, UltraMag):
            return NotImplemented
        return self.exp > other.exp

    def __mul__(self, other: UltraMag) -> UltraMag:
        if not isinstance(other, UltraMag):
            return NotImplemented
        if {self.exp, other.exp} == {math.inf, -math.inf}:
            raise IndeterminateProduct("0 * infinity")
        return UltraMag(self.exp + other.exp)

    def __pow__(self, n: int) -> UltraMag:
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        if n == 0:
            return UltraMag.ONE
        return UltraMag(self.exp * n)

    def root(self, k: int) -> UltraMag:
        if k < 1:
            raise ValueError("root order must be at least 1")
        return UltraMag(self.exp / k if self.is_finite else self.exp)

    def inverse(self) -> UltraMag:
        return UltraMag(-self.exp)

    def exp_str(self) -> str:
        if self.is_zero:
            return "inf"
        if self.is_infinite:
            return "-inf"
        return str(self.exp)

    def render(self, p: int) -> str:
        if self.is_zero:
            return "0"
        if self.is_infinite:
            return "inf"
        return f"{p}^({-self.exp})"

    def to_json(self) -> dict:
        return {"exp": self.exp_str(), "inf": self.is_infinite}

    @classmethod
    def from_json(cls, obj: dict) -> UltraMag:
        if obj["inf"]:
            return cls.INFINITE
        if obj["exp"] == "inf":
            return cls.ZERO
        return cls(Fraction(obj["exp"]))

    def __str__(self) -> str:
        return f"p^({-self.exp})" if self.is_finite else self.render(0)


UltraMag.ZERO = UltraMag(math.inf)
UltraMag.ONE = UltraMag(0)
UltraMag.INFINITE = UltraMag(-math.inf)


def mag_ops(x: UltraMag, y: UltraMag | None, op: str, k: int | None = None):
    """Magnitude algebra: 'mul', 'max', 'compare' (returns -1/0/1), 'kth_root'."""
    if op == "mul":
        return x * y
    if op == "max":
        return max(x, y)
    if op == "compare":
        return (x > y) - (x < y)
    if op == "kth_root":
        return x.root(k)
    raise ValueError(f"unknown magnitude operation {op!r}")

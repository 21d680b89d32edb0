"""Square polynomial systems with exact rational coefficients.

Systems are written one polynomial per line in the variables ``x1 .. xn``::

    # sqrt(6)
    x1^2 - 6

Monomials are exponent tuples of length n.  Evaluation, Jacobians and Taylor
coefficients are computed at points given as tuples of :class:`PadicScalar`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import comb, prod

from .errors import ArityMismatch, PolySyntaxError, UnknownVariable
from .ultrascalar import PadicScalar, PrimeContext, UltraMag, legendre

Monomial = tuple[int, ...]


class Polynomial:
    """A polynomial in n variables: a map from exponent tuples to Fractions."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[Monomial, Fraction] | None = None):
        self.n = n
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def constant(cls, n: int, c) -> Polynomial:
        return cls(n, {(0,) * n: Fraction(c)})

    @classmethod
    def variable(cls, n: int, j: int) -> Polynomial:
        return cls(n, {tuple(int(i == j) for i in range(n)): Fraction(1)})

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def __add__(self, other: Polynomial) -> Polynomial:
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Polynomial(self.n, terms)

    def __neg__(self) -> Polynomial:
        return Polynomial(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial) -> Polynomial:
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        return Polynomial(self.n, terms)

    def __pow__(self, e: int) -> Polynomial:
        result = Polynomial.constant(self.n, 1)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def derivative(self, j: int) -> Polynomial:
        terms = {}
        for m, c in self.terms.items():
            if m[j]:
                dm = m[:j] + (m[j] - 1,) + m[j + 1:]
                terms[dm] = c * m[j]
        return Polynomial(self.n, terms)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            mono = "*".join(f"x{j + 1}" + (f"^{e}" if e > 1 else "")
                            for j, e in enumerate(m) if e)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if i == 0:
                out.append(body if c > 0 else "-" + body)
            else:
                out.append(("+ " if c > 0 else "- ") + body)
        return " ".join(out)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"

    def evaluate(self, x, powers=None) -> PadicScalar:
        ctx = x[0].ctx
        if powers is None:
            powers = _powers(x, self.degree)
        total = ctx.zero()
        for m, c in self.terms.items():
            term = ctx(c)
            for j, e in enumerate(m):
                if e:
                    term = term * powers[j][e]
            total = total + term
        return total


def _powers(x, degree: int) -> list[list[PadicScalar]]:
    out = []
    for xj in x:
        row = [xj.ctx(1)]
        for _ in range(max(degree, 0)):
            row.append(row[-1] * xj)
        out.append(row)
    return out


@dataclass(frozen=True)
class PolySystem:
    """n polynomials in n variables."""

    polys: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        n = len(self.polys)
        if n == 0:
            raise ArityMismatch("a system needs at least one equation")
        for f in self.polys:
            if f.n != n:
                raise ArityMismatch(f"{n} equations but a polynomial in {f.n} variables")

    @property
    def n(self) -> int:
        return len(self.polys)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.degree for f in self.polys)

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    @cached_property
    def partials(self) -> tuple[tuple[Polynomial, ...], ...]:
        return tuple(tuple(f.derivative(j) for j in range(self.n)) for f in self.polys)

    def __str__(self) -> str:
        return "\n".join(str(f) for f in self.polys)

    @classmethod
    def from_roots(cls, roots) -> PolySystem:
        """The univariate system prod (x1 - r) over the given rationals."""
        f = Polynomial.constant(1, 1)
        x = Polynomial.variable(1, 0)
        for r in roots:
            f = f * (x - Polynomial.constant(1, r))
        return cls((f,))


# --- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|([-+*/^()]))")


class _Parser:
    def __init__(self, text: str, line: int, n: int | None):
        self.text = text
        self.line = line
        self.n = n
        self.tokens = []  # (kind, value, column)
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if m is None:
                col = len(stripped) - len(stripped[pos:].lstrip()) + 1
                raise PolySyntaxError(f"unexpected character {stripped[col - 1]!r}", line, col)
            col = m.start(m.lastindex) + 1
            if m.group(1) is not None:
                self.tokens.append(("int", int(m.group(1)), col))
            elif m.group(2) is not None:
                self.tokens.append(("var", int(m.group(2)), col))
            else:
                self.tokens.append((m.group(3), None, col))
            pos = m.end()
        self.i = 0

    def peek(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i]
        return ("end", None, len(self.text.rstrip()) + 1)

    def take(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            what = "end of line" if tok[0] == "end" else repr(tok[0] if tok[1] is None else tok[1])
            raise PolySyntaxError(f"expected {kind}, found {what}", self.line, tok[2])
        self.i += 1
        return tok

    def parse(self, nvars: int) -> Polynomial:
        self.nvars = nvars
        if not self.tokens:
            raise PolySyntaxError("empty expression", self.line, 1)
        result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolySyntaxError(f"unexpected token {tok[0] if tok[1] is None else tok[1]!r}",
                                  self.line, tok[2])
        return result

    def expr(self) -> Polynomial:
        # a leading unary minus is accepted so printed systems parse back
        negate = False
        if self.peek()[0] == "-":
            self.i += 1
            negate = True
        result = self.term()
        if negate:
            result = -result
        while self.peek()[0] in ("+", "-"):
            op = self.take(self.peek()[0])[0]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> Polynomial:
        result = self.factor()
        while self.peek()[0] == "*":
            self.i += 1
            result = result * self.factor()
        return result

    def factor(self) -> Polynomial:
        base = self.base()
        if self.peek()[0] == "^":
            self.i += 1
            return base ** self.take("int")[1]
        return base

    def base(self) -> Polynomial:
        kind, value, col = self.peek()
        if kind == "int":
            self.i += 1
            num = value
            if self.peek()[0] == "/":
                self.i += 1
                _, den, dcol = self.take("int")
                if den == 0:
                    raise PolySyntaxError("zero denominator", self.line, dcol)
                return Polynomial.constant(self.nvars, Fraction(num, den))
            return Polynomial.constant(self.nvars, num)
        if kind == "var":
            self.i += 1
            if value < 1 or (self.n is not None and value > self.n):
                bound = f"x1..x{self.n}" if self.n is not None else "x1.."
                raise UnknownVariable(f"x{value} is not one of {bound} "
                                      f"(line {self.line}, column {col})")
            return Polynomial.variable(self.nvars, value - 1)
        if kind == "(":
            self.i += 1
            inner = self.expr()
            self.take(")")
            return inner
        what = "end of line" if kind == "end" else repr(kind)
        raise PolySyntaxError(f"expected a number, variable or '(', found {what}", self.line, col)


def parse_polynomial(text: str, n: int, line: int = 1) -> Polynomial:
    return _Parser(text, line, n).parse(n)


def parse_system(text: str, n: int | None = None) -> PolySystem:
    """Parse one polynomial per non-comment line.

    With ``n`` omitted the number of equations fixes the number of variables.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            lines.append((lineno, body))
    neq = len(lines)
    if n is not None and neq != n:
        raise ArityMismatch(f"expected {n} equations, found {neq}")
    if neq == 0:
        raise ArityMismatch("no equations found")
    nvars = neq
    parsers = [_Parser(body, lineno, n) for lineno, body in lines]
    for ps in parsers:
        for kind, value, col in ps.tokens:
            if kind == "var" and value > nvars:
                if n is not None:
                    raise UnknownVariable(f"x{value} is not one of x1..x{n} "
                                          f"(line {ps.line}, column {col})")
                raise ArityMismatch(f"x{value} used but the system has only {neq} equations "
                                    f"(line {ps.line}, column {col})")
    return PolySystem(tuple(ps.parse(nvars) for ps in parsers))


# --- evaluation ----------------------------------------------------------------

def _check_point(f: PolySystem, x) -> None:
    if len(x) != f.n:
        raise ArityMismatch(f"point has {len(x)} coordinates, system has {f.n} variables")


def evaluate(f: PolySystem, x) -> tuple[PadicScalar, ...]:
    _check_point(f, x)
    powers = _powers(x, f.max_degree)
    return tuple(g.evaluate(x, powers) for g in f.polys)


def jacobian(f: PolySystem, x) -> tuple[tuple[PadicScalar, ...], ...]:
    """Matrix of partial derivatives; rows are equations, columns variables."""
    _check_point(f, x)
    powers = _powers(x, f.max_degree)
    return tuple(tuple(d.evaluate(x, powers) for d in row) for row in f.partials)


def taylor_coefficients(f: PolySystem, x) -> tuple[dict[Monomial, PadicScalar], ...]:
    """Coefficients c[i][alpha] of f_i(x + h) = sum_alpha c[i][alpha] h^alpha.

    Uses c_alpha = sum_{beta >= alpha} a_beta prod_j C(beta_j, alpha_j) x_j^(beta_j - alpha_j),
    i.e. the binomial expansion of each variable's shift.  Zero coefficients are dropped.
    """
    _check_point(f, x)
    ctx = x[0].ctx
    powers = _powers(x, f.max_degree)
    mono_cache: dict[Monomial, PadicScalar] = {}

    def mono(m: Monomial) -> PadicScalar:
        val = mono_cache.get(m)
        if val is None:
            val = ctx(1)
            for j, e in enumerate(m):
                if e:
                    val = val * powers[j][e]
            mono_cache[m] = val
        return val

    out = []
    for g in f.polys:
        acc: dict[Monomial, PadicScalar] = {}
        for beta, a in g.terms.items():
            for alpha in product(*(range(b + 1) for b in beta)):
                scale = a * prod(comb(b, al) for b, al in zip(beta, alpha))
                rest = tuple(b - al for b, al in zip(beta, alpha))
                term = ctx(scale) * mono(rest)
                prev = acc.get(alpha)
                acc[alpha] = term if prev is None else prev + term
        out.append({m: c for m, c in acc.items() if not c.is_zero})
    return tuple(out)


@dataclass(frozen=True)
class DerivTensor:
    """D_x^k f / k! stored as the degree-k Taylor coefficients of f(x + h).

    ``coeffs`` maps (equation index, multi-index alpha with |alpha| = k) to the
    coefficient; missing entries are zero.  Equation indices are 0-based.
    """

    order: int
    coeffs: dict
    point: tuple = ()

    @property
    def is_empty(self) -> bool:
        return not self.coeffs


def tensors_from_taylor(taylor, x, orders) -> dict[int, DerivTensor]:
    out = {k: {} for k in orders}
    for i, coeffs in enumerate(taylor):
        for alpha, c in coeffs.items():
            k = sum(alpha)
            if k in out:
                out[k][(i, alpha)] = c
    return {k: DerivTensor(k, out[k], tuple(x)) for k in orders}


def scaled_derivative_tensor(f: PolySystem, x, k: int) -> DerivTensor:
    if k < 0:
        raise ValueError("derivative order must be non-negative")
    return tensors_from_taylor(taylor_coefficients(f, x), x, [k])[k]


def tensor_norm(t: DerivTensor, ctx: PrimeContext) -> UltraMag:
    """Induced ultranorm of the symmetric k-linear map with entries (alpha!/k!) c_alpha."""
    p, k = ctx.p, t.order
    vk = legendre(k, p)
    best = None
    for (_, alpha), c in t.coeffs.items():
        if c.is_zero:
            continue
        e = c.val + sum(legendre(a, p) for a in alpha) - vk
        if best is None or e < best:
            best = e
    return UltraMag.ZERO if best is None else UltraMag(best)

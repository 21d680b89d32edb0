"""Random systems and independent reference computations for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import factorial, prod

from padic_alpha.polysys import Polynomial, PolySystem
from padic_alpha.ultrascalar import valuation

PRIMES = (2, 3, 5, 7, 13)


def rational_valuation(q, p):
    return valuation(Fraction(q), p)


def random_polynomial(rng: random.Random, n: int, degree: int, coeff_range=20,
                      density=0.6) -> Polynomial:
    terms = {}
    for m in product(range(degree + 1), repeat=n):
        if sum(m) <= degree and rng.random() < density:
            terms[m] = Fraction(rng.randint(-coeff_range, coeff_range))
    # make sure the top degree is attained
    top = [m for m in product(range(degree + 1), repeat=n) if sum(m) == degree]
    m = rng.choice(top)
    if not terms.get(m):
        terms[m] = Fraction(rng.choice([c for c in range(-coeff_range, coeff_range + 1) if c]))
    return Polynomial(n, terms)


def random_system(rng: random.Random, n=None, max_degree=4, coeff_range=20) -> PolySystem:
    n = n or rng.randint(1, 3)
    return PolySystem(tuple(random_polynomial(rng, n, rng.randint(1, max_degree), coeff_range)
                            for _ in range(n)))


def eval_rational(f: PolySystem, x) -> tuple[Fraction, ...]:
    """Exact evaluation over Q, independent of the p-adic code."""
    out = []
    for g in f.polys:
        out.append(sum((c * prod(Fraction(xj) ** e for xj, e in zip(x, m))
                        for m, c in g.terms.items()), Fraction(0)))
    return tuple(out)


def symmetric_entry(coeffs, i, index_tuple, k, n):
    """Entry T[i, j1..jk] = (alpha!/k!) c[i, alpha] of the symmetric tensor."""
    alpha = tuple(index_tuple.count(j) for j in range(n))
    c = coeffs.get((i, alpha))
    if c is None:
        return None
    return c, Fraction(prod(factorial(a) for a in alpha), factorial(k))


def apply_multilinear(coeffs, k, n, vectors):
    """T(v1, ..., vk) with T the symmetric tensor rebuilt from Taylor coefficients.

    ``coeffs`` maps (i, alpha) to Fractions; vectors are Fraction tuples.
    """
    out = []
    for i in range(n):
        total = Fraction(0)
        for js in product(range(n), repeat=k):
            alpha = tuple(js.count(j) for j in range(n))
            c = coeffs.get((i, alpha))
            if c is None:
                continue
            entry = c * Fraction(prod(factorial(a) for a in alpha), factorial(k))
            total += entry * prod(vectors[m][js[m]] for m in range(k))
        out.append(total)
    return out


def multi_indices(n, k):
    for combo in combinations_with_replacement(range(n), k):
        yield tuple(combo.count(j) for j in range(n))

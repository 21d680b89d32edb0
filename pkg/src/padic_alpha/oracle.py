"""Ground truth by enumeration: all roots of a system modulo p^k.

Roots are grown one base-p digit at a time.  Level one tries all p^n residues.
Each later level keeps only the children r + p^j d that still vanish modulo
p^(j+1); the default ``"linear"`` strategy finds those children by solving
J(r) d = -f(r)/p^j over F_p, which is exact because the quadratic terms in
p^j d vanish modulo p^(j+1).  ``"exhaustive"`` tries all p^n children instead.
Everything here works on plain integers and never touches the p-adic scalars.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import BudgetExceeded, EmptyRootList
from .polysys import PolySystem
from .ultrascalar import PrimeContext, UltraMag, valuation
from .ultralinalg import norm, vec_sub

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True, order=True)
class ResidueRoot:
    coords: tuple[int, ...]
    k: int

    def point(self, ctx: PrimeContext) -> tuple:
        return ctx.vector(self.coords)


def _integral_terms(f: PolySystem, p: int) -> list[list[tuple[tuple[int, ...], Fraction]]]:
    # each equation is scaled by the least power of p making it p-integral
    out = []
    for g in f.polys:
        shift = max((-valuation(c, p) for c in g.terms.values()), default=0)
        shift = max(shift, 0)
        out.append([(m, c * p**shift) for m, c in g.terms.items()])
    return out


def _reduce(terms, mod: int):
    return [(m, c.numerator * pow(c.denominator, -1, mod) % mod) for m, c in terms]


def _eval_mod(terms, x, mod: int) -> int:
    total = 0
    for m, c in terms:
        t = c
        for xj, e in zip(x, m):
            if e:
                t = t * pow(xj, e, mod) % mod
        total += t
    return total % mod


def _jacobian_mod(terms_list, x, p: int) -> list[list[int]]:
    n = len(x)
    rows = []
    for terms in terms_list:
        row = [0] * n
        for m, c in terms:
            for j in range(n):
                if m[j]:
                    t = c * m[j]
                    for l, (xl, e) in enumerate(zip(x, m)):
                        e2 = e - 1 if l == j else e
                        if e2:
                            t = t * pow(xl, e2, p)
                    row[j] = (row[j] + t) % p
        rows.append(row)
    return rows


def _solve_mod_p(A: list[list[int]], b: list[int], p: int):
    """All solutions of A d = b over F_p, or [] if inconsistent."""
    n = len(A)
    M = [row[:] + [bi] for row, bi in zip(A, b)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if M[i][c] % p), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [v * inv % p for v in M[r]]
        for i in range(n):
            if i != r and M[i][c] % p:
                fac = M[i][c]
                M[i] = [(v - fac * w) % p for v, w in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if any(M[i][n] % p for i in range(r, n)):
        return []
    free = [c for c in range(n) if c not in pivots]
    sols = []
    for vals in product(range(p), repeat=len(free)):
        d = [0] * n
        for c, v in zip(free, vals):
            d[c] = v
        for i, c in enumerate(pivots):
            d[c] = (M[i][n] - sum(M[i][fc] * d[fc] for fc in free)) % p
        sols.append(tuple(d))
    return sols


def roots_mod_pk(f: PolySystem, p: int, k: int, budget: int = DEFAULT_BUDGET,
                 strategy: str = "linear") -> list[ResidueRoot]:
    """Every x in (Z/p^k)^n with f(x) = 0 mod p^k, sorted."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if strategy not in ("linear", "exhaustive"):
        raise ValueError(f"unknown strategy {strategy!r}")
    n = f.n
    terms = _integral_terms(f, p)
    nodes = 0

    def spend(count: int) -> None:
        nonlocal nodes
        nodes += count
        if nodes > budget:
            raise BudgetExceeded(f"lift budget of {budget} nodes exhausted at p={p}, k={k}")

    red = [_reduce(t, p) for t in terms]
    level = []
    for x in product(range(p), repeat=n):
        spend(1)
        if all(_eval_mod(t, x, p) == 0 for t in red):
            level.append(x)
    for j in range(1, k):
        pj, mod = p**j, p ** (j + 1)
        red = [_reduce(t, mod) for t in terms]
        red_p = [_reduce(t, p) for t in terms]
        nxt = []
        for r in level:
            if strategy == "exhaustive":
                for d in product(range(p), repeat=n):
                    spend(1)
                    cand = tuple(ri + pj * di for ri, di in zip(r, d))
                    if all(_eval_mod(t, cand, mod) == 0 for t in red):
                        nxt.append(cand)
            else:
                spend(1)
                rhs = [(-(_eval_mod(t, r, mod) // pj)) % p for t in red]
                sols = _solve_mod_p(_jacobian_mod(red_p, r, p), rhs, p)
                spend(len(sols))
                nxt.extend(tuple(ri + pj * di for ri, di in zip(r, d)) for d in sols)
        level = nxt
    return sorted(ResidueRoot(x, k) for x in level)


def nearest_root_distance(roots, x, exclude_self: bool = False) -> UltraMag:
    """min ||x - zeta|| over the given roots (points as scalar tuples)."""
    if not roots:
        raise EmptyRootList("no roots given")
    best = None
    for zeta in roots:
        d = norm(vec_sub(x, zeta))
        if exclude_self and d.is_zero:
            continue
        if best is None or d < best:
            best = d
    if best is None:
        raise EmptyRootList("every root coincides with x")
    return best

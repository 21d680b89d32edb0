"""Smale's alpha, beta and gamma over Q_p and the certified Newton driver.

For f and a point x with invertible Jacobian,

    beta(f, x)  = ||Df(x)^{-1} f(x)||
    gamma(f, x) = max_{2 <= k <= deg f} ||Df(x)^{-1} D^k f(x) / k!||^(1/(k-1))
    alpha(f, x) = beta(f, x) * gamma(f, x)

and all three are infinite when the Jacobian is singular.  ``alpha < 1``
certifies that the Newton sequence from x is well defined and converges
quadratically to a non-singular zero.  Along that sequence

    alpha(N^k x) <= alpha^(2^k)
    gamma(N^k x) == gamma(x)
    ||N^k x - zeta|| == beta(N^k x) <= beta * alpha^(2^k - 1) == alpha^(2^k) / gamma

Every comparison is an exact comparison of rational exponents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    ArityMismatch,
    IterationCap,
    MultipleRoot,
    NonIntegralInput,
    NotARoot,
    NotCertified,
    NotUnivariate,
    PrecisionExhausted,
    SingularWithinPrecision,
)
from .polysys import PolySystem, evaluate, jacobian, taylor_coefficients, tensor_norm, tensors_from_taylor
from .ultralinalg import compose_inverse, invert_matrix, mat_mul, norm, solve_linear, vec_sub
from .ultrascalar import PrimeContext, UltraMag, magnitude, valuation

STOP_TARGET = "target_reached"
STOP_EXACT = "exact_zero"
STOP_CAP = "iteration_cap"
STOP_PRECISION = "precision_exhausted"
STOP_SINGULAR = "singular"


@dataclass(frozen=True)
class SmaleParams:
    beta: UltraMag
    gamma: UltraMag
    alpha: UltraMag
    jacobian_invertible: bool

    @classmethod
    def singular(cls) -> SmaleParams:
        inf = UltraMag.INFINITE
        return cls(inf, inf, inf, False)


@dataclass(frozen=True)
class _Analysis:
    params: SmaleParams
    fx: tuple
    step: tuple | None
    jac: tuple
    jac_inv: tuple | None


def _analyze(f: PolySystem, x) -> _Analysis:
    if len(x) != f.n:
        raise ArityMismatch(f"point has {len(x)} coordinates, system has {f.n} variables")
    ctx = x[0].ctx
    jac = jacobian(f, x)
    fx = evaluate(f, x)
    try:
        jac_inv = invert_matrix(jac)
    except SingularWithinPrecision:
        return _Analysis(SmaleParams.singular(), fx, None, jac, None)
    step = solve_linear(jac, fx)
    b = norm(step)
    g = _gamma_from_inverse(f, x, jac_inv, ctx)
    if b.is_zero or g.is_zero:
        a = UltraMag.ZERO
    else:
        a = b * g
    return _Analysis(SmaleParams(b, g, a, True), fx, step, jac, jac_inv)


def _gamma_from_inverse(f: PolySystem, x, jac_inv, ctx: PrimeContext) -> UltraMag:
    orders = range(2, f.max_degree + 1)
    if not orders:
        return UltraMag.ZERO
    tensors = tensors_from_taylor(taylor_coefficients(f, x), x, orders)
    best = UltraMag.ZERO
    for k in orders:
        t = tensors[k]
        if t.is_empty:
            continue
        best = max(best, tensor_norm(compose_inverse(jac_inv, t), ctx).root(k - 1))
    return best


def beta(f: PolySystem, x) -> UltraMag:
    return _analyze(f, x).params.beta


def gamma(f: PolySystem, x) -> UltraMag:
    jac = jacobian(f, x)
    try:
        jac_inv = invert_matrix(jac)
    except SingularWithinPrecision:
        return UltraMag.INFINITE
    return _gamma_from_inverse(f, x, jac_inv, x[0].ctx)


def alpha(f: PolySystem, x) -> SmaleParams:
    return _analyze(f, x).params


def newton_step(f: PolySystem, x) -> tuple:
    """x - Df(x)^{-1} f(x)."""
    jac = jacobian(f, x)
    return vec_sub(x, solve_linear(jac, evaluate(f, x)))


@dataclass(frozen=True)
class Prediction:
    """Bounds guaranteed after k Newton steps from a certified point."""

    k: int
    alpha_bound: UltraMag
    error_bound: UltraMag
    gamma_bound: UltraMag


@dataclass(frozen=True)
class Certificate:
    params: SmaleParams
    certified: bool
    predictions: tuple[Prediction, ...]
    point: tuple
    ctx: PrimeContext

    def to_json(self) -> dict:
        return {
            "certified": self.certified,
            "alpha": self.params.alpha.to_json(),
            "beta": self.params.beta.to_json(),
            "gamma": self.params.gamma.to_json(),
            "predictions": [
                {"k": pr.k,
                 "alpha_bound_exp": pr.alpha_bound.exp_str(),
                 "error_bound_exp": pr.error_bound.exp_str()}
                for pr in self.predictions
            ],
            "jacobian_invertible": self.params.jacobian_invertible,
        }


def predictions(params: SmaleParams, steps: int) -> tuple[Prediction, ...]:
    a, b, g = params.alpha, params.beta, params.gamma
    out = []
    for k in range(steps + 1):
        err = b if k == 0 else b * a ** (2**k - 1)
        out.append(Prediction(k, a ** (2**k), err, g))
    return tuple(out)


def certify(f: PolySystem, x, steps: int = 4) -> Certificate:
    params = _analyze(f, x).params
    ok = params.jacobian_invertible and params.alpha.exp > 0
    preds = predictions(params, steps) if ok else ()
    return Certificate(params, ok, preds, tuple(x), x[0].ctx)


@dataclass
class NewtonTrace:
    iterates: list = field(default_factory=list)
    params: list = field(default_factory=list)
    stop_reason: str | None = None

    @property
    def root(self) -> tuple:
        return self.iterates[-1]

    @property
    def steps(self) -> int:
        return len(self.iterates) - 1


def _min_abs_prec(x) -> float:
    return min(c.abs_prec for c in x)


def solve_certified(f: PolySystem, x, target_exponent=None, max_iter: int = 64) -> NewtonTrace:
    """Run Newton's method from a certified point.

    Stops once beta(f, x_k) <= p^(-target_exponent), which is then exactly the
    distance from x_k to the limit root, or once f(x_k) vanishes within
    precision.  ``target_exponent=None`` iterates until f(x_k) vanishes, giving
    the root to the full carried precision.
    """
    trace = NewtonTrace()
    xk = tuple(x)
    first = _analyze(f, xk)
    if not (first.params.jacobian_invertible and first.params.alpha.exp > 0):
        raise NotCertified(f"alpha = {first.params.alpha} is not below 1")
    target = None if target_exponent is None else Fraction(target_exponent)
    ctx = xk[0].ctx
    an = first
    for it in range(max_iter + 1):
        trace.iterates.append(xk)
        trace.params.append(an.params)
        if not an.params.jacobian_invertible:
            trace.stop_reason = STOP_SINGULAR
            raise SingularWithinPrecision(
                f"Jacobian singular within precision at iterate {it}; raise the precision",
                trace=trace)
        if all(c.is_zero for c in an.fx):
            # beta <= ||Df^{-1}|| * ||f(x)|| with f(x) only known to vanish modulo p^r
            r = min(c.abs_prec for c in an.fx)
            bound = r + norm(an.jac_inv).exp
            if target is None or bound >= target:
                if target is not None and _min_abs_prec(xk) < target:
                    break
                trace.stop_reason = STOP_EXACT
                return trace
            break
        if target is not None and an.params.beta.exp >= target:
            if _min_abs_prec(xk) < target:
                break
            trace.stop_reason = STOP_TARGET
            return trace
        if it == max_iter:
            trace.stop_reason = STOP_CAP
            raise IterationCap(f"no convergence after {max_iter} Newton steps", trace=trace)
        xk = vec_sub(xk, an.step)
        an = _analyze(f, xk)
    trace.stop_reason = STOP_PRECISION
    raise PrecisionExhausted(
        f"precision N={ctx.precision} is not enough to reach the target; raise N", trace=trace)


def solve(f: PolySystem, point, p: int, target_exponent: int | None = None,
          precision: int | None = None, max_iter: int = 64) -> NewtonTrace:
    """Certify and solve from a rational point.

    Without an explicit precision, N = target + 8 guard digits is used and the
    run is retried once at 2N if precision runs out.
    """
    if precision is None:
        n_digits = (int(target_exponent) if target_exponent is not None else 24) + 8
        attempts = [n_digits, 2 * n_digits]
    else:
        attempts = [precision]
    for i, n_digits in enumerate(attempts):
        ctx = PrimeContext(p, n_digits)
        x = ctx.vector(point)
        try:
            return solve_certified(f, x, target_exponent, max_iter)
        except (PrecisionExhausted, SingularWithinPrecision):
            if i == len(attempts) - 1:
                raise
    raise AssertionError("unreachable")


# --- reports -------------------------------------------------------------------

@dataclass(frozen=True)
class GammaDistanceReport:
    distance: UltraMag
    gamma: UltraMag
    inside: bool
    beta: UltraMag
    beta_equals_distance: bool | None
    certified: bool | None


def _assert_root(f: PolySystem, zeta) -> None:
    fz = evaluate(f, zeta)
    if not all(c.is_zero for c in fz):
        raise NotARoot(f"||f(zeta)|| = p^({-norm(fz).exp}) is distinguishable from zero")


def gamma_distance_check(f: PolySystem, x, zeta) -> GammaDistanceReport:
    """Check dist(x, zeta) < 1/gamma(f, x) and, when it holds, beta(f, x) == dist."""
    _assert_root(f, zeta)
    if invert_or_none(jacobian(f, zeta)) is None:
        raise SingularWithinPrecision("Jacobian at zeta is singular within precision")
    params = _analyze(f, x).params
    dist = norm(vec_sub(x, zeta))
    if dist.is_zero:
        inside = params.jacobian_invertible
    elif params.gamma.is_infinite:
        inside = False
    else:
        inside = (dist * params.gamma).exp > 0
    if not inside:
        return GammaDistanceReport(dist, params.gamma, False, params.beta, None, None)
    cert = certify(f, x)
    return GammaDistanceReport(dist, params.gamma, True, params.beta,
                               params.beta == dist, cert.certified)


def invert_or_none(M):
    try:
        return invert_matrix(M)
    except SingularWithinPrecision:
        return None


@dataclass(frozen=True)
class HenselReport:
    f_value: UltraMag
    derivative_squared: UltraMag
    hensel_holds: bool
    gamma: UltraMag
    gamma_bound: UltraMag
    gamma_bound_holds: bool
    alpha: UltraMag
    alpha_below_one: bool
    implication_holds: bool


def hensel_univariate_check(f: PolySystem, x, ctx: PrimeContext) -> HenselReport:
    """Compare Hensel's condition |f(x)| < |f'(x)|^2 with the alpha test."""
    if f.n != 1:
        raise NotUnivariate(f"system has {f.n} variables")
    p = ctx.p
    for c in f.polys[0].terms.values():
        if valuation(c, p) < 0:
            raise NonIntegralInput(f"coefficient {c} is not a {p}-adic integer")
    if valuation(Fraction(x), p) < 0:
        raise NonIntegralInput(f"point {x} is not a {p}-adic integer")
    pt = (ctx(x),)
    fx = magnitude(evaluate(f, pt)[0])
    dfx = magnitude(jacobian(f, pt)[0][0])
    dsq = dfx * dfx
    hensel = fx < dsq
    params = _analyze(f, pt).params
    bound = dfx.inverse()
    a_ok = params.jacobian_invertible and params.alpha.exp > 0
    return HenselReport(fx, dsq, hensel, params.gamma, bound, params.gamma <= bound,
                        params.alpha, a_ok, (not hensel) or a_ok)


@dataclass(frozen=True)
class SeparationReport:
    inverse_gamma: UltraMag
    distance: UltraMag
    equal: bool


def separation_gamma(f: PolySystem, zeta, other_roots) -> SeparationReport:
    """Compare 1/gamma(f, zeta) with the distance from zeta to the other roots."""
    if f.n != 1:
        raise NotUnivariate(f"system has {f.n} variables")
    if len(other_roots) + 1 != f.max_degree:
        raise ValueError(f"expected {f.max_degree - 1} other roots, got {len(other_roots)}")
    _assert_root(f, zeta)
    for r in other_roots:
        _assert_root(f, r)
    jac_inv = invert_or_none(jacobian(f, zeta))
    if jac_inv is None:
        raise MultipleRoot("f'(zeta) vanishes within precision")
    g = _gamma_from_inverse(f, zeta, jac_inv, zeta[0].ctx)
    inv_g = g.inverse()
    dist = min((norm(vec_sub(zeta, r)) for r in other_roots), default=UltraMag.INFINITE)
    return SeparationReport(inv_g, dist, inv_g == dist)


@dataclass(frozen=True)
class LemmaReport:
    rho: UltraMag
    distance: UltraMag
    preconditions_met: bool
    transfer_norm: UltraMag | None
    params_x: SmaleParams
    params_y: SmaleParams | None


def lemma_quantities(f: PolySystem, x, y) -> LemmaReport:
    """rho = gamma(f,x)||x-y|| and, when rho < 1, ||Df(y)^{-1} Df(x)|| and both parameter triples."""
    ax = _analyze(f, x)
    if not ax.params.jacobian_invertible:
        raise SingularWithinPrecision("Jacobian at x is singular within precision")
    dist = norm(vec_sub(x, y))
    g = ax.params.gamma
    rho = UltraMag.ZERO if (g.is_zero or dist.is_zero) else g * dist
    if rho.exp <= 0:
        return LemmaReport(rho, dist, False, None, ax.params, None)
    ay = _analyze(f, y)
    transfer = None
    if ay.jac_inv is not None:
        transfer = norm(mat_mul(ay.jac_inv, ax.jac))
    return LemmaReport(rho, dist, True, transfer, ax.params, ay.params)

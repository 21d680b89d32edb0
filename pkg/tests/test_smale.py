from fractions import Fraction

import pytest

from padic_alpha.errors import (
    MultipleRoot,
    NonIntegralInput,
    NotARoot,
    NotCertified,
    NotUnivariate,
    PrecisionExhausted,
    SingularWithinPrecision,
)
from padic_alpha.oracle import roots_mod_pk
from padic_alpha.polysys import PolySystem, parse_system
from padic_alpha.smale import (
    alpha,
    beta,
    certify,
    gamma,
    gamma_distance_check,
    hensel_univariate_check,
    lemma_quantities,
    newton_step,
    separation_gamma,
    solve,
    solve_certified,
)
from padic_alpha.ultralinalg import norm, vec_sub
from padic_alpha.ultrascalar import PrimeContext, UltraMag, residue, valuation

SQ6 = parse_system("x1^2 - 6")
SQ5 = parse_system("x1^2 - 5")
CTX = PrimeContext(5, 32)


def test_beta_examples():
    # beta = |(1 - 6) / 2|_5
    assert beta(SQ6, CTX.vector([1])) == UltraMag(valuation(Fraction(-5, 2), 5)) == UltraMag(1)
    assert beta(parse_system("x1*(x1 - 5)"), CTX.vector([0])) == UltraMag.ZERO
    assert beta(parse_system("x1^2"), CTX.vector([0])) == UltraMag.INFINITE


def test_gamma_examples():
    assert gamma(SQ6, CTX.vector([1])) == UltraMag(valuation(Fraction(1, 2), 5)) == UltraMag(0)
    # D_0 f = -5 and the quadratic coefficient is 1
    assert gamma(parse_system("x1*(x1 - 5)"), CTX.vector([0])) == UltraMag(-1)
    affine = parse_system("2*x1 + x2 - 3\nx1 - x2 + 1")
    assert gamma(affine, CTX.vector([4, 4])) == UltraMag.ZERO


def test_alpha_examples():
    params = alpha(SQ6, CTX.vector([1]))
    assert (params.alpha, params.beta, params.gamma) == (UltraMag(1), UltraMag(1), UltraMag(0))
    assert params.jacobian_invertible
    sing = alpha(parse_system("x1^2"), CTX.vector([0]))
    assert not sing.jacobian_invertible and sing.alpha == UltraMag.INFINITE
    exact = alpha(parse_system("x1*(x1 - 5)"), CTX.vector([5]))
    assert exact.alpha == UltraMag.ZERO


def test_newton_step_examples():
    (y,) = newton_step(SQ6, CTX.vector([1]))
    assert y.agrees_with(Fraction(7, 2))
    assert residue(y, 2) == 7 * pow(2, -1, 25) % 25 == 16
    root = CTX.vector([5])
    assert newton_step(parse_system("x1*(x1 - 5)"), root)[0].agrees_with(5)
    with pytest.raises(SingularWithinPrecision):
        newton_step(parse_system("x1^2"), CTX.vector([0]))


def test_certify_examples():
    cert = certify(SQ6, CTX.vector([1]))
    assert cert.certified and cert.params.alpha == UltraMag(1)
    k3 = cert.predictions[3]
    assert k3.alpha_bound == UltraMag(8)
    assert k3.error_bound == UltraMag(8)
    assert k3.gamma_bound == UltraMag(0)
    neg = certify(SQ5, CTX.vector([1]))
    assert not neg.certified and neg.params.alpha == UltraMag(0)
    assert roots_mod_pk(SQ5, 5, 2) == []
    affine = parse_system("2*x1 + x2 - 3\nx1 - x2 + 1")
    cert = certify(affine, CTX.vector([7, Fraction(1, 3)]))
    assert cert.certified and cert.params.alpha == UltraMag.ZERO


def test_literal_doubling_bound_fails_on_sqrt6():
    """beta(N^k x) <= beta * alpha^(2^k) is off by one power of alpha; beta*alpha^(2^k - 1) holds."""
    x = CTX.vector([1])
    b0 = beta(SQ6, x)
    a0 = alpha(SQ6, x).alpha
    for k in range(1, 4):
        x = newton_step(SQ6, x)
        bk = beta(SQ6, x)
        assert bk > b0 * a0 ** (2**k)
        assert bk == b0 * a0 ** (2**k - 1)


def test_solve_to_target():
    trace = solve_certified(SQ6, CTX.vector([1]), 2)
    assert trace.stop_reason == "target_reached"
    roots = {r.coords[0] for r in roots_mod_pk(SQ6, 5, 2)}
    assert residue(trace.root[0], 2) in roots
    for a, b, pr in zip(trace.iterates, trace.iterates[1:], trace.params):
        assert norm(vec_sub(b, a)) == pr.beta


def test_solve_decoupled_system():
    f = parse_system("x1^2 - 6\nx2^2 - 6")
    trace = solve_certified(f, CTX.vector([1, 1]), 6)
    (r,) = {c.coords[0] for c in roots_mod_pk(SQ6, 5, 6)} & {residue(trace.root[0], 6)}
    assert residue(trace.root[1], 6) == r
    assert {c.coords for c in roots_mod_pk(f, 5, 6)} >= {(r, r)}


def test_solve_exact_root_takes_no_steps():
    trace = solve_certified(parse_system("x1*(x1 - 5)"), CTX.vector([5]), 4)
    assert trace.steps == 0 and trace.stop_reason == "exact_zero"


def test_solve_affine_is_exact_after_one_step():
    f = parse_system("2*x1 + x2 - 3\nx1 - x2 + 1")
    trace = solve_certified(f, CTX.vector([7, 9]))
    assert trace.steps == 1 and trace.stop_reason == "exact_zero"
    x1, x2 = trace.root
    assert x1.agrees_with(Fraction(2, 3)) and x2.agrees_with(Fraction(5, 3))


def test_solve_refuses_uncertified_start():
    with pytest.raises(NotCertified):
        solve_certified(SQ5, CTX.vector([1]), 3)


def test_solve_precision_exhausted_then_retry():
    tiny = PrimeContext(5, 3)
    with pytest.raises(PrecisionExhausted) as err:
        solve_certified(SQ6, tiny.vector([1]), 10)
    assert err.value.trace.stop_reason == "precision_exhausted"
    trace = solve(SQ6, [1], 5, 10)
    assert trace.stop_reason == "target_reached"
    assert trace.iterates[0][0].ctx.precision == 18


def test_gamma_distance_check():
    x = CTX.vector([1])
    zeta = solve_certified(SQ6, x).root
    assert residue(zeta[0], 2) == 16
    rep = gamma_distance_check(SQ6, x, zeta)
    assert rep.inside and rep.distance == UltraMag(1)
    assert rep.beta_equals_distance and rep.certified
    same = gamma_distance_check(SQ6, zeta, zeta)
    assert same.inside and same.distance == UltraMag.ZERO
    with pytest.raises(NotARoot):
        gamma_distance_check(SQ5, x, CTX.vector([1]))
    far = gamma_distance_check(SQ6, CTX.vector([3]), zeta)
    assert not far.inside and far.certified is None


def test_hensel_examples():
    rep = hensel_univariate_check(SQ6, 1, CTX)
    assert rep.f_value == UltraMag(1) and rep.derivative_squared == UltraMag(0)
    assert rep.hensel_holds and rep.gamma == UltraMag(0) and rep.gamma_bound == UltraMag(0)
    assert rep.gamma_bound_holds and rep.alpha == UltraMag(1) and rep.implication_holds
    fail = hensel_univariate_check(SQ5, 1, CTX)
    assert fail.f_value == UltraMag(0) and not fail.hensel_holds and fail.implication_holds
    cubic = hensel_univariate_check(parse_system("x1^3 - x1"), 0, CTX)
    assert cubic.f_value == UltraMag.ZERO and cubic.hensel_holds and cubic.alpha_below_one
    with pytest.raises(NotUnivariate):
        hensel_univariate_check(parse_system("x1\nx2"), 0, CTX)
    with pytest.raises(NonIntegralInput):
        hensel_univariate_check(parse_system("x1^2 - 1/5"), 0, CTX)
    with pytest.raises(NonIntegralInput):
        hensel_univariate_check(SQ6, Fraction(1, 5), CTX)


def test_separation_examples():
    f = parse_system("x1*(x1 - 5)")
    rep = separation_gamma(f, CTX.vector([0]), [CTX.vector([5])])
    assert rep.inverse_gamma == UltraMag(1) == rep.distance and rep.equal
    g = parse_system("x1*(x1 - 1)")
    rep = separation_gamma(g, CTX.vector([0]), [CTX.vector([1])])
    assert rep.inverse_gamma == UltraMag(0) and rep.equal
    with pytest.raises(MultipleRoot):
        separation_gamma(parse_system("(x1 - 3)*(x1 - 3)"), CTX.vector([3]), [CTX.vector([3])])
    with pytest.raises(NotARoot):
        separation_gamma(f, CTX.vector([1]), [CTX.vector([5])])


def test_separation_from_roots_helper():
    f = PolySystem.from_roots([Fraction(1, 2), 3, -7])
    rep = separation_gamma(f, CTX.vector([3]), [CTX.vector([Fraction(1, 2)]), CTX.vector([-7])])
    # |3 - 1/2|_5 = |5/2|_5, |3 + 7|_5 = |10|_5
    assert rep.distance == UltraMag(1) and rep.equal


def test_lemma_quantities_examples():
    rep = lemma_quantities(SQ6, CTX.vector([1]), CTX.vector([16]))
    assert rep.rho == UltraMag(1) and rep.preconditions_met
    # |2 / 32|_5 = 1
    assert rep.transfer_norm == UltraMag(valuation(Fraction(2, 32), 5)) == UltraMag(0)
    same = lemma_quantities(SQ6, CTX.vector([1]), CTX.vector([1]))
    assert same.rho == UltraMag.ZERO and same.transfer_norm == UltraMag.ONE
    far = lemma_quantities(SQ6, CTX.vector([1]), CTX.vector([2]))
    assert not far.preconditions_met and far.transfer_norm is None

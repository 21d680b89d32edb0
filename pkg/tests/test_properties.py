"""Invariants of the alpha-theory along random certified cases.

Each hypothesis example is a seed for the generators in ``cases``; the
generators produce systems with n <= 3, degree <= 4 and coefficients in
[-20, 20] over the primes 2, 3, 5, 7 and 13.
"""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from padic_alpha.errors import BudgetExceeded
from padic_alpha.smale import certify, gamma_distance_check
from padic_alpha.ultrascalar import PrimeContext, UltraMag

import cases

seeds = st.integers(0, 2**32)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_newton_sequence_bounds(seed):
    f, p, point = cases.certified_point(random.Random(seed))
    case = cases.run_newton_sequence(f, p, point)
    assert cases.sequence_violations(case) == {"alpha": [], "beta": [], "gamma": [], "distance": []}


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_certified_point_is_within_one_over_gamma_of_its_root(seed):
    f, p, point = cases.certified_point(random.Random(seed))
    case = cases.run_newton_sequence(f, p, point)
    x = PrimeContext(p, case.zeta[0].ctx.precision).vector(point)
    rep = gamma_distance_check(f, x, case.zeta)
    assert rep.inside and rep.beta_equals_distance and rep.certified


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_certified_roots_agree_with_oracle(seed):
    f, p, point = cases.certified_point(random.Random(seed))
    case = cases.run_newton_sequence(f, p, point)
    if case.root_residue is None:
        return
    try:
        assert cases.oracle_violation(f, p, case.root_residue, budget=10**5) is None
    except BudgetExceeded:
        pass


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_lemma_inequalities(seed):
    f, _, x, y = cases.lemma_triple(random.Random(seed))
    assert cases.lemma_violations(f, x, y) == []


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_hensel_bridge(seed):
    f, p, x = cases.hensel_case(random.Random(seed))
    assert cases.hensel_violations(f, p, x).violations == []


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_separation_identity(seed):
    f, p, roots = cases.split_polynomial(random.Random(seed))
    assert cases.separation_violations(f, p, roots) == []


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_certificate_predictions_follow_parameters(seed):
    f, p, point = cases.certified_point(random.Random(seed))
    cert = certify(f, PrimeContext(p, 40).vector(point))
    a, b = cert.params.alpha, cert.params.beta
    assert cert.certified == (a.exp > 0)
    for pr in cert.predictions:
        assert pr.gamma_bound == cert.params.gamma
        if a.is_zero:
            assert pr.alpha_bound == UltraMag.ZERO
            continue
        assert pr.alpha_bound == a ** (2**pr.k)
        assert pr.error_bound == (b if pr.k == 0 else b * a ** (2**pr.k - 1))

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from helpers import seeded
from weakprev.checker import (
    check_1aul, check_2coherent, check_2convex, check_centered, check_internality,
)
from weakprev.core import Assessment, DomainError, Partition, PreconditionError
from weakprev.models import (
    FiniteDistribution, VarPrevision, build_var_assessment, conjugate,
    conjugate_dominance, expectation_assessment, lower_envelope, var_alpha,
)

F = Fraction
W = Partition(["w1", "w2"])
XV = W.gamble([-1, 2])
HALF = FiniteDistribution(W, ["1/2", "1/2"])


def test_var_example_values():
    assert -var_alpha(HALF, XV, F(3, 5)) == 2
    assert var_alpha(HALF, W.zero(), F(3, 5)) == 0
    assert -var_alpha(HALF, -XV, F(3, 5)) == 1
    assert -var_alpha(HALF, XV, F(1, 4)) == -1


def test_var_alpha_range():
    for alpha in (0, 1, F(3, 2), -1):
        with pytest.raises(DomainError):
            var_alpha(HALF, XV, alpha)


def test_alpha_at_a_jump_uses_strict_inequality():
    # P(X <= -1) = 1/2 is not > 1/2, so the quantile moves up
    assert -var_alpha(HALF, XV, F(1, 2)) == 2


def test_distribution_validation():
    with pytest.raises(DomainError):
        FiniteDistribution(W, ["1/2", "1/3"])
    with pytest.raises(DomainError):
        FiniteDistribution(W, ["3/2", "-1/2"])
    assert FiniteDistribution(W, {"w2": 1}).probs == (0, 1)


def test_zero_probability_atoms_ignored():
    part = Partition("abc")
    dist = FiniteDistribution(part, [0, F(1, 2), F(1, 2)])
    X = part.gamble([-100, 1, 3])
    assert -var_alpha(dist, X, F(1, 4)) == 1


def test_build_var_assessment_examples():
    P = build_var_assessment(VarPrevision(F(3, 5), HALF, (XV, -XV)))
    omega = W.omega
    assert dict(P.items()) == {XV | omega: 2, (-XV) | omega: 1, W.zero() | omega: 0}
    empty = build_var_assessment(VarPrevision(F(3, 5), HALF, ()))
    assert dict(empty.items()) == {W.zero() | omega: 0}
    shifted = build_var_assessment(VarPrevision(F(3, 5), HALF, (XV, XV + F(7, 3))))
    assert shifted[(XV + F(7, 3)) | omega] - shifted[XV | omega] == F(7, 3)


def test_var_example_consistency():
    P = build_var_assessment(VarPrevision(F(3, 5), HALF, (XV, -XV)))
    assert check_2convex(P) and check_centered(P)
    assert not check_2coherent(P)
    verdict = conjugate_dominance(P)
    assert not verdict and verdict.witness.recompute(P) < 0


def test_var_vs_alpha_out_of_range_at_construction():
    with pytest.raises(DomainError):
        VarPrevision(F(1), HALF, ())


rat = st.fractions(min_value=-4, max_value=4, max_denominator=4)
prob_weights = st.lists(st.integers(0, 5), min_size=3, max_size=3).filter(lambda w: sum(w) > 0)
alphas = st.integers(1, 19).map(lambda k: F(k, 20))


def _dist(weights):
    part = Partition("abc")
    total = sum(weights)
    return FiniteDistribution(part, [F(w, total) for w in weights])


@given(prob_weights, st.lists(rat, min_size=3, max_size=3), rat, alphas)
def test_var_translation_invariance(weights, xs, c, alpha):
    dist = _dist(weights)
    X = dist.partition.gamble(xs)
    assert var_alpha(dist, X + c, alpha) == var_alpha(dist, X, alpha) - c


@given(prob_weights, st.lists(rat, min_size=3, max_size=3),
       st.lists(st.fractions(0, 3, max_denominator=4), min_size=3, max_size=3), alphas)
def test_var_monotone(weights, xs, bumps, alpha):
    dist = _dist(weights)
    X = dist.partition.gamble(xs)
    Y = X + dist.partition.gamble(bumps)
    assert -var_alpha(dist, X, alpha) <= -var_alpha(dist, Y, alpha)


@given(prob_weights, st.lists(st.lists(rat, min_size=3, max_size=3), max_size=3), alphas)
def test_var_assessment_is_internal(weights, rows, alpha):
    dist = _dist(weights)
    domain = tuple(dist.partition.gamble(r) for r in rows)
    P = build_var_assessment(VarPrevision(alpha, dist, domain))
    assert check_internality(P) and check_1aul(P) and check_centered(P)


@given(prob_weights, st.lists(rat, min_size=3, max_size=3))
def test_var_boundary_levels(weights, xs):
    dist = _dist(weights)
    X = dist.partition.gamble(xs)
    support = [v for p, v in zip(dist.probs, X.values) if p > 0]
    first_jump = min(dist.cdf(X, v) for v in support)
    low = first_jump / 2
    assert -var_alpha(dist, X, low) == min(support)
    top = max(dist.cdf(X, v) for v in support if v < max(support)) if len(set(support)) > 1 else F(0)
    high = (top + 1) / 2
    assert -var_alpha(dist, X, high) == max(support)


def test_conjugate_examples():
    P = build_var_assessment(VarPrevision(F(3, 5), HALF, (XV, -XV)))
    Q = conjugate(P)
    assert Q[XV | W.omega] == -1 and Q[W.zero() | W.omega] == 0
    part = Partition("abc")
    dist = FiniteDistribution(part, ["1/5", "1/2", "3/10"])
    Y = part.gamble([3, -1, 2])
    B = part.event("ab")
    E = expectation_assessment(dist, [Y | part.omega, (-Y) | part.omega, Y | B, (-Y) | B])
    assert dict(conjugate(E).items()) == dict(E.items())
    assert conjugate_dominance(E)


def test_conjugate_needs_negations():
    P = Assessment([(XV | W.omega, 1)])
    with pytest.raises(PreconditionError) as err:
        conjugate(P)
    assert "(1, -2)" in str(err.value)
    with pytest.raises(PreconditionError):
        conjugate_dominance(P)


def test_lower_envelope_dominated_by_conjugate():
    rng = seeded(1)
    part = Partition("abc")
    for _ in range(20):
        dists = [_dist([rng.randint(1, 5) for _ in range(3)]) for _ in range(2)]
        Y = part.gamble([F(rng.randint(-8, 8), 4) for _ in range(3)])
        B = part.event(rng.choice(["ab", "bc", "abc", "ac"]))
        P = lower_envelope(dists, [Y | B, (-Y) | B])
        assert conjugate_dominance(P) and check_2coherent(P)

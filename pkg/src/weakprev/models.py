"""Value-at-Risk previsions and conjugate upper previsions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .checker import SATISFIED, Verdict, _violated
from .core import (
    Assessment, DomainError, Gamble, Partition, PartitionMismatch,
    PreconditionError, to_fraction,
)


@dataclass(frozen=True)
class FiniteDistribution:
    """A probability on the atoms of a partition."""

    partition: Partition
    probs: tuple

    def __init__(self, partition: Partition, probs):
        if isinstance(probs, Mapping):
            unknown = set(probs) - set(partition.atoms)
            if unknown:
                raise DomainError(f"unknown atoms {sorted(unknown)}")
            probs = [probs.get(a, 0) for a in partition.atoms]
        probs = tuple(to_fraction(p) for p in probs)
        if len(probs) != len(partition):
            raise DomainError(f"expected {len(partition)} probabilities, got {len(probs)}")
        if any(p < 0 for p in probs):
            raise DomainError("probabilities must be non-negative")
        if sum(probs) != 1:
            raise DomainError(f"probabilities sum to {sum(probs)}, not 1")
        object.__setattr__(self, "partition", partition)
        object.__setattr__(self, "probs", probs)

    def cdf(self, X: Gamble, x) -> Fraction:
        """``P(X <= x)``."""
        return sum((p for p, v in zip(self.probs, X.values) if v <= x), Fraction(0))

    def expectation(self, X: Gamble) -> Fraction:
        return sum((p * v for p, v in zip(self.probs, X.values)), Fraction(0))


def _check_alpha(alpha) -> Fraction:
    alpha = to_fraction(alpha)
    if not 0 < alpha < 1:
        raise DomainError(f"alpha = {alpha} must lie strictly between 0 and 1")
    return alpha


def var_alpha(dist: FiniteDistribution, X: Gamble, alpha) -> Fraction:
    """``VaR_alpha(X) = -inf{x : P(X <= x) > alpha}``.

    The infimum is a value of ``X`` on an atom of positive probability,
    so it is found by scanning those values in increasing order.
    """
    alpha = _check_alpha(alpha)
    if X.partition != dist.partition:
        raise PartitionMismatch("gamble and distribution differ in partition")
    support = sorted({v for p, v in zip(dist.probs, X.values) if p > 0})
    for x in support:
        if dist.cdf(X, x) > alpha:
            return -x
    raise AssertionError("unreachable: the cdf reaches 1 on the support")


@dataclass(frozen=True)
class VarPrevision:
    alpha: Fraction
    dist: FiniteDistribution
    domain: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_alpha(self.alpha))
        object.__setattr__(self, "domain", tuple(self.domain))
        for X in self.domain:
            if X.partition != self.dist.partition:
                raise PartitionMismatch("domain gamble on a different partition")

    def __call__(self, X: Gamble) -> Fraction:
        """``P^V_alpha(X) = -VaR_alpha(X)``."""
        return -var_alpha(self.dist, X, self.alpha)


def build_var_assessment(vp: VarPrevision) -> Assessment:
    """Unconditional assessment ``X -> -VaR_alpha(X)`` on the domain,
    together with the zero gamble."""
    omega = vp.dist.partition.omega
    gambles = list(vp.domain) + [vp.dist.partition.zero()]
    return Assessment([(X | omega, vp(X)) for X in gambles], vp.dist.partition)


def _negations(P: Assessment) -> list:
    pairs, missing = [], []
    for cg in P:
        neg = (-cg.gamble) | cg.cond
        if neg in P:
            pairs.append((cg, neg))
        else:
            missing.append(f"{neg} is not assessed (needed to conjugate {cg})")
    if missing:
        raise PreconditionError(missing)
    return pairs


def conjugate(P: Assessment) -> Assessment:
    """Conjugate upper prevision ``X|B -> -P(-X|B)``."""
    return Assessment([(cg, -P[neg]) for cg, neg in _negations(P)], P.partition)


def conjugate_dominance(P: Assessment) -> Verdict:
    """Whether the conjugate dominates ``P`` on every entry.

    A failure at ``X|B`` is witnessed by buying both ``X|B`` and ``-X|B``:
    the gain is the constant ``-(P(X|B) + P(-X|B))`` on ``B``.
    """
    for cg, neg in _negations(P):
        if -P[neg] < P[cg]:
            terms = [(cg, 1)] if cg == neg else [(cg, 1), (neg, 1)]
            return _violated(P, terms, f"upper {-P[neg]} below lower {P[cg]} at {cg}")
    return SATISFIED


def expectation_assessment(dist: FiniteDistribution, targets: Sequence) -> Assessment:
    """Conditional expectations of the given conditional gambles.

    Every conditioning event must have positive probability.
    """
    entries = []
    for cg in targets:
        pB = sum(p for i, p in enumerate(dist.probs) if i in cg.cond.members)
        if pB == 0:
            raise DomainError(f"conditioning event {cg.cond} has probability zero")
        mass = sum(dist.probs[i] * cg.gamble.values[i] for i in cg.cond)
        entries.append((cg, mass / pB))
    return Assessment(entries, dist.partition)


def lower_envelope(dists: Sequence[FiniteDistribution], targets: Sequence) -> Assessment:
    """Pointwise minimum of conditional expectations over a finite credal set."""
    tables = [expectation_assessment(d, targets) for d in dists]
    return Assessment([(cg, min(t[cg] for t in tables)) for cg in targets],
                      dists[0].partition)

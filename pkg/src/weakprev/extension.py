"""2-convex and 2-coherent natural extensions, and the GBR family check."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .checker import Verdict, check_2coherent, check_2convex
from .core import (
    NEG_INF, POS_INF, Assessment, ConditionalGamble, DomainError, Event,
    ExtendedValue, Gamble, PartitionMismatch, PreconditionError, restrict_inf,
    restrict_sup, to_fraction,
)
from .solver import AffinePiece, concave_pwl_max

TWO_CONVEX = "two_convex"
TWO_COHERENT = "two_coherent"


@dataclass(frozen=True)
class ExtensionReport:
    """Value of a natural extension on one target.

    ``value`` is the supremum of an open set of admissible prices, so it
    is a bound rather than an admissible price itself.  ``entry`` and
    ``stake`` describe the assessed conditional gamble (and buying stake)
    reaching it; both are ``None`` when the value is infinite, and for the
    2-coherent extension ``entry`` is ``None`` when the vacuous bound
    ``inf(Z|B)`` wins.
    """

    target: ConditionalGamble
    value: ExtendedValue
    entry: Optional[ConditionalGamble] = None
    stake: Optional[Fraction] = None


def _check_target(P: Assessment, target: ConditionalGamble):
    if P.partition is not None and target.partition != P.partition:
        raise PartitionMismatch("target and assessment differ in partition")


def natext_2convex(P: Assessment, target: ConditionalGamble) -> ExtensionReport:
    """Smallest value forced on ``target`` by unit-stake exchanges.

    For an entry ``(X|A, v)`` with gain ``g = A(X - v)``, selling ``Z|B`` at
    ``alpha`` against buying ``X|A`` has conditional supremum
    ``max(c, m + alpha)`` where ``c = max of g on A & ~B`` and
    ``m = max of g - Z on B``; the entry therefore admits every
    ``alpha < -m`` when ``c < 0`` and nothing otherwise.
    """
    _check_target(P, target)
    Z, B = target.gamble, target.cond
    best = NEG_INF
    best_entry = None
    for cg, v in P.items():
        g = cg.elementary_gain(v)
        outside = cg.cond & ~B
        if outside and restrict_sup(g, outside) >= 0:
            continue
        bound = -restrict_sup(g - Z, B)
        if bound > best:
            best, best_entry = ExtendedValue(bound), cg
    if best_entry is None:
        return ExtensionReport(target, NEG_INF)
    return ExtensionReport(target, best, best_entry, Fraction(1))


def natext_2coherent(P: Assessment, target: ConditionalGamble) -> ExtensionReport:
    """Like :func:`natext_2convex`, with a free buying stake ``s >= 0``.

    ``s = 0`` always admits prices below ``inf(Z|B)``.  For ``s > 0`` an
    entry is usable iff its gain is negative on ``A & ~B``; it then admits
    prices below ``h(s) = min over B of Z - s g``, a concave piecewise
    linear function maximised exactly.
    """
    _check_target(P, target)
    Z, B = target.gamble, target.cond
    best = ExtendedValue(restrict_inf(Z, B))
    best_entry, best_stake = None, Fraction(0)
    for cg, v in P.items():
        g = cg.elementary_gain(v)
        outside = cg.cond & ~B
        if outside and restrict_sup(g, outside) >= 0:
            continue
        pieces = [AffinePiece(-g.values[w], Z.values[w]) for w in B]
        value, s = concave_pwl_max(pieces)
        if not value.is_finite:
            return ExtensionReport(target, POS_INF)
        if value > best:
            best, best_entry, best_stake = value, cg, s
    return ExtensionReport(target, best, best_entry, best_stake)


def natext_table(P: Assessment, targets: Sequence[ConditionalGamble],
                 mode: str = TWO_CONVEX) -> list:
    """Extension reports for several targets.

    Targets that are entries of ``P`` are cross-checked against the
    matching consistency check: in ``two_convex`` mode the extension
    reproduces ``P`` on its domain iff ``P`` is 2-convex; in
    ``two_coherent`` mode a 2-coherent ``P`` is reproduced.
    """
    if mode == TWO_CONVEX:
        extend, check = natext_2convex, check_2convex
    elif mode == TWO_COHERENT:
        extend, check = natext_2coherent, check_2coherent
    else:
        raise DomainError(f"unknown extension mode {mode!r}")
    reports = [extend(P, t) for t in targets]
    on_domain = [r for r in reports if r.target in P]
    if on_domain:
        reproduced = all(r.value == P[r.target] for r in on_domain)
        full = len({r.target for r in on_domain}) == len(P)
        consistent = check(P).satisfied
        if consistent and not reproduced:
            raise AssertionError(f"{mode} extension moved a consistent assessment")
        if mode == TWO_CONVEX and full and reproduced and not consistent:
            raise AssertionError("2-convex extension fixed an inconsistent assessment")
    return reports


def gbr_interval(target: ConditionalGamble) -> tuple:
    """Values admissible as a solution of the conditioning equation
    ``P(A(X - r)) = 0`` in a 2-coherent family: ``[inf(X|A), sup(X|A)]``."""
    return restrict_inf(target.gamble, target.cond), restrict_sup(target.gamble, target.cond)


def gbr_assessment(A: Event, X: Gamble, r, q, pA, pXA) -> Assessment:
    """The four-entry family ``{A, X|A, A(X - r), A(X - q)}``."""
    omega = A.partition.omega
    return Assessment([
        (A.indicator() | omega, to_fraction(pA)),
        (X | A, to_fraction(pXA)),
        ((A * (X - to_fraction(r))) | omega, Fraction(0)),
        ((A * (X - to_fraction(q))) | omega, Fraction(0)),
    ])


def verify_gbr_family(A: Event, X: Gamble, r, q, pA, pXA) -> Verdict:
    """2-coherence of the four-entry family built on the conditioning
    equation with two distinct roots ``r`` and ``q``."""
    r, q, pA, pXA = (to_fraction(v) for v in (r, q, pA, pXA))
    problems = []
    if X.partition != A.partition:
        problems.append("X and A live on different partitions")
    if r == q:
        problems.append("r and q must differ")
    if not A:
        problems.append("A must not be empty")
    elif A == A.partition.omega:
        problems.append("A must differ from the sure event")
    if not 0 < pA <= 1:
        problems.append(f"P(A) = {pA} must lie in (0, 1]")
    if problems:
        raise PreconditionError(problems)
    return check_2coherent(gbr_assessment(A, X, r, q, pA, pXA))

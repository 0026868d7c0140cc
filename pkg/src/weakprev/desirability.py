"""The set of desirable gambles induced by an assessment.

Members of ``A'`` have the form ``lam * B (X - x) + Y`` with ``X|B`` an
assessed conditional gamble, ``x`` strictly below its assessed value,
``Y`` pointwise non-negative and ``lam >= 0``.  In ``two_convex`` mode
``lam`` is fixed at 1.  Generators range over the entries of the
assessment only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .checker import check_1aul, check_2coherent, check_centered
from .core import (
    NEG_INF, POS_INF, Assessment, ConditionalGamble, DomainError, ExtendedValue,
    Gamble, PartitionMismatch, PreconditionError, restrict_inf,
)
from .solver import GE, LE, OPTIMAL, UNBOUNDED, LinearProgram, lp_solve

NONNEG_ONLY = "nonneg_only"


class DesirabilityMode(str, Enum):
    TWO_COHERENT = "two_coherent"
    TWO_CONVEX = "two_convex"


def _mode(mode) -> DesirabilityMode:
    try:
        return DesirabilityMode(mode)
    except ValueError:
        raise DomainError(f"unknown desirability mode {mode!r}") from None


@dataclass(frozen=True)
class MembershipWitness:
    """``lam * B (X - x) + residual``; for ``nonneg_only`` the gamble is the
    residual itself and ``x`` is ``None``."""

    generator: Union[ConditionalGamble, str]
    lam: Fraction
    x: Optional[Fraction]
    residual: Gamble

    def reconstruct(self) -> Gamble:
        if self.generator == NONNEG_ONLY:
            return self.residual
        g = self.generator
        return (g.cond * (g.gamble - self.x)) * self.lam + self.residual

    def is_sound(self, P: Assessment) -> bool:
        if not all(v >= 0 for v in self.residual.values) or self.lam < 0:
            return False
        if self.generator == NONNEG_ONLY:
            return self.lam == 0
        return self.x < P[self.generator]


def _slack_lp(cg, v, Z_values, fixed_lam):
    """Variables ``(lam, mu)`` with ``mu = lam * x``:
    ``lam C Y - mu C <= Z`` pointwise, maximise ``lam v - mu`` capped at 1."""
    rows = []
    for w in range(len(Z_values)):
        if w in cg.cond.members:
            rows.append(((cg.gamble.values[w], Fraction(-1)), LE, Z_values[w]))
        elif Z_values[w] < 0:
            return None
    rows.append(((v, Fraction(-1)), LE, Fraction(1)))
    lam_bounds = (Fraction(1), Fraction(1)) if fixed_lam else (Fraction(0), None)
    return LinearProgram((v, Fraction(-1)), rows, (lam_bounds, (None, None)))


def _generator_witness(P, cg, Z, fixed_lam) -> Optional[MembershipWitness]:
    v = P[cg]
    lp = _slack_lp(cg, v, Z.values, fixed_lam)
    if lp is None:
        return None
    out = lp_solve(lp)
    if out.status != OPTIMAL or out.value <= 0:
        return None
    lam, mu = out.point
    if lam == 0:
        return None
    x = mu / lam
    residual = Z - (cg.cond * (cg.gamble - x)) * lam
    return MembershipWitness(cg, lam, x, residual)


def aprime_member(P: Assessment, Z: Gamble, mode=DesirabilityMode.TWO_COHERENT
                  ) -> Optional[MembershipWitness]:
    """A decomposition of ``Z`` as a member of ``A'``, or ``None``."""
    mode = _mode(mode)
    if P.partition is not None and Z.partition != P.partition:
        raise PartitionMismatch("gamble and assessment differ in partition")
    if mode is DesirabilityMode.TWO_COHERENT and all(v >= 0 for v in Z.values):
        return MembershipWitness(NONNEG_ONLY, Fraction(0), None, Z)
    fixed = mode is DesirabilityMode.TWO_CONVEX
    for cg in P:
        w = _generator_witness(P, cg, Z, fixed)
        if w is not None:
            return w
    return None


def _recovery_lp(cg, v, target: ConditionalGamble, fixed_lam, strict_probe):
    """Variables ``(lam, mu, x)``; the queried gamble is ``B (X - x)``."""
    n = len(cg.gamble.values)
    B, X = target.cond.members, target.gamble.values
    rows = []
    for w in range(n):
        a = cg.gamble.values[w] if w in cg.cond.members else Fraction(0)
        c = Fraction(-1) if w in cg.cond.members else Fraction(0)
        b = Fraction(1) if w in B else Fraction(0)
        rhs = X[w] if w in B else Fraction(0)
        rows.append(((a, c, b), LE, rhs))
    lam_bounds = (Fraction(1), Fraction(1)) if fixed_lam else (Fraction(0), None)
    bounds = (lam_bounds, (None, None), (None, None))
    if strict_probe:
        rows.append(((v, Fraction(-1), Fraction(0)), LE, Fraction(1)))
        return LinearProgram((v, Fraction(-1), Fraction(0)), rows, bounds)
    rows.append(((v, Fraction(-1), Fraction(0)), GE, Fraction(0)))
    return LinearProgram((Fraction(0), Fraction(0), Fraction(1)), rows, bounds)


def recover_prevision(P: Assessment, target: ConditionalGamble,
                      mode=DesirabilityMode.TWO_COHERENT) -> ExtendedValue:
    """``sup{x : B(X - x) in A'}`` for ``target = X|B``.

    Per generator the admissible ``(lam, mu, x)`` form a polyhedron cut by
    the open half-space ``mu < lam v``.  When that cut is non-empty, the
    supremum of ``x`` over it equals the maximum over its closure, so one
    LP decides emptiness and a second one gives the value.
    """
    mode = _mode(mode)
    fixed = mode is DesirabilityMode.TWO_CONVEX
    best = NEG_INF
    if not fixed:
        best = ExtendedValue(restrict_inf(target.gamble, target.cond))
    for cg, v in P.items():
        probe = lp_solve(_recovery_lp(cg, v, target, fixed, True))
        if probe.status != OPTIMAL or probe.value <= 0:
            continue
        out = lp_solve(_recovery_lp(cg, v, target, fixed, False))
        if out.status == UNBOUNDED:
            return POS_INF
        if out.value > best:
            best = ExtendedValue(out.value)
    return best


def nonpositive_member(P: Assessment, mode=DesirabilityMode.TWO_COHERENT
                       ) -> Optional[MembershipWitness]:
    """A member of ``A'`` that is pointwise ``<= 0`` and, in ``two_coherent``
    mode, not identically zero; ``None`` if there is none.

    Such a member exists exactly when some generator has ``x < v`` with
    ``X <= x`` on ``B``; by openness ``x`` can then be pushed up to make
    the gamble strictly negative on ``B``.
    """
    mode = _mode(mode)
    fixed = mode is DesirabilityMode.TWO_CONVEX
    for cg, v in P.items():
        zero = cg.partition.zero()
        w = _generator_witness(P, cg, zero, fixed)
        if w is None:
            continue
        return MembershipWitness(cg, w.lam, (w.x + v) / 2, zero)
    return None


# -- property suite ---------------------------------------------------------

@dataclass
class AxiomReport:
    mode: DesirabilityMode
    samples: int
    seed: int
    checked: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def fail(self, axiom, detail, **data):
        self.counterexamples.append({"axiom": axiom, "detail": detail, **data})


def _rat(rng, lo, hi, strict_lo=False) -> Fraction:
    den = rng.randint(1, 8)
    a, b = int(lo * den), int(hi * den)
    if strict_lo:
        a += 1
    return Fraction(rng.randint(a, b), den)


def random_member(P: Assessment, mode, rng) -> MembershipWitness:
    """A random element of ``A'`` built from a random decomposition."""
    mode = _mode(mode)
    part = P.partition
    residual = part.gamble([_rat(rng, 0, 2) for _ in part.atoms])
    if not P:
        return MembershipWitness(NONNEG_ONLY, Fraction(0), None, residual)
    cg = rng.choice(list(P))
    lam = Fraction(1) if mode is DesirabilityMode.TWO_CONVEX else _rat(rng, 0, 4)
    x = P[cg] - _rat(rng, 0, 2, strict_lo=True)
    return MembershipWitness(cg, lam, x, residual)


def axiom_suite(P: Assessment, mode=DesirabilityMode.TWO_COHERENT,
                samples: int = 200, seed: int = 0) -> AxiomReport:
    """Sampled checks of the desirability axioms satisfied by ``A'``.

    Closure under positive scaling and non-negative additions, the
    nonpositive-orthant condition and, in ``two_coherent`` mode, positive
    supremum of sums.  For centered assessments every gamble vanishing off
    some ``B`` and strictly positive on it must be a member.  Each sample
    ``i`` draws from its own generator seeded by ``(seed, i)``.
    """
    mode = _mode(mode)
    if samples < 1:
        raise DomainError("samples must be positive")
    if P.partition is None:
        raise PreconditionError(["the assessment has no entries"])
    report = AxiomReport(mode, samples, seed)
    part = P.partition
    coherent_mode = mode is DesirabilityMode.TWO_COHERENT
    two_coherent = check_2coherent(P).satisfied if coherent_mode else None
    one_aul = check_1aul(P).satisfied
    centered = check_centered(P).satisfied
    counts = {"a'": 0, "b'": 0, "c'": 0, "centered": 0, "witness": 0}

    for i in range(samples):
        rng = random.Random(f"{seed}:{i}")
        w1, w2 = random_member(P, mode, rng), random_member(P, mode, rng)
        Z1, Z2 = w1.reconstruct(), w2.reconstruct()
        for w, Z in ((w1, Z1), (w2, Z2)):
            found = aprime_member(P, Z, mode)
            counts["witness"] += 1
            if found is None or found.reconstruct() != Z or not found.is_sound(P):
                report.fail("witness", "sampled member not recognised", gamble=Z, built=w)
        a = _rat(rng, 0, 3) if coherent_mode else Fraction(1)
        Y = part.gamble([_rat(rng, 0, 2) for _ in part.atoms])
        moved = Z1 * a + Y
        counts["a'"] += 1
        if aprime_member(P, moved, mode) is None:
            report.fail("a'", f"{a} * member + non-negative gamble left the set",
                        gamble=moved, built=w1)
        if coherent_mode:
            total = Z1 + Z2
            if not total.is_zero():
                counts["c'"] += 1
                if total.sup() <= 0:
                    item = dict(gamble=total, built=(w1, w2))
                    if two_coherent:
                        report.fail("c'", "sum of members has non-positive sup", **item)
                    else:
                        report.notes.append(("c'", item))
        if centered:
            conds = P.cond_events()
            B = conds[rng.randrange(len(conds))]
            vals = [_rat(rng, 0, 3, strict_lo=True) if k in B.members else 0
                    for k in range(len(part))]
            R = part.gamble(vals)
            counts["centered"] += 1
            if aprime_member(P, R, mode) is None:
                report.fail("centered", "positive gamble on a conditioning event "
                            "is not a member", gamble=R)

    bad = nonpositive_member(P, mode)
    counts["b'"] += 1
    if coherent_mode:
        if two_coherent and bad is not None:
            report.fail("b'", "non-zero member that is nowhere positive",
                        built=bad, gamble=bad.reconstruct())
        elif not two_coherent:
            report.notes.append(("b'", "assessment is not 2-coherent; not asserted"))
    elif (bad is None) != one_aul:
        report.fail("b'", f"nonpositive-orthant emptiness is {bad is None} "
                    f"but 1-AUL is {one_aul}", built=bad)
    report.checked = counts
    return report

"""Shared builders for the test-suite."""

import itertools
import math
import random
from fractions import Fraction

from weakprev.core import Assessment, Partition
from weakprev.models import FiniteDistribution, expectation_assessment


def four_atom_assessment():
    """Lower probability on all events of four atoms: 1 on the sure event,
    1/2 on events with two or three atoms containing ``a``, 0 otherwise."""
    part = Partition("abcd")
    entries = []
    for E in part.events():
        labels = E.labels
        if len(labels) == 4:
            v = Fraction(1)
        elif 2 <= len(labels) <= 3 and "a" in labels:
            v = Fraction(1, 2)
        else:
            v = Fraction(0)
        entries.append((E.indicator() | part.omega, v))
    return Assessment(entries, part)


def rand_rat(rng, lo=-2, hi=2, den=4):
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_event(rng, part, nonempty=True):
    while True:
        members = [a for a in part.atoms if rng.random() < 0.6]
        if members or not nonempty:
            return part.event(members)


def random_gamble(rng, part, lo=-2, hi=2, den=4):
    return part.gamble([rand_rat(rng, lo, hi, den) for _ in part.atoms])


def random_assessment(rng, max_atoms=4, max_entries=4, lo=-2, hi=2, den=4,
                      min_entries=1):
    """Random assessment with values drawn near the conditional range so
    that all consistency classes occur with reasonable frequency."""
    part = Partition([f"w{i}" for i in range(rng.randint(1, max_atoms))])
    entries = []
    for _ in range(rng.randint(min_entries, max_entries)):
        B = random_event(rng, part)
        X = random_gamble(rng, part, lo, hi, den)
        cg = X | B
        if any(cg == c for c, _ in entries):
            continue
        if rng.random() < 0.7:
            v = Fraction(rng.randint(int(cg.inf() * den), int(cg.sup() * den)), den)
        else:
            v = rand_rat(rng, lo, hi, den)
        entries.append((cg, v))
    return Assessment(entries, part)


def random_distribution(rng, part, positive=True):
    weights = [rng.randint(1 if positive else 0, 6) for _ in part.atoms]
    if sum(weights) == 0:
        weights[0] = 1
    total = sum(weights)
    return FiniteDistribution(part, [Fraction(w, total) for w in weights])


def random_expectation(rng, max_atoms=4, entries=4):
    part = Partition([f"w{i}" for i in range(rng.randint(1, max_atoms))])
    dist = random_distribution(rng, part)
    targets = []
    for _ in range(entries):
        cg = random_gamble(rng, part) | random_event(rng, part)
        if cg not in targets:
            targets.append(cg)
    return expectation_assessment(dist, targets), dist


def seeded(seed):
    return random.Random(seed)


def all_events(part):
    return list(part.events())


def pairs(seq):
    return itertools.product(seq, repeat=2)


def def3_violation(P):
    """Direct scan: an ordered pair whose unit-stake
    bought-minus-sold gain is negative on the union of the conditions."""
    for (c0, v0), (c1, v1) in pairs(P.entries):
        g = c1.elementary_gain(v1) - c0.elementary_gain(v0)
        S = c0.cond | c1.cond
        if max(g.values[w] for w in S) < 0:
            return (c0, c1)
    return None


GRID_S0 = range(-8, 9)   # stakes in quarters
GRID_S1 = range(0, 9)


def grid_2coherent_violation(P):
    """Scan stakes ``(s0, s1)`` on a 1/4 grid for a pair gain
    ``s1 g1 - s0 g0`` with negative supremum on the realised condition.

    Gains are rescaled to integers; only signs matter.
    """
    for (c0, _), (c1, _) in pairs(P.entries):
        d0 = c0.elementary_gain(P[c0])
        d1 = c1.elementary_gain(P[c1])
        den = 1
        for v in d0.values + d1.values:
            den = den * v.denominator // math.gcd(den, v.denominator)
        g0 = [int(v * den) for v in d0.values]
        g1 = [int(v * den) for v in d1.values]
        B0, B1 = sorted(c0.cond.members), sorted(c1.cond.members)
        both = sorted(c0.cond.members | c1.cond.members)
        for k0 in GRID_S0:
            for k1 in GRID_S1:
                if k0 == 0 and k1 == 0:
                    continue
                S = both if (k0 and k1) else (B0 if k0 else B1)
                if max(k1 * g1[w] - k0 * g0[w] for w in S) < 0:
                    return (c0, Fraction(k0, 4), c1, Fraction(k1, 4))
    return None


def centered(P):
    """``P`` with ``0|B -> 0`` added for every conditioning event, or ``None``
    when ``P`` already gives some ``0|B`` a non-zero value."""
    zeros = [P.partition.zero() | c for c in P.cond_events()]
    if any(z in P and P[z] != 0 for z in zeros):
        return None
    return P.with_entries([(z, 0) for z in zeros])

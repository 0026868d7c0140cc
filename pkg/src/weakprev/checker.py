"""Consistency checks for finite conditional lower previsions.

Every check returns a :class:`Verdict`.  Failed gain-based checks carry a
:class:`Witness`: the signed stakes of a betting scheme whose gain has a
negative supremum on its conditioning event.  Positive stakes buy a
conditional gamble at its assessed price, negative stakes sell it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import (
    Assessment, ConditionalGamble, DomainError, Event, PreconditionError,
    gain, restrict_inf, restrict_sup, to_fraction,
)
from .solver import GE, LE, EQ, OPTIMAL, LinearProgram, lp_solve, strict_feasible_1d

INTERNALITY = "internality"
ONE_AUL = "1-aul"
TWO_CONVEX = "2-convex"
CENTERED_TWO_CONVEX = "centered-2-convex"
TWO_COHERENT = "2-coherent"
N_CONVEX = "n-convex"
N_COHERENT = "n-coherent"
CONVEX = "convex"
C_CONVEX = "c-convex"
COHERENT = "coherent"
CAPACITY = "capacity"

TAGS = (INTERNALITY, ONE_AUL, TWO_CONVEX, CENTERED_TWO_CONVEX, TWO_COHERENT,
        N_CONVEX, N_COHERENT, CONVEX, C_CONVEX, COHERENT, CAPACITY)


@dataclass(frozen=True)
class ConsistencyClass:
    tag: str
    n: Optional[int] = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise DomainError(f"unknown consistency class {self.tag!r}")
        if self.tag in (N_CONVEX, N_COHERENT):
            if self.n is None or self.n < 1:
                raise DomainError(f"{self.tag} needs n >= 1")
        elif self.n is not None:
            raise DomainError(f"{self.tag} takes no parameter")

    def __str__(self):
        if self.tag in (N_CONVEX, N_COHERENT):
            return f"{self.n}-{self.tag[2:]}"
        return self.tag

    @classmethod
    def parse(cls, name: str, n: Optional[int] = None) -> ConsistencyClass:
        """Read names such as ``"2-coherent"``, ``"3-convex"``,
        ``"n-coherent"`` (with ``n``) or ``"1-coherent"``."""
        name = name.strip().lower().replace("_", "-")
        aliases = {"1-coherent": INTERNALITY, "1-coherence": INTERNALITY,
                   "c-2-convex": CENTERED_TWO_CONVEX, "1aul": ONE_AUL}
        name = aliases.get(name, name)
        if name in (N_CONVEX, N_COHERENT):
            return cls(name, n)
        head, _, tail = name.partition("-")
        if head.isdigit() and tail in ("convex", "coherent"):
            k = int(head)
            if k == 2:
                return cls(TWO_CONVEX if tail == "convex" else TWO_COHERENT)
            return cls("n-" + tail, k)
        return cls(name)


@dataclass(frozen=True)
class Witness:
    """A betting scheme with negative conditional supremum of its gain."""

    terms: tuple
    conditioning: Event
    sup_value: Fraction

    def recompute(self, P) -> Fraction:
        """Supremum of the gain on ``conditioning``, evaluated from scratch."""
        return restrict_sup(gain(self.terms, P), self.conditioning)

    def describe(self) -> str:
        parts = []
        for cg, stake in self.terms:
            action = "buy" if stake > 0 else "sell"
            parts.append(f"{action} {cg} with stake {abs(stake)}")
        return "; ".join(parts) + \
            f"; sup of gain on {self.conditioning} is {self.sup_value}"


@dataclass(frozen=True)
class Verdict:
    satisfied: bool
    witness: Optional[Witness] = None
    detail: str = field(default="", compare=False)

    def __bool__(self):
        return self.satisfied


SATISFIED = Verdict(True)


def _make_witness(P, terms) -> Witness:
    terms = tuple((cg, Fraction(s)) for cg, s in terms if s)
    cond = terms[0][0].cond
    for cg, _ in terms[1:]:
        cond = cond | cg.cond
    sup_value = restrict_sup(gain(terms, P), cond)
    if sup_value >= 0:
        raise AssertionError(f"internal error: witness with sup {sup_value} >= 0")
    return Witness(terms, cond, sup_value)


def _violated(P, terms, detail="") -> Verdict:
    return Verdict(False, _make_witness(P, terms), detail)


def check_internality(P: Assessment) -> Verdict:
    """1-coherence: every value lies between the conditional inf and sup."""
    for cg, v in P.items():
        if v > cg.sup():
            return _violated(P, [(cg, 1)], f"{cg}: value {v} above sup {cg.sup()}")
        if v < cg.inf():
            return _violated(P, [(cg, -1)], f"{cg}: value {v} below inf {cg.inf()}")
    return SATISFIED


def check_1aul(P: Assessment) -> Verdict:
    """1-avoiding uniform loss: no value above its conditional sup."""
    for cg, v in P.items():
        if v > cg.sup():
            return _violated(P, [(cg, 1)], f"{cg}: value {v} above sup {cg.sup()}")
    return SATISFIED


def check_2convex(P: Assessment) -> Verdict:
    """Buy one entry and sell one, both with unit stake."""
    items = P.entries
    gains = [cg.elementary_gain(v) for cg, v in items]
    for (cg0, _), g0 in zip(items, gains):
        for (cg1, _), g1 in zip(items, gains):
            if cg0 == cg1:
                continue
            if restrict_sup(g1 - g0, cg0.cond | cg1.cond) < 0:
                return _violated(P, [(cg1, 1), (cg0, -1)])
    return SATISFIED


def _nonzero_in_open(lo, hi) -> Fraction:
    """A nonzero point of the non-empty open interval ``(lo, hi)``."""
    w = strict_feasible_1d([lo], [hi])
    if w != 0:
        return w
    return hi / 2 if hi is not None else Fraction(1)


def check_2coherent(P: Assessment) -> Verdict:
    """Buy one entry with stake ``s1 >= 0``, sell another with any real stake.

    Each ordered pair is settled in closed form: the single-term regimes
    reduce to internality, and with ``s1 > 0`` the stakes are normalised to
    ``s1 = 1``, leaving a system of strict one-variable inequalities in the
    selling stake.
    """
    verdict = check_internality(P)
    if not verdict:
        return verdict
    items = P.entries
    gains = [cg.elementary_gain(v) for cg, v in items]
    for (cg0, _), g0 in zip(items, gains):
        for (cg1, _), g1 in zip(items, gains):
            S = cg0.cond | cg1.cond
            lows, highs = [], []
            feasible = True
            for w in S:
                a, b = g0.values[w], g1.values[w]
                if a > 0:
                    lows.append(b / a)
                elif a < 0:
                    highs.append(b / a)
                elif b >= 0:
                    feasible = False
                    break
            if not feasible:
                continue
            lo = max(lows) if lows else None
            hi = min(highs) if highs else None
            if lo is not None and hi is not None and lo >= hi:
                continue
            s0 = _nonzero_in_open(lo, hi)
            if cg0 == cg1:
                net = 1 - s0
                if net == 0:
                    continue
                return _violated(P, [(cg1, net)])
            return _violated(P, [(cg1, 1), (cg0, -s0)])
    return SATISFIED


def _unions(events) -> list:
    """All non-empty unions of sub-families of ``events``, smallest first."""
    found = {frozenset()}
    for E in {e.members for e in events}:
        found |= {u | E for u in found}
    found.discard(frozenset())
    return sorted(found, key=lambda u: (len(u), sorted(u)))


def _epsilon_lp(gains, bought, sold, S, sold_fixed):
    """Maximise eps subject to ``gain(w) + eps <= 0`` on ``S``.

    Variables are the bought stakes, then the sold stake unless
    ``sold_fixed`` (convex gains, sold stake 1), then eps.  Stakes are
    normalised to sum to one.  Returns the stakes of a violating scheme or
    ``None``.
    """
    k = len(bought)
    free_sold = sold is not None and not sold_fixed
    dim = k + int(free_sold) + 1
    rows = []
    for w in sorted(S):
        coeffs = [gains[i].values[w] for i in bought]
        rhs = Fraction(0)
        if free_sold:
            coeffs.append(-gains[sold].values[w])
        elif sold is not None:
            rhs = gains[sold].values[w]
        coeffs.append(Fraction(1))
        rows.append((coeffs, LE, rhs))
    norm = [Fraction(1)] * (dim - 1) + [Fraction(0)]
    rows.append((norm, EQ, 1))
    objective = [Fraction(0)] * (dim - 1) + [Fraction(1)]
    bounds = [(0, None)] * (dim - 1) + [(None, 1)]
    out = lp_solve(LinearProgram(tuple(objective), tuple(rows), tuple(bounds)))
    if out.status != OPTIMAL or out.value <= 0:
        return None
    stakes = {}
    for i, s in zip(bought, out.point[:k]):
        if s:
            stakes[i] = s
    if free_sold:
        stakes[sold] = -out.point[k]
    elif sold is not None:
        stakes[sold] = Fraction(-1)
    return stakes


def _as_n(n):
    if n is None or n == math.inf:
        return None
    if isinstance(n, float) or int(n) != n:
        raise DomainError(f"n must be a positive integer or infinity, got {n!r}")
    return int(n)


def _scheme_witness(P, items, stakes):
    terms = [(items[i][0], s) for i, s in sorted(stakes.items())]
    return _violated(P, terms)


def check_n_coherent(P: Assessment, n=None) -> Verdict:
    """Williams coherence restricted to at most ``n`` elementary gains.

    ``n=None`` (or ``math.inf``) is full coherence.  For every achievable
    conditioning event ``S`` and every choice of sold entry, one LP over
    all entries conditioned inside ``S`` decides whether a violating
    scheme exists; only when it does and needs more than ``n`` terms are
    the smaller supports enumerated.
    """
    n = _as_n(n)
    if n is not None and n < 1:
        raise DomainError("n-coherence needs n >= 1")
    items = P.entries
    gains = [cg.elementary_gain(v) for cg, v in items]
    conds = [cg.cond.members for cg, _ in items]
    for S in _unions([cg.cond for cg, _ in items]):
        inside = [i for i, c in enumerate(conds) if c <= S]
        for sold in [None] + inside:
            bought = [i for i in inside if i != sold]
            if not bought and sold is None:
                continue
            stakes = _epsilon_lp(gains, bought, sold, S, sold_fixed=False)
            if stakes is None:
                continue
            extra = int(sold is not None)
            if n is None or len(bought) + extra <= n:
                return _scheme_witness(P, items, stakes)
            for size in range(1 - extra, n - extra + 1):
                for T in itertools.combinations(bought, size):
                    join = frozenset().union(
                        *(conds[i] for i in T), conds[sold] if extra else ())
                    if join != S:
                        continue
                    stakes = _epsilon_lp(gains, list(T), sold, S, sold_fixed=False)
                    if stakes is not None:
                        return _scheme_witness(P, items, stakes)
    return SATISFIED


def check_coherent(P: Assessment) -> Verdict:
    return check_n_coherent(P, None)


def check_n_convex(P: Assessment, n=None) -> Verdict:
    """Convexity restricted to one sold term plus at most ``n - 1`` bought.

    ``n=None`` is full convexity.
    """
    n = _as_n(n)
    if n is not None and n < 2:
        raise DomainError("n-convexity needs n >= 2 (one sold and one bought term)")
    items = P.entries
    gains = [cg.elementary_gain(v) for cg, v in items]
    conds = [cg.cond.members for cg, _ in items]
    unions = _unions([cg.cond for cg, _ in items])
    for sold in range(len(items)):
        B0 = conds[sold]
        targets = sorted({B0 | U for U in unions}, key=lambda u: (len(u), sorted(u)))
        for S in targets:
            bought = [i for i, c in enumerate(conds) if c <= S and i != sold]
            if not bought:
                continue
            stakes = _epsilon_lp(gains, bought, sold, S, sold_fixed=True)
            if stakes is None:
                continue
            if n is None or len(bought) + 1 <= n:
                return _scheme_witness(P, items, stakes)
            for size in range(1, n):
                for T in itertools.combinations(bought, size):
                    if B0.union(*(conds[i] for i in T)) != S:
                        continue
                    stakes = _epsilon_lp(gains, list(T), sold, S, sold_fixed=True)
                    if stakes is not None:
                        return _scheme_witness(P, items, stakes)
    return SATISFIED


def check_convex(P: Assessment) -> Verdict:
    return check_n_convex(P, None)


def check_centered(P: Assessment) -> Verdict:
    """Every conditioning event B in use has ``0|B`` assessed at zero."""
    for B in P.cond_events():
        zero = P.partition.zero() | B
        if zero not in P:
            return Verdict(False, None, f"0|{B} is not assessed")
        v = P[zero]
        if v:
            return _violated(P, [(zero, 1 if v > 0 else -1)],
                             f"P(0|{B}) = {v}, not 0")
    return SATISFIED


def check_capacity(P: Assessment) -> Verdict:
    """Normalised, inclusion-monotone lower probability on all events."""
    omega = P.partition.omega if P.partition is not None else None
    if omega is None:
        raise PreconditionError("an empty assessment has no event domain")
    problems = []
    values = {}
    for E in P.partition.events():
        cg = E.indicator() | omega
        if cg not in P:
            problems.append(f"event {E} is not assessed")
        else:
            values[E.members] = (cg, P[cg])
    if len(P) != len(values):
        problems.append("assessment contains entries other than unconditional events")
    if problems:
        raise PreconditionError(problems)
    empty_cg, v = values[frozenset()]
    if v != 0:
        return _violated(P, [(empty_cg, 1 if v > 0 else -1)], f"c(empty) = {v}")
    omega_cg, v = values[omega.members]
    if v != 1:
        return _violated(P, [(omega_cg, 1 if v > 1 else -1)], f"c(Omega) = {v}")
    for small, (cg1, v1) in values.items():
        for big, (cg2, v2) in values.items():
            if small < big and v1 > v2:
                return _violated(P, [(cg1, 1), (cg2, -1)],
                                 f"c({cg1.gamble}) = {v1} > c({cg2.gamble}) = {v2}")
    return SATISFIED


AXIOMS = ("A1", "A1'", "A2", "A3", "A4", "A5", "A6", "monotone", "translation")


def check_axiom(P: Assessment, axiom: str, instance: tuple) -> bool:
    """Evaluate one axiom on one instance.

    Instances by axiom (``XB``, ``YB`` conditional gambles on the same
    event, ``lam``/``mu`` rationals):

    ``A1``: ``(XB, YB)``; ``A1'``: ``(XB, YB, mu)``; ``A2``: ``(XB, lam)``
    with ``lam >= 0``; ``A3``: ``(XB, YB)``; ``A4``: ``(X, A, B)`` with X a
    gamble and A, B events; ``A5``: ``(XB, YB, lam)`` with ``0 < lam < 1``;
    ``A6``: ``(XB, lam)`` with ``lam < 0``; ``monotone``: ``(XB, YB)``;
    ``translation``: ``(XB, mu)``.
    """
    if axiom not in AXIOMS:
        raise DomainError(f"unknown axiom {axiom!r}")

    def need(*cgs):
        missing = [str(cg) for cg in cgs if cg not in P]
        if missing:
            raise PreconditionError([f"{m} is not assessed" for m in missing])

    def same_cond(XB, YB):
        if XB.cond != YB.cond:
            raise DomainError(f"{axiom} needs a common conditioning event")

    if axiom == "A4":
        X, A, B = instance
        if not (A & B):
            raise DomainError("A4 needs A & B non-empty")
        inner = X | (A & B)
        need(inner)
        outer = (A * (X - P[inner])) | B
        need(outer)
        return P[outer] == 0

    XB = instance[0]
    B = XB.cond
    if axiom in ("A1", "A3", "monotone"):
        YB = instance[1]
        same_cond(XB, YB)
        if axiom == "A3":
            S = (XB.gamble + YB.gamble) | B
            need(XB, YB, S)
            return P[S] >= P[XB] + P[YB]
        need(XB, YB)
        if axiom == "A1":
            return P[XB] - P[YB] <= restrict_sup(XB.gamble - YB.gamble, B)
        if restrict_inf(XB.gamble - YB.gamble, B) >= 0:
            return P[XB] >= P[YB]
        return True
    if axiom == "A1'":
        YB, mu = instance[1], to_fraction(instance[2])
        same_cond(XB, YB)
        need(XB, YB)
        if restrict_inf(XB.gamble - YB.gamble, B) >= mu:
            return P[XB] >= P[YB] + mu
        return True
    if axiom == "A5":
        YB, lam = instance[1], to_fraction(instance[2])
        same_cond(XB, YB)
        if not 0 < lam < 1:
            raise DomainError("A5 needs 0 < lambda < 1")
        mix = (XB.gamble * lam + YB.gamble * (1 - lam)) | B
        need(XB, YB, mix)
        return P[mix] >= lam * P[XB] + (1 - lam) * P[YB]
    if axiom == "translation":
        mu = to_fraction(instance[1])
        shifted = (XB.gamble + mu) | B
        need(XB, shifted)
        return P[shifted] == P[XB] + mu
    lam = to_fraction(instance[1])
    scaled = (XB.gamble * lam) | B
    need(XB, scaled)
    if axiom == "A2":
        if lam < 0:
            raise DomainError("A2 needs lambda >= 0")
        return P[scaled] == lam * P[XB]
    if lam >= 0:
        raise DomainError("A6 needs lambda < 0")
    return P[scaled] <= lam * P[XB]


class LatticeViolation(AssertionError):
    """Two verdicts contradict a known implication between classes."""


def _implications(ns):
    C = ConsistencyClass
    rules = [
        (C(COHERENT), C(CONVEX)),
        (C(COHERENT), C(TWO_COHERENT)),
        (C(TWO_COHERENT), C(TWO_CONVEX)),
        (C(TWO_COHERENT), C(INTERNALITY)),
        (C(INTERNALITY), C(ONE_AUL)),
        (C(CENTERED_TWO_CONVEX), C(INTERNALITY)),
        (C(CENTERED_TWO_CONVEX), C(TWO_CONVEX)),
        (C(C_CONVEX), C(CONVEX)),
        (C(C_CONVEX), C(CENTERED_TWO_CONVEX)),
        (C(CONVEX), C(TWO_CONVEX)),
        (C(CAPACITY), C(CENTERED_TWO_CONVEX)),
        (C(CENTERED_TWO_CONVEX), C(CAPACITY)),
    ]
    for n in ns:
        rules += [
            (C(COHERENT), C(N_COHERENT, n)),
            (C(COHERENT), C(N_CONVEX, n)),
            (C(N_COHERENT, n), C(TWO_COHERENT)),
            (C(N_COHERENT, n), C(N_CONVEX, n)),
            (C(CONVEX), C(N_CONVEX, n)),
            (C(N_CONVEX, n), C(TWO_CONVEX)),
        ]
        for m in ns:
            if m < n:
                rules += [(C(N_COHERENT, n), C(N_COHERENT, m)),
                          (C(N_CONVEX, n), C(N_CONVEX, m))]
    return rules


def lattice_counterexamples(table: dict, ns=(3,)) -> list:
    """Pairs ``(stronger, weaker)`` where the stronger class holds but the
    weaker one fails."""
    bad = []
    for strong, weak in _implications(ns):
        if strong in table and weak in table and table[strong] and not table[weak]:
            bad.append((strong, weak))
    return bad


def classify(P: Assessment, ns=(3,)) -> dict:
    """Run every check; ``ns`` lists the extra n-coherence/n-convexity
    orders (each >= 3).  The capacity check only runs when ``P`` is
    defined on exactly all unconditional events.
    """
    C = ConsistencyClass
    table = {}
    table[C(INTERNALITY)] = check_internality(P)
    table[C(ONE_AUL)] = check_1aul(P)
    two_convex = check_2convex(P)
    table[C(TWO_CONVEX)] = two_convex
    centered = check_centered(P)
    table[C(CENTERED_TWO_CONVEX)] = two_convex if not two_convex else centered
    table[C(TWO_COHERENT)] = check_2coherent(P)
    for n in ns:
        if n < 3:
            raise DomainError("extra orders must be at least 3")
        table[C(N_CONVEX, n)] = check_n_convex(P, n)
        table[C(N_COHERENT, n)] = check_n_coherent(P, n)
    convex = check_convex(P)
    table[C(CONVEX)] = convex
    table[C(C_CONVEX)] = convex if not convex else centered
    table[C(COHERENT)] = check_coherent(P)
    if _is_event_domain(P):
        table[C(CAPACITY)] = check_capacity(P)
    bad = lattice_counterexamples(table, ns)
    if bad:
        pairs = ", ".join(f"{s} holds but {w} fails" for s, w in bad)
        raise LatticeViolation(f"inconsistent verdicts ({pairs}) for {P!r}")
    return table


def _is_event_domain(P: Assessment) -> bool:
    if P.partition is None or len(P) != 2 ** len(P.partition):
        return False
    omega = P.partition.omega
    return all((E.indicator() | omega) in P for E in P.partition.events())


def check_class(P: Assessment, cls: ConsistencyClass) -> Verdict:
    """Run the single check for ``cls``."""
    tag = cls.tag
    if tag == N_COHERENT:
        return check_internality(P) if cls.n == 1 else check_n_coherent(P, cls.n)
    if tag == N_CONVEX:
        return check_n_convex(P, cls.n)
    if tag in (CENTERED_TWO_CONVEX, C_CONVEX):
        base = check_2convex(P) if tag == CENTERED_TWO_CONVEX else check_convex(P)
        return base if not base else check_centered(P)
    return {
        INTERNALITY: check_internality, ONE_AUL: check_1aul, TWO_CONVEX: check_2convex,
        TWO_COHERENT: check_2coherent, CONVEX: check_convex, COHERENT: check_coherent,
        CAPACITY: check_capacity,
    }[tag](P)

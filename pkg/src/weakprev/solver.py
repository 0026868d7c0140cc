"""Exact linear programming and small one-dimensional routines.

The simplex below is a dense two-phase tableau method over
:class:`~fractions.Fraction` with Bland's anti-cycling rule.  Programs met
in this package have a handful of variables, so exactness matters far
more than speed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import NEG_INF, POS_INF, DomainError, ExtendedValue, to_fraction

LE, EQ, GE = "<=", "==", ">="

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """Maximise ``objective . x`` subject to linear constraints.

    ``constraints`` holds ``(coefficients, relation, rhs)`` triples with
    relation one of ``"<="``, ``"=="``, ``">="``.  ``bounds`` holds one
    ``(lower, upper)`` pair per variable, ``None`` meaning unbounded; when
    omitted every variable is free.
    """

    objective: tuple
    constraints: tuple = ()
    bounds: Optional[tuple] = None

    def __post_init__(self):
        obj = tuple(to_fraction(c) for c in self.objective)
        n = len(obj)
        if n < 1:
            raise DomainError("a linear program needs at least one variable")
        rows = []
        for coeffs, rel, rhs in self.constraints:
            coeffs = tuple(to_fraction(c) for c in coeffs)
            if len(coeffs) != n:
                raise DomainError(
                    f"constraint has {len(coeffs)} coefficients, expected {n}")
            if rel not in (LE, EQ, GE):
                raise DomainError(f"unknown relation {rel!r}")
            rows.append((coeffs, rel, to_fraction(rhs)))
        bounds = self.bounds
        if bounds is None:
            bounds = ((None, None),) * n
        if len(bounds) != n:
            raise DomainError(f"expected {n} variable bounds, got {len(bounds)}")
        bounds = tuple(
            (None if lo is None else to_fraction(lo),
             None if hi is None else to_fraction(hi)) for lo, hi in bounds)
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", tuple(rows))
        object.__setattr__(self, "bounds", bounds)

    @property
    def dimension(self) -> int:
        return len(self.objective)

    def is_feasible_point(self, point: Sequence[Fraction]) -> bool:
        """Exact substitution check of every constraint and bound."""
        for (lo, hi), x in zip(self.bounds, point):
            if lo is not None and x < lo or hi is not None and x > hi:
                return False
        for coeffs, rel, rhs in self.constraints:
            lhs = sum(c * x for c, x in zip(coeffs, point))
            if rel == LE and lhs > rhs or rel == GE and lhs < rhs \
                    or rel == EQ and lhs != rhs:
                return False
        return True

    def value_at(self, point: Sequence[Fraction]) -> Fraction:
        return sum((c * x for c, x in zip(self.objective, point)), Fraction(0))


@dataclass(frozen=True)
class LpOutcome:
    status: str
    value: Optional[Fraction] = None
    point: Optional[tuple] = None
    ray: Optional[tuple] = field(default=None)
    """For unbounded programs: a feasible ``point`` and a direction ``ray``
    along which the objective grows without bound."""


class _Tableau:
    """Standard form ``A y = b, y >= 0, b >= 0`` with a basis."""

    def __init__(self, A, b, n_real):
        self.A = A
        self.b = b
        self.m = len(A)
        self.n = len(A[0]) if A else n_real
        self.basis = [None] * self.m

    def pivot(self, r, c):
        A, b = self.A, self.b
        row = A[r]
        p = row[c]
        if p != 1:
            inv = 1 / p
            A[r] = row = [v * inv for v in row]
            b[r] = b[r] * inv
        for i in range(self.m):
            if i == r:
                continue
            f = A[i][c]
            if f:
                Ai = A[i]
                A[i] = [x - f * y if y else x for x, y in zip(Ai, row)]
                b[i] = b[i] - f * b[r]
        self.basis[r] = c

    def optimise(self, cost, allowed):
        """Maximise ``cost . y`` from the current basic feasible solution.

        Returns ``None`` when optimal, else the entering column of an
        unbounded direction.
        """
        while True:
            reduced = self._reduced(cost)
            entering = None
            for j in allowed:
                if reduced[j] > 0 and j not in self.basis:
                    entering = j
                    break
            if entering is None:
                return None
            best = None
            for i in range(self.m):
                a = self.A[i][entering]
                if a > 0:
                    ratio = self.b[i] / a
                    if best is None or ratio < best[0] or \
                            ratio == best[0] and self.basis[i] < self.basis[best[1]]:
                        best = (ratio, i)
            if best is None:
                return entering
            self.pivot(best[1], entering)

    def _reduced(self, cost):
        red = list(cost)
        for i, j in enumerate(self.basis):
            cj = cost[j]
            if cj:
                row = self.A[i]
                for k in range(self.n):
                    if row[k]:
                        red[k] -= cj * row[k]
        return red

    def solution(self):
        y = [Fraction(0)] * self.n
        for i, j in enumerate(self.basis):
            y[j] = self.b[i]
        return y


def lp_solve(lp: LinearProgram) -> LpOutcome:
    """Solve ``lp`` exactly.

    An optimal outcome carries a vertex ``point`` attaining ``value``; an
    unbounded one carries a feasible ``point`` and an improving ``ray``.
    """
    n = lp.dimension
    # x_j = offset_j + sum_k coef * y_k with y >= 0
    maps = []
    n_y = 0
    extra_rows = []
    for j, (lo, hi) in enumerate(lp.bounds):
        if lo is not None:
            maps.append((lo, [(n_y, Fraction(1))]))
            if hi is not None:
                if hi < lo:
                    return LpOutcome(INFEASIBLE)
                extra_rows.append(({n_y: Fraction(1)}, LE, hi - lo))
            n_y += 1
        elif hi is not None:
            maps.append((hi, [(n_y, Fraction(-1))]))
            n_y += 1
        else:
            maps.append((Fraction(0), [(n_y, Fraction(1)), (n_y + 1, Fraction(-1))]))
            n_y += 2

    rows = []
    for coeffs, rel, rhs in lp.constraints:
        sparse = {}
        shift = Fraction(0)
        for j, c in enumerate(coeffs):
            if not c:
                continue
            off, terms = maps[j]
            shift += c * off
            for k, t in terms:
                sparse[k] = sparse.get(k, 0) + c * t
        rows.append((sparse, rel, rhs - shift))
    rows.extend(extra_rows)

    n_slack = sum(1 for _, rel, _ in rows if rel != EQ)
    n_total_pre_art = n_y + n_slack
    A, b = [], []
    needs_art = []
    s = n_y
    for sparse, rel, rhs in rows:
        row = [Fraction(0)] * n_total_pre_art
        for k, v in sparse.items():
            row[k] = v
        if rel == LE:
            row[s] = Fraction(1)
            slack_col = s
            s += 1
        elif rel == GE:
            row[s] = Fraction(-1)
            slack_col = s
            s += 1
        else:
            slack_col = None
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        if slack_col is not None and row[slack_col] == 1:
            needs_art.append(None)
            basis_col = slack_col
        else:
            needs_art.append(True)
            basis_col = None
        A.append(row)
        b.append(rhs)
        needs_art[-1] = basis_col

    n_art = sum(1 for bc in needs_art if bc is None)
    n_cols = n_total_pre_art + n_art
    for row in A:
        row.extend([Fraction(0)] * n_art)
    tab = _Tableau(A, b, n_cols)
    tab.n = n_cols
    art_cols = []
    a = n_total_pre_art
    for i, bc in enumerate(needs_art):
        if bc is None:
            A[i][a] = Fraction(1)
            tab.basis[i] = a
            art_cols.append(a)
            a += 1
        else:
            tab.basis[i] = bc

    if art_cols:
        cost1 = [Fraction(0)] * n_cols
        for c in art_cols:
            cost1[c] = Fraction(-1)
        tab.optimise(cost1, range(n_cols))
        if any(tab.b[i] for i, j in enumerate(tab.basis) if j in art_cols):
            return LpOutcome(INFEASIBLE)
        # drive remaining (zero-level) artificials out of the basis
        art_set = set(art_cols)
        keep = []
        for i in range(tab.m):
            if tab.basis[i] in art_set:
                col = next((k for k in range(n_total_pre_art) if tab.A[i][k]), None)
                if col is None:
                    continue
                tab.pivot(i, col)
            keep.append(i)
        if len(keep) != tab.m:
            tab.A = [tab.A[i] for i in keep]
            tab.b = [tab.b[i] for i in keep]
            tab.basis = [tab.basis[i] for i in keep]
            tab.m = len(keep)

    cost = [Fraction(0)] * n_cols
    for j, c in enumerate(lp.objective):
        off, terms = maps[j]
        for k, t in terms:
            cost[k] += c * t
    allowed = range(n_total_pre_art)
    entering = tab.optimise(cost, allowed)

    y = tab.solution()
    point = tuple(off + sum((t * y[k] for k, t in terms), Fraction(0))
                  for off, terms in maps)
    if entering is not None:
        dy = [Fraction(0)] * n_cols
        dy[entering] = Fraction(1)
        for i, j in enumerate(tab.basis):
            dy[j] = -tab.A[i][entering]
        ray = tuple(sum((t * dy[k] for k, t in terms), Fraction(0))
                    for _, terms in maps)
        return LpOutcome(UNBOUNDED, point=point, ray=ray)
    return LpOutcome(OPTIMAL, value=lp.value_at(point), point=point)


def strict_feasible_1d(lower: Iterable = (), upper: Iterable = (),
                       open_lower: bool = True,
                       open_upper: bool = True) -> Optional[Fraction]:
    """A point ``s`` with ``s > l`` for every lower bound and ``s < u`` for
    every upper bound, or ``None`` if there is none.

    ``None`` entries stand for the infinities.  With ``open_lower`` or
    ``open_upper`` false the matching inequalities are weak.
    """
    lows = [to_fraction(v) for v in lower if v is not None]
    highs = [to_fraction(v) for v in upper if v is not None]
    lo = max(lows) if lows else None
    hi = min(highs) if highs else None
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1 if open_upper else hi
    if hi is None:
        return lo + 1 if open_lower else lo
    if lo < hi:
        if not open_lower:
            return lo
        if not open_upper:
            return hi
        return (lo + hi) / 2
    if lo == hi and not open_lower and not open_upper:
        return lo
    return None


@dataclass(frozen=True)
class AffinePiece:
    slope: Fraction
    intercept: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", to_fraction(self.slope))
        object.__setattr__(self, "intercept", to_fraction(self.intercept))

    def __call__(self, s: Fraction) -> Fraction:
        return self.intercept + self.slope * s


def pwl_min(pieces: Sequence[AffinePiece], s: Fraction) -> Fraction:
    return min(p(s) for p in pieces)


def concave_pwl_max(pieces: Sequence[AffinePiece]) -> tuple:
    """Maximise ``min_i (intercept_i + slope_i * s)`` over ``s >= 0``.

    Returns ``(value, argmax)``.  The value is ``+inf`` (argmax ``None``)
    exactly when every slope is positive; otherwise the maximum of this
    concave function is attained at ``s = 0`` or where two pieces cross.
    """
    pieces = list(pieces)
    if not pieces:
        raise DomainError("need at least one affine piece")
    if min(p.slope for p in pieces) > 0:
        return POS_INF, None
    candidates = {Fraction(0)}
    for i, p in enumerate(pieces):
        for q in pieces[i + 1:]:
            if p.slope != q.slope:
                s = (q.intercept - p.intercept) / (p.slope - q.slope)
                if s > 0:
                    candidates.add(s)
    best_s = None
    best = None
    for s in sorted(candidates):
        v = pwl_min(pieces, s)
        if best is None or v > best:
            best, best_s = v, s
    return ExtendedValue(best), best_s


__all__ = [
    "AffinePiece", "EQ", "GE", "INFEASIBLE", "LE", "LinearProgram", "LpOutcome",
    "NEG_INF", "OPTIMAL", "POS_INF", "UNBOUNDED", "concave_pwl_max", "lp_solve",
    "pwl_min", "strict_feasible_1d",
]

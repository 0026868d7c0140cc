"""Finite possibility spaces, events, gambles and assessments.

Everything here is exact: gamble values and assessed prices are
:class:`fractions.Fraction` instances, and all objects are immutable.

>>> omega = Partition("abc")
>>> X = omega.gamble({"a": 3, "b": -2, "c": 7})
>>> B = omega.event("ab")
>>> restrict_sup(X, B), restrict_inf(X, B)
(Fraction(3, 1), Fraction(-2, 1))
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

DEFAULT_MAX_ATOMS = 16

Number = Union[int, Fraction, str]


class WeakPrevError(Exception):
    """Base class for errors raised by this package."""


class DomainError(WeakPrevError, ValueError):
    """An argument lies outside the domain of an operation."""


class PartitionMismatch(WeakPrevError, ValueError):
    """Objects built on different partitions were combined."""


class PreconditionError(WeakPrevError, ValueError):
    """A documented precondition does not hold.

    ``problems`` lists every violated condition, not only the first one.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


def to_fraction(value: Number) -> Fraction:
    """Convert ints, fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: they would silently bring rounding into the
    decision procedures.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise ValueError(f"not a rational: {value!r}") from None
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True)
class Partition:
    """An ordered, finite set of atoms; the sure event is all of them."""

    atoms: tuple
    max_atoms: int = field(default=DEFAULT_MAX_ATOMS, compare=False, repr=False)

    def __post_init__(self):
        atoms = tuple(str(a) for a in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise DomainError("a partition needs at least one atom")
        if len(set(atoms)) != len(atoms):
            raise DomainError(f"duplicate atom labels in {atoms}")
        if len(atoms) > self.max_atoms:
            raise DomainError(
                f"{len(atoms)} atoms exceeds the configured cap of {self.max_atoms}")

    def __len__(self):
        return len(self.atoms)

    def index(self, atom: str) -> int:
        try:
            return self.atoms.index(atom)
        except ValueError:
            raise DomainError(f"unknown atom {atom!r}") from None

    @property
    def omega(self) -> Event:
        return Event(self, frozenset(range(len(self.atoms))))

    @property
    def empty(self) -> Event:
        return Event(self, frozenset())

    def event(self, atoms: Iterable[str]) -> Event:
        """Event made of the given atom labels (a string is read as labels
        only when every character is an atom)."""
        return Event(self, frozenset(self.index(a) for a in atoms))

    def events(self) -> Iterator[Event]:
        """All ``2**n`` events, in order of their bit masks."""
        n = len(self.atoms)
        for mask in range(1 << n):
            yield Event(self, frozenset(i for i in range(n) if mask >> i & 1))

    def gamble(self, values) -> Gamble:
        """Gamble from a sequence (atom order) or a mapping atom -> value.

        Atoms missing from a mapping get value zero.
        """
        if isinstance(values, Mapping):
            unknown = set(values) - set(self.atoms)
            if unknown:
                raise DomainError(f"unknown atoms {sorted(unknown)}")
            seq = [values.get(a, 0) for a in self.atoms]
        else:
            seq = list(values)
            if len(seq) != len(self.atoms):
                raise DomainError(
                    f"expected {len(self.atoms)} values, got {len(seq)}")
        return Gamble(self, tuple(to_fraction(v) for v in seq))

    def constant(self, c: Number) -> Gamble:
        return Gamble(self, (to_fraction(c),) * len(self.atoms))

    def zero(self) -> Gamble:
        return self.constant(0)


@dataclass(frozen=True)
class Event:
    """A set of atoms of a partition, stored as atom indices."""

    partition: Partition
    members: frozenset

    def __post_init__(self):
        members = frozenset(self.members)
        object.__setattr__(self, "members", members)
        if any(not 0 <= i < len(self.partition) for i in members):
            raise DomainError(f"atom index out of range in {sorted(members)}")

    def _same(self, other: Event):
        if other.partition != self.partition:
            raise PartitionMismatch("events live on different partitions")

    def __or__(self, other: Event) -> Event:
        self._same(other)
        return Event(self.partition, self.members | other.members)

    def __and__(self, other: Event) -> Event:
        self._same(other)
        return Event(self.partition, self.members & other.members)

    def __invert__(self) -> Event:
        return Event(self.partition, self.partition.omega.members - self.members)

    def __le__(self, other: Event) -> bool:
        self._same(other)
        return self.members <= other.members

    def __lt__(self, other: Event) -> bool:
        self._same(other)
        return self.members < other.members

    def __bool__(self):
        return bool(self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __mul__(self, gamble: Gamble) -> Gamble:
        """The product ``I_B * X``."""
        if not isinstance(gamble, Gamble):
            return NotImplemented
        self._same(gamble)
        return Gamble(self.partition, tuple(
            v if i in self.members else Fraction(0)
            for i, v in enumerate(gamble.values)))

    def indicator(self) -> Gamble:
        return Gamble(self.partition, tuple(
            Fraction(int(i in self.members)) for i in range(len(self.partition))))

    @property
    def labels(self) -> tuple:
        return tuple(self.partition.atoms[i] for i in sorted(self.members))

    def __str__(self):
        if self.members == self.partition.omega.members:
            return "Omega"
        return "{" + ",".join(self.labels) + "}"


@dataclass(frozen=True)
class Gamble:
    """A real-valued (here rational-valued) function on the atoms."""

    partition: Partition
    values: tuple

    def _same(self, other):
        if other.partition != self.partition:
            raise PartitionMismatch("gambles live on different partitions")

    def __getitem__(self, atom) -> Fraction:
        if isinstance(atom, int):
            return self.values[atom]
        return self.values[self.partition.index(atom)]

    def __add__(self, other):
        if isinstance(other, Gamble):
            self._same(other)
            return Gamble(self.partition,
                          tuple(a + b for a, b in zip(self.values, other.values)))
        c = to_fraction(other)
        return Gamble(self.partition, tuple(a + c for a in self.values))

    __radd__ = __add__

    def __neg__(self):
        return Gamble(self.partition, tuple(-a for a in self.values))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if isinstance(other, Gamble):
            self._same(other)
            return Gamble(self.partition,
                          tuple(a * b for a, b in zip(self.values, other.values)))
        if isinstance(other, Event):
            return other * self
        c = to_fraction(other)
        return Gamble(self.partition, tuple(a * c for a in self.values))

    __rmul__ = __mul__

    def __or__(self, cond: Event) -> ConditionalGamble:
        """``X | B`` builds the conditional gamble X|B."""
        if not isinstance(cond, Event):
            return NotImplemented
        return ConditionalGamble(self, cond)

    def __le__(self, other: Gamble) -> bool:
        """Pointwise dominance."""
        self._same(other)
        return all(a <= b for a, b in zip(self.values, other.values))

    def __ge__(self, other: Gamble) -> bool:
        return other <= self

    def sup(self) -> Fraction:
        return max(self.values)

    def inf(self) -> Fraction:
        return min(self.values)

    def is_zero(self) -> bool:
        return not any(self.values)

    def as_dict(self) -> dict:
        return {a: v for a, v in zip(self.partition.atoms, self.values)}

    def __str__(self):
        return "(" + ", ".join(str(v) for v in self.values) + ")"


@dataclass(frozen=True)
class ConditionalGamble:
    """The conditional gamble X|B, with B non-impossible."""

    gamble: Gamble
    cond: Event

    def __post_init__(self):
        if self.gamble.partition != self.cond.partition:
            raise PartitionMismatch("gamble and conditioning event differ in partition")
        if not self.cond:
            raise DomainError("the conditioning event must not be empty")

    @property
    def partition(self) -> Partition:
        return self.gamble.partition

    def sup(self) -> Fraction:
        return restrict_sup(self.gamble, self.cond)

    def inf(self) -> Fraction:
        return restrict_inf(self.gamble, self.cond)

    def elementary_gain(self, price: Fraction) -> Gamble:
        """``B (X - price)``: the gain from buying X|B at ``price``."""
        return self.cond * (self.gamble - price)

    def __str__(self):
        return f"{self.gamble}|{self.cond}"


def restrict_sup(X: Gamble, B: Event) -> Fraction:
    """Supremum of X over the atoms of B (a maximum, the space being finite)."""
    if X.partition != B.partition:
        raise PartitionMismatch("gamble and event differ in partition")
    if not B:
        raise DomainError("supremum over the empty event")
    return max(X.values[i] for i in B.members)


def restrict_inf(X: Gamble, B: Event) -> Fraction:
    """Infimum of X over the atoms of B."""
    if X.partition != B.partition:
        raise PartitionMismatch("gamble and event differ in partition")
    if not B:
        raise DomainError("infimum over the empty event")
    return min(X.values[i] for i in B.members)


def gn_leq_events(AB: tuple, CD: tuple) -> bool:
    """Goodman-Nguyen order on conditional events ``A|B <= C|D``.

    Holds iff ``A & B`` implies ``C & D`` and ``~C & D`` implies ``~A & B``.
    """
    (A, B), (C, D) = AB, CD
    parts = {A.partition, B.partition, C.partition, D.partition}
    if len(parts) != 1:
        raise PartitionMismatch("conditional events differ in partition")
    if not B or not D:
        raise DomainError("conditioning events must not be empty")
    return (A & B) <= (C & D) and (~C & D) <= (~A & B)


def gn_leq_gambles(XB: ConditionalGamble, YD: ConditionalGamble) -> bool:
    """Goodman-Nguyen order extended to conditional gambles.

    Pointwise ``B X + (~B & D) sup(X|B) <= D Y + (B & ~D) inf(Y|D)``: on
    ``B & D`` the gambles are compared directly, where only one side is
    defined it is compared with the extreme value of the other.
    """
    if XB.partition != YD.partition:
        raise PartitionMismatch("conditional gambles differ in partition")
    X, B = XB.gamble, XB.cond
    Y, D = YD.gamble, YD.cond
    left = B * X + (~B & D).indicator() * XB.sup()
    right = D * Y + (B & ~D).indicator() * YD.inf()
    return left <= right


@functools.total_ordering
class ExtendedValue:
    """A rational, or one of the two infinities.

    Compares with other ExtendedValues and with ints/Fractions.
    """

    __slots__ = ("_rank", "_value")

    def __init__(self, value=None, *, rank: int = 0):
        if rank not in (-1, 0, 1):
            raise ValueError("rank must be -1, 0 or 1")
        if rank == 0:
            if value is None:
                raise ValueError("a finite value needs a number")
            value = to_fraction(value)
        else:
            value = None
        self._rank = rank
        self._value = value

    @classmethod
    def finite(cls, value) -> ExtendedValue:
        return cls(value)

    @classmethod
    def parse(cls, text: str) -> ExtendedValue:
        text = text.strip()
        if text in ("-inf", "−inf"):
            return NEG_INF
        if text in ("+inf", "inf"):
            return POS_INF
        return cls(text)

    @property
    def is_finite(self) -> bool:
        return self._rank == 0

    @property
    def value(self) -> Fraction:
        if self._rank:
            raise DomainError(f"{self} has no finite value")
        return self._value

    def _key(self):
        return (self._rank, self._value if self._rank == 0 else 0)

    @staticmethod
    def _coerce(other):
        if isinstance(other, ExtendedValue):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return ExtendedValue(other)
        return None

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._key() < other._key()

    def __hash__(self):
        return hash(self._value) if self._rank == 0 else hash(("inf", self._rank))

    def __str__(self):
        if self._rank < 0:
            return "-inf"
        if self._rank > 0:
            return "+inf"
        return str(self._value)

    def __repr__(self):
        return f"ExtendedValue({self})"


NEG_INF = ExtendedValue(rank=-1)
POS_INF = ExtendedValue(rank=1)


Entry = tuple  # (ConditionalGamble, Fraction)


class Assessment(Mapping):
    """A lower prevision on a finite set of conditional gambles.

    Behaves as a read-only mapping ``ConditionalGamble -> Fraction`` that
    remembers insertion order.  Repeated keys with equal values are merged,
    repeated keys with different values are rejected.
    """

    def __init__(self, entries: Iterable = (), partition: Partition | None = None):
        if isinstance(entries, Mapping):
            entries = entries.items()
        data: dict = {}
        for cg, value in entries:
            if not isinstance(cg, ConditionalGamble):
                raise TypeError(f"expected a ConditionalGamble, got {type(cg).__name__}")
            value = to_fraction(value)
            if partition is None:
                partition = cg.partition
            elif cg.partition != partition:
                raise PartitionMismatch("all entries must share one partition")
            if cg in data and data[cg] != value:
                raise DomainError(
                    f"conflicting values {data[cg]} and {value} for {cg}")
            data[cg] = value
        self._data = data
        self.partition = partition

    def __getitem__(self, cg: ConditionalGamble) -> Fraction:
        return self._data[cg]

    def __iter__(self):
        return iter(self._data)

    def __len__(self):
        return len(self._data)

    @property
    def entries(self) -> list:
        return list(self._data.items())

    def value(self, gamble: Gamble, cond: Event | None = None) -> Fraction:
        """Assessed value of ``gamble|cond`` (``cond`` defaults to the sure event)."""
        if cond is None:
            cond = gamble.partition.omega
        return self._data[gamble | cond]

    def with_entries(self, extra: Iterable) -> Assessment:
        return Assessment(list(self._data.items()) + list(extra), self.partition)

    def cond_events(self) -> list:
        seen = []
        for cg in self._data:
            if cg.cond not in seen:
                seen.append(cg.cond)
        return seen

    def __repr__(self):
        body = ", ".join(f"{cg}: {v}" for cg, v in self._data.items())
        return f"Assessment({{{body}}})"


def gain(terms: Sequence, P: Mapping) -> Gamble:
    """Total gain ``sum_i s_i B_i (X_i - P(X_i|B_i))`` of signed stakes.

    A positive stake buys the conditional gamble at its assessed price, a
    negative one sells it.
    """
    terms = list(terms)
    if not terms:
        raise DomainError("a gain needs at least one term")
    total = terms[0][0].partition.zero()
    for cg, stake in terms:
        total = total + cg.elementary_gain(P[cg]) * stake
    return total

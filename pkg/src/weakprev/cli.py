"""Command-line front end.

Assessment documents are JSON objects::

    {
      "partition": ["a", "b", "c"],
      "gambles": {"X": {"a": "1", "b": "-1/2"}, "Y": ["0", "1", "2"]},
      "events": {"B": ["a", "b"]},
      "entries": [
        {"gamble": "X", "cond": "B", "value": "1/5"},
        {"indicator": ["a"], "value": "1/2"}
      ]
    }

Values are integers or ``"p/q"`` strings.  An entry names its gamble by
``gamble`` (a name, a list in atom order or an atom mapping) or by
``indicator`` (an event).  ``cond`` defaults to the sure event.

Exit status: 0 when every reported check holds, 1 when one fails, 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from . import checker, extension, models
from .core import (
    Assessment, ConditionalGamble, Event, ExtendedValue, Gamble, Partition,
    WeakPrevError, to_fraction,
)

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE = 0, 1, 2


class DocumentError(ValueError):
    """Malformed input, with the location of the offending field."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


# -- document parsing -------------------------------------------------------

@dataclass
class Document:
    partition: Partition
    gambles: dict
    events: dict
    assessment: Assessment

    def gamble_name(self, X: Gamble) -> Optional[str]:
        for name, G in self.gambles.items():
            if G == X:
                return name
        return None


def _rational(raw, where) -> Fraction:
    if isinstance(raw, bool) or isinstance(raw, float):
        raise DocumentError(where, f"expected an integer or a 'p/q' string, got {raw!r}")
    try:
        return to_fraction(raw)
    except (TypeError, ValueError, ZeroDivisionError):
        raise DocumentError(where, f"not an exact rational: {raw!r}") from None


def _keys(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise DocumentError(where, "expected an object")
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise DocumentError(where, f"unknown field(s) {', '.join(unknown)}")
    for key in required:
        if key not in obj:
            raise DocumentError(where, f"missing field '{key}'")


def _gamble(raw, part: Partition, gambles: dict, where) -> Gamble:
    if isinstance(raw, str):
        if raw not in gambles:
            raise DocumentError(where, f"undefined gamble {raw!r}")
        return gambles[raw]
    if isinstance(raw, list):
        if len(raw) != len(part):
            raise DocumentError(where, f"expected {len(part)} values, got {len(raw)}")
        return part.gamble([_rational(v, f"{where}[{i}]") for i, v in enumerate(raw)])
    if isinstance(raw, dict):
        unknown = sorted(set(raw) - set(part.atoms))
        if unknown:
            raise DocumentError(where, f"unknown atom(s) {', '.join(unknown)}")
        return part.gamble({a: _rational(v, f"{where}.{a}") for a, v in raw.items()})
    raise DocumentError(where, "expected a gamble name, a list or an atom mapping")


def _event(raw, part: Partition, events: dict, where) -> Event:
    if isinstance(raw, str):
        if raw in events:
            return events[raw]
        if raw in ("Omega", "Ω"):
            return part.omega
        raise DocumentError(where, f"undefined event {raw!r}")
    if isinstance(raw, list):
        bad = [a for a in raw if not isinstance(a, str) or a not in part.atoms]
        if bad:
            raise DocumentError(where, f"unknown atom(s) {bad}")
        return part.event(raw)
    raise DocumentError(where, "expected an event name or a list of atoms")


def parse_document(text: str) -> Document:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    _keys(raw, ("partition", "gambles", "events", "entries"), ("partition",), "document")
    atoms = raw["partition"]
    if not isinstance(atoms, list) or not all(isinstance(a, str) for a in atoms):
        raise DocumentError("partition", "expected a list of atom names")
    try:
        part = Partition(tuple(atoms))
    except WeakPrevError as exc:
        raise DocumentError("partition", str(exc)) from None

    gambles: dict = {}
    raw_gambles = raw.get("gambles", {})
    if not isinstance(raw_gambles, dict):
        raise DocumentError("gambles", "expected an object")
    for name, spec in raw_gambles.items():
        if isinstance(spec, str):
            raise DocumentError(f"gambles.{name}", "expected a list or an atom mapping")
        gambles[name] = _gamble(spec, part, gambles, f"gambles.{name}")

    events: dict = {}
    raw_events = raw.get("events", {})
    if not isinstance(raw_events, dict):
        raise DocumentError("events", "expected an object")
    for name, spec in raw_events.items():
        if not isinstance(spec, list):
            raise DocumentError(f"events.{name}", "expected a list of atoms")
        events[name] = _event(spec, part, events, f"events.{name}")

    entries = []
    raw_entries = raw.get("entries", [])
    if not isinstance(raw_entries, list):
        raise DocumentError("entries", "expected a list")
    for i, item in enumerate(raw_entries):
        where = f"entries[{i}]"
        _keys(item, ("gamble", "indicator", "cond", "value"), ("value",), where)
        if ("gamble" in item) == ("indicator" in item):
            raise DocumentError(where, "give exactly one of 'gamble' and 'indicator'")
        if "gamble" in item:
            X = _gamble(item["gamble"], part, gambles, f"{where}.gamble")
        else:
            X = _event(item["indicator"], part, events, f"{where}.indicator").indicator()
        B = _event(item.get("cond", "Omega"), part, events, f"{where}.cond")
        if not B:
            raise DocumentError(f"{where}.cond", "conditioning event is empty")
        entries.append((X | B, _rational(item["value"], f"{where}.value")))
    try:
        P = Assessment(entries, part)
    except WeakPrevError as exc:
        raise DocumentError("entries", str(exc)) from None
    return Document(part, gambles, events, P)


def parse_target(spec: str, doc: Document) -> ConditionalGamble:
    """``GAMBLE[|EVENT]``; GAMBLE is a name or ``[v1,v2,...]``, EVENT a
    name or ``{a,b}``."""
    where = f"--target {spec!r}"
    gpart, sep, cpart = spec.partition("|")
    gpart, cpart = gpart.strip(), cpart.strip()
    if gpart.startswith("["):
        if not gpart.endswith("]"):
            raise DocumentError(where, "unterminated value list")
        X = _gamble([v.strip() for v in gpart[1:-1].split(",")], doc.partition, {}, where)
    else:
        X = _gamble(gpart, doc.partition, doc.gambles, where)
    if not sep:
        return X | doc.partition.omega
    if cpart.startswith("{"):
        if not cpart.endswith("}"):
            raise DocumentError(where, "unterminated atom set")
        atoms = [a.strip() for a in cpart[1:-1].split(",") if a.strip()]
        B = _event(atoms, doc.partition, {}, where)
    else:
        B = _event(cpart, doc.partition, doc.events, where)
    if not B:
        raise DocumentError(where, "conditioning event is empty")
    return X | B


# -- reports ------------------------------------------------------------------

def _render_cg(cg: ConditionalGamble) -> dict:
    return {"gamble": [str(v) for v in cg.gamble.values], "cond": list(cg.cond.labels)}


@dataclass
class CheckRow:
    name: str
    satisfied: bool
    witness: Optional[dict] = None
    detail: str = ""

    @classmethod
    def from_verdict(cls, name: str, verdict: checker.Verdict) -> CheckRow:
        w = verdict.witness
        rendered = None
        if w is not None:
            rendered = {
                "terms": [dict(_render_cg(cg), stake=str(s)) for cg, s in w.terms],
                "conditioning": list(w.conditioning.labels),
                "sup": str(w.sup_value),
            }
        return cls(name, verdict.satisfied, rendered, verdict.detail)


@dataclass
class ExtensionRow:
    target: dict
    value: str
    entry: Optional[dict] = None
    stake: Optional[str] = None


@dataclass
class Report:
    command: str
    partition: list
    checks: list = field(default_factory=list)
    extensions: list = field(default_factory=list)
    values: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if all(c.satisfied for c in self.checks) else EXIT_VIOLATED

    def to_dict(self) -> dict:
        d = asdict(self)
        d["exit_code"] = self.exit_code
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Report:
        _keys(d, ("command", "partition", "checks", "extensions", "values", "exit_code"),
              ("command", "partition"), "report")
        rep = cls(d["command"], list(d["partition"]),
                  [CheckRow(**c) for c in d.get("checks", [])],
                  [ExtensionRow(**e) for e in d.get("extensions", [])],
                  dict(d.get("values", {})))
        if "exit_code" in d and d["exit_code"] != rep.exit_code:
            raise DocumentError("report.exit_code", "does not match the verdicts")
        return rep

    def verdicts(self) -> dict:
        return {c.name: c.satisfied for c in self.checks}

    def render(self) -> str:
        lines = []
        for key, value in self.values.items():
            lines.append(f"{key} = {value}")
        for c in self.checks:
            lines.append(f"{c.name}: {'yes' if c.satisfied else 'no'}"
                         + (f" ({c.detail})" if c.detail else ""))
            if c.witness:
                for t in c.witness["terms"]:
                    action = "buy" if Fraction(t["stake"]) > 0 else "sell"
                    lines.append(f"    {action} ({', '.join(t['gamble'])})"
                                 f"|{{{','.join(t['cond'])}}} stake {abs(Fraction(t['stake']))}")
                lines.append(f"    sup of gain on {{{','.join(c.witness['conditioning'])}}}"
                             f" = {c.witness['sup']}")
        for e in self.extensions:
            t = e.target
            line = f"E({', '.join(t['gamble'])} | {{{','.join(t['cond'])}}}) = {e.value}"
            if e.entry:
                line += (f"  via ({', '.join(e.entry['gamble'])})"
                         f"|{{{','.join(e.entry['cond'])}}}")
                if e.stake is not None:
                    line += f" stake {e.stake}"
            lines.append(line)
        return "\n".join(lines)


# -- commands -----------------------------------------------------------------

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_check(args) -> Report:
    doc = parse_document(_read(args.file))
    rep = Report("check", list(doc.partition.atoms))
    if args.all_classes:
        ns = (args.n,) if args.n else (3,)
        if min(ns) < 3:
            raise DocumentError("--n", "with --all the extra order must be at least 3")
        for cls, verdict in checker.classify(doc.assessment, ns).items():
            rep.checks.append(CheckRow.from_verdict(str(cls), verdict))
        return rep
    try:
        cls = checker.ConsistencyClass.parse(args.check_class, args.n)
    except (ValueError, WeakPrevError) as exc:
        raise DocumentError("--class", str(exc)) from None
    verdict = checker.check_class(doc.assessment, cls)
    rep.checks.append(CheckRow.from_verdict(str(cls), verdict))
    return rep


def cmd_extend(args) -> Report:
    doc = parse_document(_read(args.file))
    targets = [parse_target(t, doc) for t in args.target]
    mode = {"2convex": extension.TWO_CONVEX, "2coherent": extension.TWO_COHERENT}[args.mode]
    rep = Report("extend", list(doc.partition.atoms))
    rep.values["mode"] = args.mode
    for r in extension.natext_table(doc.assessment, targets, mode):
        rep.extensions.append(ExtensionRow(
            _render_cg(r.target), str(r.value),
            _render_cg(r.entry) if r.entry is not None else None,
            str(r.stake) if r.stake is not None and r.entry is not None else None))
    return rep


def _list(raw: str, where: str) -> list:
    items = [s.strip() for s in raw.split(",")]
    if not all(items):
        raise DocumentError(where, "empty item in list")
    return items


def cmd_gbr(args) -> Report:
    values = [_rational(v, "--gamble-values") for v in _list(args.gamble_values, "--gamble-values")]
    atoms = _list(args.atoms, "--atoms") if args.atoms else [f"w{i + 1}" for i in range(len(values))]
    part = Partition(tuple(atoms))
    if len(values) != len(part):
        raise DocumentError("--gamble-values", f"expected {len(part)} values")
    X = part.gamble(values)
    A = _event(_list(args.event, "--event"), part, {}, "--event")
    r, q, pa, pxa = (_rational(getattr(args, k), f"--{k}") for k in ("r", "q", "pa", "pxa"))
    if r == q:
        raise DocumentError("--q", "r and q must differ")
    lo, hi = extension.gbr_interval(X | A) if A else (None, None)
    verdict = extension.verify_gbr_family(A, X, r, q, pa, pxa)
    rep = Report("gbr", list(part.atoms))
    rep.values["interval"] = f"[{lo}, {hi}]"
    rep.checks.append(CheckRow.from_verdict("2-coherent", verdict))
    return rep


def _load_gambles(text: str):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    _keys(raw, ("partition", "gambles"), ("partition", "gambles"), "document")
    doc = parse_document(json.dumps(raw))
    return doc.partition, doc.gambles


def cmd_var(args) -> Report:
    part, gambles = _load_gambles(_read(args.gambles))
    probs = [_rational(p, "--probs") for p in _list(args.probs, "--probs")]
    alpha = _rational(args.alpha, "--alpha")
    if not 0 < alpha < 1:
        raise DocumentError("--alpha", f"{alpha} must lie strictly between 0 and 1")
    try:
        dist = models.FiniteDistribution(part, probs)
    except WeakPrevError as exc:
        raise DocumentError("--probs", str(exc)) from None
    vp = models.VarPrevision(alpha, dist, tuple(gambles.values()))
    P = models.build_var_assessment(vp)
    rep = Report("var", list(part.atoms))
    for name, X in gambles.items():
        rep.values[f"P^V({name})"] = str(vp(X))
    rep.checks.append(CheckRow.from_verdict("centered", checker.check_centered(P)))
    rep.checks.append(CheckRow.from_verdict("2-convex", checker.check_2convex(P)))
    try:
        dominance = models.conjugate_dominance(P)
    except WeakPrevError:
        dominance = None
    if dominance is not None:
        rep.checks.append(CheckRow.from_verdict("conjugate-dominance (A6, lambda=-1)",
                                                dominance))
    rep.checks.append(CheckRow.from_verdict("2-coherent", checker.check_2coherent(P)))
    return rep


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakprev",
        description="Consistency checks and natural extensions for conditional "
                    "lower previsions on finite spaces.")
    parser.add_argument("--json", action="store_true", help="machine-readable report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide consistency classes")
    p.add_argument("file", help="assessment document (JSON), '-' for stdin")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--class", dest="check_class", metavar="NAME",
                   help="e.g. 2-convex, 2-coherent, n-coherent, coherent, capacity")
    g.add_argument("--all", dest="all_classes", action="store_true")
    p.add_argument("--n", type=int, help="order for n-convex / n-coherent")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("extend", help="natural extension to target gambles")
    p.add_argument("file")
    p.add_argument("--mode", choices=("2convex", "2coherent"), required=True)
    p.add_argument("--target", action="append", required=True,
                   help="GAMBLE[|EVENT], e.g. X|B or [1,0,2]|{a,b}")
    p.set_defaults(run=cmd_extend)

    p = sub.add_parser("gbr", help="2-coherence of the conditioning-equation family")
    p.add_argument("--atoms", help="comma-separated atom names (default w1, w2, ...)")
    p.add_argument("--event", required=True, help="atoms of A, comma-separated")
    p.add_argument("--gamble-values", required=True, help="values of X in atom order")
    for k in ("r", "q", "pa", "pxa"):
        p.add_argument(f"--{k}", required=True)
    p.set_defaults(run=cmd_gbr)

    p = sub.add_parser("var", help="Value-at-Risk lower prevision")
    p.add_argument("--probs", required=True, help="atom probabilities in partition order")
    p.add_argument("--alpha", required=True)
    p.add_argument("--gambles", required=True,
                   help="JSON file with 'partition' and 'gambles'")
    p.set_defaults(run=cmd_var)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        rep = args.run(args)
    except (DocumentError, WeakPrevError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps(rep.to_dict(), indent=2))
    else:
        print(rep.render())
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())

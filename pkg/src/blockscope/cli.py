"""Command line entry point: corpus ingestion, commands and reports.

A corpus is a JSON document ``{"groups": [{"name", "degree", "generators",
"expected"?}, ...]}`` with generators given as 0-based image arrays.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__
from .perm import EnumerationBoundExceeded, MalformedPermutation, Permutation


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line, self.column = line, column


class DuplicateName(ValueError):
    pass


class UnknownCommand(ValueError):
    pass


@dataclass
class CorpusEntry:
    name: str
    degree: int
    generators: list[list[int]]
    expected: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"name": self.name, "degree": self.degree, "generators": self.generators}
        if self.expected:
            out["expected"] = self.expected
        return out

    def group(self):
        from .perm import group_from_generators

        return group_from_generators(self.degree, self.generators)


def parse_corpus(text: str) -> list[CorpusEntry]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("groups"), list):
        raise ParseError("expected an object with a 'groups' list", 1, 1)
    entries, names = [], set()
    for k, raw in enumerate(doc["groups"]):
        if not isinstance(raw, dict):
            raise ParseError(f"group #{k} is not an object", 1, 1)
        name, degree, gens = raw.get("name"), raw.get("degree"), raw.get("generators")
        if not isinstance(name, str):
            raise ParseError(f"group #{k} has no name", 1, 1)
        if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
            raise ParseError(f"group {name!r}: degree must be a positive integer", 1, 1)
        if not isinstance(gens, list) or not all(isinstance(g, list) for g in gens):
            raise ParseError(f"group {name!r}: generators must be a list of arrays", 1, 1)
        if name in names:
            raise DuplicateName(name)
        names.add(name)
        for g in gens:
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in g):
                raise MalformedPermutation(f"group {name!r}: non-integer image in {g}")
            Permutation.checked(g, degree)
        entries.append(CorpusEntry(name, degree, [list(g) for g in gens],
                                   raw.get("expected") or {}))
    return entries


def ingest(path: str | Path) -> list[CorpusEntry]:
    return parse_corpus(Path(path).read_text())


def emit(entries: Sequence[CorpusEntry]) -> str:
    return json.dumps({"groups": [e.to_dict() for e in entries]}, indent=1, sort_keys=True)


def corpus_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# commands


def _select(entries, name):
    if name is None:
        return entries
    hits = [e for e in entries if e.name == name]
    if not hits:
        raise KeyError(f"no group named {name!r}")
    return hits


def cmd_table(args, out) -> int:
    from .chartab import character_table

    for e in _select(ingest(args.corpus), args.group):
        G = e.group()
        table = character_table(G)
        out.write(f"{e.name}  order {G.order}, {len(G.classes)} classes\n")
        out.write("  orders: " + " ".join(str(c.element_order) for c in G.classes) + "\n")
        out.write("  sizes:  " + " ".join(str(c.size) for c in G.classes) + "\n")
        for i, chi in enumerate(table):
            out.write(f"  X{i}: " + ", ".join(str(v) for v in chi.values) + "\n")
    return 0


def cmd_blocks(args, out) -> int:
    from .blocks import p_blocks
    from .chartab import char_level, character_table

    p = args.prime
    for e in _select(ingest(args.corpus), args.group):
        G = e.group()
        if G.order % p:
            out.write(f"{e.name}: {p} does not divide {G.order}\n")
            continue
        table = character_table(G)
        out.write(f"{e.name}  p = {p}\n")
        for k, B in enumerate(p_blocks(G, p, seed=args.seed)):
            out.write(f"  block {k}{' (principal)' if B.is_principal else ''}: defect {B.defect}, "
                      f"|D| = {B.defect_group.order}\n")
            for i in B.char_indices:
                out.write(f"    X{i}  degree {table[i].degree}  height {B.heights[i]}  "
                          f"level {char_level(table[i], p)}\n")
    return 0


def _render_text(report, out) -> None:
    for o in report.outcomes:
        out.write(f"{o.group_name:24s} p={o.prime:<3d} {o.statement_id:18s} {o.verdict}\n")
    for f in report.findings:
        out.write("finding: " + json.dumps(f, sort_keys=True) + "\n")
    out.write(" ".join(f"{k}={v}" for k, v in report.summary.items()) + "\n")


def cmd_verify(args, out) -> int:
    from .verify import STATEMENTS, run_corpus

    if args.statement and any(s not in STATEMENTS for s in args.statement):
        raise UnknownCommand(f"unknown statement id in {args.statement}")
    entries = _select(ingest(args.corpus), args.group)
    metadata = {
        "tool_version": __version__,
        "corpus": Path(args.corpus).name,
        "corpus_digest": corpus_digest(args.corpus),
        "seed": args.seed,
        "primes": args.prime or None,
        "statements": args.statement or None,
    }
    report = run_corpus(entries, primes=args.prime or None, statements=args.statement,
                        seed=args.seed, jobs=args.jobs, metadata=metadata)
    text = dump(report.to_dict())
    if args.output:
        Path(args.output).write_text(text)
    if args.text:
        _render_text(report, out)
    elif not args.output:
        out.write(text)
    return report.exit_code


def cmd_weil(args, out) -> int:
    from sympy import primefactors

    from .weil import weil_consistency

    p = args.p
    if p is None:
        odd = [r for r in primefactors(args.q + 1) if r > 2]
        p = odd[0] if odd else 2
    outcome = weil_consistency(args.n, args.q, p, seed=args.seed)
    out.write(dump(outcome.to_dict()))
    return 0


def cmd_sl2(args, out) -> int:
    from .weil import sl2_consistency

    outcomes = sl2_consistency(args.q, seed=args.seed)
    out.write(dump([o.to_dict() for o in outcomes]))
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UnknownCommand(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="blockscope", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("table", help="print character tables")
    t.add_argument("corpus")
    t.add_argument("--group")

    b = sub.add_parser("blocks", help="print p-blocks")
    b.add_argument("corpus")
    b.add_argument("--prime", type=int, required=True)
    b.add_argument("--group")

    v = sub.add_parser("verify", help="run the statement checks")
    v.add_argument("corpus")
    v.add_argument("--prime", type=int, action="append")
    v.add_argument("--statement", action="append")
    v.add_argument("--group")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--output", help="write the JSON report here")
    v.add_argument("--text", action="store_true", help="human-readable summary")

    w = sub.add_parser("weil", help="Weil characters of GU_n(q)")
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--q", type=int, required=True)
    w.add_argument("--p", type=int)

    s = sub.add_parser("sl2", help="semisimple characters of SL_2(q), q = 2^f")
    s.add_argument("--q", type=int, required=True)

    for p in (t, b, v, w, s):
        p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    return parser


COMMANDS = {"table": cmd_table, "blocks": cmd_blocks, "verify": cmd_verify,
            "weil": cmd_weil, "sl2": cmd_sl2}


def dispatch(argv: Sequence[str], out=None, err=None) -> int:
    from .verify import ProvenStatementViolated

    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
        return COMMANDS[args.command](args, out)
    except ProvenStatementViolated as exc:
        err.write(f"error: {exc}\n{dump(exc.outcome.to_dict())}")
        return 1
    except (ParseError, DuplicateName, MalformedPermutation, UnknownCommand,
            EnumerationBoundExceeded, KeyError, OSError, ValueError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


def main(argv: Sequence[str] | None = None) -> int:
    sys.exit(dispatch(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()

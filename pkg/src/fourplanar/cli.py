"""Command line interface: ``fourplanar <command> ...``.

Exit codes: 0 success, 1 violations or a failed certificate, 2 parse or
usage errors.  Commands taking several files process them independently
and exit with the worst code.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Callable, Sequence

from .discharge import certify
from .drawing import (
    Planarization,
    check_spec,
    crossing_census,
    cut_crossings,
    homotopy_violations,
    planarize,
)
from .errors import FourPlanarError, ParseError
from .extremal import generate_optimal
from .faces import classify
from .fileio import (
    dump_json,
    read_drawing,
    report_dict,
    serialize_drawing,
    to_dot,
    to_svg,
)
from .rewrite import moves_from_json, moves_to_json, normalize, replay
from .topomap import Diagnostic

OK, VIOLATION, PARSE = 0, 1, 2


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load(path: str) -> Planarization:
    spec = read_drawing(path)
    return planarize(spec)


def validation_diagnostics(p: Planarization) -> tuple[list[Diagnostic], list[Diagnostic]]:
    """(violations, warnings) of a planarized drawing."""
    violations: list[Diagnostic] = []
    warnings: list[Diagnostic] = []
    census = crossing_census(p)
    for e in census.offenders():
        violations.append(Diagnostic("k-planarity", e, f"edge {e} has {census.counts[e]} > {census.k}"))
    for f in homotopy_violations(p):
        (violations if f.status == "homotopic" else warnings).append(f.as_diagnostic())
    for x in cut_crossings(p):
        warnings.append(Diagnostic("CutCrossing", x, f"removing crossing {x} disconnects the planarization"))
    return violations, warnings


def _per_file(paths: Sequence[str], fn: Callable[[str], int]) -> int:
    worst = OK
    for path in paths:
        try:
            code = fn(path)
        except ParseError as exc:
            print(f"{path}: parse error: {exc}", file=sys.stderr)
            code = PARSE
        except OSError as exc:
            print(f"{path}: {exc}", file=sys.stderr)
            code = PARSE
        except FourPlanarError as exc:
            print(f"{path}: {exc.code}: {exc}", file=sys.stderr)
            code = VIOLATION
        worst = max(worst, code)
    return worst


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    def one(path: str) -> int:
        spec = read_drawing(path)
        problems = check_spec(spec)
        if problems:
            for d in problems:
                print(f"{path}: {d.rule}: {d.where}: {d.message}")
            return VIOLATION
        p = planarize(spec)
        violations, warnings = validation_diagnostics(p)
        for d in violations:
            print(f"{path}: {d.rule}: {d.message}")
        for d in warnings:
            print(f"{path}: warning: {d.rule}: {d.where}: {d.message}")
        if not violations:
            print(f"{path}: ok (n={p.n}, |E|={p.m}, crossings={len(spec.crossings)}, max per edge={crossing_census(p).maximum})")
        return VIOLATION if violations else OK

    return _per_file(args.files, one)


def _report_path(args: argparse.Namespace, path: str) -> str | None:
    if args.report:
        return args.report
    if args.report_dir:
        stem = os.path.splitext(os.path.basename(path))[0]
        return os.path.join(args.report_dir, f"{stem}.report.json")
    return None


def cmd_certify(args: argparse.Namespace) -> int:
    if args.report and len(args.files) > 1:
        print("--report takes a single input; use --report-dir for several files", file=sys.stderr)
        return PARSE

    def one(path: str) -> int:
        p = _load(path)
        violations, warnings = validation_diagnostics(p)
        report = certify(p)
        data = report_dict(report, f"certify {path}", violations + warnings)
        out = _report_path(args, path)
        if out:
            _emit(dump_json(data), out)
        print(f"{path}: {report.verdict}: {report.bound_line()}")
        for d in report.diagnostics:
            print(f"{path}:   {d.rule}: {d.where}: {d.message}")
        if report.deficient:
            print(f"{path}:   deficient faces: {', '.join(report.deficient)}")
        if violations:
            # the certificate assumes a valid drawing, so its verdict does not count
            for d in violations:
                print(f"{path}: {d.rule}: {d.message}")
            print(f"{path}: validation failed, certificate not applicable")
            return VIOLATION
        return OK if report.certified else VIOLATION

    return _per_file(args.files, one)


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        spec = generate_optimal(args.hexagons, seed=args.seed)
    except FourPlanarError as exc:
        print(f"generate: {exc}", file=sys.stderr)
        return PARSE
    _emit(serialize_drawing(spec), args.out)
    return OK


def cmd_normalize(args: argparse.Namespace) -> int:
    def run() -> int:
        p = _load(args.input)
        if args.replay:
            with open(args.replay, encoding="utf-8") as fh:
                moves = moves_from_json(fh.read())
            q = replay(p, moves)
        else:
            result = normalize(p, cap=args.cap)
            q, moves = result.planarization, list(result.moves)
            if args.log:
                _emit(moves_to_json(moves), args.log)
        _emit(serialize_drawing(q.spec), args.out)
        print(f"{args.input}: {len(moves)} moves, |E| {p.m} -> {q.m}, crossings "
              f"{len(p.spec.crossings)} -> {len(q.spec.crossings)}", file=sys.stderr)
        return OK

    return _per_file([args.input], lambda _: run())


def cmd_faces(args: argparse.Namespace) -> int:
    def one(path: str) -> int:
        table = classify(_load(path))
        if args.census:
            for cls, cnt in sorted(table.census.items()):
                print(f"{path}: {cls} {cnt}")
        else:
            for f in table:
                print(f"{path}: {f.id} {f.cls} v={f.vcount} size={f.size}")
        return OK

    return _per_file(args.files, one)


def cmd_export(args: argparse.Namespace) -> int:
    def one(path: str) -> int:
        spec = read_drawing(path)
        if args.format == "svg":
            try:
                text = to_svg(spec)
            except ValueError as exc:
                print(f"{path}: {exc}", file=sys.stderr)
                return VIOLATION
        else:
            text = to_dot(planarize(spec))
        _emit(text, args.out)
        return OK

    return _per_file([args.file], one)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fourplanar", description="Topological drawings, planarizations and edge-density certificates.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="check structure, 4-planarity and homotopy")
    sp.add_argument("files", nargs="+")
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("certify", help="run the discharging certificate")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--report", help="write the JSON report here (single input)")
    sp.add_argument("--report-dir", help="write <name>.report.json per input into this directory")
    sp.set_defaults(fn=cmd_certify)

    sp = sub.add_parser("generate", help="write the optimal drawing with t hexagons")
    sp.add_argument("--hexagons", "-t", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", "-o")
    sp.set_defaults(fn=cmd_generate)

    sp = sub.add_parser("normalize", help="apply rewrite moves until none improves the drawing")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", "-o")
    sp.add_argument("--log", help="write the move log (JSON)")
    sp.add_argument("--replay", help="apply this move log instead of searching")
    sp.add_argument("--cap", type=int, help="maximum number of moves")
    sp.set_defaults(fn=cmd_normalize)

    sp = sub.add_parser("faces", help="list faces or their census")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--census", action="store_true")
    sp.set_defaults(fn=cmd_faces)

    sp = sub.add_parser("export", help="DOT of the planarization or SVG of a generated drawing")
    sp.add_argument("file")
    sp.add_argument("--format", choices=("dot", "svg"), default="dot")
    sp.add_argument("--out", "-o")
    sp.set_defaults(fn=cmd_export)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

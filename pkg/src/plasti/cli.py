"""Command-line front end.

Subcommands mirror the library modules: ``check`` runs one windowed map
check, ``classify`` runs the rule ladder, ``oracle`` runs the finite
brute-force searches, ``plot`` emits an SVG figure, ``gallery`` replays
curated instances, ``extend`` closes or extends a distance table.

Exit codes are uniform: 0 for a pass (or a completed report), 1 for a
failed check or expectation, 2 for usage, parse or limit errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .classify import classify, verify_witness
from .errors import PlastiError
from .extend import check_metric_axioms, check_restriction, path_infimum_metric, railway_extension
from .gallery import GALLERY_IDS, gallery_entry, verify_entry
from .maps import (
    check_between_preservation,
    check_bijection,
    check_endomorphism,
    check_isometry,
    check_nonexpansive,
    lipschitz_upper,
)
from .oracle import plastic_bruteforce, strongly_plastic_bruteforce
from .parser import parse_map, parse_matrix, parse_space, render_map
from .plot import build_plot, render_svg
from .scalar import format_scalar, parse_scalar
from .space import DEFAULT_CAP, Window

PASS, FAIL, ERROR = 0, 1, 2

_CHECKS = {
    "endo": check_endomorphism,
    "nonexpansive": check_nonexpansive,
    "bijection": check_bijection,
    "isometry": check_isometry,
    "between": check_between_preservation,
}


def _parse_window(text: str) -> Window:
    lo_text, sep, hi_text = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"window wants LO..HI, got {text!r}")
    try:
        return Window(parse_scalar(lo_text), parse_scalar(hi_text))
    except (ValueError, PlastiError) as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as err:
        raise PlastiError(f"cannot read {path}: {err.strerror}") from None


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _witness_payload(witness) -> Optional[dict]:
    if witness is None:
        return None
    return {
        "points": [format_scalar(p) for p in witness.points],
        "images": [format_scalar(v) for v in witness.images],
        "detail": witness.detail,
    }


def _report_payload(report) -> dict:
    return {
        "check": report.check,
        "passed": report.passed,
        "scope": report.scope,
        "witness": _witness_payload(report.witness),
        "notes": list(report.notes),
    }


# ===================================================================
# Subcommands
# ===================================================================


def _cmd_check(args) -> int:
    space = parse_space(_read(args.space))
    desc = parse_map(_read(args.map))
    if args.which == "lipschitz":
        bound, notes = lipschitz_upper(desc, space, args.window, args.cap)
        text = f"lipschitz bound {format_scalar(bound)} on window {args.window}"
        text += "".join(f"\n  note: {n}" for n in notes)
        _emit(args, {"command": "check", "which": "lipschitz",
                     "bound": format_scalar(bound), "notes": list(notes),
                     "window": str(args.window)}, text)
        return PASS
    report = _CHECKS[args.which](desc, space, args.window, args.cap)
    payload = {"command": "check", "which": args.which}
    payload.update(_report_payload(report))
    _emit(args, payload, report.render())
    return PASS if report.passed else FAIL


def _cmd_classify(args) -> int:
    space = parse_space(_read(args.space))
    verdict = classify(space, args.window, args.cap)
    lines = [verdict.render()]
    payload = {
        "command": "classify",
        "outcome": verdict.outcome,
        "rule": verdict.rule,
        "reason": verdict.reason,
        "rigidity": verdict.rigidity,
        "window": str(args.window),
        "trace": [
            {"rule": s.rule, "summary": s.summary, "matched": s.matched, "detail": s.detail}
            for s in verdict.trace
        ],
        "falsifications": [
            {"name": a.name, "outcome": a.outcome} for a in verdict.falsifications
        ],
        "witness": None,
        "witness_verification": None,
    }
    if verdict.witness is not None:
        grammar = render_map(verdict.witness)
        verification = verify_witness(space, verdict.witness, args.window, args.cap)
        lines.append("witness map:")
        lines.extend("  " + l for l in grammar.strip().splitlines())
        lines.append(verification.render())
        payload["witness"] = grammar
        payload["witness_verification"] = {
            "valid": verification.valid,
            "reports": [_report_payload(r) for r in verification.reports],
        }
    _emit(args, payload, "\n".join(lines))
    return PASS


def _parse_points(text: str) -> tuple:
    values = []
    for token in text.split(","):
        token = token.strip()
        if ".." in token:
            lo_text, _, hi_text = token.partition("..")
            lo, hi = int(lo_text), int(hi_text)
            values.extend(Fraction(k) for k in range(lo, hi + 1))
        elif token:
            values.append(parse_scalar(token))
    return tuple(sorted(set(values)))


def _cmd_oracle(args) -> int:
    if args.points:
        points = _parse_points(args.points)
    else:
        from .space import materialize

        space = parse_space(_read(args.space))
        points = materialize(space, args.window, args.cap).points
    if args.strong:
        verdict = strongly_plastic_bruteforce(points)
        payload = {
            "command": "oracle",
            "strong": True,
            "points": [format_scalar(p) for p in points],
            "selfmaps": verdict.total_selfmaps,
            "noncontracting": verdict.noncontracting,
            "strongly_plastic": verdict.strongly_plastic,
        }
    else:
        verdict = plastic_bruteforce(points)
        payload = {
            "command": "oracle",
            "strong": False,
            "points": [format_scalar(p) for p in points],
            "bijections": verdict.bijections,
            "isometries": verdict.isometries,
            "plastic": verdict.plastic,
        }
    _emit(args, payload, verdict.render())
    return PASS


def _cmd_plot(args) -> int:
    space = parse_space(_read(args.space))
    desc = parse_map(_read(args.map)) if args.map else None
    data = build_plot(space, args.window, desc, args.cap)
    svg = render_svg(data)
    if args.out:
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    for jump in data.jumps:
        print(jump.render(), file=sys.stderr)
    return PASS


def _cmd_gallery(args) -> int:
    if args.id == "list":
        text = "\n".join(
            f"{eid}: {gallery_entry(eid).summary}" for eid in GALLERY_IDS
        )
        _emit(args, {"command": "gallery", "ids": list(GALLERY_IDS)}, text)
        return PASS
    entry = gallery_entry(args.id)
    if not args.verify:
        text = f"{entry.id}: {entry.summary}\nmaps: " + (
            ", ".join(n for n, _ in entry.maps) if entry.maps else "(none)"
        )
        _emit(
            args,
            {"command": "gallery", "id": entry.id, "summary": entry.summary,
             "maps": [n for n, _ in entry.maps], "window": str(entry.window)},
            text,
        )
        return PASS
    report = verify_entry(entry)
    payload = {
        "command": "gallery",
        "id": entry.id,
        "passed": report.passed,
        "expectations": [
            {"name": r.name, "passed": r.passed, "detail": r.detail} for r in report.results
        ],
    }
    _emit(args, payload, report.render())
    return PASS if report.passed else FAIL


def _matrix_payload(matrix) -> dict:
    return {
        "labels": list(matrix.labels),
        "kinds": list(matrix.kinds),
        "rows": [[format_scalar(matrix.value(a, b)) for b in matrix.labels] for a in matrix.labels],
    }


def _cmd_extend(args) -> int:
    aug = parse_matrix(_read(args.matrix))
    if args.mode == "paths":
        result = path_infimum_metric(aug)
        matrix = result.matrix
        shrinkage = list(result.shrinkage)
    else:
        matrix = railway_extension(aug)
        shrinkage = []
    axioms = check_metric_axioms(matrix)
    restriction = check_restriction(matrix, aug.inner)
    lines = [matrix.render(), axioms.render(), restriction.render()]
    lines.extend(s.render() for s in shrinkage)
    payload = {
        "command": "extend",
        "mode": args.mode,
        "matrix": _matrix_payload(matrix),
        "axioms_pass": axioms.passed,
        "restriction_pass": restriction.passed,
        "shrinkage": [
            {"pair": list(s.pair), "original": format_scalar(s.original),
             "closed": format_scalar(s.closed), "chain": list(s.chain)}
            for s in shrinkage
        ],
    }
    _emit(args, payload, "\n".join(lines))
    return PASS


# ===================================================================
# Argument wiring
# ===================================================================


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits 2 by default; keep message short
        self.exit(ERROR, f"{self.prog}: {message}\n")


def _build_parser() -> _Parser:
    top = _Parser(prog="plasti", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, window=True):
        if window:
            p.add_argument("--window", type=_parse_window, default=Window(Fraction(-10), Fraction(10)),
                           help="verification window LO..HI (default -10..10)")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP,
                       help="enumeration cap near accumulation points")
        p.add_argument("--json", action="store_true", help="emit a JSON report")

    p = sub.add_parser("check", help="run one windowed map check")
    p.add_argument("--space", required=True, help="space description file")
    p.add_argument("--map", required=True, help="map description file")
    p.add_argument("--which", required=True, choices=sorted(_CHECKS) + ["lipschitz"])
    common(p)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("classify", help="run the plasticity rule ladder")
    p.add_argument("--space", required=True)
    common(p)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("oracle", help="finite brute-force plasticity search")
    p.add_argument("--points", help="comma list of scalars; A..B expands integer ranges")
    p.add_argument("--space", help="space file (points taken from the window)")
    p.add_argument("--strong", action="store_true", help="search all self-maps")
    common(p)
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("plot", help="emit an SVG figure")
    p.add_argument("--space", required=True)
    p.add_argument("--map", help="map description file (omit for the product alone)")
    p.add_argument("--out", help="output path (default: standard output)")
    common(p)
    p.set_defaults(fn=_cmd_plot)

    p = sub.add_parser("gallery", help="show or verify a curated instance")
    p.add_argument("id", help="entry id, or 'list'")
    p.add_argument("--verify", action="store_true", help="run the entry's expectations")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.set_defaults(fn=_cmd_gallery)

    p = sub.add_parser("extend", help="close or extend a distance table")
    p.add_argument("matrix", help="distance table file")
    p.add_argument("--mode", choices=("paths", "railway"), default="paths")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.set_defaults(fn=_cmd_extend)
    return top


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as leave:  # argparse exits; keep main() a plain function
        return leave.code if isinstance(leave.code, int) else ERROR
    if args.command == "oracle" and bool(args.points) == bool(args.space):
        print("plasti oracle: exactly one of --points or --space", file=sys.stderr)
        return ERROR
    try:
        return args.fn(args)
    except PlastiError as err:
        print(f"plasti {args.command}: {err}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 1 semantic failure (violations, failed precondition,
no flow, inequivalent maps), 2 parse error, 3 size bound exceeded,
4 degenerate (zero) map.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from collections.abc import Sequence
from fractions import Fraction

from mbqcflow import angles, rewrites
from mbqcflow.flow import (
    Flavour,
    FlowError,
    PauliFlow,
    SizeBoundError,
    check_focused,
    check_gflow,
    check_pauli_flow,
    find_pauli_flow_bruteforce,
    max_brute,
)
from mbqcflow.graph import GraphError, LabelledOpenGraph
from mbqcflow.instances import GiveUp, random_flow_instance
from mbqcflow.io import (
    ParseError,
    flow_to_json,
    frame_from_json,
    frame_to_json,
    load_flow,
    load_pattern,
    pattern_to_json,
    read_json,
    trace_to_json,
    write_json,
)
from mbqcflow.semantics import OracleSizeError, ZeroMapError, equal_up_to_scalar, eval_pattern

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_SIZE = 3
EXIT_DEGENERATE = 4

RULES = (
    "z-delete", "z-insert", "lc", "pivot", "yz-to-xy", "xz-to-xy",
    "subdivide", "split", "unfuse", "unfuse-gflow", "refuse",
)  # fmt: skip


def _emit(obj: dict) -> None:
    print(json.dumps(obj))


def _verify(g: LabelledOpenGraph, f: PauliFlow, flavour: Flavour, focused: bool) -> list[dict]:
    f = f.replace(flavour=flavour)
    rep = check_gflow(g, f) if flavour is Flavour.GFLOW else check_pauli_flow(g, f)
    out = [v.as_dict() for v in rep.violations]
    if focused:
        out += [v.as_dict() for v in check_focused(g, f).violations]
    return out


def cmd_verify(args: argparse.Namespace) -> int:
    g = load_pattern(args.pattern)
    f = load_flow(args.flow, strict=False)
    flavour = Flavour(args.flavour) if args.flavour else f.flavour
    try:
        violations = _verify(g, f, flavour, args.focused)
    except FlowError as e:
        _emit({"ok": False, "error": str(e)})
        return EXIT_FAIL
    for v in violations:
        _emit(v)
    _emit({"ok": not violations, "violations": len(violations)})
    return EXIT_OK if not violations else EXIT_FAIL


def cmd_find_flow(args: argparse.Namespace) -> int:
    g = load_pattern(args.pattern)
    f = find_pauli_flow_bruteforce(g, args.flavour, focused=args.focused)
    if f is None:
        _emit({"found": False})
        return EXIT_FAIL
    if args.out:
        write_json(args.out, flow_to_json(f))
    _emit({"found": True, "flow": flow_to_json(f)})
    return EXIT_OK


def _angle(text: str | None, use_float: bool) -> angles.Angle | None:
    if text is None:
        return None
    try:
        return angles.normalize(float(text)) if use_float else angles.parse(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad angle {text!r}: {e}") from e


def _need(ids: list[int], n: int | None, rule: str, shape: str) -> None:
    if (n is not None and len(ids) != n) or (n is None and not ids):
        raise ParseError(f"rule {rule} takes {shape}, got {ids}")


def _split_angles(g: LabelledOpenGraph, a: int, a1: angles.Angle | None, a2: angles.Angle | None):
    m = g.labels.get(a)
    if m is None:
        raise rewrites.RewriteError(f"{a} is an output")
    if a2 is None:
        a2 = Fraction(0)
    if a1 is None:
        a1 = angles.sub(m.angle, a2)
    return a1, a2


def _apply_rule(args: argparse.Namespace, g: LabelledOpenGraph, f: PauliFlow | None) -> rewrites.RewriteResult:
    ids, rule = list(args.ids), args.rule
    a1 = _angle(args.alpha1, args.float_angles)
    a2 = _angle(args.alpha2, args.float_angles)
    if rule == "z-delete":
        _need(ids, 1, rule, "one vertex")
        return rewrites.z_delete(g, f, ids[0])
    if rule == "z-insert":
        angle = _angle(args.angle, args.float_angles) or Fraction(0)
        return rewrites.z_insert(g, f, ids, angle)
    if rule == "lc":
        _need(ids, 1, rule, "one vertex")
        return rewrites.lc_rewrite(g, f, ids[0])
    if rule == "pivot":
        _need(ids, 2, rule, "two vertices")
        return rewrites.pivot_rewrite(g, f, *ids)
    if rule == "yz-to-xy":
        _need(ids, 1, rule, "one vertex")
        return rewrites.yz_to_xy(g, f, ids[0])
    if rule == "xz-to-xy":
        _need(ids, 1, rule, "one vertex")
        return rewrites.xz_to_xy(g, f, ids[0])
    if rule == "subdivide":
        _need(ids, 2, rule, "two vertices")
        return rewrites.subdivide_edge(g, f, *ids)
    if rule == "split":
        _need(ids, None, rule, "a vertex followed by W")
        a1, a2 = _split_angles(g, ids[0], a1, a2)
        return rewrites.split_vertex(g, f, ids[0], ids[1:], a1, a2)
    if rule in ("unfuse", "unfuse-gflow"):
        _need(ids, 2, rule, "two vertices")
        a1, a2 = _split_angles(g, ids[0], a1, a2)
        if rule == "unfuse":
            return rewrites.neighbour_unfuse(g, f, ids[0], ids[1], a1, a2)
        if f is None:
            raise ParseError("unfuse-gflow needs a flow file")
        return rewrites.neighbour_unfuse_gflow(g, f, ids[0], ids[1], a1, a2)
    if rule == "refuse":
        _need(ids, 2, rule, "the chain interior x x'")
        return rewrites.inverse_neighbour_unfuse(g, f, *ids)
    raise ParseError(f"unknown rule {rule!r}")


def _write_result(prefix: str, res: rewrites.RewriteResult) -> dict:
    paths = {"pattern": f"{prefix}.pattern.json", "trace": f"{prefix}.trace.json"}
    write_json(paths["pattern"], pattern_to_json(res.graph))
    write_json(paths["trace"], trace_to_json(res.trace))
    if res.flow is not None:
        paths["flow"] = f"{prefix}.flow.json"
        write_json(paths["flow"], flow_to_json(res.flow))
    if res.frame:
        paths["frame"] = f"{prefix}.frame.json"
        write_json(paths["frame"], frame_to_json(res.frame))
    return paths


def _finish(args: argparse.Namespace, res: rewrites.RewriteResult) -> int:
    if res.flow is not None:
        violations = _verify(res.graph, res.flow, res.flow.flavour, res.flow.flavour is Flavour.GFLOW)
        if violations:
            for v in violations:
                _emit(v)
            _emit({"ok": False, "error": "rewritten flow failed verification; nothing written"})
            return EXIT_FAIL
    summary = {"ok": True, "fresh": dict(res.fresh), "flow_paths": res.flow_paths}
    if res.frame:
        summary["frame"] = frame_to_json(res.frame)
    if args.out:
        summary["written"] = _write_result(args.out, res)
    else:
        summary["pattern"] = pattern_to_json(res.graph)
        if res.flow is not None:
            summary["flow"] = flow_to_json(res.flow)
        summary["trace"] = trace_to_json(res.trace)
    _emit(summary)
    return EXIT_OK


def cmd_rewrite(args: argparse.Namespace) -> int:
    g = load_pattern(args.pattern)
    f = load_flow(args.flow) if args.flow else None
    return _finish(args, _apply_rule(args, g, f))


def cmd_normalize(args: argparse.Namespace) -> int:
    g = load_pattern(args.pattern)
    f = load_flow(args.flow) if args.flow else None
    return _finish(args, rewrites.normalize_to_xy(g, f))


def cmd_check_equivalence(args: argparse.Namespace) -> int:
    frame = frame_from_json(read_json(args.frame)) if args.frame else None
    m1 = eval_pattern(load_pattern(args.pattern_a), frame=frame)
    m2 = eval_pattern(load_pattern(args.pattern_b))
    if m1.shape != m2.shape:
        _emit({"equivalent": False, "reason": f"shapes differ: {m1.shape} vs {m2.shape}"})
        return EXIT_FAIL
    eq = equal_up_to_scalar(m1, m2, args.tol)
    _emit({"equivalent": eq})
    return EXIT_OK if eq else EXIT_FAIL


def cmd_random(args: argparse.Namespace) -> int:
    if args.vertices > max_brute():
        raise SizeBoundError(f"--vertices {args.vertices} exceeds the exhaustive-search bound {max_brute()}")
    rng = random.Random(args.seed)
    g, f = random_flow_instance(rng, args.vertices, flavour=args.flavour, attempts=args.attempts)
    stem = args.out or f"random-{args.vertices}-{args.seed}"
    write_json(f"{stem}.pattern.json", pattern_to_json(g))
    write_json(f"{stem}.flow.json", flow_to_json(f))
    _emit({"pattern": f"{stem}.pattern.json", "flow": f"{stem}.flow.json"})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mbqcflow", description="Verify flows and rewrite MBQC patterns.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a flow against a pattern")
    p.add_argument("pattern")
    p.add_argument("flow")
    p.add_argument("--flavour", choices=[x.value for x in Flavour], help="override the flow file's flavour")
    p.add_argument("--focused", action="store_true", help="also check the focusing conditions")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("find-flow", help="exhaustive flow search")
    p.add_argument("pattern")
    p.add_argument("--flavour", choices=[x.value for x in Flavour], default="pauli")
    p.add_argument("--focused", action="store_true")
    p.add_argument("--out", help="write the flow here")
    p.set_defaults(func=cmd_find_flow)

    p = sub.add_parser("rewrite", help="apply one rewrite rule")
    p.add_argument("pattern")
    p.add_argument("flow", nargs="?")
    p.add_argument("--rule", required=True, choices=RULES)
    p.add_argument("ids", nargs="*", type=int, help="vertex arguments of the rule")
    p.add_argument("--alpha1", help="angle kept on the split vertex, as num/den of pi")
    p.add_argument("--alpha2", help="angle moved to the new vertex, as num/den of pi")
    p.add_argument("--angle", help="Z insertion angle: 0 or 1 (times pi)")
    p.add_argument("--float-angles", action="store_true", help="read angles as decimal multiples of pi")
    p.add_argument("--out", help="output prefix for .pattern/.flow/.trace JSON files")
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("normalize", help="rewrite to labels in {X, Y, XY}")
    p.add_argument("pattern")
    p.add_argument("flow", nargs="?")
    p.add_argument("--out", help="output prefix")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("check-equivalence", help="compare two patterns up to a scalar")
    p.add_argument("pattern_a")
    p.add_argument("pattern_b")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--frame", help="output Cliffords (a rewrite's .frame.json) applied to pattern_a")
    p.set_defaults(func=cmd_check_equivalence)

    p = sub.add_parser("random", help="sample a pattern that has a flow")
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--flavour", choices=[x.value for x in Flavour], default="pauli")
    p.add_argument("--attempts", type=int, default=2000)
    p.add_argument("--out", help="output prefix")
    p.set_defaults(func=cmd_random)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        # vertex ids of a rule may follow its options, so collect stray integers
        args, extra = parser.parse_known_args(argv)
        if extra and args.command == "rewrite" and all(t.lstrip("-").isdigit() for t in extra):
            args.ids = list(args.ids) + [int(t) for t in extra]
        elif extra:
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    try:
        return args.func(args)
    except ParseError as e:
        _emit({"error": "parse", "message": str(e)})
        return EXIT_PARSE
    except (SizeBoundError, OracleSizeError) as e:
        _emit({"error": "size", "message": str(e)})
        return EXIT_SIZE
    except ZeroMapError as e:
        _emit({"error": "degenerate", "message": str(e)})
        return EXIT_DEGENERATE
    except (rewrites.RewriteError, FlowError, GraphError, GiveUp) as e:
        _emit({"error": "failed", "message": str(e)})
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``subdivrules <command> ...``.

Exit status 0 on success, 1 when a check or verification fails, 2 on usage
or input errors.  Diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .axioms import InferenceError, check_axioms, infer_rule, refine_labels
from .export import export_dot, stats
from .gallery import RULES
from .graphs import GraphError
from .planar import RULES2D, SURFACES, history_graph_2d
from .realize import verify_realization
from .rules import RuleError, build_history, validate_rule
from .textio import (
    RuleSyntaxError,
    looks_like_history,
    parse_history,
    parse_rule,
    render_rule,
    rule2d_from_dict,
    surface_from_dict,
)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_rule(ref: str, validate: bool = True):
    if ref in RULES:
        return RULES[ref]()
    return parse_rule(_read(ref), validate=validate)


def _load_json(ref, bundled, convert):
    if ref in bundled:
        return bundled[ref]()
    try:
        return convert(json.loads(_read(ref)))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{ref}: not a valid document ({exc})") from None


def _out_path(args, name):
    p = Path(name)
    if args.out_dir and not p.is_absolute():
        Path(args.out_dir).mkdir(parents=True, exist_ok=True)
        p = Path(args.out_dir) / p
    return p


def _emit_history(args, h):
    if getattr(args, "dot", None):
        _out_path(args, args.dot).write_text(export_dot(h))
    if getattr(args, "stats", False):
        print("\n".join(stats(h).lines()))


def cmd_validate(args):
    rule = _load_rule(args.rule, validate=False)
    report = validate_rule(rule)
    if report.ok:
        print("valid")
        return 0
    for v in report.violations:
        print(v, file=sys.stderr)
    return 1


def cmd_expand(args):
    h = build_history(_load_rule(args.rule), args.depth)
    print("sizes " + " ".join(map(str, h.sizes())))
    _emit_history(args, h)
    return 0


def _load_history(args):
    if args.source in RULES or not looks_like_history(_read(args.source)):
        if args.depth is None:
            raise UsageError("a rule file needs --depth")
        return build_history(_load_rule(args.source), args.depth)
    return parse_history(_read(args.source))


def cmd_check_axioms(args):
    h = _load_history(args)
    if args.refine:
        h = refine_labels(h)
    report = check_axioms(h)
    print("\n".join(report.lines()))
    return 0 if report.ok else 1


def cmd_infer(args):
    h = _load_history(args)
    if args.refine:
        h = refine_labels(h)
    try:
        rule = infer_rule(h)
    except InferenceError as exc:
        print(f"inference failed: {exc}", file=sys.stderr)
        return 1
    text = render_rule(rule)
    if args.output:
        _out_path(args, args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_realize3d(args):
    report = verify_realization(_load_rule(args.rule), args.depth)
    out = sys.stdout if report.passed else sys.stderr
    print("\n".join(report.lines()), file=out)
    return 0 if report.passed else 1


def cmd_planar(args):
    x = _load_json(args.surface, SURFACES, surface_from_dict)
    rule = _load_json(args.rule2d, RULES2D, rule2d_from_dict)
    h = history_graph_2d(x, rule, args.depth)
    print("sizes " + " ".join(map(str, h.sizes())))
    _emit_history(args, h)
    if args.check:
        if args.refine:
            h = refine_labels(h)
        report = check_axioms(h)
        print("\n".join(report.lines()))
        return 0 if report.ok else 1
    return 0


def cmd_gallery(args):
    print("rules: " + " ".join(RULES))
    print("planar rules: " + " ".join(RULES2D))
    print("surfaces: " + " ".join(SURFACES))
    return 0


def _depth(s):
    n = int(s)
    if n < 1:
        raise argparse.ArgumentTypeError("depth must be at least 1")
    return n


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subdivrules", description=__doc__.splitlines()[0])
    p.add_argument("--out-dir", help="directory for written files (default: current directory)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a rule document")
    s.add_argument("rule")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("expand", help="expand a rule into a history graph")
    s.add_argument("rule")
    s.add_argument("--depth", type=_depth, required=True)
    s.add_argument("--dot", help="write Graphviz output here")
    s.add_argument("--stats", action="store_true")
    s.set_defaults(func=cmd_expand)

    for name, func, help_ in (("check-axioms", cmd_check_axioms, "verify the five axioms"),
                              ("infer", cmd_infer, "read a rule off a history graph")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("source", help="history document, rule document or bundled rule name")
        s.add_argument("--depth", type=_depth)
        s.add_argument("--refine", action="store_true", help="refine labels first")
        if name == "infer":
            s.add_argument("--output", "-o")
        s.set_defaults(func=func)

    s = sub.add_parser("realize3d", help="compare the 3D realization with the rule's expansion")
    s.add_argument("rule")
    s.add_argument("--depth", type=int, required=True)
    s.set_defaults(func=cmd_realize3d)

    s = sub.add_parser("planar", help="history graph of a planar subdivision")
    s.add_argument("surface")
    s.add_argument("rule2d")
    s.add_argument("--depth", type=_depth, required=True)
    s.add_argument("--dot")
    s.add_argument("--stats", action="store_true")
    s.add_argument("--check", action="store_true", help="also run check-axioms")
    s.add_argument("--refine", action="store_true")
    s.set_defaults(func=cmd_planar)

    s = sub.add_parser("gallery", help="list bundled rules and surfaces")
    s.set_defaults(func=cmd_gallery)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, RuleSyntaxError, RuleError, GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

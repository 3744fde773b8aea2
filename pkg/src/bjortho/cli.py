"""Command-line front end: ``bjortho <command> ...``.

Exit status is 0 on success, 1 when a ``repro`` case fails and 2 on bad input.
Reports go to stdout and diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from .exact import ExactnessError
from .geometry import is_bj_orthogonal, smoothness_order, support_set
from .kset import FAMILIES, decide_kset, is_scalar_isometry, kappa_report
from .preservation import hyperplane_obstruction_decide, preserves_bj_at, reverse_preserves_bj_at
from .repro import CASES, run_case
from .space import SpaceError
from .workspace import WorkspaceError, emit_report, parse_workspace


class InputError(Exception):
    pass


@dataclass(frozen=True)
class OrthogonalityAnswer:
    x: tuple
    y: tuple
    orthogonal: bool


@dataclass(frozen=True)
class SmoothnessAnswer:
    point: tuple
    order: int


@dataclass(frozen=True)
class IsometryAnswer:
    is_isometry: bool
    scale: object
    reason: str


def _default_seed() -> int:
    raw = os.environ.get("BJORTHO_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"BJORTHO_SEED: expected an integer, got {raw!r}") from None


def _load(path: str, eps=None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        return parse_workspace(text, eps=eps)
    except WorkspaceError as e:
        raise InputError(f"{path}: {e}") from None


def _space_ws(args):
    ws = _load(args.space, args.eps)
    if ws.space is None:
        raise InputError(f"{args.space}: no 'space' field")
    return ws


def cmd_ortho(args):
    ws = _space_ws(args)
    x, y = ws.vector(args.x), ws.vector(args.y)
    return OrthogonalityAnswer(x, y, is_bj_orthogonal(ws.space, x, y)), 0


def cmd_support(args):
    ws = _space_ws(args)
    return support_set(ws.space, ws.vector(args.x)), 0


def cmd_smooth(args):
    ws = _space_ws(args)
    x = ws.vector(args.x)
    return SmoothnessAnswer(x, smoothness_order(ws.space, x)), 0


def cmd_preserves(args):
    ws = _space_ws(args)
    fn = reverse_preserves_bj_at if args.reverse else preserves_bj_at
    return fn(ws.space, ws.space, ws.operator(args.op), ws.vector(args.x)), 0


def cmd_kset(args):
    ws = _space_ws(args)
    seed = args.seed if args.seed is not None else _default_seed()
    return decide_kset(ws.space, ws.set(args.set), budget=args.budget, seed=seed), 0


def cmd_isometry(args):
    ws = _space_ws(args)
    r = is_scalar_isometry(ws.space, ws.operator(args.op))
    return IsometryAnswer(r.is_isometry, r.scale, r.reason), 0


def cmd_kappa(args):
    return kappa_report(args.family, args.dim), 0


def cmd_obstruction(args):
    ws = _load(args.functionals)
    for name in (args.f_name, args.g_name):
        if name not in ws.functionals:
            raise InputError(f"{args.functionals}: functionals.{name}: missing")
    return hyperplane_obstruction_decide(ws.functionals[args.f_name], ws.functionals[args.g_name],
                                         ws.operator(args.op)), 0


def cmd_repro(args):
    if args.list:
        return {k: v[0] for k, v in CASES.items()}, 0
    if not args.case:
        raise InputError("repro: give a CASE_ID or --list")
    if args.case not in CASES:
        raise InputError(f"repro: unknown case {args.case!r}; known cases: {', '.join(CASES)}")
    r = run_case(args.case)
    return r, 0 if r.passed else 1


def _repro_text(r) -> str:
    lines = [f"{r.case}: {'PASS' if r.passed else 'FAIL'} ({r.description})"]
    lines += [f"  [{'ok' if ok else 'FAIL'}] {label}" for label, ok in r.checks]
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bjortho",
                                description="Birkhoff-James orthogonality and K-sets on finite-dimensional normed spaces.")
    p.add_argument("--output", choices=("json", "text"), default="json", help="report format")
    p.add_argument("--eps", type=float, default=None, help="float-mode tolerance (default 1e-9)")
    sub = p.add_subparsers(dest="command", required=True)

    def with_space(name, help_, fn, vector=True):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--space", required=True, metavar="FILE", help="workspace JSON")
        if vector:
            s.add_argument("-x", required=True, metavar="NAME")
        s.set_defaults(func=fn)
        return s

    s = with_space("ortho", "is x Birkhoff-James orthogonal to y", cmd_ortho)
    s.add_argument("-y", required=True, metavar="NAME")
    with_space("support", "support functionals at x", cmd_support)
    with_space("smooth", "order of smoothness at x", cmd_smooth)
    s = with_space("preserves", "does T preserve orthogonality at x", cmd_preserves)
    s.add_argument("--op", required=True, metavar="NAME")
    s.add_argument("--reverse", action="store_true", help="check the converse implication")
    s = with_space("isometry", "is T a scalar multiple of an isometry", cmd_isometry, vector=False)
    s.add_argument("--op", required=True, metavar="NAME")

    k = sub.add_parser("kset", help="K-set decisions")
    ksub = k.add_subparsers(dest="kset_command", required=True)
    s = ksub.add_parser("decide", help="certify, or else search for a counterexample")
    s.add_argument("--space", required=True, metavar="FILE")
    s.add_argument("--set", required=True, metavar="NAME")
    s.add_argument("--budget", type=int, default=1000)
    s.add_argument("--seed", type=int, default=None, help="default: $BJORTHO_SEED or 0")
    s.set_defaults(func=cmd_kset)

    s = sub.add_parser("kappa", help="K-number of a space family")
    s.add_argument("--family", required=True, choices=FAMILIES)
    s.add_argument("--dim", required=True, type=int)
    s.set_defaults(func=cmd_kappa)

    s = sub.add_parser("obstruction", help="hyperplane-union containment under T")
    s.add_argument("--functionals", required=True, metavar="FILE")
    s.add_argument("--op", required=True, metavar="NAME")
    s.add_argument("--f-name", default="F", help="name of the k functionals (default F)")
    s.add_argument("--g-name", default="G", help="name of the p functionals (default G)")
    s.set_defaults(func=cmd_obstruction)

    s = sub.add_parser("repro", help="replay a reference case")
    s.add_argument("case", nargs="?", metavar="CASE_ID")
    s.add_argument("--list", action="store_true", help="list the cases")
    s.set_defaults(func=cmd_repro)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    try:
        result, code = args.func(args)
    except (InputError, WorkspaceError, SpaceError, ExactnessError, ValueError, KeyError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"bjortho: error: {msg}", file=stderr)
        return 2
    if args.command == "repro" and args.output == "text" and not args.list:
        print(_repro_text(result), file=stdout)
    else:
        print(emit_report(result, args.output), file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

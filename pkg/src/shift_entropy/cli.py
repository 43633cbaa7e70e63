"""Command-line frontend: ``shift-entropy {code,entropy,graph,invert,check}``."""

from __future__ import annotations

import argparse
import ast
import json
import logging
import operator
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .algebraic import NAMED_CONSTANTS, AlgebraicReal
from .betamaps import AlphaBetaParams, orbit_codings
from .errors import ConditionViolation, ShiftEntropyError, Undetermined
from .graph import build_graph, graph_entropy
from .inverse import Verdict, decide
from .piecewise import DEFAULT_SINGULAR_TOL, to_mpf
from .solver import compute_bar
from .strings import check_conditions, common_alphabet, parse_string

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONDITION = 2
EXIT_NOT_REPRESENTABLE = 3
EXIT_UNDETERMINED = 4


@dataclass(frozen=True)
class Config:
    precision_bits: int = 128
    tol: float = 1e-12
    max_iter: int = 200
    horizon_cap: int = 10**6
    output: str = "text"

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be at least 64")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.output not in ("text", "json"):
            raise ValueError("output must be 'text' or 'json'")


@dataclass(frozen=True)
class ParsedReal:
    """A parameter value and the hit tolerance its stated precision supports."""

    value: object
    exact: bool
    hit_tol: float


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def parse_real(text: str, bits: int = 128) -> ParsedReal:
    """Parse ints, ``p/q``, ``golden``, ``plastic``, decimals and arithmetic on them.

    Expressions built from exact atoms stay exact.  A decimal literal is
    taken as an approximation: the whole expression is evaluated in mpmath
    and breakpoint hits are accepted within a tolerance a few digits looser
    than the literal's last digit.
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as e:
        raise ValueError(f"cannot parse number {text!r}") from e
    digits = []

    def atoms(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, float):
            seg = ast.get_source_segment(text.strip(), node) or repr(node.value)
            mantissa = seg.lower().split("e")[0]
            digits.append(len(mantissa.split(".")[1]) if "." in mantissa else 0)
        for child in ast.iter_child_nodes(node):
            atoms(child)

    atoms(tree)
    exact = not digits
    source = text.strip()

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            if isinstance(node.value, int):
                return Fraction(node.value) if exact else mpmath.mpf(node.value)
            return mpmath.mpf(ast.get_source_segment(source, node))
        if isinstance(node, ast.Name) and node.id in NAMED_CONSTANTS:
            c = NAMED_CONSTANTS[node.id]
            return c if exact else c.to_mpf(bits)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            x = ev(node.operand)
            return -x if isinstance(node.op, ast.USub) else x
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"unsupported element in {text!r}")

    with mpmath.workprec(bits):
        value = ev(tree)
    if exact:
        if isinstance(value, AlgebraicReal) and all(c == 0 for c in value.coeffs[1:]):
            value = value.coeffs[0]
        return ParsedReal(value, True, DEFAULT_SINGULAR_TOL)
    return ParsedReal(value, False, 10.0 ** (3 - min(digits)))


def _emit(cfg: Config, payload: dict, text: str) -> None:
    if cfg.output == "json":
        print(json.dumps(payload, indent=2, default=str))
    else:
        print(text)


def _pair(args):
    return common_alphabet(parse_string(args.u), parse_string(args.v))


def cmd_code(cfg: Config, args) -> int:
    a = parse_real(args.alpha, cfg.precision_bits)
    b = parse_real(args.beta, cfg.precision_bits)
    p = AlphaBetaParams(a.value, b.value)
    tol = max(a.hit_tol, b.hit_tol)
    codes = orbit_codings(p, args.len, cfg.precision_bits, tol)
    rows = {}
    for name, c in (("u", codes.u), ("v", codes.v)):
        rows[name] = {
            "prefix": "".join(map(str, c.prefix(args.len))),
            "string": str(c.string) if c.string is not None else None,
            "exactness": c.exactness.value,
        }
    lines = [
        f"{n}={r['string'] or r['prefix'] + '...'}  prefix {r['prefix']}  [{r['exactness']}]"
        for n, r in rows.items()
    ]
    _emit(cfg, {"alpha": str(args.alpha), "beta": str(args.beta), "k": p.k, **rows}, "\n".join(lines))
    return EXIT_OK


def cmd_entropy(cfg: Config, args) -> int:
    u, v = _pair(args)
    report = check_conditions(u, v)
    if report.admissible and not report.strict:
        log.warning("strict condition fails: %s", "; ".join(report.violations))
    r = compute_bar(u, v, cfg.tol, cfg.max_iter, cfg.horizon_cap)
    text = "\n".join([
        f"alpha_bar = {r.alpha_bar}",
        f"beta_bar  = {r.beta_bar!r}",
        f"h         = {r.entropy_log2!r}",
        f"k = {r.k}  iterations = {max(len(r.trace) - 1, 0)}  flags = {','.join(r.flags) or '-'}",
    ])
    _emit(cfg, r.to_dict(), text)
    return EXIT_OK


def cmd_graph(cfg: Config, args) -> int:
    u, v = _pair(args)
    g = build_graph(u, v, args.mode, args.K)
    out = g.to_dot() if args.format == "dot" else g.to_json() + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
        print(f"wrote {len(g.vertices)} vertices, entropy {graph_entropy(g):.12g}, to {args.out}")
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_invert(cfg: Config, args) -> int:
    u, v = _pair(args)
    d = decide(u, v, cfg.tol)
    text = "\n".join([
        f"verdict   = {d.verdict.value} ({d.case.value})",
        f"alpha_bar = {d.alpha_bar}",
        f"beta_bar  = {d.beta_bar!r}",
        f"beta_hat  = {d.beta_hat!r}",
    ])
    _emit(cfg, d.to_dict(), text)
    return {
        Verdict.MATCHED: EXIT_OK,
        Verdict.NOT_REPRESENTABLE: EXIT_NOT_REPRESENTABLE,
        Verdict.UNDETERMINED: EXIT_UNDETERMINED,
    }[d.verdict]


def cmd_check(cfg: Config, args) -> int:
    u, v = _pair(args)
    r = check_conditions(u, v)
    if r.strict and r.admissible:
        status = "strict condition holds"
    elif r.admissible:
        status = "condition holds weakly"
    else:
        status = "not admissible"
    payload = {
        "k": r.k, "weak": r.weak, "strict": r.strict, "u_starts_zero": r.u_starts_zero,
        "v_starts_top": r.v_starts_top, "k2_ordered": r.k2_ordered,
        "admissible": r.admissible, "violations": list(r.violations),
    }
    lines = [f"k = {r.k}: {status}"] + [f"  fails: {x}" for x in r.violations]
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_OK if r.admissible else EXIT_CONDITION


class _Parser(argparse.ArgumentParser):
    # Exit code 2 is reserved for condition violations.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda x: argparse.SUPPRESS) if suppress else (lambda x: x)
    p.add_argument("--precision", type=int, default=d(128), help="working precision in bits")
    p.add_argument("--tol", type=float, default=d(1e-12))
    p.add_argument("--max-iter", type=int, default=d(200))
    p.add_argument("--horizon-cap", type=int, default=d(10**6))
    p.add_argument("--json", action="store_true", default=d(False), help="emit JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shift-entropy", description="Entropy and kneading data of beta x + alpha mod 1.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_, pair=True):
        sp = sub.add_parser(name, help=help_)
        _global_flags(sp, suppress=True)
        if pair:
            sp.add_argument("--u", required=True, help="lower string, e.g. '(01)'")
            sp.add_argument("--v", required=True, help="upper string, e.g. '(110)'")
        sp.set_defaults(func=func)
        return sp

    sp = add("code", cmd_code, "orbit codings of 0 and 1", pair=False)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--beta", required=True)
    sp.add_argument("--len", type=int, default=32)
    add("entropy", cmd_entropy, "entropy of Sigma(u, v)")
    sp = add("graph", cmd_graph, "follower-set graph")
    sp.add_argument("--mode", choices=("collapse", "truncate"), default="collapse")
    sp.add_argument("--K", type=int, default=None)
    sp.add_argument("--format", choices=("dot", "json"), default="dot")
    sp.add_argument("--out", default=None)
    add("invert", cmd_invert, "decide whether (u, v) are kneading data")
    add("check", cmd_check, "admissibility report")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = Config(args.precision, args.tol, args.max_iter, args.horizon_cap, "json" if args.json else "text")
        return args.func(cfg, args)
    except ConditionViolation as e:
        print(f"condition violation: {e}", file=sys.stderr)
        return EXIT_CONDITION
    except Undetermined as e:
        print(f"undetermined: {e}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except (ShiftEntropyError, ValueError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

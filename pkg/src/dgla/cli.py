"""Command-line surface: model construction, series expansion, BCH, verification.

Output is deterministic: identical invocations produce byte-identical
output.  Results go to stdout (or ``--output``); diagnostics go to
stderr.  Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from fractions import Fraction
from typing import Sequence

from .algebra import (
    AlgebraContext,
    AlgebraElement,
    GradingError,
    SeriesParseError,
    encode,
    format_element,
    format_element_latex,
    weight_component,
)
from .calculus import bch, bernoulli, extend_differential
from .models import (
    MODEL_NAMES,
    build_named_model,
    check_equivariance,
    compute_symmetric_data,
    encode_model,
    symmetry_morphism,
    verify_model,
)

DEFAULT_ORDER = 6
DEFAULT_ORDER_CAP = 10

EXPAND_LABELS = ("v", "x", "q", "Dv", "De", "Df", "Dg")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # single-line diagnostics, exit code 2
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _order_cap() -> int:
    raw = os.environ.get("DGLA_MAX_ORDER")
    if raw is None:
        return DEFAULT_ORDER_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"DGLA_MAX_ORDER must be an integer, got {raw!r}")
    if cap < 1:
        raise UsageError(f"DGLA_MAX_ORDER must be positive, got {cap}")
    return cap


def _validate_order(order: int) -> int:
    cap = _order_cap()
    if not 1 <= order <= cap:
        raise UsageError(f"--order must lie in 1..{cap}, got {order}")
    return order


# -- bch expression language -------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<sym>[-+*/(),]))")


class _ExprParser:
    """Parses rational multiples and negations of generators and of
    nested ``bch(...)`` terms, e.g. ``-1/2*bch(e, f)``."""

    def __init__(self, context: AlgebraContext, text: str) -> None:
        self.context = context
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            match = _TOKEN_RE.match(text, pos)
            if match is None:
                if text[pos:].strip():
                    raise UsageError(f"bad character in expression at offset {pos}: {text[pos:]!r}")
                break
            kind = match.lastgroup or "sym"
            self.tokens.append((kind, match.group(kind), match.start(kind)))
            pos = match.end()
        self.cursor = 0

    def _peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.cursor] if self.cursor < len(self.tokens) else None

    def _next(self) -> tuple[str, str, int]:
        token = self._peek()
        if token is None:
            raise UsageError(f"unexpected end of expression: {self.text!r}")
        self.cursor += 1
        return token

    def _expect_symbol(self, symbol: str) -> None:
        kind, value, offset = self._next()
        if kind != "sym" or value != symbol:
            raise UsageError(f"expected {symbol!r} at offset {offset} in {self.text!r}")

    def parse(self) -> AlgebraElement:
        element = self._expr()
        leftover = self._peek()
        if leftover is not None:
            raise UsageError(
                f"trailing input at offset {leftover[2]} in {self.text!r}"
            )
        return element

    def _expr(self) -> AlgebraElement:
        sign = 1
        while True:
            token = self._peek()
            if token and token[0] == "sym" and token[1] in "+-":
                self._next()
                if token[1] == "-":
                    sign = -sign
            else:
                break
        element = self._value()
        return element if sign > 0 else -element

    def _value(self) -> AlgebraElement:
        token = self._peek()
        if token is None:
            raise UsageError(f"unexpected end of expression: {self.text!r}")
        if token[0] == "int":
            scale = self._rational()
            self._expect_symbol("*")
            return scale * self._atom()
        return self._atom()

    def _rational(self) -> Fraction:
        kind, value, offset = self._next()
        if kind != "int":
            raise UsageError(f"expected a rational at offset {offset} in {self.text!r}")
        numerator = int(value)
        token = self._peek()
        if token and token[0] == "sym" and token[1] == "/":
            self._next()
            kind, den, offset = self._next()
            if kind != "int" or int(den) == 0:
                raise UsageError(f"bad denominator at offset {offset} in {self.text!r}")
            return Fraction(numerator, int(den))
        return Fraction(numerator)

    def _atom(self) -> AlgebraElement:
        kind, value, offset = self._next()
        if kind != "name":
            raise UsageError(f"expected a generator or bch(...) at offset {offset} in {self.text!r}")
        if value == "bch":
            self._expect_symbol("(")
            arguments = [self._expr()]
            while True:
                token = self._peek()
                if token and token[0] == "sym" and token[1] == ",":
                    self._next()
                    arguments.append(self._expr())
                else:
                    break
            self._expect_symbol(")")
            return bch(arguments, context=self.context)
        try:
            return self.context.gen(value)
        except KeyError:
            raise UsageError(f"unknown generator {value!r} at offset {offset}")


def _parse_generator_list(raw: str, order: int) -> AlgebraContext:
    entries: list[tuple[str, int]] = []
    for piece in raw.split(","):
        piece = piece.strip()
        if not piece:
            continue
        name, colon, degree = piece.partition(":")
        if not colon:
            raise UsageError(f"generator entries must be name:degree, got {piece!r}")
        try:
            entries.append((name.strip(), int(degree)))
        except ValueError:
            raise UsageError(f"bad degree in generator entry {piece!r}")
    if not entries:
        raise UsageError("--gens must declare at least one generator")
    try:
        return AlgebraContext(entries, max_weight=order)
    except ValueError as exc:
        raise UsageError(str(exc))


# -- output --------------------------------------------------------------


def _render(element: AlgebraElement, label: str, fmt: str) -> str:
    if fmt == "json":
        return encode(element, label=label)
    if fmt == "text":
        return format_element(element)
    return format_element_latex(element)


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")


# -- subcommands ----------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser, formats: bool = True) -> None:
    parser.add_argument("--order", type=int, default=DEFAULT_ORDER, help="truncation order (default 6)")
    parser.add_argument("--output", default=None, help="write output to this path instead of stdout")
    if formats:
        parser.add_argument(
            "--format",
            choices=("json", "text", "latex"),
            default="json",
            help="output format (default json)",
        )


def build_parser() -> _Parser:
    parser = _Parser(prog="dgla", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    p_bernoulli = commands.add_parser("bernoulli", help="print a Bernoulli number as p/q")
    p_bernoulli.add_argument("n", type=int)
    p_bernoulli.add_argument("--output", default=None)

    p_bch = commands.add_parser("bch", help="multi-argument BCH of degree-0 expressions")
    _add_common(p_bch)
    p_bch.add_argument("--gens", required=True, help="comma-separated name:degree list")
    p_bch.add_argument(
        "exprs",
        nargs="+",
        metavar="expr",
        help="rational multiples and negations of generators and nested bch(...) "
        "terms; put -- before expressions that start with a minus sign",
    )

    p_model = commands.add_parser("model", help="emit a full model JSON envelope")
    p_model.add_argument("name", choices=MODEL_NAMES)
    p_model.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p_model.add_argument("--output", default=None)

    p_expand = commands.add_parser("expand", help="expand a named series of a model")
    p_expand.add_argument("label", choices=EXPAND_LABELS)
    _add_common(p_expand)
    p_expand.add_argument("--model", choices=MODEL_NAMES, default="bigon-sym")
    group = p_expand.add_mutually_exclusive_group()
    group.add_argument("--weight", type=int, default=None, help="emit only the weight-k terms")
    group.add_argument(
        "--brackets",
        type=int,
        default=None,
        help="emit only the j-bracket terms; alias for --weight j+1 "
        "(a term with j brackets has j+1 letters)",
    )

    p_verify = commands.add_parser("verify", help="verify a model or its equivariance")
    p_verify.add_argument("name", choices=MODEL_NAMES)
    p_verify.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p_verify.add_argument("--output", default=None)
    p_verify.add_argument("--morphism", choices=("sigma", "iota"), default=None)
    return parser


def _cmd_bernoulli(args: argparse.Namespace) -> int:
    cap = 2 * _order_cap()
    if not 0 <= args.n <= cap:
        raise UsageError(f"n must lie in 0..{cap}, got {args.n}")
    value = bernoulli(args.n)
    _emit(f"{value.numerator}/{value.denominator}", args.output)
    return 0


def _cmd_bch(args: argparse.Namespace) -> int:
    order = _validate_order(args.order)
    context = _parse_generator_list(args.gens, order)
    try:
        elements = [_ExprParser(context, text).parse() for text in args.exprs]
        result = bch(elements, context=context)
    except GradingError as exc:
        raise UsageError(str(exc))
    _emit(_render(result, "bch", args.format), args.output)
    return 0


def _cmd_model(args: argparse.Namespace) -> int:
    order = _validate_order(args.order)
    model = build_named_model(args.name, order)
    _emit(encode_model(model, args.name), args.output)
    return 0


def _expand_element(label: str, model_name: str, order: int) -> AlgebraElement:
    if label in ("v", "x", "q", "Dv"):
        if model_name not in ("circle2", "bigon-sym"):
            raise UsageError(
                f"label {label!r} is defined for --model circle2 or bigon-sym, not {model_name!r}"
            )
        data = compute_symmetric_data(order)
        if label == "Dv":
            return extend_differential(build_named_model("circle2", order), data.v)
        return getattr(data, label)
    generator = label[1:]  # De/Df/Dg
    model = build_named_model(model_name, order)
    if generator not in model.context.names:
        raise UsageError(f"model {model_name!r} has no generator {generator!r}")
    return model.differential[generator]


def _cmd_expand(args: argparse.Namespace) -> int:
    order = _validate_order(args.order)
    element = _expand_element(args.label, args.model, order)
    weight = args.weight
    if args.brackets is not None:
        if args.brackets < 0:
            raise UsageError(f"--brackets must be nonnegative, got {args.brackets}")
        weight = args.brackets + 1
    if weight is not None:
        if not 1 <= weight <= order:
            raise UsageError(f"--weight must lie in 1..{order}, got {weight}")
        element = weight_component(element, weight)
    _emit(_render(element, args.label, args.format), args.output)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    import json

    order = _validate_order(args.order)
    model = build_named_model(args.name, order)
    if args.morphism is None:
        report = verify_model(model, subject=args.name)
    else:
        try:
            morphism = symmetry_morphism(args.name, model.context, args.morphism)
        except KeyError as exc:
            raise UsageError(exc.args[0])
        report = check_equivariance(model, morphism, subject=f"{args.name}:{args.morphism}")
    payload = report.to_json_dict()
    payload["morphism"] = args.morphism
    _emit(json.dumps(payload, indent=2, ensure_ascii=False), args.output)
    return 0 if report.overall else 1


_HANDLERS = {
    "bernoulli": _cmd_bernoulli,
    "bch": _cmd_bch,
    "model": _cmd_model,
    "expand": _cmd_expand,
    "verify": _cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SeriesParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())

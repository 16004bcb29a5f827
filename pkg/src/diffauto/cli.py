"""Command-line front end.

Commands: ``eval``, ``compose``, ``normalize``, ``reduce``, ``membership``
and ``anick``.  Exit codes: 0 success, 1 parse/parameter error, 2 resource
guard exceeded, 3 certification failure.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

from .algebra import DiffPolynomial, limits
from .amalgam import evaluate, format_normal_form, normalize
from .automorphism import ElementaryAuto, Endomorphism, compose, compose_all
from .errors import CertificationError, DiffAlgebraError, ParameterError, ParseError, ResourceError
from .expr import format_poly, parse_poly
from .reduction import certify_wild_anick, decide_tame, format_verdict, hom_membership

EXIT_OK, EXIT_PARAM, EXIT_RESOURCE, EXIT_CERT = 0, 1, 2, 3

_PAIR_LINE = re.compile(r"^fx\s*=\s*(?P<fx>.*?)\s+fy\s*=\s*(?P<fy>.*)$")
_ELEM_LINE = re.compile(r"^E(?P<axis>[12])\s+a\s*=\s*(?P<a>\S+)\s+(?P<key>[fg])\s*=\s*(?P<expr>.*)$")
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


@dataclass(frozen=True)
class CliConfig:
    m: int = 2
    max_degree: int = 64
    max_candidates: int = 100_000
    verbose: bool = False

    def __post_init__(self):
        if self.m < 0:
            raise ParameterError(f"m must be non-negative, got {self.m}")
        if self.max_degree <= 0 or self.max_candidates <= 0:
            raise ParameterError("resource caps must be positive")


class _LineError(DiffAlgebraError):
    def __init__(self, lineno: int, err: DiffAlgebraError):
        self.lineno = lineno
        self.err = err
        super().__init__(f"line {lineno}: {err}")


def _content_lines(stream: Iterable[str]) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(stream, 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _parse_rational(text: str) -> Fraction:
    if not _RATIONAL.match(text):
        raise ParseError(f"invalid rational {text!r}")
    return Fraction(text)


def _strip_label(text: str, label: str) -> str:
    match = re.match(rf"^\s*{label}\s*=\s*(.*)$", text)
    return match.group(1) if match else text


def parse_pair(line: str, m: int) -> Endomorphism:
    match = _PAIR_LINE.match(line)
    if match is None:
        raise ParseError("expected 'fx=<expr> fy=<expr>'")
    return Endomorphism(parse_poly(match["fx"], m), parse_poly(match["fy"], m))


def parse_elementary(line: str, m: int) -> ElementaryAuto:
    match = _ELEM_LINE.match(line)
    if match is None:
        raise ParseError("expected 'E1 a=<rat> f=<expr in y>' or 'E2 a=<rat> g=<expr in x>'")
    axis = int(match["axis"])
    if match["key"] != ("f" if axis == 1 else "g"):
        raise ParseError(f"E{axis} takes {'f' if axis == 1 else 'g'}=, not {match['key']}=")
    return ElementaryAuto(axis, _parse_rational(match["a"]), parse_poly(match["expr"], m))


def _read_items(stream: TextIO, parse, m: int) -> list:
    items = []
    for lineno, line in _content_lines(stream):
        try:
            items.append(parse(line, m))
        except (ParameterError, ResourceError) as err:
            raise _LineError(lineno, err) from err
    return items


# ---------------------------------------------------------------------------
# commands (each returns the text to print)
# ---------------------------------------------------------------------------


def cmd_eval(config: CliConfig, text: str) -> str:
    return format_poly(parse_poly(text, config.m))


def cmd_compose(config: CliConfig, stream: TextIO) -> str:
    pairs = _read_items(stream, parse_pair, config.m)
    lines = []
    result = Endomorphism.identity(config.m)
    for i, phi in enumerate(pairs, 1):
        result = compose(result, phi)
        if config.verbose:
            lines.append(f"after {i}: {result}")
    lines.append(str(result))
    return "\n".join(lines)


def cmd_normalize(config: CliConfig, stream: TextIO) -> str:
    word = _read_items(stream, parse_elementary, config.m)
    lines: list[str] = []

    def trace(i, nf):
        lines.append(f"# after factor {i + 1}:")
        lines.extend(f"#   {row}" for row in format_normal_form(nf).splitlines())

    nf = normalize(word, config.m, trace if config.verbose else None)
    value = evaluate(nf)
    direct = compose_all((s.to_endo() for s in word), config.m)
    if value != direct:
        raise CertificationError("normal form does not evaluate to the composed word")
    lines.append(format_normal_form(nf))
    lines.append(f"evaluated: {value}")
    return "\n".join(lines)


def cmd_reduce(config: CliConfig, fx: str, fy: str) -> str:
    phi = Endomorphism(parse_poly(_strip_label(fx, "fx"), config.m), parse_poly(_strip_label(fy, "fy"), config.m))
    return format_verdict(decide_tame(phi), verbose=config.verbose)


def cmd_membership(config: CliConfig, u: str, h: str) -> str:
    sol = hom_membership(parse_poly(_strip_label(u, "u"), config.m), parse_poly(_strip_label(h, "h"), config.m))
    text = str(sol)
    if config.verbose:
        text = f"candidates: {sol.candidates}\nequations: {sol.equations}\n{text}"
    return text


def cmd_anick(config: CliConfig) -> str:
    if config.m < 2:
        raise ParameterError(
            f"anick needs m >= 2 (got m={config.m}); whether wild automorphisms exist "
            "for a single derivation is open, and m=0 gives the polynomial ring, where all are tame"
        )
    cert = certify_wild_anick(config.m)
    return cert.to_text()


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _common_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("-m", type=int, default=default, help="number of derivations (default: $DIFFAUTO_M or 2)")
    parser.add_argument("--max-degree", type=int, default=default, help="degree cap for products (default 64)")
    parser.add_argument("--max-candidates", type=int, default=default, help="membership candidate cap (default 100000)")
    parser.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS if suppress else False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diffauto", description="Automorphisms of differential polynomial algebras Q{x,y}.")
    _common_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="print an expression in canonical form")
    p.add_argument("expr")
    p = sub.add_parser("compose", help="compose the pairs listed in a file, left to right")
    p.add_argument("file", help="input file ('-' for stdin), one 'fx=<expr> fy=<expr>' per line")
    p = sub.add_parser("normalize", help="amalgam normal form of an elementary word")
    p.add_argument("file", help="input file ('-' for stdin), lines 'E1 a=<rat> f=<expr>' / 'E2 a=<rat> g=<expr>'")
    p = sub.add_parser("reduce", help="elementary reduction / tameness verdict")
    p.add_argument("fx")
    p.add_argument("fy")
    p = sub.add_parser("membership", help="is homogeneous u in the subalgebra generated by homogeneous h?")
    p.add_argument("u")
    p.add_argument("h")
    sub.add_parser("anick", help="build and certify the Anick-type wild automorphism")
    for child in sub.choices.values():
        _common_flags(child, suppress=True)
    return parser


def _resolve_config(args: argparse.Namespace) -> CliConfig:
    m = args.m
    if m is None:
        env = os.environ.get("DIFFAUTO_M")
        if env is not None:
            try:
                m = int(env)
            except ValueError:
                raise ParameterError(f"DIFFAUTO_M must be an integer, got {env!r}") from None
        else:
            m = 2
    return CliConfig(
        m=m,
        max_degree=args.max_degree if args.max_degree is not None else 64,
        max_candidates=args.max_candidates if args.max_candidates is not None else 100_000,
        verbose=args.verbose,
    )


def _open(path: str) -> TextIO:
    if path == "-":
        return sys.stdin
    return open(path, encoding="utf-8")


def run(args: argparse.Namespace) -> str:
    config = _resolve_config(args)
    with limits(max_degree=config.max_degree, max_candidates=config.max_candidates):
        if args.command == "eval":
            return cmd_eval(config, args.expr)
        if args.command == "compose":
            with _open(args.file) as fh:
                return cmd_compose(config, fh)
        if args.command == "normalize":
            with _open(args.file) as fh:
                return cmd_normalize(config, fh)
        if args.command == "reduce":
            return cmd_reduce(config, args.fx, args.fy)
        if args.command == "membership":
            return cmd_membership(config, args.u, args.h)
        if args.command == "anick":
            return cmd_anick(config)
    raise ParameterError(f"unknown command {args.command}")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = run(args)
    except _LineError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RESOURCE if isinstance(err.err, ResourceError) else EXIT_PARAM
    except (ParameterError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARAM
    except ResourceError as err:
        print(f"resource limit: {err}", file=sys.stderr)
        return EXIT_RESOURCE
    except CertificationError as err:
        print(f"certification failure: {err}", file=sys.stderr)
        return EXIT_CERT
    except DiffAlgebraError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARAM
    print(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

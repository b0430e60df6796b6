"""Textual chain specifications for the CLI.

Grammar (whitespace insignificant)::

    chain  := stage ("|" stage)*
    stage  := name "(" [arg ("," arg)*] ")"
    arg    := value | name "=" value
    value  := number | identifier

Stage names: butter, cheby1, loshelf, hishelf, peak, fir. Example::

    butter(lp, order=4, fc=1000) | hishelf(fc=1000, gain_db=3)

Parse errors report the 1-based column and the expected tokens.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .chain import Chain
from .design import design_butterworth, design_chebyshev1, design_fir, design_peaking, design_shelf
from .errors import (
    InvalidArgument,
    MissingRequiredArgument,
    ParseError,
    UnknownArgument,
    UnknownFilter,
)

__all__ = ["parse_chain_spec", "FILTER_NAMES"]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>-?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[|(),=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number" | "name" | one of "|(),=" | "end"
    text: str
    column: int  # 1-based


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos + 1)
        if match.lastgroup != "ws":
            kind = match.group("punct") if match.lastgroup == "punct" else match.lastgroup
            tokens.append(_Token(kind, match.group(), pos + 1))
        pos = match.end()
    tokens.append(_Token("end", "", len(text) + 1))
    return tokens


@dataclass(frozen=True)
class _StageDef:
    positional: tuple[str, ...]
    required: tuple[str, ...]
    optional: tuple[str, ...]
    build: Callable[[dict], object]


def _build_fir(args: dict):
    kind = args.get("kind", "lowpass")
    if str(kind).lower() in ("bp", "bandpass"):
        missing = [name for name in ("f1", "f2") if name not in args]
        if missing:
            raise MissingRequiredArgument(f"fir bandpass needs {', '.join(missing)}", 0)
        fc = (args["f1"], args["f2"])
    else:
        if "fc" not in args:
            raise MissingRequiredArgument("fir needs fc", 0)
        fc = args["fc"]
    return design_fir(kind, args["num_taps"], fc, args.get("window", "hamming"))


_STAGES: dict[str, _StageDef] = {
    "butter": _StageDef(
        positional=("kind", "order", "fc"),
        required=("kind", "order", "fc"),
        optional=(),
        build=lambda a: design_butterworth(a["kind"], a["order"], a["fc"]),
    ),
    "cheby1": _StageDef(
        positional=("kind", "order", "fc", "ripple_db"),
        required=("kind", "order", "fc", "ripple_db"),
        optional=(),
        build=lambda a: design_chebyshev1(a["kind"], a["order"], a["ripple_db"], a["fc"]),
    ),
    "loshelf": _StageDef(
        positional=("fc", "gain_db", "q"),
        required=("fc", "gain_db"),
        optional=("q",),
        build=lambda a: design_shelf("lo_shelf", a["fc"], a["gain_db"], **_opt(a, "q")),
    ),
    "hishelf": _StageDef(
        positional=("fc", "gain_db", "q"),
        required=("fc", "gain_db"),
        optional=("q",),
        build=lambda a: design_shelf("hi_shelf", a["fc"], a["gain_db"], **_opt(a, "q")),
    ),
    "peak": _StageDef(
        positional=("fc", "gain_db", "q"),
        required=("fc", "gain_db"),
        optional=("q",),
        build=lambda a: design_peaking(a["fc"], a["gain_db"], **_opt(a, "q")),
    ),
    "fir": _StageDef(
        positional=("kind", "num_taps"),
        required=("kind", "num_taps"),
        optional=("fc", "f1", "f2", "window"),
        build=_build_fir,
    ),
}

FILTER_NAMES = tuple(sorted(_STAGES))


def _opt(args: dict, *names: str) -> dict:
    return {name: args[name] for name in names if name in args}


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.current
        self.index += 1
        return token

    def expect(self, kind: str, what: str) -> _Token:
        if self.current.kind != kind:
            got = self.current.text or "end of input"
            raise ParseError(f"unexpected {got!r}", self.current.column, expected=(what,))
        return self.advance()

    def parse(self) -> Chain:
        stages = [self.parse_stage()]
        while self.current.kind == "|":
            self.advance()
            stages.append(self.parse_stage())
        if self.current.kind != "end":
            raise ParseError(
                f"unexpected {self.current.text!r} after stage", self.current.column, expected=("'|'", "end of input")
            )
        return Chain(stages)

    def parse_stage(self):
        name_token = self.expect("name", "filter name")
        name = name_token.text
        if name not in _STAGES:
            raise UnknownFilter(f"unknown filter {name!r} (known: {', '.join(FILTER_NAMES)})", name_token.column)
        stage_def = _STAGES[name]
        self.expect("(", "'('")
        args = self.parse_args(name, stage_def)
        close = self.expect(")", "')'")
        missing = [p for p in stage_def.required if p not in args]
        if missing:
            raise MissingRequiredArgument(
                f"{name} is missing required argument(s): {', '.join(missing)}", name_token.column
            )
        try:
            return stage_def.build(args)
        except MissingRequiredArgument as exc:
            raise type(exc)(str(exc).split(": ", 1)[-1], name_token.column) from None
        except InvalidArgument as exc:
            span = f"columns {name_token.column}-{close.column}"
            raise type(exc)(f"stage '{name}' ({span}): {exc}") from None

    def parse_args(self, name: str, stage_def: _StageDef) -> dict:
        args: dict = {}
        if self.current.kind == ")":
            return args
        allowed = set(stage_def.positional) | set(stage_def.required) | set(stage_def.optional)
        positional_index = 0
        keyword_seen = False
        while True:
            token = self.current
            if token.kind == "name" and self.tokens[self.index + 1].kind == "=":
                self.advance()
                self.advance()
                if token.text not in allowed:
                    raise UnknownArgument(
                        f"{name} does not accept argument {token.text!r} (accepts: {', '.join(sorted(allowed))})",
                        token.column,
                    )
                if token.text in args:
                    raise ParseError(f"duplicate argument {token.text!r}", token.column)
                args[token.text] = self.parse_value()
                keyword_seen = True
            else:
                if keyword_seen:
                    raise ParseError("positional argument after keyword argument", token.column)
                if positional_index >= len(stage_def.positional):
                    raise ParseError(
                        f"too many positional arguments for {name}", token.column, expected=("keyword argument", "')'")
                    )
                param = stage_def.positional[positional_index]
                if param in args:
                    raise ParseError(f"duplicate argument {param!r}", token.column)
                args[param] = self.parse_value()
                positional_index += 1
            if self.current.kind == ",":
                self.advance()
                continue
            return args

    def parse_value(self):
        token = self.current
        if token.kind == "number":
            self.advance()
            text = token.text
            if re.fullmatch(r"-?\d+", text):
                return int(text)
            return float(text)
        if token.kind == "name":
            self.advance()
            return token.text
        got = token.text or "end of input"
        raise ParseError(f"unexpected {got!r}", token.column, expected=("number", "identifier"))


def parse_chain_spec(text: str) -> Chain:
    """Parse chain-spec text into an unbound Chain.

    Raises ParseError / UnknownFilter / UnknownArgument /
    MissingRequiredArgument with a 1-based column, or the underlying
    design error (InvalidOrder, InvalidCutoff, ...) annotated with the
    offending stage's span.
    """
    return _Parser(text).parse()

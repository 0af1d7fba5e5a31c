"""Recursive-descent parser for the UCUM term grammar subset.

Supported syntax (case-sensitive, no whitespace):

    expression  = ["/"] term
    term        = component {("." | "/") component}
    component   = "(" term ")" | annotation | factor | unit [exponent] [annotation]
    unit        = atom code, or metric prefix + metric atom code
    factor      = digits                 (integer constant >= 1)
    exponent    = ["+" | "-"] digits     (suffix form only; "^" is rejected)
    annotation  = "{" any chars except "}" "}"

"." multiplies, "/" divides; both are left-associative and a leading "/"
is the reciprocal. Atom codes may contain bracketed segments such as
``[in_i]``. Annotations are preserved on the parsed expression but carry
no meaning. An expression reduces to a flat, ordered list of factors,
each a resolved (prefix, atom, exponent) triple or an integer constant.

Token resolution is deterministic: an exact atom-code match wins, then
prefix splits are tried longest prefix first, and a prefix is only
accepted on an atom flagged metric.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import UcumSyntaxError, UnknownPrefix, UnknownUnit
from .registry import Prefix, UnitAtom, UnitRegistry

_UNIT_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ%")
_ASCII_DIGITS = set("0123456789")


@dataclass(frozen=True)
class NumericFactor:
    """Integer constant appearing as a term factor, e.g. the 10 in "10.m"."""

    value: int
    exponent: int = 1


@dataclass(frozen=True)
class UnitFactor:
    """A resolved unit atom with optional prefix and signed exponent."""

    atom: UnitAtom
    prefix: Prefix | None = None
    exponent: int = 1


@dataclass(frozen=True)
class UnitExpr:
    """Parsed unit expression: ordered factors plus inert annotations."""

    code: str
    factors: tuple[NumericFactor | UnitFactor, ...]
    annotations: tuple[str, ...] = ()

    def __str__(self) -> str:
        return self.code


def parse_ucum(code: str, registry: UnitRegistry) -> UnitExpr:
    """Parse a UCUM code against a registry.

    Raises UcumSyntaxError (with position), UnknownUnit, or UnknownPrefix.
    Results are cached on the registry, which is immutable.
    """
    cached = registry._parse_cache.get(code)
    if cached is not None:
        return cached
    expr = _Parser(code, registry).parse()
    registry._parse_cache[code] = expr
    return expr


def check_syntax(code: str) -> None:
    """Run the grammar over a code without resolving unit tokens.

    Raises UcumSyntaxError for structural problems; unknown tokens pass.
    """
    _Parser(code, None, resolve=False).parse()


def resolve_token(token: str, registry: UnitRegistry) -> tuple[Prefix | None, UnitAtom]:
    """Split a unit token into (prefix, atom) deterministically."""
    atom = registry.atom(token)
    if atom is not None:
        return None, atom
    for prefix_code in registry.prefix_codes_longest_first:
        if len(prefix_code) >= len(token) or not token.startswith(prefix_code):
            continue
        rest = registry.atom(token[len(prefix_code):])
        if rest is not None and rest.metric:
            return registry.prefixes[prefix_code], rest
    # Classify the failure for a useful error.
    for split in range(1, len(token)):
        head, tail = token[:split], token[split:]
        rest = registry.atom(tail)
        if rest is None:
            continue
        if rest.metric and head not in registry.prefixes:
            raise UnknownPrefix(f"unknown prefix {head!r} in token {token!r}")
        if not rest.metric and head in registry.prefixes:
            raise UnknownUnit(
                f"unit {tail!r} does not accept prefixes", token=token
            )
    raise UnknownUnit(f"unknown unit token {token!r}")


class _Parser:
    def __init__(self, code: str, registry: UnitRegistry | None, resolve: bool = True):
        self.code = code
        self.registry = registry
        self.resolve = resolve
        self.pos = 0
        self.factors: list[NumericFactor | UnitFactor] = []
        self.annotations: list[str] = []

    # -- character helpers --------------------------------------------------

    def _peek(self) -> str:
        return self.code[self.pos] if self.pos < len(self.code) else ""

    def _fail(self, message: str, position: int | None = None) -> UcumSyntaxError:
        pos = self.pos if position is None else position
        return UcumSyntaxError(f"{message} at position {pos}", self.code, pos)

    # -- grammar ------------------------------------------------------------

    def parse(self) -> UnitExpr:
        if not self.code:
            raise self._fail("empty unit expression")
        if any(ch.isspace() for ch in self.code):
            raise self._fail(
                "whitespace not allowed", position=next(
                    i for i, ch in enumerate(self.code) if ch.isspace()
                ),
            )
        sign = 1
        if self._peek() == "/":
            self.pos += 1
            sign = -1
        self._term(sign)
        if self.pos != len(self.code):
            raise self._fail(f"unexpected character {self._peek()!r}")
        return UnitExpr(
            code=self.code,
            factors=tuple(self.factors),
            annotations=tuple(self.annotations),
        )

    def _term(self, sign: int) -> None:
        self._component(sign)
        # "." and "/" interleave left-associatively.
        while self._peek() and self._peek() in "./":
            op = self.code[self.pos]
            self.pos += 1
            self._component(sign if op == "." else -sign)

    def _component(self, sign: int) -> None:
        ch = self._peek()
        if ch == "":
            raise self._fail("expected a unit, factor, or group")
        if ch == "(":
            self.pos += 1
            self._term(sign)
            if self._peek() != ")":
                raise self._fail("unbalanced parenthesis")
            self.pos += 1
            return
        if ch == "{":
            self.annotations.append(self._annotation())
            return
        if ch in _ASCII_DIGITS:
            start = self.pos
            value = self._digits()
            if value < 1:
                raise self._fail("integer factor must be >= 1", position=start)
            self.factors.append(NumericFactor(value=value, exponent=sign))
            return
        if ch in _UNIT_CHARS or ch == "[":
            token, start = self._unit_token()
            if self.resolve:
                try:
                    prefix, atom = resolve_token(token, self.registry)
                except (UnknownUnit, UnknownPrefix) as exc:
                    exc.details.setdefault("position", start)
                    raise
                exponent = self._exponent()
                self.factors.append(
                    UnitFactor(atom=atom, prefix=prefix, exponent=sign * exponent)
                )
            else:
                self._exponent()
            if self._peek() == "{":
                self.annotations.append(self._annotation())
            return
        if ch == "^":
            raise self._fail("caret exponents are not part of UCUM; use suffix digits")
        raise self._fail(f"unexpected character {ch!r}")

    def _annotation(self) -> str:
        start = self.pos
        close = self.code.find("}", start + 1)
        if close < 0:
            raise self._fail("unterminated '{' annotation", position=start)
        self.pos = close + 1
        return self.code[start + 1:close]

    def _digits(self) -> int:
        start = self.pos
        while self._peek() in _ASCII_DIGITS:
            self.pos += 1
        return int(self.code[start:self.pos])

    def _unit_token(self) -> tuple[str, int]:
        start = self.pos
        while True:
            ch = self._peek()
            if ch in _UNIT_CHARS:
                self.pos += 1
            elif ch == "[":
                close = self.code.find("]", self.pos + 1)
                if close < 0:
                    raise self._fail("unterminated '[' in unit token")
                self.pos = close + 1
            else:
                break
        if self.pos == start:
            raise self._fail("expected a unit token")
        return self.code[start:self.pos], start

    def _exponent(self) -> int:
        ch = self._peek()
        if ch == "^":
            raise self._fail("caret exponents are not part of UCUM; use suffix digits")
        sign = 1
        consumed_sign = False
        if ch and ch in "+-":
            if self.code[self.pos + 1:self.pos + 2] not in _ASCII_DIGITS:
                return 1
            sign = -1 if ch == "-" else 1
            self.pos += 1
            consumed_sign = True
        if self._peek() not in _ASCII_DIGITS:
            if consumed_sign:
                raise self._fail("expected digits after exponent sign")
            return 1
        return sign * self._digits()

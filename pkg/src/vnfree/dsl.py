"""Expression language for the calculator.

Grammar (``+`` binds tighter than ``*``)::

    expr     := sum ('*' sum)*
    sum      := weighted ('+' weighted)*
    weighted := rational ':' atom | '(' rational ')' atom | atom
    atom     := 'C' | 'M' nat | 'LZ' | 'LZxM' nat | 'R' | 'LZxR'
              | 'LF' '(' param ')' | 'LG' '(' ident ')' | call
              | '(' expr ')' | '[' expr ']'
    call     := ('fdim' | 'lumpy' | 'dim') '(' expr ')'
              | 'isfactor' '(' expr ',' expr ')'
              | 'compress' '(' expr ',' rational ')'
    param    := rational | 'inf'
    rational := int ('/' posint)?

The ``(w)X`` weight form and the ``(+)`` operator are what the text renderer
emits, so rendered algebras parse back.  Weights are required on every term
of a multi-term sum.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Union

from vnfree.algebra import (
    SCALARS,
    AbelianTensorHyperfinite,
    Algebra,
    DiffuseAbelianTensorMatrix,
    DiffuseUnspecified,
    ExtParam,
    FreeGroupFactor,
    HyperfiniteII1,
    MatrixFactor,
    SummandKind,
    as_ext,
    dim,
    direct_sum,
    format_number,
    format_sum,
    single,
)
from vnfree.closed_forms import cf_compress
from vnfree.engine import FreeProductResult, free_product
from vnfree.errors import ParseError, RangeError, TypeMismatch
from vnfree.fdim import fdim, lumpiness, product_is_factor
from vnfree.groups import GroupDescriptor, group_algebra, resolve_group

MAX_DEPTH = 64

# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    kind: SummandKind


@dataclass(frozen=True)
class GroupAtom:
    name: str


@dataclass(frozen=True)
class WeightedSum:
    children: tuple


@dataclass(frozen=True)
class FreeProduct:
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple


Ast = Union[Atom, GroupAtom, WeightedSum, FreeProduct, Call]

# -- lexer -------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


_PUNCT = {"(": "LPAREN", ")": "RPAREN", "[": "LBRACK", "]": "RBRACK", "+": "PLUS",
          "⊕": "PLUS", "*": "STAR", ":": "COLON", "/": "SLASH", ",": "COMMA"}
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUM = re.compile(r"[0-9]+")


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def tokenize(text: str) -> list[Token]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif text.startswith("(+)", i):
            tokens.append(Token("PLUS", "(+)", i))
            i += 3
        elif ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, i))
            i += 1
        elif (m := _NUM.match(text, i)):
            tokens.append(Token("NUM", m.group(), i))
            i = m.end()
        elif (m := _IDENT.match(text, i)):
            tokens.append(Token("IDENT", m.group(), i))
            i = m.end()
        else:
            raise ParseError(f"unexpected character {ch!r}", *_line_col(text, i))
    tokens.append(Token("EOF", "", len(text)))
    return tokens


# -- parser ------------------------------------------------------------------

_ATOM_START = {"C", "M<n>", "LZ", "LZxM<n>", "R", "LZxR", "LF", "LG", "fdim", "lumpy", "dim",
               "isfactor", "compress", "(", "["}
_MATRIX = re.compile(r"M([0-9]+)")
_TENSOR = re.compile(r"LZxM([0-9]+)")
_UNARY = ("fdim", "lumpy", "dim")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.depth = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def error(self, message: str, expected=(), token: Optional[Token] = None):
        token = token or self.peek()
        return ParseError(message, *_line_col(self.text, token.pos), set(expected))

    def expect(self, kind: str, shown: str) -> Token:
        token = self.peek()
        if token.kind != kind:
            found = token.text or "end of input"
            raise self.error(f"unexpected {found!r}", {shown})
        self.i += 1
        return token

    def integer(self, token: Token) -> int:
        try:
            return int(token.text)
        except ValueError:
            raise self.error("number too large", token=token) from None

    def rational(self) -> Fraction:
        num = self.integer(self.expect("NUM", "number"))
        if self.peek().kind == "SLASH":
            self.i += 1
            tok = self.expect("NUM", "number")
            den = self.integer(tok)
            if den == 0:
                raise self.error("zero denominator", token=tok)
            return Fraction(num, den)
        return Fraction(num)

    def parse(self) -> Ast:
        node = self.expr()
        if self.peek().kind != "EOF":
            raise self.error(f"unexpected {self.peek().text!r}", {"+", "*", "end of input"})
        return node

    def expr(self) -> Ast:
        node = self.sum()
        while self.peek().kind == "STAR":
            self.i += 1
            node = FreeProduct(node, self.sum())
        return node

    def sum(self) -> Ast:
        first = self.peek()
        terms = [self.weighted()]
        while self.peek().kind == "PLUS":
            self.i += 1
            terms.append((self.peek(), self.weighted()))
        if len(terms) == 1:
            weight, node = terms[0]
            return node if weight is None else WeightedSum(((weight, node),))
        terms[0] = (first, terms[0])
        for token, (weight, _) in terms:
            if weight is None:
                raise self.error("every term of a multi-term sum needs a weight 'w:'",
                                 {"rational"}, token)
        return WeightedSum(tuple(term for _, term in terms))

    def _weight_prefix(self) -> bool:
        # '(' int ')' or '(' int '/' int ')' directly followed by an atom
        if self.peek().kind != "LPAREN" or self.peek(1).kind != "NUM":
            return False
        if self.peek(2).kind == "RPAREN":
            return True
        return (self.peek(2).kind == "SLASH" and self.peek(3).kind == "NUM"
                and self.peek(4).kind == "RPAREN")

    def weighted(self):
        if self.peek().kind == "NUM":
            weight = self.rational()
            self.expect("COLON", ":")
            return weight, self.atom()
        if self._weight_prefix():
            self.i += 1
            weight = self.rational()
            self.expect("RPAREN", ")")
            return weight, self.atom()
        return None, self.atom()

    def atom(self) -> Ast:
        token = self.peek()
        if token.kind in ("LPAREN", "LBRACK"):
            close = "RPAREN" if token.kind == "LPAREN" else "RBRACK"
            self.depth += 1
            if self.depth > MAX_DEPTH:
                raise self.error("expression nested too deeply")
            self.i += 1
            node = self.expr()
            self.expect(close, ")" if close == "RPAREN" else "]")
            self.depth -= 1
            return node
        if token.kind != "IDENT":
            found = token.text or "end of input"
            raise self.error(f"unexpected {found!r}", _ATOM_START)
        self.i += 1
        name = token.text
        if name == "C":
            return Atom(SCALARS)
        if name == "LZ":
            return Atom(DiffuseAbelianTensorMatrix(1))
        if name == "R":
            return Atom(HyperfiniteII1())
        if name == "LZxR":
            return Atom(AbelianTensorHyperfinite())
        for pattern, build in ((_MATRIX, MatrixFactor), (_TENSOR, DiffuseAbelianTensorMatrix)):
            m = pattern.fullmatch(name)
            if m:
                n = int(m.group(1)) if len(m.group(1)) < 10 else 0
                if n < 1 or n > 10**6:
                    raise self.error("matrix size out of range", token=token)
                return Atom(build(n))
        if name == "LF":
            self.expect("LPAREN", "(")
            tok = self.peek()
            if tok.kind == "IDENT" and tok.text == "inf":
                self.i += 1
                param = as_ext("inf")
            elif tok.kind == "NUM":
                param = self.rational()
            else:
                raise self.error(f"unexpected {tok.text or 'end of input'!r}",
                                 {"number", "inf"})
            self.expect("RPAREN", ")")
            if param < 1:
                raise self.error("free group parameter must be >= 1", token=tok)
            return Atom(FreeGroupFactor(param))
        if name == "LG":
            self.expect("LPAREN", "(")
            ident = self.expect("IDENT", "group name")
            self.expect("RPAREN", ")")
            return GroupAtom(ident.text)
        if name in _UNARY:
            self.expect("LPAREN", "(")
            arg = self.expr()
            self.expect("RPAREN", ")")
            return Call(name, (arg,))
        if name == "isfactor":
            self.expect("LPAREN", "(")
            left = self.expr()
            self.expect("COMMA", ",")
            right = self.expr()
            self.expect("RPAREN", ")")
            return Call(name, (left, right))
        if name == "compress":
            self.expect("LPAREN", "(")
            arg = self.expr()
            self.expect("COMMA", ",")
            factor = self.rational()
            self.expect("RPAREN", ")")
            return Call(name, (arg, factor))
        raise self.error(f"unknown name {name!r}", _ATOM_START, token)


def parse(text: str) -> Ast:
    """Parse an expression; raises :class:`ParseError` on any malformed input."""
    return _Parser(text).parse()


# -- values and evaluation ---------------------------------------------------


@dataclass(frozen=True)
class AlgebraValue:
    algebra: Algebra
    result: Optional[FreeProductResult] = None
    trace: tuple[str, ...] = ()


@dataclass(frozen=True)
class NumberValue:
    value: ExtParam


@dataclass(frozen=True)
class BoolValue:
    value: bool


Value = Union[AlgebraValue, NumberValue, BoolValue]


class Evaluator:
    def __init__(self, strict: bool = False,
                 groups: Optional[Mapping[str, GroupDescriptor]] = None):
        self.strict = strict
        self.groups = dict(groups or {})

    def __call__(self, node: Ast) -> Value:
        trace: list[str] = []
        value = self._eval(node, trace)
        if isinstance(value, AlgebraValue):
            value = AlgebraValue(value.algebra, value.result, tuple(trace))
        return value

    def _algebra(self, node: Ast, trace: list[str], what: str) -> Algebra:
        value = self._eval(node, trace)
        if not isinstance(value, AlgebraValue):
            raise TypeMismatch(f"{what} needs an algebra, got a {type(value).__name__}")
        return value.algebra

    def _eval(self, node: Ast, trace: list[str]) -> Value:
        if isinstance(node, Atom):
            return AlgebraValue(single(node.kind))
        if isinstance(node, GroupAtom):
            return AlgebraValue(group_algebra(resolve_group(node.name, self.groups)))
        if isinstance(node, WeightedSum):
            parts = [(w, self._algebra(child, trace, "direct sum")) for w, child in node.children]
            return AlgebraValue(direct_sum(parts))
        if isinstance(node, FreeProduct):
            left = self._algebra(node.left, trace, "free product")
            right = self._algebra(node.right, trace, "free product")
            result = free_product(left, right, self.strict)
            trace.append(result.justification.label)
            return AlgebraValue(result.algebra, result)
        if isinstance(node, Call):
            return self._call(node, trace)
        raise TypeError(f"not an AST node: {node!r}")

    def _call(self, node: Call, trace: list[str]) -> Value:
        fn = node.fn
        if fn == "fdim":
            return NumberValue(fdim(self._algebra(node.args[0], trace, fn)))
        if fn == "lumpy":
            return NumberValue(lumpiness(self._algebra(node.args[0], trace, fn)))
        if fn == "dim":
            return NumberValue(dim(self._algebra(node.args[0], trace, fn)))
        if fn == "isfactor":
            left = self._algebra(node.args[0], trace, fn)
            right = self._algebra(node.args[1], trace, fn)
            return BoolValue(product_is_factor(left, right))
        if fn == "compress":
            algebra = self._algebra(node.args[0], trace, fn)
            if len(algebra) != 1:
                raise TypeMismatch("compress needs a single free group factor, got "
                                   f"{algebra}")
            kind = algebra.kinds[0]
            if isinstance(kind, FreeGroupFactor):
                r = kind.param
            elif kind == DiffuseAbelianTensorMatrix(1):
                r = Fraction(1)
            else:
                raise TypeMismatch(f"compress needs a free group factor, got {algebra}")
            return AlgebraValue(single(FreeGroupFactor(cf_compress(r, node.args[1]))))
        raise RangeError(f"unknown function {fn!r}")


def evaluate(node: Ast, strict: bool = False,
             groups: Optional[Mapping[str, GroupDescriptor]] = None) -> Value:
    return Evaluator(strict, groups)(node)


# -- rendering ---------------------------------------------------------------

_JSON_KIND = {
    MatrixFactor: "matrix",
    FreeGroupFactor: "fgf",
    DiffuseAbelianTensorMatrix: "diffuse_abelian_matrix",
    HyperfiniteII1: "hyperfinite_II1",
    AbelianTensorHyperfinite: "abelian_tensor_R",
    DiffuseUnspecified: "diffuse_unspecified",
}

_RATIONAL = {"type": "string", "pattern": r"^(0|[1-9][0-9]*)(/[1-9][0-9]*)?$"}
_EXT = {"anyOf": [_RATIONAL, {"const": "inf"}]}

JSON_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "oneOf": [
        {
            "type": "object",
            "required": ["summands", "fdim", "justification"],
            "additionalProperties": False,
            "properties": {
                "summands": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "required": ["weight", "kind"],
                        "additionalProperties": False,
                        "properties": {
                            "weight": _RATIONAL,
                            "kind": {"enum": sorted(_JSON_KIND.values())},
                            "n": {"type": "integer", "minimum": 1},
                            "param": _EXT,
                            "atom_source": {"type": "array", "items": {"type": "integer"},
                                            "minItems": 2, "maxItems": 2},
                        },
                    },
                },
                "fdim": _EXT,
                "justification": {"type": "array", "items": {"type": "string"}},
            },
        },
        {
            "type": "object",
            "required": ["value"],
            "additionalProperties": False,
            "properties": {"value": {"anyOf": [_EXT, {"type": "boolean"}]}},
        },
    ],
}


def _layout(value: AlgebraValue):
    if value.result is not None and value.result.algebra == value.algebra:
        return value.result.layout
    # free group factor first, as the general branch lays it out
    cells = sorted(value.algebra, key=lambda c: not isinstance(c[1], FreeGroupFactor))
    return tuple((w, k, None) for w, k in cells)


def _summand_json(weight: Fraction, kind: SummandKind, source) -> dict:
    entry = {"weight": str(weight), "kind": _JSON_KIND[type(kind)]}
    if isinstance(kind, MatrixFactor):
        entry["n"] = kind.n
    elif isinstance(kind, DiffuseAbelianTensorMatrix):
        entry["n"] = kind.k
    elif isinstance(kind, FreeGroupFactor):
        entry["param"] = format_number(kind.param)
    if source is not None:
        entry["atom_source"] = list(source)
    return entry


def to_json_obj(value: Value) -> dict:
    if isinstance(value, AlgebraValue):
        return {
            "summands": [_summand_json(*cell) for cell in _layout(value)],
            "fdim": format_number(fdim(value.algebra)),
            "justification": list(value.trace),
        }
    if isinstance(value, BoolValue):
        return {"value": value.value}
    return {"value": format_number(value.value)}


def render(value: Value, style: str = "text") -> str:
    if style == "json":
        return json.dumps(to_json_obj(value))
    if style != "text":
        raise ValueError(f"unknown style {style!r}")
    if isinstance(value, AlgebraValue):
        return format_sum((w, k) for w, k, _ in _layout(value))
    if isinstance(value, BoolValue):
        return "true" if value.value else "false"
    return format_number(value.value)


def render_algebra(algebra: Algebra) -> str:
    return format_sum(algebra)


def run(text: str, strict: bool = False,
        groups: Optional[Mapping[str, GroupDescriptor]] = None) -> Value:
    """Parse and evaluate in one step."""
    return evaluate(parse(text), strict, groups)

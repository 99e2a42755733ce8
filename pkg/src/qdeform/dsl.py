"""Surface syntax for operator expressions and polynomial literals.

Grammar (EBNF; ASCII only, whitespace insensitive):

    input    = "poly" "(" expr ")" | expr ;
    expr     = term { ("+" | "-") term } ;
    term     = factor { "*" factor } ;
    factor   = [ "-" ] power ;
    power    = primary { "^" natural } ;
    primary  = rational | name | call | "(" expr ")" ;
    call     = ("qb" | "qn" | "inv" | "exp") "(" expr ")" ;
    rational = natural [ "/" natural ] ;
    name     = "x" | "d" | "Dq" | "xq" | "Ddelta" | "xdelta"
             | "A" | "B" | "S" | "Mq" | "U" ;

"^" binds tighter than "*", which binds tighter than "+"/"-"; "*" is the
noncommutative operator product and is left-associative. ``qb``/``qn``/
``inv`` demand a diagonal argument, checked while parsing so errors carry
positions ("line:col: message"). ``poly(...)`` admits only x and rationals
and is only legal as the entire input.

The printer emits a canonical form whose reparse acts identically on every
monomial; printing a parse is idempotent on the text.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .errors import ParseError, SemanticError, SingularOperatorError
from .maps import a_delta_expr, b_delta_expr, dq_expr, mq_expr, s_expr, xq_expr
from .opcore import (
    A_DIAG,
    B_DIAG,
    BasisDiag,
    COORD,
    Coord,
    DERIV,
    Deriv,
    DiagFn,
    DiagInv,
    ExpOp,
    IDENT,
    Ident,
    IntPow,
    OpExpr,
    OpProd,
    OpSum,
    Scaled,
    gamma_ratio_diag,
    op_prod,
    op_sum,
    scaled,
)
from .poly import MONOMIAL, Poly
from .qnum import QContext, rational

_CALLS = ("qb", "qn", "inv", "exp")


@dataclass(frozen=True)
class Token:
    kind: str  # "num" | "name" | one of + - * ^ / ( ) | "end"
    value: object
    line: int
    col: int


def _describe(kind: str) -> str:
    if kind == "num":
        return "a number"
    if kind == "name":
        return "a name"
    if kind == "end":
        return "end of input"
    return "'%s'" % kind


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch.isdigit():
            start = i
            startcol = col
            while i < n and text[i].isdigit():
                i += 1
                col += 1
            tokens.append(Token("num", int(text[start:i]), line, startcol))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            startcol = col
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
                col += 1
            tokens.append(Token("name", text[start:i], line, startcol))
            continue
        if ch in "+-*^/()":
            tokens.append(Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError("unexpected character %r" % ch, line, col)
    tokens.append(Token("end", None, line, col))
    return tokens


class _Parser:
    def __init__(self, text: str, q, delta, ctx: Optional[QContext]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self._q = q
        self._delta = rational(delta) if delta is not None else None
        self._ctx = ctx

    # -- token plumbing -------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                "expected %s, found %s" % (_describe(kind), _describe(tok.kind)),
                tok.line,
                tok.col,
            )
        return self.advance()

    # -- parameter plumbing ----------------------------------------------

    def ctx(self, tok: Token) -> QContext:
        if self._ctx is None:
            if self._q is None:
                raise SemanticError(
                    "%r requires the q parameter" % tok.value, tok.line, tok.col
                )
            self._ctx = QContext(self._q, max_index=128)
        return self._ctx

    def delta(self, tok: Token) -> Fraction:
        if self._delta is None:
            raise SemanticError(
                "%r requires the delta parameter" % tok.value, tok.line, tok.col
            )
        return self._delta

    # -- grammar ----------------------------------------------------------

    def parse_input(self) -> Union[OpExpr, Poly]:
        tok = self.peek()
        if tok.kind == "name" and tok.value == "poly":
            self.advance()
            self.expect("(")
            inner_tok = self.peek()
            e = self.parse_expr()
            self.expect(")")
            end = self.peek()
            if end.kind != "end":
                raise ParseError("trailing input after poly literal", end.line, end.col)
            return _expr_to_poly(e, inner_tok)
        e = self.parse_expr()
        end = self.peek()
        if end.kind != "end":
            raise ParseError("trailing input", end.line, end.col)
        return e

    def parse_expr(self) -> OpExpr:
        terms = [self.parse_term()]
        while self.peek().kind in ("+", "-"):
            op = self.advance()
            t = self.parse_term()
            terms.append(t if op.kind == "+" else scaled(-1, t))
        return op_sum(*terms)

    def parse_term(self) -> OpExpr:
        factors = [self.parse_factor()]
        while self.peek().kind == "*":
            self.advance()
            factors.append(self.parse_factor())
        return op_prod(*factors)

    def parse_factor(self) -> OpExpr:
        if self.peek().kind == "-":
            self.advance()
            return scaled(-1, self.parse_factor())
        return self.parse_power()

    def parse_power(self) -> OpExpr:
        base = self.parse_primary()
        while self.peek().kind == "^":
            self.advance()
            exp = self.expect("num")
            base = IntPow(base, exp.value)
        return base

    def parse_primary(self) -> OpExpr:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            value = Fraction(tok.value)
            if self.peek().kind == "/":
                self.advance()
                den = self.expect("num")
                if den.value == 0:
                    raise ParseError("zero denominator", den.line, den.col)
                value = Fraction(tok.value, den.value)
            return scaled(value, IDENT)
        if tok.kind == "(":
            self.advance()
            e = self.parse_expr()
            self.expect(")")
            return e
        if tok.kind == "name":
            self.advance()
            if tok.value in _CALLS:
                self.expect("(")
                arg = self.parse_expr()
                self.expect(")")
                return self._build_call(tok, arg)
            if tok.value == "poly":
                raise ParseError(
                    "poly(...) is only allowed as the entire input", tok.line, tok.col
                )
            return self._build_atom(tok)
        raise ParseError("expected an expression", tok.line, tok.col)

    # -- atom and call semantics -------------------------------------------

    def _build_atom(self, tok: Token) -> OpExpr:
        name = tok.value
        if name == "x":
            return COORD
        if name == "d":
            return DERIV
        if name == "A":
            return A_DIAG
        if name == "B":
            return B_DIAG
        if name == "Mq":
            return mq_expr(self.ctx(tok))
        if name == "Dq":
            return dq_expr(self.ctx(tok))
        if name == "xq":
            return xq_expr(self.ctx(tok))
        if name == "S":
            return s_expr(self.ctx(tok))
        if name == "U":
            return gamma_ratio_diag(self.ctx(tok))
        if name == "Ddelta":
            return a_delta_expr(self.delta(tok))
        if name == "xdelta":
            return b_delta_expr(self.delta(tok))
        raise ParseError("unknown identifier %r" % name, tok.line, tok.col)

    def _build_call(self, tok: Token, arg: OpExpr) -> OpExpr:
        name = tok.value
        if name == "exp":
            return ExpOp(arg)
        fn = _diag_spectral(arg)
        if fn is None:
            raise SemanticError(
                "%s() requires a diagonal argument" % name, tok.line, tok.col
            )
        if name == "inv":
            if isinstance(arg, DiagFn):
                return DiagInv(arg)
            return DiagInv(DiagFn(pretty(arg), fn))
        ctx = self.ctx(tok)
        label = "%s(%s)" % (name, pretty(arg))
        if name == "qn":
            return DiagFn(label, _integer_spectral(ctx.qnumber, fn, label))
        return DiagFn(label, _integer_spectral(ctx.dbracket, fn, label))


def _integer_spectral(outer, fn, label):
    def wrapped(n):
        v = fn(n)
        if v.denominator != 1 or v < 0:
            raise SingularOperatorError(
                "%s needs a nonnegative integer spectrum; got %s at degree %d"
                % (label, v, n)
            )
        return outer(int(v))

    return wrapped


def _diag_spectral(e: OpExpr) -> Optional[Callable[[int], Fraction]]:
    """Spectral function of a structurally diagonal expression, else None."""
    if isinstance(e, DiagFn):
        return e.fn
    if isinstance(e, Ident):
        return lambda n: Fraction(1)
    if isinstance(e, DiagInv):
        inner = _diag_spectral(e.inner)
        if inner is None:
            return None

        def inv_fn(n):
            v = inner(n)
            if v == 0:
                raise SingularOperatorError("inverted zero eigenvalue at degree %d" % n)
            return 1 / v

        return inv_fn
    if isinstance(e, Scaled):
        inner = _diag_spectral(e.op)
        if inner is None:
            return None
        return lambda n: e.c * inner(n)
    if isinstance(e, OpSum):
        fns = [_diag_spectral(t) for t in e.terms]
        if any(f is None for f in fns):
            return None
        return lambda n: sum((f(n) for f in fns), Fraction(0))
    if isinstance(e, OpProd):
        fns = [_diag_spectral(f) for f in e.factors]
        if any(f is None for f in fns):
            return None

        def prod_fn(n):
            acc = Fraction(1)
            for f in fns:
                acc *= f(n)
            return acc

        return prod_fn
    if isinstance(e, IntPow):
        inner = _diag_spectral(e.base)
        if inner is None:
            return None
        return lambda n: inner(n) ** e.n
    return None


def parse(text: str, *, q=None, delta=None, ctx: Optional[QContext] = None):
    """Parse an operator expression or a poly(...) literal.

    q and delta bind the parameterized atoms; a prebuilt QContext may be
    passed instead of q. Raises ParseError/SemanticError with "line:col:"
    positions; never anything else on malformed text.
    """
    if q is not None:
        q = rational(q) if not isinstance(q, QContext) else q
    if isinstance(q, QContext) and ctx is None:
        ctx, q = q, None
    return _Parser(text, q, delta, ctx).parse_input()


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

_SUM, _PROD, _POW, _ATOM = 0, 1, 2, 3


def pretty(e: Union[OpExpr, Poly]) -> str:
    """Canonical text. Reparsing acts identically on all monomials; printing
    is idempotent. Diagonal nodes print their names, so display-only nodes
    (adapted-basis diagonals) yield text outside the grammar."""
    if isinstance(e, Poly):
        if e.basis != MONOMIAL:
            raise ValueError("falling-basis polynomials have no literal form")
        return "poly(%s)" % e.to_text()
    return _render(e, _SUM)


def _intrinsic(e: OpExpr) -> int:
    """How tightly a node's rendering binds (leading minus binds loosest)."""
    if isinstance(e, OpSum):
        return _SUM
    if isinstance(e, OpProd):
        return _PROD
    if isinstance(e, Scaled):
        if e.c < 0:
            return _SUM
        return _ATOM if isinstance(e.op, Ident) else _PROD
    if isinstance(e, IntPow):
        return _POW
    return _ATOM


def _render(e: OpExpr, level: int) -> str:
    text = _render_bare(e)
    if _intrinsic(e) < level:
        return "(%s)" % text
    return text


def _render_bare(e: OpExpr) -> str:
    if isinstance(e, Coord):
        return "x"
    if isinstance(e, Deriv):
        return "d"
    if isinstance(e, Ident):
        return "1"
    if isinstance(e, (DiagFn, BasisDiag)):
        return e.name
    if isinstance(e, DiagInv):
        return "inv(%s)" % e.inner.name
    if isinstance(e, ExpOp):
        return "exp(%s)" % _render(e.arg, _SUM)
    if isinstance(e, IntPow):
        return "%s^%d" % (_render(e.base, _POW), e.n)
    if isinstance(e, Scaled):
        if isinstance(e.op, Ident):
            return str(e.c)
        if e.c == -1:
            return "-%s" % _render(e.op, _POW)
        return "%s*%s" % (e.c, _render(e.op, _POW))
    if isinstance(e, OpProd):
        return "*".join(_render(f, _PROD) for f in e.factors)
    if isinstance(e, OpSum):
        parts = []
        for i, t in enumerate(e.terms):
            txt = _render(t, _SUM)
            if i and not txt.startswith("-"):
                parts.append("+")
            parts.append(txt)
        return "".join(parts)
    raise TypeError("cannot print %r" % (e,))


# ---------------------------------------------------------------------------
# Poly literals
# ---------------------------------------------------------------------------


def _expr_to_poly(e: OpExpr, tok: Token) -> Poly:
    if isinstance(e, Coord):
        return Poly.x()
    if isinstance(e, Ident):
        return Poly.one()
    if isinstance(e, Scaled):
        return _expr_to_poly(e.op, tok).scale(e.c)
    if isinstance(e, OpSum):
        acc = Poly.zero()
        for t in e.terms:
            acc = acc + _expr_to_poly(t, tok)
        return acc
    if isinstance(e, OpProd):
        acc = Poly.one()
        for f in e.factors:
            acc = acc * _expr_to_poly(f, tok)
        return acc
    if isinstance(e, IntPow):
        base = _expr_to_poly(e.base, tok)
        acc = Poly.one()
        for _ in range(e.n):
            acc = acc * base
        return acc
    raise SemanticError(
        "poly literals admit only x and rationals", tok.line, tok.col
    )

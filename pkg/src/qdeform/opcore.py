"""Operator expressions over the Heisenberg pair (x, d/dx) and their exact
action on truncated polynomial spaces.

An ``OpExpr`` is a small immutable AST: the two generators, sums, scalar
multiples, ordered products (leftmost factor acts last), integer powers,
terminating exponentials, and diagonal nodes. A ``DiagFn`` acts on x^n by
the scalar g(n) — this one node kind uniformly houses A = x d/dx, B = 1+A,
{A}, [[B]], q^A and the similarity diagonal. A ``BasisDiag`` is diagonal in
a caller-supplied polynomial basis instead of the monomial one, which is
how functions of deformed degree operators are evaluated spectrally.

Evaluation is by action, not by symbolic rewriting: vacuum-ordering
semantics coincide with left action on polynomials, and action is exact and
terminating. ``apply`` works at an explicit truncation degree D and raises
on overflow unless told to truncate, so identity checks are never silently
corrupted. ``realize`` tabulates the action as a degree-banded matrix;
``realize_exact`` inflates the working degree by the expression's peak
degree-raise so boundary columns come out exact.

Everything here is immutable and pure; concurrent use is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import (
    DegreeOverflowError,
    EmptyWindowError,
    NonterminatingExponentialError,
    SingularOperatorError,
    UnsupportedBasisOperationError,
    UnsupportedStarError,
)
from .poly import MONOMIAL, Poly
from .qnum import QContext, rational


class Op:
    """Mixin giving operator expressions arithmetic sugar."""

    __slots__ = ()

    def __add__(self, other):
        return op_sum(self, as_op(other))

    def __radd__(self, other):
        return op_sum(as_op(other), self)

    def __sub__(self, other):
        return op_sum(self, scaled(-1, as_op(other)))

    def __rsub__(self, other):
        return op_sum(as_op(other), scaled(-1, self))

    def __neg__(self):
        return scaled(-1, self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return scaled(other, self)
        if isinstance(other, Op):
            return op_prod(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return scaled(other, self)
        return NotImplemented

    def __pow__(self, n):
        return IntPow(self, n)


@dataclass(frozen=True, slots=True)
class Coord(Op):
    """Multiplication by the coordinate: p(x) -> x p(x)."""


@dataclass(frozen=True, slots=True)
class Deriv(Op):
    """Differentiation: p(x) -> p'(x)."""


@dataclass(frozen=True, slots=True)
class Ident(Op):
    """The identity operator."""


@dataclass(frozen=True, slots=True)
class Scaled(Op):
    c: Fraction
    op: "OpExpr"


@dataclass(frozen=True, slots=True)
class OpSum(Op):
    terms: tuple


@dataclass(frozen=True, slots=True)
class OpProd(Op):
    """Ordered product; the leftmost factor acts last."""

    factors: tuple


@dataclass(frozen=True, slots=True)
class IntPow(Op):
    base: "OpExpr"
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("operator powers take natural exponents")


@dataclass(frozen=True, slots=True)
class DiagFn(Op):
    """Diagonal on monomials: x^n -> fn(n) x^n. fn must be total on 0..D."""

    name: str
    fn: Callable[[int], Fraction]


@dataclass(frozen=True, slots=True)
class DiagInv(Op):
    """Inverse of a diagonal node; singular if a zero eigenvalue is occupied."""

    inner: "OpExpr"

    def __post_init__(self):
        if not isinstance(self.inner, (DiagFn, BasisDiag)):
            raise ValueError("DiagInv requires a diagonal operand")


@dataclass(frozen=True, slots=True)
class ExpOp(Op):
    """Operator exponential, evaluated as a terminating power series."""

    arg: "OpExpr"


@dataclass(frozen=True, slots=True)
class BasisDiag(Op):
    """Diagonal in the polynomial basis basis(0), basis(1), ...: the
    component along basis(n) is scaled by fn(n). basis(n) must be a
    monomial-basis Poly of exact degree n."""

    name: str
    basis: Callable[[int], Poly]
    fn: Callable[[int], Fraction]
    meta: object = None


OpExpr = Op

COORD = Coord()
DERIV = Deriv()
IDENT = Ident()


def as_op(v) -> OpExpr:
    if isinstance(v, Op):
        return v
    return scaled(rational(v), IDENT)


def scaled(c, e: OpExpr) -> OpExpr:
    c = rational(c)
    if isinstance(e, Scaled):
        c = c * e.c
        e = e.op
    if c == 1:
        return e
    return Scaled(c, e)


def op_sum(*terms) -> OpExpr:
    flat = []
    for t in terms:
        if isinstance(t, OpSum):
            flat.extend(t.terms)
        else:
            flat.append(t)
    if len(flat) == 1:
        return flat[0]
    return OpSum(tuple(flat))


def op_prod(*factors) -> OpExpr:
    flat = []
    for f in factors:
        if isinstance(f, OpProd):
            flat.extend(f.factors)
        else:
            flat.append(f)
    if len(flat) == 1:
        return flat[0]
    return OpProd(tuple(flat))


# ---------------------------------------------------------------------------
# Action on polynomials
# ---------------------------------------------------------------------------


def apply(e: OpExpr, p: Poly, D: int, *, allow_truncation: bool = False) -> Poly:
    """Exact image of p under e on the degree-<=D space.

    Raises DegreeOverflowError when a result would exceed D (unless
    allow_truncation), SingularOperatorError on an occupied zero eigenvalue
    of an inverted diagonal, and NonterminatingExponentialError when an
    exponential's series cannot terminate.
    """
    if p.basis != MONOMIAL:
        raise UnsupportedBasisOperationError(
            "operators act on monomial-basis polynomials; convert first"
        )
    if D < 0:
        raise ValueError("truncation degree must be nonnegative")
    if p.degree > D:
        raise ValueError("input degree %d exceeds truncation %d" % (p.degree, D))
    return _apply(e, p, D, allow_truncation)


def _apply(e, p, D, trunc):
    if isinstance(e, Coord):
        if p.is_zero:
            return p
        if p.degree + 1 > D:
            if not trunc:
                raise DegreeOverflowError(
                    "x raises degree %d past truncation %d" % (p.degree, D)
                )
            return Poly((0,) + p.coeffs).truncated(D)
        return Poly((0,) + p.coeffs)
    if isinstance(e, Deriv):
        return p.derivative()
    if isinstance(e, Ident):
        return p
    if isinstance(e, Scaled):
        return _apply(e.op, p, D, trunc).scale(e.c)
    if isinstance(e, OpSum):
        acc = Poly.zero()
        for t in e.terms:
            acc = acc + _apply(t, p, D, trunc)
        return acc
    if isinstance(e, OpProd):
        out = p
        for f in reversed(e.factors):
            out = _apply(f, out, D, trunc)
        return out
    if isinstance(e, IntPow):
        out = p
        for _ in range(e.n):
            out = _apply(e.base, out, D, trunc)
        return out
    if isinstance(e, DiagFn):
        return Poly([c * e.fn(n) if c else c for n, c in enumerate(p.coeffs)])
    if isinstance(e, DiagInv):
        if isinstance(e.inner, BasisDiag):
            return _basis_apply(e.inner, p, invert=True)
        out = []
        for n, c in enumerate(p.coeffs):
            if c == 0:
                out.append(c)
                continue
            g = e.inner.fn(n)
            if g == 0:
                raise SingularOperatorError(
                    "inv(%s) hit eigenvalue 0 at occupied degree %d" % (e.inner.name, n)
                )
            out.append(c / g)
        return Poly(out)
    if isinstance(e, BasisDiag):
        return _basis_apply(e, p, invert=False)
    if isinstance(e, ExpOp):
        acc = p
        term = p
        k = 0
        while not term.is_zero:
            k += 1
            if k > D + 1:
                raise NonterminatingExponentialError(
                    "exp() series still nonzero after %d terms at truncation %d"
                    % (D + 1, D)
                )
            try:
                term = _apply(e.arg, term, D, trunc).scale(Fraction(1, k))
            except DegreeOverflowError as exc:
                raise NonterminatingExponentialError(
                    "exp() of a degree-raising operator; use a series "
                    "constructor or allow_truncation"
                ) from exc
            acc = acc + term
        return acc
    raise TypeError("not an operator expression: %r" % (e,))


def _basis_apply(bd: BasisDiag, p: Poly, *, invert: bool) -> Poly:
    # Triangular elimination: each basis element has exact degree n, so
    # components are read off from the top degree down.
    comps = []
    rem = p
    while not rem.is_zero:
        n = rem.degree
        bn = bd.basis(n)
        if bn.degree != n:
            raise SingularOperatorError(
                "%s: basis element %d has degree %d" % (bd.name, n, bn.degree)
            )
        c = rem.coefficient(n) / bn.coefficient(n)
        comps.append((n, c, bn))
        rem = rem - bn.scale(c)
    acc = Poly.zero()
    for n, c, bn in comps:
        g = bd.fn(n)
        if invert:
            if g == 0:
                raise SingularOperatorError(
                    "inv(%s) hit eigenvalue 0 at occupied component %d" % (bd.name, n)
                )
            w = c / g
        else:
            w = c * g
        if w:
            acc = acc + bn.scale(w)
    return acc


# ---------------------------------------------------------------------------
# Degree bookkeeping
# ---------------------------------------------------------------------------


def degree_raise_bound(e: OpExpr):
    """Upper bound on the total degree shift of e (may be -inf-like negative,
    or math.inf for exponentials of raising operators)."""
    if isinstance(e, Coord):
        return 1
    if isinstance(e, Deriv):
        return -1
    if isinstance(e, (Ident, DiagFn, DiagInv, BasisDiag)):
        return 0
    if isinstance(e, Scaled):
        return degree_raise_bound(e.op)
    if isinstance(e, OpSum):
        return max((degree_raise_bound(t) for t in e.terms), default=0)
    if isinstance(e, OpProd):
        return sum(degree_raise_bound(f) for f in e.factors)
    if isinstance(e, IntPow):
        return e.n * degree_raise_bound(e.base)
    if isinstance(e, ExpOp):
        b = degree_raise_bound(e.arg)
        return 0 if b <= 0 else math.inf
    raise TypeError("not an operator expression: %r" % (e,))


def peak_raise(e: OpExpr):
    """Maximum intermediate degree raise along the action path of e.

    Working at truncation D + peak_raise(e) guarantees apply() cannot
    overflow on inputs of degree <= D whose exact image fits in D."""
    if isinstance(e, Coord):
        return 1
    if isinstance(e, (Deriv, Ident, DiagFn, DiagInv, BasisDiag)):
        return 0
    if isinstance(e, Scaled):
        return peak_raise(e.op)
    if isinstance(e, OpSum):
        return max((peak_raise(t) for t in e.terms), default=0)
    if isinstance(e, OpProd):
        run = 0
        pk = 0
        for f in reversed(e.factors):
            pk = max(pk, run + peak_raise(f))
            run += degree_raise_bound(f)
        return pk
    if isinstance(e, IntPow):
        if e.n == 0:
            return 0
        b = degree_raise_bound(e.base)
        extra = (e.n - 1) * b if b > 0 else 0
        return peak_raise(e.base) + extra
    if isinstance(e, ExpOp):
        if degree_raise_bound(e.arg) > 0:
            return math.inf
        return max(0, peak_raise(e.arg))
    raise TypeError("not an operator expression: %r" % (e,))


# ---------------------------------------------------------------------------
# Finite realizations
# ---------------------------------------------------------------------------


class LinOp:
    """Realization of an operator on the degree-<=D space: column n is the
    image of x^n, or None where the image overflowed the truncation."""

    __slots__ = ("D", "columns")

    def __init__(self, D: int, columns):
        columns = list(columns)
        if len(columns) != D + 1:
            raise ValueError("expected %d columns, got %d" % (D + 1, len(columns)))
        for col in columns:
            if col is None:
                continue
            if col.basis != MONOMIAL or col.degree > D:
                raise ValueError("column outside the degree-%d monomial space" % D)
        self.D = D
        self.columns = tuple(columns)

    @classmethod
    def identity(cls, D: int) -> "LinOp":
        return cls(D, [Poly.monomial(n) for n in range(D + 1)])

    @classmethod
    def from_diagonal(cls, D: int, values) -> "LinOp":
        values = list(values)
        return cls(D, [Poly.monomial(n, values[n]) for n in range(D + 1)])

    def column(self, n: int):
        return self.columns[n]

    def entry(self, i: int, j: int):
        col = self.columns[j]
        return None if col is None else col.coefficient(i)

    @property
    def valid_degrees(self):
        return tuple(n for n, col in enumerate(self.columns) if col is not None)

    @property
    def band(self):
        lo = hi = None
        for n, col in enumerate(self.columns):
            if col is None:
                continue
            for i, c in enumerate(col.coeffs):
                if c == 0:
                    continue
                s = i - n
                lo = s if lo is None else min(lo, s)
                hi = s if hi is None else max(hi, s)
        if lo is None:
            return (0, 0)
        return (lo, hi)

    def apply_poly(self, p: Poly) -> Poly:
        if p.basis != MONOMIAL:
            raise UnsupportedBasisOperationError("LinOp acts on monomial polynomials")
        if p.degree > self.D:
            raise ValueError("degree exceeds realization size")
        acc = Poly.zero()
        for n, c in enumerate(p.coeffs):
            if c == 0:
                continue
            col = self.columns[n]
            if col is None:
                raise DegreeOverflowError("column %d is overflow-marked" % n)
            acc = acc + col.scale(c)
        return acc

    def compose(self, other: "LinOp") -> "LinOp":
        """self after other; overflow marks propagate."""
        if self.D != other.D:
            raise ValueError("size mismatch")
        cols = []
        for col in other.columns:
            if col is None:
                cols.append(None)
                continue
            try:
                cols.append(self.apply_poly(col))
            except DegreeOverflowError:
                cols.append(None)
        return LinOp(self.D, cols)

    def __sub__(self, other: "LinOp") -> "LinOp":
        if self.D != other.D:
            raise ValueError("size mismatch")
        cols = [
            None if a is None or b is None else a - b
            for a, b in zip(self.columns, other.columns)
        ]
        return LinOp(self.D, cols)

    def is_identity(self) -> bool:
        """True when every non-marked column is x^n (and at least one is)."""
        seen = False
        for n, col in enumerate(self.columns):
            if col is None:
                continue
            seen = True
            if col != Poly.monomial(n):
                return False
        return seen

    def is_zero(self) -> bool:
        return all(col is None or col.is_zero for col in self.columns)

    def is_diagonal(self) -> bool:
        return all(
            col is None or col.truncated(n - 1).is_zero and col.degree <= n
            for n, col in enumerate(self.columns)
        )

    def diagonal(self):
        """Entry (n, n) per column, None where overflow-marked."""
        return tuple(
            None if col is None else col.coefficient(n)
            for n, col in enumerate(self.columns)
        )

    def __eq__(self, other):
        if not isinstance(other, LinOp):
            return NotImplemented
        return self.D == other.D and self.columns == other.columns

    def __hash__(self):
        return hash((self.D, self.columns))

    def __repr__(self):
        marked = sum(1 for c in self.columns if c is None)
        return "LinOp(D=%d, band=%s, marked=%d)" % (self.D, self.band, marked)

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "columns": [None if c is None else c.to_json() for c in self.columns],
            "band": list(self.band),
        }


def realize(e: OpExpr, D: int, *, allow_truncation: bool = False) -> LinOp:
    """Tabulate e column by column; overflowing columns are marked None."""
    cols = []
    for n in range(D + 1):
        try:
            cols.append(apply(e, Poly.monomial(n), D, allow_truncation=allow_truncation))
        except DegreeOverflowError:
            cols.append(None)
    return LinOp(D, cols)


def realize_exact(e: OpExpr, D: int) -> LinOp:
    """Like realize, but works at an inflated internal truncation so that a
    column is marked only when its exact image genuinely leaves degree D."""
    margin = peak_raise(e)
    if margin is math.inf:
        raise NonterminatingExponentialError(
            "cannot bound the degree growth of this operator"
        )
    Dw = D + max(0, int(margin))
    cols = []
    for n in range(D + 1):
        img = apply(e, Poly.monomial(n), Dw)
        cols.append(img if img.degree <= D else None)
    return LinOp(D, cols)


def acts_equally(e1: OpExpr, e2: OpExpr, D: int) -> bool:
    """Exact equality of action on all x^n, n <= D (overflow marks must agree)."""
    return realize_exact(e1, D) == realize_exact(e2, D)


def _weighted_commutator(e1, e2, w, D):
    both = (op_prod(e1, e2), op_prod(e2, e1))
    margin = max(peak_raise(both[0]), peak_raise(both[1]))
    if margin is math.inf:
        raise NonterminatingExponentialError(
            "cannot bound the degree growth of this commutator"
        )
    Dw = D + max(0, int(margin))
    cols = []
    for n in range(D + 1):
        xn = Poly.monomial(n)
        ab = apply(e1, apply(e2, xn, Dw), Dw)
        ba = apply(e2, apply(e1, xn, Dw), Dw)
        diff = ab - ba.scale(w)
        cols.append(diff if diff.degree <= D else None)
    if all(c is None for c in cols):
        raise EmptyWindowError("no degree survives the band-safety restriction")
    return LinOp(D, cols)


def commutator(e1: OpExpr, e2: OpExpr, D: int) -> LinOp:
    """[e1, e2] = e1 e2 - e2 e1 realized on the safe degree window."""
    return _weighted_commutator(e1, e2, Fraction(1), D)


def q_commutator(e1: OpExpr, e2: OpExpr, q, D: int) -> LinOp:
    """e1 e2 - q e2 e1 realized on the safe degree window."""
    return _weighted_commutator(e1, e2, rational(q), D)


# ---------------------------------------------------------------------------
# The *-involution
# ---------------------------------------------------------------------------


def star(e: OpExpr) -> OpExpr:
    """Antihomomorphism swapping the generators: x* = d, d* = x.

    Scalars are rational, so conjugating them is the identity. Defined on
    words (and exponentials of words); diagonal nodes have no structural
    image and raise.
    """
    if isinstance(e, Coord):
        return DERIV
    if isinstance(e, Deriv):
        return COORD
    if isinstance(e, Ident):
        return IDENT
    if isinstance(e, Scaled):
        return Scaled(e.c, star(e.op))
    if isinstance(e, OpSum):
        return OpSum(tuple(star(t) for t in e.terms))
    if isinstance(e, OpProd):
        return OpProd(tuple(star(f) for f in reversed(e.factors)))
    if isinstance(e, IntPow):
        return IntPow(star(e.base), e.n)
    if isinstance(e, ExpOp):
        return ExpOp(star(e.arg))
    raise UnsupportedStarError("star is undefined on %r" % (e,))


# ---------------------------------------------------------------------------
# Standard diagonal nodes
# ---------------------------------------------------------------------------

#: A = x d/dx: x^n -> n x^n.
A_DIAG = DiagFn("A", lambda n: Fraction(n))

#: B = 1 + A: x^n -> (n+1) x^n.
B_DIAG = DiagFn("B", lambda n: Fraction(n + 1))


def _shift_name(base: str, shift: int) -> str:
    if shift == 0:
        return "%s(A)" % base
    if shift == 1:
        return "%s(B)" % base
    return "%s(A%+d)" % (base, shift)


def qnum_diag(ctx: QContext, shift: int = 0) -> DiagFn:
    """{A + shift}: x^n -> {n + shift} x^n."""
    return DiagFn(_shift_name("qn", shift), lambda n: ctx.qnumber(n + shift))


def dbracket_diag(ctx: QContext, shift: int = 0) -> DiagFn:
    """[[A + shift]]: x^n -> [[n + shift]] x^n."""
    return DiagFn(_shift_name("qb", shift), lambda n: ctx.dbracket(n + shift))


def qpow_diag(ctx: QContext) -> DiagFn:
    """q^A: x^n -> q^n x^n."""
    return DiagFn("q^A", lambda n: ctx.q**n)


def gamma_ratio_diag(ctx: QContext, shift: int = 0) -> DiagFn:
    """U(A + shift) with u(n) = {n}!/n!; u is taken as 1 below index 0,
    which is never an occupied degree in its uses."""
    if shift == 0:
        name = "U"
    else:
        name = "U(A%+d)" % shift

    def fn(n, _shift=shift):
        m = n + _shift
        return ctx.gamma_ratio(m) if m >= 0 else Fraction(1)

    return DiagFn(name, fn)

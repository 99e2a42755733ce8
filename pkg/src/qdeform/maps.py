"""Commutation-relation-preserving deformation maps and their calculus.

A ``DeformMap`` substitutes new realizations for the generator pair: it
carries the image of the lowering generator (``image_a``) and of the
raising generator (``image_b``) as operator expressions, together with the
defining relation they satisfy,

    image_a image_b - relation_q * image_b image_a = 1,

with relation_q = 1 for the ordinary commutation relation. Every
constructor verifies this relation (and counit preservation, i.e. the
lowering image annihilates constants) on a finite degree window before
returning.

The module provides:

* the Jackson pair (q-derivative and its conjugate coordinate),
* the shift pair (forward difference and its conjugate),
* the one-sided q-map that deforms only the raising generator,
* the generic f(B)-family containing the Jackson pair,
* composition by generator substitution, with functions of the deformed
  degree operator evaluated spectrally in the adapted basis,
* adapted bases, projections onto functions of the raising generator, and
  the intertwining check,
* Jackson integration, quantum averaging, the quantum Rolle identity, the
  diagonal similarity transform, and the deformed conjugacy check for the
  shift pair.

Maps are immutable apart from an internal adapted-basis cache whose entries
are deterministic, so concurrent reads see values identical to a
single-threaded run.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Callable, Optional

from .errors import (
    MapConstructionError,
    UnsupportedBasisOperationError,
    UnsupportedCompositionError,
)
from .opcore import (
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
    LinOp,
    OpExpr,
    OpProd,
    OpSum,
    Scaled,
    apply,
    dbracket_diag,
    gamma_ratio_diag,
    op_prod,
    op_sum,
    peak_raise,
    q_commutator,
    qnum_diag,
    realize_exact,
    scaled,
)
from .poly import MONOMIAL, Poly
from .qnum import QContext, rational

DEFAULT_CHECK_DEGREE = 16


def _context(q, floor: int = 64) -> QContext:
    if isinstance(q, QContext):
        return q
    return QContext(q, max_index=max(floor, 64))


# ---------------------------------------------------------------------------
# Generator realizations from the Jackson calculus
# ---------------------------------------------------------------------------


def dq_expr(ctx: QContext) -> OpExpr:
    """Jackson derivative [[B]]^(-1) d; acts as x^n -> {n} x^(n-1)."""
    return op_prod(DiagInv(dbracket_diag(ctx, 1)), DERIV)


def xq_expr(ctx: QContext) -> OpExpr:
    """Conjugate coordinate x [[B]]; acts as x^n -> [[n+1]] x^(n+1)."""
    return op_prod(COORD, dbracket_diag(ctx, 1))


def s_expr(ctx: QContext) -> OpExpr:
    """Jackson integral {A}^(-1) x; acts as x^n -> x^(n+1)/{n+1}."""
    return op_prod(DiagInv(qnum_diag(ctx, 0)), COORD)


def mq_expr(ctx: QContext) -> OpExpr:
    """Quantum averaging (1/x) S; diagonal with 1/{n+1}, i.e. the inverse of
    {B} (which tends to B as q -> 1)."""
    return DiagInv(qnum_diag(ctx, 1))


def a_delta_expr(delta) -> OpExpr:
    """Forward difference (e^(delta d) - 1)/delta; at delta = 0, d itself."""
    delta = rational(delta)
    if delta == 0:
        return DERIV
    return scaled(1 / delta, op_sum(ExpOp(scaled(delta, DERIV)), scaled(-1, IDENT)))


def b_delta_expr(delta) -> OpExpr:
    """Conjugate coordinate x e^(-delta d); at delta = 0, x itself."""
    delta = rational(delta)
    if delta == 0:
        return COORD
    return op_prod(COORD, ExpOp(scaled(-delta, DERIV)))


def u_expr(ctx: QContext) -> OpExpr:
    """Similarity diagonal U(A), u(n) = {n}!/n!."""
    return gamma_ratio_diag(ctx)


# ---------------------------------------------------------------------------
# Deformation maps
# ---------------------------------------------------------------------------


class DeformMap:
    """A named substitution on the generator pair.

    ``relation_q`` is the weight in the defining relation of the image
    pair; 1 means the ordinary commutation relation. ``preserves_degree``
    records that the image pair reproduces the degree operator exactly on
    monomials (true for the identity and the whole f(B)-family), which is
    what allows diagonal nodes to pass through substitution unchanged.
    """

    def __init__(
        self,
        kind: str,
        label: str,
        image_a: OpExpr,
        image_b: OpExpr,
        *,
        q: Optional[Fraction] = None,
        delta: Optional[Fraction] = None,
        relation_q: Fraction = Fraction(1),
        preserves_degree: bool = False,
        outer: Optional["DeformMap"] = None,
        inner: Optional["DeformMap"] = None,
        check_degree: int = DEFAULT_CHECK_DEGREE,
    ):
        self.kind = kind
        self.label = label
        self.image_a = image_a
        self.image_b = image_b
        self.ctx = None
        self.q = q
        self.delta = delta
        self.relation_q = rational(relation_q)
        self.preserves_degree = preserves_degree
        self.outer = outer
        self.inner = inner
        self._basis = [Poly.one()]
        self._basis_lock = threading.Lock()
        if check_degree:
            self._validate(check_degree)

    @property
    def is_ccr(self) -> bool:
        return self.relation_q == 1

    def _validate(self, D: int):
        comm = q_commutator(self.image_a, self.image_b, self.relation_q, D)
        if not comm.is_identity():
            raise MapConstructionError(
                "%s: defining relation fails on the degree-%d window" % (self.label, D)
            )
        if not apply(self.image_a, Poly.one(), D).is_zero:
            raise MapConstructionError(
                "%s: lowering image does not annihilate constants" % self.label
            )

    # -- adapted basis --------------------------------------------------

    def basis_element(self, n: int) -> Poly:
        """|n> = (image of b)^n applied to 1; lazily extended and cached.

        Only meaningful for counit-preserving CCR maps, where the lowering
        law a|n> = n|n-1> is re-verified on every extension.
        """
        if not self.is_ccr:
            raise UnsupportedBasisOperationError(
                "%s: adapted bases require a CCR-preserving map" % self.label
            )
        if len(self._basis) > n:
            return self._basis[n]
        with self._basis_lock:
            self._extend(n)
        return self._basis[n]

    def _extend(self, n: int):
        while len(self._basis) <= n:
            k = len(self._basis)
            # raising images lift degree by exactly one, but intermediates may
            # peak higher; work with enough headroom for both generator images
            peaks = (peak_raise(self.image_b), peak_raise(self.image_a))
            if math.inf in peaks:
                raise MapConstructionError(
                    "%s: generator image has unbounded degree growth" % self.label
                )
            head = max(1, int(max(peaks)))
            nxt = apply(self.image_b, self._basis[-1], k - 1 + head)
            if nxt.degree != k:
                raise MapConstructionError(
                    "%s: raising image failed to raise degree at step %d" % (self.label, k)
                )
            lowered = apply(self.image_a, nxt, k + head - 1)
            if lowered != self._basis[-1].scale(k):
                raise MapConstructionError(
                    "%s: lowering law fails on basis element %d" % (self.label, k)
                )
            self._basis.append(nxt)

    # -- generator substitution ------------------------------------------

    def image(self, e: OpExpr) -> OpExpr:
        """Substitute this map's generator images throughout an expression."""
        if isinstance(e, Coord):
            return self.image_b
        if isinstance(e, Deriv):
            return self.image_a
        if isinstance(e, Ident):
            return e
        if isinstance(e, Scaled):
            return scaled(e.c, self.image(e.op))
        if isinstance(e, OpSum):
            return op_sum(*(self.image(t) for t in e.terms))
        if isinstance(e, OpProd):
            return op_prod(*(self.image(f) for f in e.factors))
        if isinstance(e, IntPow):
            return IntPow(self.image(e.base), e.n)
        if isinstance(e, ExpOp):
            return ExpOp(self.image(e.arg))
        if isinstance(e, DiagFn):
            if self.preserves_degree:
                return e
            if self.is_ccr:
                # g(A) becomes g of the deformed degree operator, which is
                # diagonal in this map's adapted basis with spectrum n.
                return BasisDiag(
                    "%s@%s" % (e.name, self.label), self.basis_element, e.fn, meta=self
                )
            raise UnsupportedCompositionError(
                "%s: cannot carry %s through a non-CCR map" % (self.label, e.name)
            )
        if isinstance(e, DiagInv):
            inner = self.image(e.inner)
            if not isinstance(inner, (DiagFn, BasisDiag)):
                raise UnsupportedCompositionError(
                    "%s: inverse of a non-diagonal image" % self.label
                )
            return DiagInv(inner)
        if isinstance(e, BasisDiag):
            if e.meta is None or not isinstance(e.meta, DeformMap):
                raise UnsupportedCompositionError(
                    "%s: basis-diagonal node without an owning map" % self.label
                )
            owner = compose(self, e.meta)
            return BasisDiag(
                "%s@%s" % (e.name, owner.label), owner.basis_element, e.fn, meta=owner
            )
        raise UnsupportedCompositionError("cannot substitute into %r" % (e,))

    def to_json(self) -> dict:
        if self.kind == "compose":
            return {
                "map": "compose",
                "outer": self.outer.to_json(),
                "inner": self.inner.to_json(),
            }
        data = {"map": self.kind}
        if self.q is not None:
            data["q"] = str(self.q)
        if self.delta is not None:
            data["delta"] = str(self.delta)
        return data

    def __repr__(self):
        return "DeformMap(%s)" % self.label


def identity_map() -> DeformMap:
    return DeformMap(
        "identity", "identity", DERIV, COORD, preserves_degree=True, check_degree=8
    )


def fb_map(
    name: str,
    f: Callable[[int], Fraction],
    *,
    q: Optional[Fraction] = None,
    check_degree: int = DEFAULT_CHECK_DEGREE,
) -> DeformMap:
    """The general family a -> f(B)^(-1) a, b -> b f(B), for f nonzero on
    positive integers. The degree operator is preserved exactly, so these
    maps commute with all diagonal bookkeeping."""
    diag = DiagFn("f(B)", lambda n: f(n + 1))
    return DeformMap(
        "fb:" + name,
        name,
        op_prod(DiagInv(diag), DERIV),
        op_prod(COORD, diag),
        q=q,
        preserves_degree=True,
        check_degree=check_degree,
    )


def phi_q(q, *, check_degree: int = DEFAULT_CHECK_DEGREE) -> DeformMap:
    """The Jackson map: a -> [[B]]^(-1) a, b -> b [[B]]."""
    ctx = _context(q)
    m = DeformMap(
        "phi_q",
        "phi_q[%s]" % ctx.q,
        dq_expr(ctx),
        xq_expr(ctx),
        q=ctx.q,
        preserves_degree=True,
        check_degree=check_degree,
    )
    m.ctx = ctx
    return m


def phi_delta(delta, *, check_degree: int = DEFAULT_CHECK_DEGREE) -> DeformMap:
    """The shift map: a -> (e^(delta a) - 1)/delta, b -> b e^(-delta a).

    delta = 0 is the undeformed limit and yields the identity images.
    """
    delta = rational(delta)
    return DeformMap(
        "phi_delta",
        "phi_delta[%s]" % delta,
        a_delta_expr(delta),
        b_delta_expr(delta),
        delta=delta,
        preserves_degree=(delta == 0),
        check_degree=check_degree,
    )


def phi_q_prime(q, *, check_degree: int = DEFAULT_CHECK_DEGREE) -> DeformMap:
    """The one-sided q-map: a -> a, b -> b [[B]]^(-1).

    The image pair satisfies the q-weighted relation a b' - q b' a = 1
    rather than the plain commutation relation.
    """
    ctx = _context(q)
    m = DeformMap(
        "phi_q_prime",
        "phi_q_prime[%s]" % ctx.q,
        DERIV,
        op_prod(COORD, DiagInv(dbracket_diag(ctx, 1))),
        q=ctx.q,
        relation_q=ctx.q,
        check_degree=check_degree,
    )
    m.ctx = ctx
    return m


def compose(
    outer: DeformMap, inner: DeformMap, *, check_degree: int = DEFAULT_CHECK_DEGREE
) -> DeformMap:
    """Generator substitution: the composed image of g is outer's image of
    inner's image expression. The outer map must preserve the CCR (and the
    counit), since functions of the degree operator are pushed through it
    spectrally."""
    if not outer.is_ccr:
        raise UnsupportedCompositionError(
            "outer map %s does not preserve the CCR" % outer.label
        )
    return DeformMap(
        "compose",
        "%s.%s" % (outer.label, inner.label),
        outer.image(inner.image_a),
        outer.image(inner.image_b),
        q=outer.q if outer.q is not None else inner.q,
        delta=outer.delta if outer.delta is not None else inner.delta,
        relation_q=inner.relation_q,
        preserves_degree=outer.preserves_degree and inner.preserves_degree,
        outer=outer,
        inner=inner,
        check_degree=check_degree,
    )


def make_map(kind: str, *, q=None, delta=None, check_degree: int = DEFAULT_CHECK_DEGREE):
    """String-dispatch constructor used by the CLI and serialization."""
    kind = kind.replace("-", "_")
    if kind == "identity":
        return identity_map()
    if kind == "phi_q":
        if q is None:
            raise ValueError("phi_q requires q")
        return phi_q(q, check_degree=check_degree)
    if kind == "phi_delta":
        if delta is None:
            raise ValueError("phi_delta requires delta")
        return phi_delta(delta, check_degree=check_degree)
    if kind == "phi_q_prime":
        if q is None:
            raise ValueError("phi_q_prime requires q")
        return phi_q_prime(q, check_degree=check_degree)
    if kind == "phi_q_delta":
        if q is None or delta is None:
            raise ValueError("phi_q_delta requires q and delta")
        return compose(phi_q(q), phi_delta(delta), check_degree=check_degree)
    if kind == "phi_delta_q":
        if q is None or delta is None:
            raise ValueError("phi_delta_q requires q and delta")
        return compose(phi_delta(delta), phi_q(q), check_degree=check_degree)
    raise ValueError("unknown map kind %r" % kind)


def map_from_json(data: dict, *, check_degree: int = DEFAULT_CHECK_DEGREE) -> DeformMap:
    kind = data["map"]
    if kind == "compose":
        return compose(
            map_from_json(data["outer"], check_degree=check_degree),
            map_from_json(data["inner"], check_degree=check_degree),
            check_degree=check_degree,
        )
    return make_map(kind, q=data.get("q"), delta=data.get("delta"), check_degree=check_degree)


# ---------------------------------------------------------------------------
# Adapted bases and projections
# ---------------------------------------------------------------------------


class AdaptedBasis:
    """Lazily extended view of the sequence |0>, |1>, ... for a map."""

    def __init__(self, m: DeformMap, D: int):
        self.map = m
        self.D = D

    def element(self, n: int) -> Poly:
        if n > self.D:
            raise ValueError("basis index %d exceeds the truncation %d" % (n, self.D))
        return self.map.basis_element(n)

    def elements(self):
        return [self.element(n) for n in range(self.D + 1)]


def adapted_basis(m: DeformMap, n: int, D: int) -> Poly:
    """|n> for the map, built by repeated application of the raising image."""
    return AdaptedBasis(m, D).element(n)


def b_projection(f: Poly, m: DeformMap, D: int) -> Poly:
    """Projection of f onto functions of the deformed raising generator:
    monomial coefficients of f reweight the adapted basis, sum_n f_n |n>.

    f must be given by monomial coefficients, truncated at degree <= D.
    """
    if f.basis != MONOMIAL:
        raise UnsupportedBasisOperationError("projection input must be monomial-basis")
    if f.degree > D:
        raise ValueError("series degree %d exceeds truncation %d" % (f.degree, D))
    acc = Poly.zero()
    for n, c in enumerate(f.coeffs):
        if c == 0:
            continue
        acc = acc + m.basis_element(n).scale(c)
    return acc


def intertwine_check(G: OpExpr, f: Poly, m: DeformMap, D: int) -> bool:
    """Exact check that deforming then acting equals acting then deforming."""
    lhs = apply(m.image(G), b_projection(f, m, D), D)
    rhs = b_projection(apply(G, f, D), m, D)
    return lhs == rhs


# ---------------------------------------------------------------------------
# Jackson calculus on polynomials
# ---------------------------------------------------------------------------


def jackson_integral(p: Poly, ctx: QContext) -> Poly:
    """x^n -> x^(n+1)/{n+1}; the right inverse of the Jackson derivative."""
    if p.basis != MONOMIAL:
        raise UnsupportedBasisOperationError("Jackson integral needs monomial basis")
    out = [Fraction(0)]
    for n, c in enumerate(p.coeffs):
        out.append(c / ctx.qnumber(n + 1))
    return Poly(out)


def quantum_average(p: Poly, ctx: QContext) -> Poly:
    """x^n -> x^n/{n+1}; equals (1/x) S and inverts B."""
    if p.basis != MONOMIAL:
        raise UnsupportedBasisOperationError("quantum average needs monomial basis")
    return Poly([c / ctx.qnumber(n + 1) for n, c in enumerate(p.coeffs)])


def rolle_check(f: Poly, ctx: QContext, D: int) -> bool:
    """Quantum Rolle identity: the conjugate coordinate acting on f equals
    x times (quantum average of f plus quantum average of x f')."""
    lhs = apply(xq_expr(ctx), f, D + 1)
    xfprime = Poly.x() * f.derivative() if not f.is_zero else Poly.zero()
    tilde = quantum_average(f, ctx) + quantum_average(xfprime, ctx)
    rhs = Poly.x() * tilde
    return lhs == rhs


# ---------------------------------------------------------------------------
# Similarity transform
# ---------------------------------------------------------------------------


def similarity_U(ctx: QContext, D: int) -> LinOp:
    """Diagonal U with entries u(n) = {n}!/n!."""
    return LinOp.from_diagonal(D, [ctx.gamma_ratio(n) for n in range(D + 1)])


def similarity_check(ctx: QContext, D: int) -> bool:
    """U^(-1) d U equals the Jackson derivative and U^(-1) x U its conjugate
    coordinate, exactly on the safe window; also the one-step shift identity
    U(A)^(-1) U(A-1) x = [[A]] x."""
    u = u_expr(ctx)
    u_inv = DiagInv(u)
    du = op_prod(u_inv, DERIV, u)
    xu = op_prod(u_inv, COORD, u)
    ok_d = realize_exact(du, D) == realize_exact(dq_expr(ctx), D)
    ok_x = realize_exact(xu, D) == realize_exact(xq_expr(ctx), D)
    shift = op_prod(u_inv, gamma_ratio_diag(ctx, -1), COORD)
    xq_alt = op_prod(dbracket_diag(ctx, 0), COORD)
    ok_shift = realize_exact(shift, D) == realize_exact(xq_alt, D)
    return ok_d and ok_x and ok_shift


# ---------------------------------------------------------------------------
# Deformed conjugacy of the shift pair
# ---------------------------------------------------------------------------


def qcc_delta_check(ctx: QContext, delta, D: int) -> bool:
    """The shift image of the one-sided q-map closes the q-weighted relation
    with the forward difference: a_d X - q X a_d = 1 for X the shift image
    of b [[B]]^(-1). X is evaluated spectrally in the shift map's adapted
    basis; delta = 0 degenerates to the undeformed relation."""
    prime = phi_q_prime(ctx)
    shift_map = phi_delta(delta)
    conj = shift_map.image(prime.image_b)
    a_d = shift_map.image_a
    return q_commutator(a_d, conj, ctx.q, D).is_identity()


# ---------------------------------------------------------------------------
# Eigenfunction series
# ---------------------------------------------------------------------------


def taylor_exponential(lam, D: int) -> Poly:
    """Truncated classical exponential sum_(n<=D) (lam x)^n / n!."""
    lam = rational(lam)
    out = []
    term = Fraction(1)
    for n in range(D + 1):
        out.append(term)
        term = term * lam / (n + 1)
    return Poly(out)


def q_exponential(ctx: QContext, lam, D: int) -> Poly:
    """Truncated q-exponential sum_(n<=D) (lam x)^n / {n}!, the projection of
    the classical exponential under the Jackson map."""
    lam = rational(lam)
    out = []
    lp = Fraction(1)
    for n in range(D + 1):
        out.append(lp / ctx.qfactorial(n))
        lp *= lam
    return Poly(out)


def eigenfunction_series(f: Callable[[int], Fraction], D: int, lam=1) -> Poly:
    """Formal eigenfunction sum_n (f(1)...f(n)/n!) (lam x)^n of the lowered
    generator of the f(B)-family, truncated at D (eigenvalue lam)."""
    lam = rational(lam)
    out = []
    prod = Fraction(1)
    lp = Fraction(1)
    for n in range(D + 1):
        out.append(prod * lp / math.factorial(n))
        lp *= lam
        prod *= f(n + 1)
    return Poly(out)

"""Dense exact polynomials in two bases: powers and falling factorials.

A ``Poly`` is a trimmed tuple of Fractions tagged with its basis. The
monomial basis supports the full ring structure plus the two functional
transforms that realize finite differences (``shift``: p(x) -> p(x+h),
``qscale``: p(x) -> p(qx)). The falling-factorial basis stores its step
delta inside the tag, so mixing two deltas is an error rather than silent
corruption. Conversions between the bases go through Stirling numbers and
are mutually inverse, triangular with unit diagonal.

Polynomials are immutable; all operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BasisMismatchError, UnsupportedBasisOperationError
from .qnum import rational, stirling_first, stirling_second


@dataclass(frozen=True)
class Monomial:
    """Basis tag: coefficient n multiplies x^n."""


@dataclass(frozen=True)
class FallingFactorial:
    """Basis tag: coefficient n multiplies [x]_n = x(x-d)(x-2d)...(x-(n-1)d)."""

    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "delta", rational(self.delta))


MONOMIAL = Monomial()


def _trim(coeffs):
    last = -1
    for i, c in enumerate(coeffs):
        if c != 0:
            last = i
    return tuple(coeffs[: last + 1])


class Poly:
    """Dense univariate polynomial over exact rationals."""

    __slots__ = ("coeffs", "basis")

    def __init__(self, coeffs=(), basis=MONOMIAL):
        self.coeffs = _trim([rational(c) for c in coeffs])
        self.basis = basis

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, basis=MONOMIAL):
        return cls((), basis)

    @classmethod
    def one(cls, basis=MONOMIAL):
        return cls((1,), basis)

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def monomial(cls, n, coeff=1):
        """coeff * x^n."""
        return cls((0,) * n + (coeff,))

    @classmethod
    def falling_element(cls, n, delta):
        """[x]_n as a falling-basis polynomial."""
        return cls((0,) * n + (1,), FallingFactorial(delta))

    # -- structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, n: int) -> Fraction:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs and self.basis == other.basis

    def __hash__(self):
        return hash((self.coeffs, self.basis))

    def __repr__(self):
        return "Poly(%s)" % self.to_text()

    # -- ring operations ----------------------------------------------

    def _require_same_basis(self, other):
        if self.basis != other.basis:
            raise BasisMismatchError(
                "basis mismatch: %r vs %r" % (self.basis, other.basis)
            )

    def __add__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        self._require_same_basis(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(
            [self.coefficient(i) + other.coefficient(i) for i in range(n)], self.basis
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.basis)

    def scale(self, c) -> "Poly":
        c = rational(c)
        return Poly([c * a for a in self.coeffs], self.basis)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._require_same_basis(other)
        if self.basis != MONOMIAL:
            raise UnsupportedBasisOperationError(
                "product is only defined in the monomial basis"
            )
        if self.is_zero or other.is_zero:
            return Poly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    # -- functional transforms (monomial basis only) --------------------

    def _require_monomial(self, what):
        if self.basis != MONOMIAL:
            raise UnsupportedBasisOperationError(
                "%s is only defined in the monomial basis" % what
            )

    def shift(self, h) -> "Poly":
        """p(x) -> p(x + h), by exact binomial expansion."""
        self._require_monomial("shift")
        h = rational(h)
        if h == 0 or self.is_zero:
            return self
        out = [Fraction(0)] * len(self.coeffs)
        for n, c in enumerate(self.coeffs):
            if c == 0:
                continue
            hp = Fraction(1)
            for k in range(n, -1, -1):
                out[k] += c * math.comb(n, k) * hp
                hp *= h
        return Poly(out)

    def qscale(self, q) -> "Poly":
        """p(x) -> p(qx): degree-n coefficient picks up q^n."""
        self._require_monomial("qscale")
        q = rational(q)
        out = []
        qp = Fraction(1)
        for c in self.coeffs:
            out.append(c * qp)
            qp *= q
        return Poly(out)

    def derivative(self) -> "Poly":
        self._require_monomial("derivative")
        return Poly([n * c for n, c in enumerate(self.coeffs)][1:])

    def truncated(self, degree: int) -> "Poly":
        """Drop all coefficients above the given degree."""
        return Poly(self.coeffs[: degree + 1], self.basis)

    # -- basis conversions ----------------------------------------------

    def to_monomial(self) -> "Poly":
        """Expand falling-factorial elements via signed Stirling numbers."""
        if self.basis == MONOMIAL:
            return self
        delta = self.basis.delta
        out = [Fraction(0)] * len(self.coeffs)
        for n, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if n == 0:
                out[0] += c
                continue
            # [x]_n = sum_k s(n,k) delta^(n-k) x^k
            dp = Fraction(1)
            for k in range(n, 0, -1):
                out[k] += c * stirling_first(n, k) * dp
                dp *= delta
        return Poly(out)

    def to_falling(self, delta) -> "Poly":
        """Inverse conversion, via Stirling numbers of the second kind."""
        delta = rational(delta)
        target = FallingFactorial(delta)
        if self.basis == target:
            return self
        if self.basis != MONOMIAL:
            return self.to_monomial().to_falling(delta)
        out = [Fraction(0)] * len(self.coeffs)
        for n, c in enumerate(self.coeffs):
            if c == 0:
                continue
            dp = Fraction(1)
            for k in range(n, -1, -1):
                out[k] += c * stirling_second(n, k) * dp
                dp *= delta
        return Poly(out, target)

    # -- evaluation -----------------------------------------------------

    def evaluate(self, x0) -> Fraction:
        x0 = rational(x0)
        if self.basis == MONOMIAL:
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x0 + c
            return acc
        delta = self.basis.delta
        acc = Fraction(0)
        prod = Fraction(1)  # running [x0]_n
        for n, c in enumerate(self.coeffs):
            if n > 0:
                prod *= x0 - (n - 1) * delta
            acc += c * prod
        return acc

    __call__ = evaluate

    # -- rendering and serialization --------------------------------------

    def to_text(self) -> str:
        """Compact canonical text, highest degree first ("x^2-1/2*x")."""
        if self.is_zero:
            return "0"
        parts = []
        for n in range(self.degree, -1, -1):
            c = self.coeffs[n]
            if c == 0:
                continue
            if self.basis == MONOMIAL:
                base = "x" if n == 1 else "x^%d" % n
            else:
                base = "[x]_%d" % n
            if n == 0:
                term = str(c)
            elif c == 1:
                term = base
            elif c == -1:
                term = "-" + base
            else:
                term = "%s*%s" % (c, base)
            if parts and not term.startswith("-"):
                parts.append("+")
            parts.append(term)
        return "".join(parts)

    def to_json(self) -> dict:
        if self.basis == MONOMIAL:
            basis = "monomial"
        else:
            basis = {"falling": {"delta": str(self.basis.delta)}}
        return {"basis": basis, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "Poly":
        basis = data["basis"]
        if basis == "monomial":
            tag = MONOMIAL
        else:
            tag = FallingFactorial(rational(basis["falling"]["delta"]))
        return cls([rational(c) for c in data["coeffs"]], tag)

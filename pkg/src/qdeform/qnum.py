"""Exact q-arithmetic: q-numbers, double brackets, factorials, Stirling numbers.

All scalars are ``fractions.Fraction``; nothing here ever rounds. A
``QContext`` fixes the deformation parameter q and memoizes the derived
combinatorial quantities:

    {n}   = (1 - q^n)/(1 - q)        q-number of n, {0} = 0
    [[n]] = n/{n}                    double bracket, [[0]] = 1
    {n}!, [[n]]!                     the associated factorials
    u(n)  = {n}!/n!                  diagonal of the similarity transform

Contexts are immutable after construction and every function is pure, so
values can be shared freely across threads.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction
from functools import lru_cache

#: The ground field. Exact, arbitrary precision, always in lowest terms
#: with positive denominator; ``str()`` yields the "p/q" wire format.
Rational = Fraction


def rational(value) -> Fraction:
    """Coerce ints, "p/q" strings and Fractions to Fraction.

    Floats are rejected: they would silently break exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError("expected an exact rational, got %r" % (value,))


class QContext:
    """Deformation parameter q plus memoized q-combinatorics up to max_index.

    Requires q != 1 and {n} != 0 for 1 <= n <= max_index (the latter only
    fails at q = -1 for rational q). Values of q outside -1 < q < 1 are
    accepted but trigger a warning, since the usual convergence picture for
    the Jackson integral no longer applies there.
    """

    __slots__ = ("q", "max_index", "_qnum", "_qfact", "_dbfact")

    def __init__(self, q, max_index: int = 64):
        q = rational(q)
        if q == 1:
            raise ValueError("q = 1 is the undeformed point; q must differ from 1")
        if max_index < 0:
            raise ValueError("max_index must be nonnegative")
        qnum = [Fraction(0)]
        for n in range(1, max_index + 1):
            nxt = 1 + q * qnum[-1]  # {n+1} = 1 + q{n}
            if nxt == 0:
                raise ValueError("{%d} = 0 at q = %s; reduce max_index or change q" % (n, q))
            qnum.append(nxt)
        if not -1 < q < 1:
            warnings.warn(
                "q = %s lies outside -1 < q < 1; identities remain exact but "
                "the Jackson-integral series has no convergent reading" % q,
                stacklevel=2,
            )
        self.q = q
        self.max_index = max_index
        self._qnum = qnum
        # factorial tables built eagerly so the context is immutable after
        # construction (the concurrency contract)
        qfact = [Fraction(1)]
        dbfact = [Fraction(1)]
        for k in range(1, max_index + 1):
            qfact.append(qfact[-1] * qnum[k])
            dbfact.append(dbfact[-1] * (k / qnum[k]))
        self._qfact = qfact
        self._dbfact = dbfact

    def _check(self, n: int) -> int:
        n = int(n)
        if not 0 <= n <= self.max_index:
            raise ValueError(
                "index %d outside this context's verified range 0..%d" % (n, self.max_index)
            )
        return n

    def qnumber(self, n: int) -> Fraction:
        """{n} = (1 - q^n)/(1 - q)."""
        return self._qnum[self._check(n)]

    def dbracket(self, n: int) -> Fraction:
        """[[n]] = n/{n}, with [[0]] = 1."""
        n = self._check(n)
        if n == 0:
            return Fraction(1)
        return n / self._qnum[n]

    def qfactorial(self, n: int) -> Fraction:
        """{n}! = {1}{2}...{n}, empty product at n = 0."""
        return self._qfact[self._check(n)]

    def dbracket_factorial(self, n: int) -> Fraction:
        """[[n]]! = [[1]][[2]]...[[n]], with [[0]]! = 1."""
        return self._dbfact[self._check(n)]

    def gamma_ratio(self, n: int) -> Fraction:
        """u(n) = Gamma_q(n+1)/Gamma(n+1) = {n}!/n!."""
        n = self._check(n)
        return self.qfactorial(n) / math.factorial(n)

    def __repr__(self):
        return "QContext(q=%s, max_index=%d)" % (self.q, self.max_index)


@lru_cache(maxsize=None)
def _stirling_first_row(n: int) -> tuple:
    if n == 0:
        return (1,)
    prev = _stirling_first_row(n - 1)

    def entry(k):
        lower = prev[k - 1] if 1 <= k <= n else 0
        same = prev[k] if k <= n - 1 else 0
        return lower - (n - 1) * same

    return tuple(entry(k) for k in range(n + 1))


@lru_cache(maxsize=None)
def _stirling_second_row(n: int) -> tuple:
    if n == 0:
        return (1,)
    prev = _stirling_second_row(n - 1)

    def entry(k):
        lower = prev[k - 1] if 1 <= k <= n else 0
        same = prev[k] if k <= n - 1 else 0
        return lower + k * same

    return tuple(entry(k) for k in range(n + 1))


def stirling_first(n: int, k: int) -> int:
    """Signed Stirling number of the first kind s(n, k).

    Expansion coefficients of falling factorials in powers:
    x(x-1)...(x-n+1) = sum_k s(n,k) x^k.
    """
    if not 0 <= k <= n:
        raise ValueError("stirling_first requires 0 <= k <= n, got n=%d k=%d" % (n, k))
    return _stirling_first_row(n)[k]


def stirling_second(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k) (inverse triangle to s)."""
    if not 0 <= k <= n:
        raise ValueError("stirling_second requires 0 <= k <= n, got n=%d k=%d" % (n, k))
    return _stirling_second_row(n)[k]

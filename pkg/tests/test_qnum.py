from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import Q_GRID, q_values
from qdeform.qnum import QContext, rational, stirling_first, stirling_second


def qnumber_oracle(q: Fraction, n: int) -> Fraction:
    # direct evaluation of (1 - q^n)/(1 - q), independent of the recurrence
    return (1 - q**n) / (1 - q)


class TestQNumber:
    def test_hand_value(self):
        ctx = QContext(Fraction(1, 2), 8)
        assert ctx.qnumber(3) == Fraction(7, 4)

    def test_zero_and_one(self):
        for q in Q_GRID:
            ctx = QContext(q, 8)
            assert ctx.qnumber(0) == 0
            assert ctx.qnumber(1) == 1

    @given(q=q_values, n=st.integers(min_value=0, max_value=24))
    def test_matches_direct_formula(self, q, n):
        assert QContext(q, 24).qnumber(n) == qnumber_oracle(q, n)

    @given(q=q_values, n=st.integers(min_value=0, max_value=23))
    def test_recurrence(self, q, n):
        ctx = QContext(q, 24)
        assert ctx.qnumber(n + 1) == 1 + q * ctx.qnumber(n)

    def test_q_zero_is_all_ones(self):
        ctx = QContext(0, 10)
        assert all(ctx.qnumber(n) == 1 for n in range(1, 11))


class TestDBracket:
    def test_hand_value(self):
        assert QContext(Fraction(1, 2), 8).dbracket(2) == Fraction(4, 3)

    def test_conventions(self):
        for q in Q_GRID:
            ctx = QContext(q, 8)
            assert ctx.dbracket(0) == 1
            assert ctx.dbracket(1) == 1

    @given(q=q_values, n=st.integers(min_value=1, max_value=24))
    def test_bracket_times_qnumber(self, q, n):
        ctx = QContext(q, 24)
        assert ctx.dbracket(n) * ctx.qnumber(n) == n


class TestFactorials:
    def test_dbracket_factorial_value(self):
        ctx = QContext(Fraction(1, 2), 8)
        assert ctx.dbracket_factorial(2) == Fraction(4, 3)  # [[1]]*[[2]]

    def test_empty_products(self):
        for q in Q_GRID:
            ctx = QContext(q, 4)
            assert ctx.qfactorial(0) == 1
            assert ctx.dbracket_factorial(0) == 1

    def test_product_oracles(self):
        ctx = QContext(Fraction(1, 3), 12)
        qf = Fraction(1)
        db = Fraction(1)
        for n in range(1, 13):
            qf *= qnumber_oracle(Fraction(1, 3), n)
            db *= Fraction(n) / qnumber_oracle(Fraction(1, 3), n)
            assert ctx.qfactorial(n) == qf
            assert ctx.dbracket_factorial(n) == db

    @given(q=q_values, n=st.integers(min_value=0, max_value=10))
    def test_cross_identity(self, q, n):
        # [[n]]! = n!/{n}!; two independent product definitions
        ctx = QContext(q, 10)
        assert ctx.dbracket_factorial(n) == factorial(n) / ctx.qfactorial(n)


class TestGammaRatio:
    def test_empty(self):
        for q in Q_GRID:
            assert QContext(q, 4).gamma_ratio(0) == 1

    def test_hand_value(self):
        assert QContext(Fraction(1, 2), 8).gamma_ratio(2) == Fraction(3, 4)

    @given(q=q_values, n=st.integers(min_value=1, max_value=10))
    def test_telescoping(self, q, n):
        ctx = QContext(q, 10)
        assert ctx.gamma_ratio(n) / ctx.gamma_ratio(n - 1) == ctx.qnumber(n) / n


def stirling_recurrence_oracle(n, k, cache={}):
    # s(n+1, k) = s(n, k-1) - n s(n, k); written independently of the library
    if (n, k) in cache:
        return cache[n, k]
    if n == 0 and k == 0:
        return 1
    if k < 0 or k > n or n == 0:
        return 0
    v = stirling_recurrence_oracle(n - 1, k - 1) - (n - 1) * stirling_recurrence_oracle(
        n - 1, k
    )
    cache[n, k] = v
    return v


class TestStirling:
    def test_leading(self):
        assert stirling_first(3, 3) == 1

    def test_cubic_by_hand(self):
        # b(b-1)(b-2) = b^3 - 3b^2 + 2b
        assert stirling_first(3, 1) == 2
        assert stirling_first(3, 2) == -3

    def test_recurrence_value(self):
        assert stirling_first(4, 2) == stirling_recurrence_oracle(4, 2) == 11

    def test_against_recurrence_oracle(self):
        for n in range(9):
            for k in range(n + 1):
                assert stirling_first(n, k) == stirling_recurrence_oracle(n, k)

    def test_falling_factorial_evaluation(self):
        # sum_k s(n,k) m^k = m(m-1)...(m-n+1) for 0 <= m, n <= 12
        for n in range(13):
            for m in range(13):
                falling = 1
                for j in range(n):
                    falling *= m - j
                total = sum(stirling_first(n, k) * m**k for k in range(n + 1))
                assert total == falling

    def test_second_kind_inverts_first(self):
        for n in range(9):
            for k in range(n + 1):
                tot = sum(
                    stirling_second(n, j) * stirling_first(j, k)
                    for j in range(k, n + 1)
                )
                assert tot == (1 if n == k else 0)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            stirling_first(3, 4)
        with pytest.raises(ValueError):
            stirling_second(2, 5)


class TestQContext:
    def test_rejects_q_one(self):
        with pytest.raises(ValueError):
            QContext(1, 4)

    def test_rejects_vanishing_qnumber(self):
        with pytest.raises(ValueError):
            QContext(-1, 4)  # {2} = 0

    def test_warns_outside_unit_interval(self):
        with pytest.warns(UserWarning):
            QContext(2, 8)

    def test_no_warning_inside(self, recwarn):
        QContext(Fraction(9, 10), 8)
        assert not recwarn.list

    def test_index_bound_enforced(self):
        ctx = QContext(Fraction(1, 2), 4)
        with pytest.raises(ValueError):
            ctx.qnumber(5)

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            rational(0.5)

    def test_everything_is_exact(self):
        ctx = QContext(Fraction(9, 10), 16)
        for n in range(17):
            for v in (ctx.qnumber(n), ctx.dbracket(n), ctx.qfactorial(n)):
                assert isinstance(v, Fraction)


class TestSerialization:
    def test_wire_format(self):
        assert str(rational("3/4")) == "3/4"
        assert str(rational("-3/4")) == "-3/4"
        assert str(rational(5)) == "5"
        assert rational("7") == 7

"""Field axioms and q-combinatorics for the exact scalar domains."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nicholsw.scalars import (
    CycScalar,
    DegenerateQBinomial,
    LevelScalar,
    PoleAtLevel,
    cyclotomic_poly,
    qbinom,
    qbinom_via_factorials,
    qfact,
    qint,
    specialize_level,
)

PS = [2, 3, 4, 5]

rationals = st.builds(
    Fraction,
    st.integers(min_value=-30, max_value=30),
    st.integers(min_value=1, max_value=12),
)


def cyc_elements(p):
    deg = len(cyclotomic_poly(2 * p)) - 1
    return st.lists(rationals, min_size=deg, max_size=deg).map(
        lambda cs: CycScalar(p, cs)
    )


def level_elements():
    poly = st.lists(rationals, min_size=1, max_size=3)
    return st.tuples(poly, poly).filter(lambda nd: any(nd[1])).map(
        lambda nd: LevelScalar(nd[0], nd[1])
    )


# ---------------------------------------------------------------------------
# cyclotomic scalars
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("p", PS)
def test_root_of_unity_defining_relations(p):
    q = CycScalar.q_power(p, 1)
    assert q**p == CycScalar.from_rational(p, -1)
    assert q ** (2 * p) == CycScalar.one(p)
    assert q * q.inverse() == CycScalar.one(p)


@pytest.mark.parametrize("p", PS)
def test_q_power_exponents_reduce_mod_2p(p):
    for e in range(-3 * p, 3 * p):
        assert CycScalar.q_power(p, e) == CycScalar.q_power(p, e % (2 * p))


@pytest.mark.parametrize("p", PS)
@settings(max_examples=40, deadline=None)
@given(st.data())
def test_cyc_field_axioms(p, data):
    x = data.draw(cyc_elements(p))
    y = data.draw(cyc_elements(p))
    z = data.draw(cyc_elements(p))
    one = CycScalar.one(p)
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z
    assert x * one == x
    if x:
        assert x * x.inverse() == one
        assert (x / x) == one


@pytest.mark.parametrize("p", PS)
@settings(max_examples=25, deadline=None)
@given(st.data())
def test_complex_embedding_is_a_homomorphism(p, data):
    x = data.draw(cyc_elements(p))
    y = data.draw(cyc_elements(p))
    assert abs((x * y).approx() - x.approx() * y.approx()) < 1e-9
    assert abs((x + y).approx() - (x.approx() + y.approx())) < 1e-9


# ---------------------------------------------------------------------------
# q-combinatorics
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("p", PS)
def test_qint_values(p):
    assert qint(0, p).is_zero()
    assert qint(1, p) == CycScalar.one(p)
    q2 = CycScalar.q_power(p, 2)
    # <n> = 1 + q^2 + ... + q^{2(n-1)}
    for n in range(8):
        s = sum((q2**i for i in range(n)), CycScalar.zero(p))
        assert qint(n, p) == s
    assert qint(p, p).is_zero()  # <p> = 0 at q = zeta_2p


@pytest.mark.parametrize("p", PS)
def test_qbinom_pascal_vs_factorial_ratio(p):
    for m in range(2 * p + 3):
        for n in range(m + 1):
            try:
                ratio = qbinom_via_factorials(m, n, p)
            except DegenerateQBinomial:
                continue
            assert qbinom(m, n, p) == ratio


@pytest.mark.parametrize("p", PS)
def test_qbinom_symmetry_and_vanishing(p):
    for m in range(2 * p + 3):
        for n in range(m + 1):
            assert qbinom(m, n, p) == qbinom(m, m - n, p)
    # <p choose n> = 0 for 0 < n < p (Gaussian binomial at a primitive root)
    for n in range(1, p):
        assert qbinom(p, n, p).is_zero()


def test_degenerate_qbinomial_raises():
    with pytest.raises(DegenerateQBinomial):
        qbinom_via_factorials(2 * 3, 3, 3)  # <3>! = 0 at p = 3


@pytest.mark.parametrize("p", PS)
def test_qbinom_against_float_oracle(p):
    # numeric Gaussian binomial in t = q^2, independent of the Pascal route
    t = complex(math.cos(2 * math.pi / p), math.sin(2 * math.pi / p))

    def num_qint(n):
        return sum(t**i for i in range(n))

    for m in range(2 * p + 1):
        for n in range(m + 1):
            num = 1 + 0j
            den = 1 + 0j
            ok = True
            for i in range(1, n + 1):
                d = num_qint(i)
                if abs(d) < 1e-9:
                    ok = False
                    break
                num *= num_qint(m - n + i)
                den *= d
            if ok:
                assert abs(qbinom(m, n, p).approx() - num / den) < 1e-8


# ---------------------------------------------------------------------------
# the rational-function field Q(k)
# ---------------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.data())
def test_level_field_axioms(data):
    x = data.draw(level_elements())
    y = data.draw(level_elements())
    z = data.draw(level_elements())
    one = LevelScalar.from_rational(1)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * one == x
    if x:
        assert x / x == one


def test_level_reduction_is_canonical():
    k = LevelScalar.k()
    a = (k + 2) * (k + 3) / ((k + 2) * (k - 1))
    b = (k + 3) / (k - 1)
    assert a == b
    # monic denominator
    c = (2 * k + 4) / (2 * k - 2)
    assert c.den[-1] == 1


def test_level_specialization():
    k = LevelScalar.k()
    x = 3 * k / (k + 2) - 1
    assert specialize_level(x, Fraction(-3, 2)) == Fraction(-10)
    with pytest.raises(PoleAtLevel):
        x.specialize(-2)


def test_level_pow_and_constants():
    k = LevelScalar.k()
    assert (k + 1) ** 2 == k * k + 2 * k + 1
    assert LevelScalar.from_rational(Fraction(3, 4)).rational_value() == Fraction(3, 4)

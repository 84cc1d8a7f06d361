from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wronskit.errors import InvalidInputError, NotMonicError
from wronskit.polyring import (
    Polynomial,
    QuasiPolynomial,
    discrete_wronskian,
    discriminant,
    mp,
    normalized_discrete_wronskian,
    quasi_wronskian,
    resultant,
    roots,
    wronskian,
)

T = Polynomial.rational([0, 1])
ONE = Polynomial.rational([1])

small_ints = st.integers(min_value=-6, max_value=6)
polys = st.lists(small_ints, min_size=1, max_size=5).map(Polynomial.rational)


def test_wronskian_small_cases():
    assert wronskian([ONE, T]) == ONE
    f = Polynomial.rational([3, -1, 2])
    assert wronskian([f, f]).is_zero()
    assert wronskian([T, T * T + ONE]) == Polynomial.rational([-1, 0, 1])


def test_wronskian_rejects_mixed_kinds():
    with pytest.raises(InvalidInputError):
        wronskian([ONE, Polynomial.complex([0, 1])])


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys, small_ints, small_ints)
def test_wronskian_is_multilinear(f, g, h, a, b):
    left = wronskian([f * a + g * b, h])
    right = wronskian([f, h]) * a + wronskian([g, h]) * b
    assert left == right


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys, small_ints, small_ints, small_ints, small_ints)
def test_wronskian_scales_by_determinant(f, g, h, a, b, c, e):
    # replacing (f, g) by (a f + b g, c f + e g) multiplies Wr by a e - b c
    new = wronskian([f * a + g * b, f * c + g * e, h])
    assert new == wronskian([f, g, h]) * (a * e - b * c)


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_wronskian_is_alternating(f, g):
    assert wronskian([f, g]) == -wronskian([g, f])


def test_discrete_wronskian_of_one_and_t():
    fs = [QuasiPolynomial(0, ONE), QuasiPolynomial(0, T)]
    h = F(1, 7)
    assert discrete_wronskian(fs, h).poly == Polynomial.rational([h])
    assert normalized_discrete_wronskian(fs, h) == ONE


def test_discrete_wronskian_matches_quasi_wronskian_for_small_h():
    a0, a1, b0, b1 = mp.mpf("0.3"), mp.mpf("-1.1"), mp.mpf("0.5"), mp.mpf("-0.7")
    fs = [
        QuasiPolynomial(b0, Polynomial.complex([-a0, 1])),
        QuasiPolynomial(b1, Polynomial.complex([-a1, 1])),
    ]
    exact = quasi_wronskian(fs).poly
    approx = normalized_discrete_wronskian(fs, mp.mpf("1e-6"))
    assert approx.distance(exact) / exact.max_abs_coeff() < 1e-4


def test_discrete_wronskian_converges_at_first_order():
    fs = [
        QuasiPolynomial(mp.mpf("0.4"), Polynomial.complex([1, 2])),
        QuasiPolynomial(mp.mpf("-0.9"), Polynomial.complex([-1, 0, 1])),
        QuasiPolynomial(0, Polynomial.complex([2, -1])),
    ]
    exact = quasi_wronskian(fs).poly
    errs = [normalized_discrete_wronskian(fs, mp.mpf(10) ** -k).distance(exact) for k in (3, 4, 5)]
    orders = [float(mp.log10(errs[i] / errs[i + 1])) for i in range(2)]
    assert min(orders) >= 0.9


def test_resultant_and_discriminant():
    assert discriminant(Polynomial.rational([-1, 0, 1])) == 4
    assert discriminant(Polynomial.rational([0, -1, 0, 1])) == 4
    a, b = F(2, 3), F(-5, 4)
    assert resultant(Polynomial.rational([-a, 1]), Polynomial.rational([-b, 1])) == a - b


def test_discriminant_needs_monic():
    with pytest.raises(NotMonicError):
        discriminant(Polynomial.rational([-1, 0, 2]))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=2, max_size=5, unique=True))
def test_discriminant_equals_root_product(rs):
    # oracle: product of squared root differences
    f = Polynomial.from_roots([F(r) for r in rs])
    expected = 1
    for i in range(len(rs)):
        for j in range(i + 1, len(rs)):
            expected *= (rs[i] - rs[j]) ** 2
    assert discriminant(f) == expected


def test_roots_simple_and_repeated():
    rs = roots(Polynomial.rational([-1, 0, 1])).sorted().values()
    assert abs(rs[0] + 1) < 1e-60 and abs(rs[1] - 1) < 1e-60
    (r, m), = roots(Polynomial.rational([4, -4, 1])).roots
    assert m == 2 and abs(r - 2) < 1e-40


def test_roots_of_t4_minus_t():
    got = roots(Polynomial.rational([0, -1, 0, 0, 1])).values()
    w = mp.exp(2j * mp.pi / 3)
    for z in [0, 1, w, mp.conj(w)]:
        assert min(abs(g - z) for g in got) < 1e-50


def test_polynomial_json_roundtrip():
    for p in (Polynomial.rational([F(1, 3), -2, 5]), Polynomial.complex([1 + 2j, 0, -3])):
        assert Polynomial.from_json(p.to_json()).distance(p) == 0


def test_from_roots_evaluates_to_zero():
    p = Polynomial.from_roots([F(1, 2), -3, 7])
    assert p(F(1, 2)) == 0 and p(-3) == 0 and p.is_monic()

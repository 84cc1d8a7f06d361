from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wronskit.errors import InvalidInputError, SingularConfigurationError
from wronskit.fourlines import (
    Line3,
    discriminant_fourlines,
    discriminant_polynomials,
    gamma,
    hyperboloid_value,
    lines_meet,
    lines_meeting_four,
    meets_hyperboloid,
    monotone_flag_instance,
    ordering_word,
    pairing_sum,
    same_line,
    secant_line,
    tangent_line,
    transversals,
    wronskian_of_line,
)
from wronskit.polyring import Polynomial, mp, roots
from wronskit.wronski_solve import inverse_wronski, is_real_space


def _line(p, q):
    return Line3(tuple(F(x) for x in p), tuple(F(x) for x in q))


def test_tangent_lines_match_displayed_parametrizations():
    assert same_line(tangent_line(0), _line((-1, 0, 0), (0, 1, 1)))
    assert same_line(tangent_line(1), _line((5, 5, 1), (1, 1, 0)))
    assert same_line(tangent_line(-1), _line((-5, 5, -1), (1, -1, 0)))


def test_curve_point():
    assert gamma(F(1)) == (5, 5, 1)
    assert gamma(F(0)) == (-1, 0, 0)


def test_three_tangent_lines_lie_on_the_hyperboloid():
    for s in (-1, 0, 1):
        line = tangent_line(s)
        assert line.exact
        meet = meets_hyperboloid(line)
        assert meet.contained and all(c == 0 for c in meet.coeffs)
        assert hyperboloid_value(line.at(F(7, 3))) == 0


def test_tangent_line_at_031_meets_twice():
    meet = meets_hyperboloid(tangent_line(F(31, 100)))
    assert not meet.contained and meet.real == [True, True]
    for p in meet.points:
        assert abs(hyperboloid_value(p)) < 1e-60


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=-20, max_value=20).filter(lambda s: min(abs(s), abs(s - 1), abs(s + 1)) > 1e-3))
def test_other_tangent_lines_meet_in_two_real_points(s):
    meet = meets_hyperboloid(tangent_line(s))
    assert meet.real == [True, True]


def test_transversals_at_031():
    sol = lines_meeting_four(F(31, 100))
    assert sol.real_count == 2 and len(sol.lines) == 2
    assert max(sol.meet_deviations) < 1e-20
    for L in sol.lines:
        for s in (-1, 0, 1, F(31, 100)):
            assert lines_meet(L, tangent_line(s))
        rs = sorted(float(mp.re(r)) for r in roots(wronskian_of_line(L).monic()).values())
        assert np.allclose(rs, [-1, 0, 0.31, 1], atol=1e-10)
    W1, W2 = (wronskian_of_line(L).monic() for L in sol.lines)
    assert W1.distance(W2) < 1e-40
    assert sol.discriminant > 0


def test_transversals_at_infinity_and_complex():
    sol = lines_meeting_four(None)
    assert sol.real_count == 2
    sol = lines_meeting_four(mp.mpc("0.3", "0.8"))
    assert sol.real_count == 0 and len(sol.lines) == 2


def test_invalid_fourth_point():
    with pytest.raises(InvalidInputError):
        lines_meeting_four(1)


def test_wronskian_of_tangent_line_has_quadruple_root():
    W = wronskian_of_line(tangent_line(0))
    assert W == Polynomial.rational([0, 0, 0, 0, -24])
    W = wronskian_of_line(tangent_line(F(1, 3)))
    assert W.monic() == Polynomial.from_roots([F(1, 3)] * 4)


def test_agreement_with_inverse_wronski(rng):
    for k in range(12):
        s4 = float(rng.normal() * 2)
        if k % 3 == 2:
            s4 = complex(rng.normal(), rng.normal())
        sol = lines_meeting_four(s4)
        fib = inverse_wronski(None, 1, 3, roots=[-1, 0, 1, s4])
        assert len(sol.lines) == len(fib.solutions) == 2
        assert sol.real_count == sum(is_real_space(s.space) for s in fib.solutions)


def test_general_transversal_solver_agrees():
    L = [tangent_line(s) for s in (-1, 0, 1, F(31, 100))]
    found = transversals(L)
    ref = lines_meeting_four(F(31, 100)).lines
    assert len(found) == 2
    for a in found:
        assert any(same_line(a.to_mp(), b.to_mp(), 1e-30) for b in ref)


def test_discriminant_values():
    assert discriminant_fourlines(F(-1), 0, 1, F(31, 100)) > 0
    assert discriminant_fourlines(Polynomial.rational([0, -1, 0, 0, 1])) == 0
    assert discriminant_fourlines(-1, 0, 1, None) == 6
    s = F(7, 5)
    assert discriminant_fourlines(-1, 0, 1, s) == 2 + 6 * s * s == pairing_sum([-1, 0, 1, s])


def test_discriminant_factorization():
    polys = discriminant_polynomials()
    assert polys.invariant == Polynomial.rational([2, 0, 6])
    s = Polynomial.rational([0, 1])
    assert polys.square_factor == 288 * (s * (s * s - 1)) ** 2


@settings(max_examples=200, deadline=None)
@given(st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=60), min_size=4, max_size=4, unique=True))
def test_discriminant_nonnegative_on_real_configurations(rs):
    assert discriminant_fourlines(*rs) >= 0


def test_monotone_examples():
    inst = monotone_flag_instance(F(3, 2), F(5, 2))
    assert inst.word == "11122" and inst.monotone and inst.real_count == 2
    inst = monotone_flag_instance(F(1, 2), F(3))
    assert inst.word == "11212" and not inst.monotone and inst.real_count == 0
    # the same ordering pattern with v near a tangency point keeps two real lines
    inst = monotone_flag_instance(F(1, 10), F(3))
    assert inst.word == "11212" and inst.real_count == 2


def test_ordering_words_wrap_around():
    assert ordering_word(-3, 3) == ("21112", True)
    assert ordering_word(F(-1, 2), F(1, 2)) == ("12121", False)


def test_monotone_sampling(rng):
    for _ in range(300):
        v, w = sorted(rng.uniform(-6, 6, 2))
        if min(abs(v - t) for t in (-1, 0, 1)) < 1e-3 or min(abs(w - t) for t in (-1, 0, 1)) < 1e-3:
            continue
        inst = monotone_flag_instance(v, w)
        if inst.monotone:
            assert inst.real_count == 2


def test_secant_needs_two_points():
    with pytest.raises(SingularConfigurationError):
        secant_line(F(2), F(2))

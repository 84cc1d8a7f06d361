import numpy as np
import pytest

from wronskit.bethe import (
    CriticalPoint,
    FundamentalOperator,
    MasterParams,
    bethe_residual,
    factorization_identity_check,
    fundamental_operator,
    kernel_polynomials,
    master_value,
    master_value_direct,
    master_value_resultant,
    orbit_sets_match,
    recover_critical,
    solve_critical,
    solve_critical_newton,
)
from wronskit.errors import HypothesesNotMetError, NearDegenerateError, SingularConfigurationError
from wronskit.grassmann import PolySpace, degree_iota
from wronskit.polyring import Polynomial, mp, wronskian

T = Polynomial.rational([0, 1])


def _random_point(rng, n, d):
    return CriticalPoint.from_levels(
        [[complex(*rng.normal(size=2)) for _ in range(i * (d - n))] for i in range(1, n + 1)]
    )


def _random_params(rng, n, d, real=True):
    N = (n + 1) * (d - n)
    s = rng.normal(size=N) if real else rng.normal(size=N) + 1j * rng.normal(size=N)
    return MasterParams(tuple(complex(v) for v in s), n, d)


def test_master_value_small_case():
    s = MasterParams((-1, 1), 1, 2)
    assert master_value(s=s, x=CriticalPoint.from_levels([[0]])) == -4
    x = CriticalPoint.from_levels([[mp.mpf("0.3")]])
    assert abs(master_value(x, s) - 4 / ((x.levels[0][0] + 1) * (x.levels[0][0] - 1))) < 1e-60


def test_master_value_routes_agree(rng):
    for k in range(100):
        n = 1 + k % 2
        d = n + 1 + (k // 2) % 3
        s, x = _random_params(rng, n, d, real=False), _random_point(rng, n, d)
        a, b = master_value_direct(x, s), master_value_resultant(x, s)
        assert abs(a - b) <= 1e-20 * abs(a)


def test_master_value_singular_configuration():
    s = MasterParams((-1, 1), 1, 2)
    with pytest.raises(SingularConfigurationError):
        master_value(CriticalPoint.from_levels([[1]]), s)


def test_residual_is_log_gradient(rng):
    for n, d in [(1, 2), (1, 3), (2, 4)]:
        s, x = _random_params(rng, n, d), _random_point(rng, n, d)
        res = bethe_residual(x, s)
        flat = x.flat()
        h = mp.mpf(10) ** -12
        for k in range(len(flat)):
            def shifted(eps):
                vals = list(flat)
                vals[k] += eps
                it = iter(vals)
                return CriticalPoint(tuple(tuple(next(it) for _ in lv) for lv in x.levels))
            fd = (mp.log(master_value(shifted(h), s)) - mp.log(master_value(shifted(-h), s))) / (2 * h)
            assert abs(fd - res[k]) < 1e-8 * max(1, abs(res[k]))


def test_residual_vanishes_at_midpoint():
    s = MasterParams((mp.mpf("-0.4"), mp.mpf("1.8")), 1, 2)
    assert abs(bethe_residual(CriticalPoint.from_levels([[mp.mpf("0.7")]]), s)[0]) < 1e-60
    assert abs(bethe_residual(CriticalPoint.from_levels([[mp.mpf("0.2")]]), s)[0]) > 0.1


def test_solve_critical_small_cases(rng):
    pts = solve_critical(MasterParams((-1, 1), 1, 2))
    assert len(pts) == 1 and abs(pts[0].levels[0][0]) < 1e-60
    for n, d in [(1, 3), (1, 4)]:
        s = _random_params(rng, n, d)
        pts = solve_critical(s)
        assert len(pts) == degree_iota(n, d)
        for x in pts:
            assert max(abs(r) for r in bethe_residual(x, s)) < 1e-25


def test_newton_route_agrees(rng):
    for n, d in [(1, 3), (2, 4)]:
        s = _random_params(rng, n, d)
        assert orbit_sets_match(solve_critical(s), solve_critical_newton(s, seed=1))


def test_near_degenerate_parameters():
    with pytest.raises(NearDegenerateError):
        solve_critical(MasterParams((0, 1e-12, 1, 2), 1, 3))


def test_fundamental_operator_small_case():
    D = fundamental_operator(CriticalPoint.from_levels([[0]]), MasterParams((-1, 1), 1, 2))
    assert D.polys[0].distance(T.to_complex()) == 0
    assert D.W.distance(Polynomial.complex([-1, 0, 1])) == 0


def test_kernel_polynomials_examples():
    P = kernel_polynomials(FundamentalOperator((T,), Polynomial.rational([-1, 0, 1])))
    assert P.distance(PolySpace.from_basis([T, Polynomial.rational([1, 0, 1])], 1, 2)) == 0
    P = kernel_polynomials(FundamentalOperator((T,), Polynomial.rational([1, 0, 1])))
    assert P.distance(PolySpace.from_basis([T, Polynomial.rational([-1, 0, 1])], 1, 2)) == 0


def test_recover_critical_examples():
    P = PolySpace.from_basis([T, Polynomial.rational([1, 0, 1])], 1, 2)
    assert recover_critical(P) == [T]
    with pytest.raises(HypothesesNotMetError):
        # f0 = t^2 is not square-free
        recover_critical(PolySpace.from_basis([T * T, Polynomial.rational([1, 0, 0, 1])], 1, 3))


def test_dictionary_round_trip(rng):
    for n, d in [(1, 3), (2, 4)]:
        s = _random_params(rng, n, d)
        for x in solve_critical(s):
            D = fundamental_operator(x, s)
            P = kernel_polynomials(D)
            assert P.monic_wronskian().distance(s.wronskian()) < 1e-20
            back = recover_critical(P)
            assert max(a.distance(b) for a, b in zip(back, x.polys())) < 1e-20
            if n == 2:
                f0, f1 = P.basis[0], P.basis[1]
                assert wronskian([f0, f1]).monic().distance(back[1]) < 1e-20


def test_first_polynomial_is_in_the_kernel(rng):
    s = _random_params(rng, 1, 3)
    for x in solve_critical(s):
        P = kernel_polynomials(fundamental_operator(x, s))
        p1 = x.polys()[0]
        # p1 is a combination of the basis: its remainder against the echelon basis vanishes
        rows = [[complex(f.coeff(k)) for k in range(4)] for f in P.basis]
        A = np.array(rows).T
        b = np.array([complex(p1.coeff(k)) for k in range(4)])
        coef, *_ = np.linalg.lstsq(A, b, rcond=None)
        assert np.abs(A @ coef - b).max() < 1e-12


def test_real_parameters_give_real_spaces_for_real_orbits(rng):
    s = _random_params(rng, 1, 4)
    for x in solve_critical(s):
        assert x.is_conjugation_stable(1e-12)
        P = kernel_polynomials(fundamental_operator(x, s))
        assert max(abs(mp.im(c)) for f in P.basis for c in f.coeffs) < 1e-20


def test_factorization_identity():
    assert factorization_identity_check(PolySpace.from_basis([T, Polynomial.rational([1, 0, 1])], 1, 2))
    assert factorization_identity_check(PolySpace.from_basis([Polynomial.rational([1]), T], 1, 1))
    P = PolySpace.from_basis(
        [Polynomial.rational([2, -1, 1]), Polynomial.rational([1, 3, 0, 1]), Polynomial.rational([0, 1, 0, 0, 1])],
        2,
        4,
    )
    assert factorization_identity_check(P)

import pytest

from wronskit.bethe import CriticalPoint, MasterParams, fundamental_operator, solve_critical
from wronskit.errors import InvalidInputError, UnsupportedInputError
from wronskit.gaudin import (
    TensorVector,
    WeightBookkeeping,
    bethe_vectors_independent,
    build_M,
    commutation_check,
    conjugate_K,
    eigen_check,
    fundamental_eigenvalues,
    gaudin_instance_checks,
    is_singular,
    real_spectrum_check,
    shapovalov_symmetry_check,
    sing_dimension,
    sl_commutation_check,
    universal_weight_vector,
)
from wronskit.polyring import mp


def _max_abs(A):
    return max(abs(x) for x in A.flat)


def test_weight_identity():
    assert WeightBookkeeping(1).top_identity_holds()
    assert WeightBookkeeping(2).top_identity_holds()


def test_free_operator_is_second_derivative():
    M = build_M([], 1)
    assert M.order == 2
    assert _max_abs(M.evaluate_hamiltonian(1, 0.7)) == 0
    assert _max_abs(M.evaluate_hamiltonian(2, 0.7)) == 0


def test_pole_orders_for_two_points():
    M = build_M([1, 3], 1)
    assert M.order == 2
    assert max(M.pole_orders(1)) <= 1 and max(M.pole_orders(0)) <= 2


def test_conjugation_formulas():
    M = build_M([mp.mpf("0.5"), mp.mpf("-1.25"), mp.mpf(2)], 1)
    K = conjugate_K(M)
    t0 = mp.mpc("0.3", "0.4")
    assert _max_abs(K.evaluate_hamiltonian(1, t0) + M.evaluate_hamiltonian(1, t0)) < 1e-60
    h = mp.mpf(10) ** -25
    dM1 = (M.evaluate_hamiltonian(1, t0 + h) - M.evaluate_hamiltonian(1, t0 - h)) / (2 * h)
    expect = M.evaluate_hamiltonian(2, t0) - dM1
    assert _max_abs(K.evaluate_hamiltonian(2, t0) - expect) < 1e-40
    KK = conjugate_K(K)
    for i in (1, 2):
        assert _max_abs(KK.evaluate_hamiltonian(i, t0) - M.evaluate_hamiltonian(i, t0)) < 1e-60


def test_singularity_examples():
    a = TensorVector.basis(1, 2, (1, 2))
    b = TensorVector.basis(1, 2, (2, 1))
    assert is_singular(a - b)
    assert not is_singular(a + b)
    assert is_singular(TensorVector.basis(1, 3, (2, 2, 2)))


def test_sing_dimension():
    assert [sing_dimension(1, m, 0) for m in (2, 4, 6)] == [1, 2, 5]
    assert sing_dimension(2, 3, 0) == 1


def test_size_cap():
    with pytest.raises(UnsupportedInputError):
        sing_dimension(3, 4, 0)


def test_two_point_bethe_vector():
    s1, s2 = mp.mpf("-0.4"), mp.mpf("1.8")
    s = MasterParams((s1, s2), 1, 2)
    x = CriticalPoint.from_levels([[(s1 + s2) / 2]])
    v = universal_weight_vector(x, s)
    terms = v.terms(1e-40)
    assert set(terms) == {(1, 2), (2, 1)}
    assert abs(terms[(1, 2)] + terms[(2, 1)]) < 1e-60
    assert abs(abs(terms[(1, 2)]) - 2 / (s2 - s1)) < 1e-60
    assert v.weight_counts(1e-40) == {(1,)}
    assert is_singular(v)
    K = conjugate_K(build_M(s.s, 1))
    rep = eigen_check(K, v, fundamental_operator(x, s), 5)
    assert rep.ok and rep.deviation < 1e-20
    assert eigen_check(K, v.scale(mp.mpc(3, -2)), fundamental_operator(x, s), 5).deviation < 1e-20


def test_four_point_instance(rng):
    s = MasterParams(tuple(float(v) for v in rng.normal(size=4)), 1, 3)
    pts = solve_critical(s)
    M = build_M(s.s, 1)
    K = conjugate_K(M)
    vs = [universal_weight_vector(x, s) for x in pts]
    assert bethe_vectors_independent(vs)[0]
    t0s = [complex(*rng.normal(size=2)) for _ in range(10)]
    for t0 in t0s:
        lams = []
        for x, v in zip(pts, vs):
            D = fundamental_operator(x, s)
            assert eigen_check(K, v, D, t0).ok
            lams.append(fundamental_eigenvalues(D, t0))
        assert max(abs(a - b) for a, b in zip(*lams)) > 1e-6
    assert commutation_check(M).ok
    assert sl_commutation_check(K).ok
    assert shapovalov_symmetry_check(K, 0.41, trials=5).ok
    assert real_spectrum_check(K, 0.41).ok


def test_shapovalov_fails_for_complex_points():
    K = conjugate_K(build_M([0, 1j], 1))
    assert not shapovalov_symmetry_check(K, 0.5, trials=3).ok


def test_pole_is_rejected():
    K = conjugate_K(build_M([0, 1], 1))
    with pytest.raises(InvalidInputError):
        shapovalov_symmetry_check(K, 1)


def test_instance_checks_all_pass():
    rep = gaudin_instance_checks(1, 2, [-1, 1])
    assert rep.ok and rep.orbits == rep.expected == 1
    rep = gaudin_instance_checks(1, 3, [-1.5, -0.2, 0.7, 2.0])
    assert rep.ok and rep.orbits == 2
    names = {c.name for c in rep.checks}
    assert {"commute", "eigen", "shapovalov", "real-spectrum", "sing-dimension"} <= names

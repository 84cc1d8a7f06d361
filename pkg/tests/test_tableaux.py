import math
import random
from fractions import Fraction as F

import pytest

from wronskit.errors import InvalidInputError, NonGenericPathError
from wronskit.tableaux import (
    SignedTableau,
    SlideEvent,
    SlidePath,
    Tableau,
    catalan_nets,
    dual_equivalent,
    enumerate_syt,
    jeu_de_taquin_slide,
    knuth_equivalent,
    ord_tableau,
    partitions_inside,
    rectangle,
    row_reading_tableau,
    sigma_sign,
    signed_from_ord,
    slide_path,
    slide_trace,
    switch,
    syt_count,
)


def _partitions_up_to(size):
    out = [()]
    def rec(rem, bound, acc):
        for x in range(1, min(rem, bound) + 1):
            out.append(tuple(acc + [x]))
            rec(rem - x, x, acc + [x])
    rec(size, size, [])
    return out


def _skew_shapes(max_outer, max_cells):
    for lam in _partitions_up_to(max_outer):
        for mu in partitions_inside(lam):
            k = sum(lam) - sum(mu)
            if 1 <= k <= max_cells:
                yield lam, mu


# ---------------------------------------------------------------------------
# enumeration and ord


def test_enumerate_two_by_two():
    got = {tuple(map(tuple, T.rows())) for T in enumerate_syt((2, 2))}
    assert got == {((1, 2), (3, 4)), ((1, 3), (2, 4))}


def test_single_row_has_one_tableau():
    assert len(enumerate_syt((5,))) == 1


def test_skew_331_over_1_fillings():
    tabs = set(enumerate_syt((3, 3, 1), (1,)))
    first = Tableau.from_rows([[None, 1, 3], [2, 5, 6], [4]], inner=(1,))
    second = Tableau.from_rows([[None, 2, 4], [1, 3, 5], [6]], inner=(1,))
    assert first in tabs and second in tabs
    with pytest.raises(InvalidInputError):
        Tableau.from_rows([[None, 2, 6], [5, 4, 3], [1]], inner=(1,))


def test_ord_of_signed_331_over_1():
    S = SignedTableau.from_rows(
        [[None, math.sqrt(2), 4], [math.e, -8, math.pi**2], [-6]], inner=(1,)
    )
    assert ord_tableau(S) == Tableau.from_rows([[None, 1, 3], [2, 5, 6], [4]], inner=(1,))


def test_ord_of_increasing_positive_row_is_identity():
    S = SignedTableau.from_rows([[F(1, 2), 1, 3, 7]])
    assert ord_tableau(S).rows() == [[1, 2, 3, 4]]


def test_signed_tableau_rejects_equal_absolute_values():
    with pytest.raises(InvalidInputError):
        SignedTableau.from_rows([[1, -1]])


def test_signed_from_ord_inverts_ord(rng):
    for T in enumerate_syt((3, 2, 1)):
        vals = [float(v) for v in rng.permutation(6) + 1]
        vals = [v if rng.random() < 0.5 else -v for v in vals]
        assert ord_tableau(signed_from_ord(T, vals)) == T


# ---------------------------------------------------------------------------
# slides


def _slide_442_path():
    start = [0, -1, -2, -3, -4, -5, -6, -7, -8, -9]
    return SlidePath.linear([start, [10] + start[1:]])


def test_slide_442_example():
    T0 = SignedTableau.from_rows([[0, -1, -3, -8], [-2, -4, -6, -9], [-5, -7]])
    path = _slide_442_path()
    trace = slide_trace(T0, path)
    # one move per displayed step: tau = 1, 3, 6, 9 in units of the path length 10
    assert [t * 10 for t, _ in trace] == [1, 3, 6, 9]
    label_value = dict(enumerate(path.start))
    tau_cells = [next(c for c, lab in cells.items() if lab == 0) for _, cells in trace]
    assert tau_cells == [(0, 1), (0, 2), (1, 2), (1, 3)]
    shown = [
        [[-1, "t", -3, -8], [-2, -4, -6, -9], [-5, -7]],
        [[-1, -3, "t", -8], [-2, -4, -6, -9], [-5, -7]],
        [[-1, -3, -6, -8], [-2, -4, "t", -9], [-5, -7]],
        [[-1, -3, -6, -8], [-2, -4, -9, "t"], [-5, -7]],
    ]
    for (_, cells), rows in zip(trace, shown):
        for r, row in enumerate(rows):
            for c, v in enumerate(row):
                got = label_value[cells[(r, c)]]
                assert (cells[(r, c)] == 0) if v == "t" else (got == v)
    T10 = slide_path(T0, path)
    assert T10.rows() == [[-1, -3, -6, -8], [-2, -4, -9, 10], [-5, -7]]
    assert ord_tableau(T10).rows() == [[1, 3, 6, 8], [2, 4, 9, 10], [5, 7]]
    assert ord_tableau(T0).rows() == [[1, 2, 4, 9], [3, 5, 7, 10], [6, 8]]


def test_empty_path_leaves_tableau():
    S = signed_from_ord(row_reading_tableau((3, 1)), [1, -2, 3, -4])
    assert slide_path(S, SlidePath.constant(S.values())) == S


def test_simultaneous_crossings_are_rejected():
    with pytest.raises(NonGenericPathError):
        SlidePath.linear([[1, -2, -3, 4], [3, -2, -1, 4]])


def test_events_must_be_adjacent_swaps():
    with pytest.raises(NonGenericPathError):
        SlidePath((1, 2, 3), (3, 2, 1), (SlideEvent(0, 0, 2),))


def _random_path(k, rng):
    """Piecewise linear path that keeps the real order of labels, crossing s_i = -s_j freely."""
    for _ in range(200):
        way = []
        for _ in range(rng.randint(2, 3)):
            vals = sorted(F(rng.randint(-400, 400), 7) for _ in range(k))
            if len(set(vals)) < k or len({abs(v) for v in vals}) < k or 0 in vals:
                break
            way.append(vals)
        else:
            try:
                return SlidePath.linear(way)
            except NonGenericPathError:
                continue
    raise AssertionError("no generic path found")


def test_slides_are_bijections_on_small_shapes():
    rng = random.Random(7)
    shapes = 0
    for lam, mu in _skew_shapes(8, 6):
        tabs = enumerate_syt(lam, mu)
        k = sum(lam) - sum(mu)
        for _ in range(2):
            path = _random_path(k, rng)
            back = path.reversed()
            images = set()
            for T in tabs:
                S = signed_from_ord(T, path.start)
                moved = slide_path(S, path)
                images.add(ord_tableau(moved))
                assert slide_path(moved, back) == S
            assert len(images) == len(tabs)
        shapes += 1
    assert shapes > 200


# ---------------------------------------------------------------------------
# switching


def _jdt_oracle(T, U):
    """Slide U into T's cells from the largest entry of T to the smallest."""
    for c, _ in sorted(T.items(), key=lambda cv: -cv[1]):
        U = jeu_de_taquin_slide(U, c)
    return U


def _switch_cases(max_cells):
    for lam, nu in _skew_shapes(max_cells, max_cells):
        for mu in partitions_inside(lam):
            if all(nu[i] <= (mu[i] if i < len(mu) else 0) for i in range(len(nu))) and mu != nu and mu != lam:
                for T in enumerate_syt(mu, nu):
                    for U in enumerate_syt(lam, mu):
                        yield T, U


def test_switch_is_an_involution_and_path_independent():
    cases = 0
    for T, U in _switch_cases(6):
        U2, T2 = switch(T, U)
        assert switch(U2, T2) == (T, U)
        assert switch(T, U, path_index=1, seed=3) == (U2, T2)
        assert switch(T, U, path_index=2, seed=11) == (U2, T2)
        assert U2 == _jdt_oracle(T, U)
        cases += 1
    assert cases > 500


def test_switch_with_empty_inner_tableau():
    U = row_reading_tableau((2, 1))
    moved, rest = switch(Tableau((), (), {}), U)
    assert moved == U and rest.size == 0


def test_switch_single_box_is_a_jeu_de_taquin_slide():
    U = Tableau.from_rows([[None, 1, 3], [2, 4]], inner=(1,))
    T = Tableau.from_rows([[1]])
    moved, _ = switch(T, U)
    assert moved == jeu_de_taquin_slide(U, (0, 0))
    assert moved.rows() == [[1, 3], [2, 4]]


# ---------------------------------------------------------------------------
# equivalences, counts and signs


def test_equivalences_on_two_by_two():
    A, B = enumerate_syt((2, 2))
    assert knuth_equivalent(A, A) and dual_equivalent(A, A)
    assert dual_equivalent(A, B)
    assert not knuth_equivalent(A, B)


def test_knuth_equivalence_of_skew_tableaux_rectifying_together():
    U1 = Tableau.from_rows([[None, 1], [2]], inner=(1,))
    U2 = Tableau.from_rows([[None, 2], [1]], inner=(1,))
    assert knuth_equivalent(U1, U1)
    assert not knuth_equivalent(U1, U2)
    # they rectify to a column and a row respectively
    assert not dual_equivalent(U1, U2)


def test_catalan_nets():
    assert [catalan_nets(d) for d in (2, 3, 4)] == [1, 2, 5]


def test_sigma_signs():
    T0 = row_reading_tableau((2, 2))
    A, B = enumerate_syt((2, 2))
    other = B if A == T0 else A
    assert sigma_sign(T0, T0) == 1 and sigma_sign(other, T0) == -1
    shape = rectangle(2, 3)
    T0 = row_reading_tableau(shape)
    signs = sorted(sigma_sign(T, T0) for T in enumerate_syt(shape))
    assert signs == [-1, -1, 1, 1, 1] and sum(signs) == 1


def test_syt_count_matches_enumeration():
    for lam, mu in _skew_shapes(7, 6):
        assert syt_count(lam, mu) == len(enumerate_syt(lam, mu))

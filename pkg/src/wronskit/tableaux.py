"""Standard Young tableaux, signed tableaux, and sliding entries along paths.

Shapes are pairs ``(outer, inner)`` of partitions written as tuples of row
lengths. Cells are ``(row, col)`` with row 0 on top.

A signed tableau holds real entries (or ``math.inf``) that increase along rows
and columns once replaced by their absolute values. Moving the entries along a
path of real values only changes the tableau when two entries pass through
equal absolute values: adjacent entries in a row or column trade places, any
other pair stays put.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Sequence

from .errors import (
    EnumerationCapError,
    InvalidInputError,
    NonGenericPathError,
)

ENUMERATION_CAP = 20
EQUIVALENCE_CAP = 8

Shape = tuple  # weakly decreasing row lengths


def _norm_partition(p: Iterable[int]) -> tuple:
    p = tuple(int(x) for x in p)
    if any(x < 0 for x in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise InvalidInputError(f"not a partition: {p}")
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _norm_shape(outer, inner=()) -> tuple[tuple, tuple]:
    outer = _norm_partition(outer)
    inner = _norm_partition(inner)
    if len(inner) > len(outer) or any(inner[i] > outer[i] for i in range(len(inner))):
        raise InvalidInputError(f"inner shape {inner} does not fit inside {outer}")
    return outer, inner


def _row_len(p: tuple, r: int) -> int:
    return p[r] if r < len(p) else 0


def skew_cells(outer, inner=()) -> list[tuple[int, int]]:
    outer, inner = _norm_shape(outer, inner)
    return [(r, c) for r in range(len(outer)) for c in range(_row_len(inner, r), outer[r])]


def conjugate(p: Sequence[int]) -> tuple:
    p = _norm_partition(p)
    return tuple(sum(1 for x in p if x > c) for c in range(p[0] if p else 0))


# ---------------------------------------------------------------------------
# tableaux


class _Filling:
    """Shared machinery for integer and signed fillings of a skew shape."""

    __slots__ = ("outer", "inner", "_entries")

    def __init__(self, outer, inner, entries: dict):
        self.outer, self.inner = _norm_shape(outer, inner)
        cells = skew_cells(self.outer, self.inner)
        if set(entries) != set(cells):
            raise InvalidInputError("entries do not fill the skew shape exactly")
        self._entries = dict(entries)

    @property
    def shape(self) -> tuple[tuple, tuple]:
        return self.outer, self.inner

    @property
    def size(self) -> int:
        return len(self._entries)

    def cells(self) -> list[tuple[int, int]]:
        return skew_cells(self.outer, self.inner)

    def __getitem__(self, cell):
        return self._entries[cell]

    def items(self):
        return [(c, self._entries[c]) for c in self.cells()]

    def entries(self) -> dict:
        return dict(self._entries)

    def cell_of(self, value):
        for c, v in self._entries.items():
            if v == value:
                return c
        raise KeyError(value)

    def rows(self) -> list[list]:
        out = []
        for r in range(len(self.outer)):
            out.append([self._entries.get((r, c)) for c in range(self.outer[r])])
        return out

    def reading_word(self) -> tuple:
        return tuple(self._entries[c] for c in self.cells())

    def to_json(self) -> list[list]:
        return self.rows()

    def __eq__(self, other) -> bool:
        return (
            type(self) is type(other)
            and self.shape == other.shape
            and self._entries == other._entries
        )

    def __hash__(self) -> int:
        return hash((self.shape, tuple(sorted(self._entries.items()))))

    def __repr__(self) -> str:
        body = "/".join(
            ",".join("." if v is None else str(v) for v in row) for row in self.rows()
        )
        return f"{type(self).__name__}({body})"

    def _check_increasing(self, key) -> bool:
        for (r, c), v in self._entries.items():
            right = self._entries.get((r, c + 1))
            if right is not None and not key(v) < key(right):
                return False
            below = self._entries.get((r + 1, c))
            if below is not None and not key(v) < key(below):
                return False
        return True


class Tableau(_Filling):
    """A standard filling of a skew shape by 1..size."""

    __slots__ = ()

    def __init__(self, outer, inner, entries: dict):
        super().__init__(outer, inner, entries)
        if sorted(self._entries.values()) != list(range(1, self.size + 1)):
            raise InvalidInputError("entries must be 1..size, each once")
        if not self._check_increasing(lambda v: v):
            raise InvalidInputError("entries must increase along rows and columns")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], inner: Sequence[int] = ()) -> "Tableau":
        """Build from row lists; inner cells may be given as None or omitted."""
        inner = _norm_partition(inner)
        entries = {}
        outer = []
        for r, row in enumerate(rows):
            off = _row_len(inner, r)
            vals = list(row)
            if len(vals) and vals[0] is None:
                vals = vals[off:] if all(v is None for v in vals[:off]) else vals
            for k, v in enumerate(vals):
                entries[(r, off + k)] = v
            outer.append(off + len(vals))
        return cls(outer, inner, entries)

    @classmethod
    def from_json(cls, rows, inner=()) -> "Tableau":
        return cls.from_rows(rows, inner)


def _abs_key(v):
    return math.inf if v == math.inf or v == -math.inf else abs(v)


class SignedTableau(_Filling):
    """A filling by distinct reals whose absolute values increase along rows and columns."""

    __slots__ = ()

    def __init__(self, outer, inner, entries: dict):
        super().__init__(outer, inner, entries)
        vals = list(self._entries.values())
        keys = [_abs_key(v) for v in vals]
        if len(set(keys)) != len(keys):
            raise InvalidInputError("entries must have distinct absolute values")
        if 0 in vals and self.inner:
            raise InvalidInputError("0 may be an entry only for straight shapes")
        if not self._check_increasing(_abs_key):
            raise InvalidInputError("absolute values must increase along rows and columns")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], inner: Sequence[int] = ()) -> "SignedTableau":
        inner = _norm_partition(inner)
        entries = {}
        outer = []
        for r, row in enumerate(rows):
            off = _row_len(inner, r)
            vals = list(row)
            if vals and vals[0] is None:
                vals = vals[off:]
            for k, v in enumerate(vals):
                entries[(r, off + k)] = v
            outer.append(off + len(vals))
        return cls(outer, inner, entries)

    def values(self) -> list:
        return list(self._entries.values())


def ord_tableau(T: SignedTableau) -> Tableau:
    """Replace the entry with the k-th smallest absolute value by k."""
    ranked = sorted(T.values(), key=_abs_key)
    rank = {v: k + 1 for k, v in enumerate(ranked)}
    return Tableau(T.outer, T.inner, {c: rank[v] for c, v in T.items()})


# ``ord`` would shadow the builtin inside this module, so it is exported separately.
ord_ = ord_tableau


# ---------------------------------------------------------------------------
# enumeration and counting


def _removable_corners(outer: tuple, inner: tuple) -> list[tuple[int, int]]:
    out = []
    for r in range(len(outer)):
        c = outer[r] - 1
        if c < _row_len(inner, r):
            continue
        if _row_len(outer, r + 1) <= c:
            out.append((r, c))
    return out


def _remove(outer: tuple, r: int) -> tuple:
    p = list(outer)
    p[r] -= 1
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def enumerate_syt(outer, inner=(), cap: int = ENUMERATION_CAP) -> list[Tableau]:
    """All standard tableaux of shape outer/inner, sorted by row-reading word."""
    outer, inner = _norm_shape(outer, inner)
    n = sum(outer) - sum(inner)
    if n > cap:
        raise EnumerationCapError(f"shape has {n} boxes, cap is {cap}")
    results: list[dict] = []

    def rec(cur: tuple, k: int, acc: dict):
        if k == 0:
            results.append(dict(acc))
            return
        for r, c in _removable_corners(cur, inner):
            acc[(r, c)] = k
            rec(_remove(cur, r), k - 1, acc)
            del acc[(r, c)]

    rec(outer, n, {})
    tabs = [Tableau(outer, inner, e) for e in results]
    tabs.sort(key=lambda t: t.reading_word())
    return tabs


def hook_length_count(shape) -> int:
    shape = _norm_partition(shape)
    conj = conjugate(shape)
    n = sum(shape)
    prod = 1
    for r, row in enumerate(shape):
        for c in range(row):
            prod *= (row - c - 1) + (conj[c] - r - 1) + 1
    return factorial(n) // prod


def syt_count(outer, inner=()) -> int:
    """Number of standard tableaux: hook lengths for straight shapes, corner recursion otherwise."""
    outer, inner = _norm_shape(outer, inner)
    if not inner:
        return hook_length_count(outer)
    return _skew_count(outer, inner)


@lru_cache(maxsize=None)
def _skew_count(outer: tuple, inner: tuple) -> int:
    if outer == inner:
        return 1
    return sum(_skew_count(_remove(outer, r), inner) for r, _ in _removable_corners(outer, inner))


def rectangle(rows: int, cols: int) -> tuple:
    return tuple([cols] * rows)


def row_reading_tableau(outer, inner=()) -> Tableau:
    """Fill the shape with 1, 2, ... along rows, top to bottom."""
    cells = skew_cells(outer, inner)
    return Tableau(outer, inner, {c: k + 1 for k, c in enumerate(cells)})


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given as a sequence of images of 0..n-1."""
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sigma_sign(T: Tableau, T0: Tableau) -> int:
    """Sign of the permutation i -> j where i in T0 and j in T share a cell."""
    if T.shape != T0.shape:
        raise InvalidInputError("tableaux must have the same shape")
    perm = [0] * T.size
    for c in T.cells():
        perm[T0[c] - 1] = T[c] - 1
    return permutation_sign(perm)


def catalan_nets(d: int) -> int:
    if d < 1:
        raise InvalidInputError("d must be at least 1")
    return comb(2 * d - 2, d - 1) // d


# ---------------------------------------------------------------------------
# slide paths


@dataclass(frozen=True)
class SlideEvent:
    time: object
    i: int
    j: int


@dataclass(frozen=True)
class SlidePath:
    """Entries labelled 0..k-1 move from ``start`` to ``end`` values.

    ``events`` lists, in time order, the moments where two labels have equal
    absolute value (s_i = -s_j). Only these events and the endpoint values
    influence a slide.
    """

    start: tuple
    end: tuple
    events: tuple = ()

    def __post_init__(self):
        if len(self.start) != len(self.end):
            raise InvalidInputError("start and end must have the same length")
        _check_conditions(self.start)
        _check_conditions(self.end)
        times = [e.time for e in self.events]
        if any(times[k] > times[k + 1] for k in range(len(times) - 1)):
            raise InvalidInputError("events must be sorted by time")
        if len(set(times)) != len(times):
            raise NonGenericPathError("two crossings happen at the same moment")
        # the absolute-value order must change exactly by the listed adjacent swaps
        order = sorted(range(len(self.start)), key=lambda k: _abs_key(self.start[k]))
        for e in self.events:
            pos = {lab: p for p, lab in enumerate(order)}
            pi, pj = pos[e.i], pos[e.j]
            if abs(pi - pj) != 1:
                raise NonGenericPathError(
                    f"labels {e.i},{e.j} are not adjacent in absolute value when they cross"
                )
            order[pi], order[pj] = order[pj], order[pi]
        final = sorted(range(len(self.end)), key=lambda k: _abs_key(self.end[k]))
        if order != final:
            raise InvalidInputError("events are inconsistent with the endpoint values")

    @classmethod
    def constant(cls, values: Sequence) -> "SlidePath":
        return cls(tuple(values), tuple(values), ())

    @classmethod
    def linear(cls, waypoints: Sequence[Sequence]) -> "SlidePath":
        """Piecewise linear motion through the given value lists.

        Values should be exact (int or Fraction) so that simultaneous
        crossings are detected reliably.
        """
        pts = [tuple(Fraction(v) for v in w) for w in waypoints]
        if len(pts) < 1:
            raise InvalidInputError("need at least one waypoint")
        k = len(pts[0])
        events: list[SlideEvent] = []
        for seg, (a, b) in enumerate(zip(pts, pts[1:])):
            seg_events = []
            for i in range(k):
                for j in range(i + 1, k):
                    # collision s_i = s_j on the segment is forbidden
                    da, db = a[i] - a[j], b[i] - b[j]
                    if da == 0 or db == 0 or (da < 0) != (db < 0):
                        raise NonGenericPathError(f"labels {i},{j} collide on segment {seg}")
                    # crossing s_i + s_j = 0
                    sa, sb = a[i] + a[j], b[i] + b[j]
                    if sa == 0 and sb == 0:
                        raise NonGenericPathError(f"labels {i},{j} stay opposite on segment {seg}")
                    if sa == 0 or sb == 0:
                        raise NonGenericPathError("a waypoint sits on a crossing")
                    if (sa < 0) != (sb < 0):
                        seg_events.append((seg + sa / (sa - sb), i, j))
            seg_events.sort()
            events.extend(SlideEvent(t, i, j) for t, i, j in seg_events)
        return cls(pts[0], pts[-1], tuple(events))

    @classmethod
    def on_circle(cls, waypoints: Sequence[Sequence]) -> "SlidePath":
        """Piecewise linear motion of angles q on RP^1, where the value is tan(pi q / 2).

        Angles are in units of pi and should be exact. Label i crosses label j
        (s_i = -s_j) when q_i + q_j passes an even integer and collides with it
        when q_i - q_j is an even integer. A value passes through infinity at
        odd q without any event.
        """
        pts = [tuple(Fraction(v) for v in w) for w in waypoints]
        if not pts:
            raise InvalidInputError("need at least one waypoint")
        k = len(pts[0])
        events: list[tuple] = []
        for seg, (a, b) in enumerate(zip(pts, pts[1:])):
            for i in range(k):
                for j in range(i + 1, k):
                    da, db = a[i] - a[j], b[i] - b[j]
                    if _even_between(da, db, closed=True):
                        raise NonGenericPathError(f"labels {i},{j} collide on segment {seg}")
                    sa, sb = a[i] + a[j], b[i] + b[j]
                    if sa % 2 == 0 or sb % 2 == 0:
                        raise NonGenericPathError("a waypoint sits on a crossing")
                    lo, hi = sorted((sa, sb))
                    e = math.ceil(lo / 2) * 2
                    while e < hi:
                        events.append((seg + (e - sa) / (sb - sa), i, j))
                        e += 2
        events.sort()
        return cls(
            tuple(_tan_half(q) for q in pts[0]),
            tuple(_tan_half(q) for q in pts[-1]),
            tuple(SlideEvent(t, i, j) for t, i, j in events),
        )

    def reversed(self) -> "SlidePath":
        if not self.events:
            return SlidePath(self.end, self.start, ())
        last = max(e.time for e in self.events)
        evs = tuple(SlideEvent(last - e.time, e.i, e.j) for e in reversed(self.events))
        return SlidePath(self.end, self.start, evs)

    def then(self, other: "SlidePath") -> "SlidePath":
        if tuple(other.start) != tuple(self.end):
            raise InvalidInputError("paths do not connect")
        offset = (max((e.time for e in self.events), default=0)) + 1
        evs = self.events + tuple(SlideEvent(offset + e.time, e.i, e.j) for e in other.events)
        return SlidePath(self.start, other.end, evs)


def _even_between(a: Fraction, b: Fraction, closed: bool) -> bool:
    lo, hi = sorted((a, b))
    e = math.ceil(lo / 2) * 2
    return e <= hi if closed else e < hi


def _tan_half(q: Fraction) -> float:
    """tan(pi q / 2) with exact handling of 0 and infinity."""
    r = q % 2
    if r == 0:
        return 0.0
    if r == 1:
        return math.inf
    return math.tan(math.pi * float(r) / 2)


def signed_from_ord(T: Tableau, values: Sequence) -> SignedTableau:
    """The signed tableau whose k-th smallest absolute value sits where T has k."""
    ranked = sorted(values, key=_abs_key)
    if len(ranked) != T.size:
        raise InvalidInputError("need one value per cell")
    return SignedTableau(T.outer, T.inner, {c: ranked[v - 1] for c, v in T.items()})


def _check_conditions(values: Sequence) -> None:
    keys = [_abs_key(v) for v in values]
    if len(set(keys)) != len(keys):
        raise InvalidInputError("values must have distinct absolute values")


def slide_path(T: SignedTableau, path: SlidePath) -> SignedTableau:
    """Carry T along the path, swapping adjacent entries at same-line crossings."""
    if sorted(map(_abs_key, T.values())) != sorted(map(_abs_key, path.start)) or set(
        T.values()
    ) != set(path.start):
        raise InvalidInputError("tableau entries differ from the path's start values")
    label_of = {v: k for k, v in enumerate(path.start)}
    cell_label = {c: label_of[v] for c, v in T.items()}
    label_cell = {lab: c for c, lab in cell_label.items()}
    for e in path.events:
        ci, cj = label_cell[e.i], label_cell[e.j]
        if ci[0] == cj[0] or ci[1] == cj[1]:
            if abs(ci[0] - cj[0]) + abs(ci[1] - cj[1]) != 1:
                raise InvalidInputError("same-line crossing between non-adjacent cells")
            label_cell[e.i], label_cell[e.j] = cj, ci
    entries = {c: path.end[lab] for lab, c in label_cell.items()}
    return SignedTableau(T.outer, T.inner, entries)


def slide_trace(T: SignedTableau, path: SlidePath) -> list[tuple[object, SignedTableau]]:
    """Tableaux after each event that moves entries (values frozen at the start)."""
    out = []
    label_of = {v: k for k, v in enumerate(path.start)}
    label_cell = {label_of[v]: c for c, v in T.items()}
    for e in path.events:
        ci, cj = label_cell[e.i], label_cell[e.j]
        if ci[0] == cj[0] or ci[1] == cj[1]:
            label_cell[e.i], label_cell[e.j] = cj, ci
            out.append((e.time, {c: lab for lab, c in label_cell.items()}))
    return out


# ---------------------------------------------------------------------------
# switching


def _union_shape(inner_tab: Tableau, outer_tab: Tableau) -> tuple[tuple, tuple]:
    if inner_tab.outer != outer_tab.inner:
        raise InvalidInputError("the inner tableau must fill exactly the inner shape of the outer one")
    return outer_tab.outer, inner_tab.inner


def _shape_from_rows(base: tuple, cells: Iterable[tuple[int, int]]) -> tuple:
    """The partition obtained by adding ``cells`` to the right of ``base`` row by row."""
    counts: dict[int, int] = {}
    for r, _ in cells:
        counts[r] = counts.get(r, 0) + 1
    rows = max([len(base)] + [r + 1 for r in counts])
    return _norm_partition(_row_len(base, r) + counts.get(r, 0) for r in range(rows))


def switching_paths(k_inner: int, k_outer: int, count: int = 3, seed: int = 0) -> list[SlidePath]:
    """Distinct generic paths moving k_inner small positive entries past k_outer negative ones.

    Label i < k_inner starts at i + 1; label k_inner + j starts at
    -(k_inner + 1 + j). The positive entries end above every absolute value
    of the negative ones and keep their relative order.
    """
    top = k_inner + k_outer
    start = [Fraction(i + 1) for i in range(k_inner)] + [
        -Fraction(k_inner + 1 + j) for j in range(k_outer)
    ]
    # one at a time, largest first
    pts = [list(start)]
    for i in reversed(range(k_inner)):
        cur = list(pts[-1])
        cur[i] = Fraction(top + 1 + i)
        pts.append(cur)
    paths = [SlidePath.linear(pts)]
    rng = random.Random(seed)
    for _ in range(50 * count):
        if len(paths) >= count:
            break
        end = list(start)
        end[:k_inner] = sorted(
            Fraction(top + 1 + i) + Fraction(rng.randint(1, 997), 1000) for i in range(k_inner)
        )
        way = [start]
        if rng.random() < 0.5:
            mid = list(start)
            mid[:k_inner] = sorted(
                start[i] + (end[i] - start[i]) * Fraction(rng.randint(1, 999), 1000)
                for i in range(k_inner)
            )
            way.append(mid)
        way.append(end)
        try:
            p = SlidePath.linear(way)
        except (NonGenericPathError, InvalidInputError):
            continue
        if all(p.events != q.events for q in paths):
            paths.append(p)
    return paths


def switch(T: Tableau, U: Tableau, path_index: int = 0, seed: int = 0) -> tuple[Tableau, Tableau]:
    """Switch an inner tableau T (shape mu/nu) with an outer tableau U (shape lam/mu).

    Returns (U', T'): U' is U moved inward so that it starts at nu, T' is T
    moved to the outside and ends at lam. Realised by sliding T's entries past
    U's along a concrete generic path; ``path_index`` picks one of the paths
    from :func:`switching_paths`, and the result does not depend on it.
    """
    if T.size == 0 or U.size == 0:
        if T.size == 0 and T.outer and T.outer != U.inner:
            raise InvalidInputError("incompatible shapes")
        if T.size == 0:
            return U, Tableau(U.outer, U.outer, {})
        return Tableau(T.inner, T.inner, {}), T
    outer, inner = _union_shape(T, U)
    kt, ku = T.size, U.size
    paths = switching_paths(kt, ku, count=path_index + 1, seed=seed)
    path = paths[min(path_index, len(paths) - 1)]
    values = {c: path.start[v - 1] for c, v in T.items()}
    values.update({c: path.start[kt + v - 1] for c, v in U.items()})
    moved = slide_path(SignedTableau(outer, inner, values), path)
    t_end = {path.end[i]: i + 1 for i in range(kt)}
    u_end = {path.end[kt + j]: j + 1 for j in range(ku)}
    u_cells = {c: u_end[v] for c, v in moved.items() if v in u_end}
    t_cells = {c: t_end[v] for c, v in moved.items() if v in t_end}
    mid = _shape_from_rows(inner, u_cells)
    return Tableau(mid, inner, u_cells), Tableau(outer, mid, t_cells)


def jeu_de_taquin_slide(U: Tableau, cell: tuple[int, int]) -> Tableau:
    """Classical forward slide of U into the inner corner ``cell``.

    Written directly from the hole-moving rule, as an oracle for :func:`switch`.
    """
    entries = U.entries()
    hole = cell
    while True:
        r, c = hole
        right = entries.get((r, c + 1))
        below = entries.get((r + 1, c))
        if right is None and below is None:
            break
        if below is None or (right is not None and right < below):
            entries[hole] = entries.pop((r, c + 1))
            hole = (r, c + 1)
        else:
            entries[hole] = entries.pop((r + 1, c))
            hole = (r + 1, c)
    inner = list(U.inner)
    inner[cell[0]] -= 1
    outer = list(U.outer)
    outer[hole[0]] -= 1
    return Tableau(outer, inner, entries)


# ---------------------------------------------------------------------------
# equivalences (definition-based brute force)


def partitions_inside(p: tuple) -> list[tuple]:
    p = _norm_partition(p)
    out = []

    def rec(r: int, bound: int, acc: list):
        if r == len(p):
            out.append(_norm_partition(acc))
            return
        for x in range(min(bound, p[r]) + 1):
            rec(r + 1, x, acc + [x])

    rec(0, p[0] if p else 0, [])
    return sorted(set(out))


def partitions_containing(p: tuple, extra: int) -> list[tuple]:
    """Partitions kappa containing p with |kappa| - |p| <= extra."""
    p = _norm_partition(p)
    found = {p}
    frontier = {p}
    for _ in range(extra):
        nxt = set()
        for q in frontier:
            for r in range(len(q) + 1):
                cur = _row_len(q, r)
                if r == 0 or _row_len(q, r - 1) > cur:
                    lst = list(q) + ([0] if r == len(q) else [])
                    lst[r] += 1
                    nxt.add(tuple(lst))
        found |= nxt
        frontier = nxt
    return sorted(found)


def _check_cap(U: Tableau, cap: int) -> None:
    if sum(U.outer) > cap:
        raise EnumerationCapError(f"shape has more than {cap} boxes")


def knuth_equivalent(U1: Tableau, U2: Tableau, cap: int = EQUIVALENCE_CAP) -> bool:
    """Equal results of sliding every pair of straight inner tableaux through U1 and U2."""
    if U1.shape != U2.shape:
        raise InvalidInputError("tableaux must have the same shape")
    _check_cap(U1, cap)
    mu = U1.inner
    inner_tabs = enumerate_syt(mu) if mu else [Tableau((), (), {})]
    results1 = {switch(T, U1)[0] for T in inner_tabs}
    results2 = {switch(T, U2)[0] for T in inner_tabs}
    return len(results1) == 1 and results1 == results2


def dual_equivalent(U1: Tableau, U2: Tableau, cap: int = EQUIVALENCE_CAP) -> bool:
    """Same shapes after every inner slide and every outer slide.

    Outer shapes kappa are limited to |kappa/lambda| <= |U|.
    """
    if U1.shape != U2.shape:
        raise InvalidInputError("tableaux must have the same shape")
    _check_cap(U1, cap)
    lam, mu = U1.outer, U1.inner
    for nu in partitions_inside(mu):
        if nu == mu:
            continue
        for T in enumerate_syt(mu, nu):
            a, b = switch(T, U1)[0], switch(T, U2)[0]
            if a.shape != b.shape:
                return False
    for kappa in partitions_containing(lam, U1.size):
        if kappa == lam:
            continue
        for Tp in enumerate_syt(kappa, lam):
            a, b = switch(U1, Tp)[1], switch(U2, Tp)[1]
            if a.shape != b.shape:
                return False
    return True

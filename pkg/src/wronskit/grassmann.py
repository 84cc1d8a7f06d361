"""Ramification, Schubert conditions and degrees for spaces of polynomials.

A point of G(n,d) is an (n+1)-dimensional space of polynomials of degree at
most d. :class:`PolySpace` stores the reduced echelon basis with pivots at the
highest possible degrees; in the big cell those are d-n, ..., d.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Sequence

from . import tableaux
from .errors import (
    IncompleteProblemError,
    InconsistentCountError,
    InvalidInputError,
)
from .polyring import COMPLEX, RATIONAL, Polynomial, mp, roots, wronskian

INF = "inf"


# ---------------------------------------------------------------------------
# ramification sequences and partitions


@dataclass(frozen=True)
class RamificationSeq:
    a: tuple
    n: int
    d: int

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        object.__setattr__(self, "a", a)
        if len(a) != self.n + 1:
            raise InvalidInputError(f"need {self.n + 1} entries, got {len(a)}")
        if a[0] < 0 or a[-1] > self.d or any(a[i] >= a[i + 1] for i in range(self.n)):
            raise InvalidInputError(f"not a ramification sequence in G({self.n},{self.d}): {a}")

    @classmethod
    def trivial(cls, n: int, d: int) -> "RamificationSeq":
        return cls(tuple(range(n + 1)), n, d)

    @classmethod
    def iota(cls, n: int, d: int) -> "RamificationSeq":
        return cls(tuple(range(n)) + (n + 1,), n, d)

    def partition(self) -> tuple:
        """a_n - n >= ... >= a_1 - 1 >= a_0."""
        return tuple(self.a[i] - i for i in reversed(range(self.n + 1)))

    @classmethod
    def from_partition(cls, lam: Sequence[int], n: int, d: int) -> "RamificationSeq":
        lam = tuple(lam) + (0,) * (n + 1 - len(lam))
        if len(lam) != n + 1 or lam[0] > d - n:
            raise InvalidInputError(f"partition {lam} does not fit the (n+1) x (d-n) box")
        return cls(tuple(lam[n - i] + i for i in range(n + 1)), n, d)


def codim(a: RamificationSeq) -> int:
    return sum(x - i for i, x in enumerate(a.a))


@dataclass(frozen=True)
class Partition:
    """A (possibly skew) partition lam/mu."""

    parts: tuple
    inner: tuple = ()

    def __post_init__(self):
        outer, inner = tableaux._norm_shape(self.parts, self.inner)
        object.__setattr__(self, "parts", outer)
        object.__setattr__(self, "inner", inner)

    @property
    def size(self) -> int:
        return sum(self.parts) - sum(self.inner)

    def contains(self, other: "Partition") -> bool:
        return all(tableaux._row_len(self.parts, r) >= x for r, x in enumerate(other.parts))


# ---------------------------------------------------------------------------
# degrees


def degree_iota(n: int, d: int) -> int:
    """Number of spaces with a given generic Wronskian, by the closed product formula."""
    if not 0 < n < d:
        raise InvalidInputError("need 0 < n < d")
    num = factorial((n + 1) * (d - n)) * prod(factorial(k) for k in range(1, n + 1))
    den = prod(factorial(k) for k in range(d - n, d + 1))
    q, r = divmod(num, den)
    assert r == 0
    return q


def syt_count(shape: Partition | Sequence[int], inner: Sequence[int] = ()) -> int:
    if isinstance(shape, Partition):
        return tableaux.syt_count(shape.parts, shape.inner)
    return tableaux.syt_count(shape, inner)


def white_formula(n: int, d: int) -> int:
    """Closed formula for the signed count of real points; zero when d is odd."""
    m, p = max(n + 1, d - n), min(n + 1, d - n)
    if (m + p) % 2 == 0:  # m + p = d + 1
        return 0
    num = prod(factorial(k) for k in range(1, p))
    num *= prod(factorial(k) for k in range(m - p + 1, m))
    num *= factorial(m * p // 2)
    den = prod(factorial(k) for k in range(m - p + 2, m + p - 1, 2))
    den *= prod(factorial(k) for k in range((m - p + 1) // 2, (m + p - 1) // 2 + 1))
    q, r = divmod(num, den)
    if r:
        raise InconsistentCountError(f"closed formula is not an integer for ({n},{d})")
    return q


def sign_sum(n: int, d: int) -> int:
    """Sum of sigma signs over SYT of the (n+1) x (d-n) rectangle, anchored at the row-reading tableau."""
    shape = tableaux.rectangle(n + 1, d - n)
    T0 = tableaux.row_reading_tableau(shape)
    return sum(tableaux.sigma_sign(T, T0) for T in tableaux.enumerate_syt(shape))


def real_degree(n: int, d: int) -> int:
    """Degree of the real Wronski map; sign sum and closed formula must agree in absolute value."""
    s = sign_sum(n, d)
    w = white_formula(n, d)
    if abs(s) != w:
        raise InconsistentCountError(f"sign sum {s} and closed formula {w} disagree for ({n},{d})")
    return s


# ---------------------------------------------------------------------------
# Littlewood-Richardson products inside the (n+1) x (d-n) box


def _lr_fillings(outer: tuple, inner: tuple, content: tuple) -> int:
    """Count LR tableaux of shape outer/inner with the given content."""
    cells_by_row = [
        (r, list(range(tableaux._row_len(inner, r), outer[r]))) for r in range(len(outer))
    ]
    total = sum(content)
    if sum(outer) - sum(inner) != total:
        return 0
    k = len(content)
    filling: dict = {}
    # reading order: rows top to bottom, right to left within a row
    order = [(r, c) for r, cols in cells_by_row for c in reversed(cols)]
    counts = [0] * k

    def rec(idx: int) -> int:
        if idx == len(order):
            return 1
        r, c = order[idx]
        out = 0
        for v in range(k):
            if counts[v] >= content[v]:
                continue
            if v > 0 and counts[v] >= counts[v - 1]:
                continue  # lattice condition
            right = filling.get((r, c + 1))
            if right is not None and right < v:
                continue  # weakly increasing along rows
            above = filling.get((r - 1, c))
            if above is not None and above >= v:
                continue  # strictly increasing down columns
            filling[(r, c)] = v
            counts[v] += 1
            out += rec(idx + 1)
            counts[v] -= 1
            del filling[(r, c)]
        return out

    return rec(0)


@lru_cache(maxsize=None)
def lr_product(mu: tuple, lam: tuple, rows: int, cols: int) -> tuple:
    """Expansion of s_mu * s_lam truncated to the rows x cols box, as ((nu, coeff), ...)."""
    out = []
    size = sum(mu) + sum(lam)
    for nu in tableaux.partitions_containing(mu, sum(lam)):
        if sum(nu) != size or len(nu) > rows or (nu and nu[0] > cols):
            continue
        c = _lr_fillings(nu, mu, lam) if lam else 1
        if c:
            out.append((nu, c))
    return tuple(out)


# ---------------------------------------------------------------------------
# Schubert problems


@dataclass(frozen=True)
class SchubertProblem:
    n: int
    d: int
    conditions: tuple = field(default_factory=tuple)  # of (RamificationSeq, point or None)

    @property
    def dimension(self) -> int:
        return (self.n + 1) * (self.d - self.n)

    def total_codim(self) -> int:
        return sum(codim(a) for a, _ in self.conditions)

    def is_complete(self) -> bool:
        return self.total_codim() == self.dimension

    @classmethod
    def parse(cls, text: str) -> "SchubertProblem":
        """Parse e.g. ``"G(1,3): i@-1 i@0 i@1 i@0.31"`` or ``"G(1,3): 0,2@1.5 0,2"``."""
        m = re.fullmatch(r"\s*G\((\d+),(\d+)\)\s*:\s*(.*)", text)
        if not m:
            raise InvalidInputError(f"cannot parse Schubert problem {text!r}")
        n, d = int(m.group(1)), int(m.group(2))
        conds = []
        for tok in m.group(3).split():
            seq, _, pt = tok.partition("@")
            if seq == "i":
                a = RamificationSeq.iota(n, d)
            else:
                try:
                    entries = tuple(int(x) for x in seq.split(","))
                except ValueError:
                    raise InvalidInputError(f"bad ramification sequence {seq!r}") from None
                a = RamificationSeq(entries, n, d)
            conds.append((a, parse_point(pt) if pt else None))
        return cls(n, d, tuple(conds))

    def __str__(self) -> str:
        toks = []
        for a, s in self.conditions:
            tok = "i" if a == RamificationSeq.iota(self.n, self.d) else ",".join(map(str, a.a))
            if s is not None:
                tok += "@" + format_point(s)
            toks.append(tok)
        return f"G({self.n},{self.d}): " + " ".join(toks)


def parse_point(text: str):
    if text.lower() in ("inf", "oo", "infinity"):
        return INF
    try:
        return Fraction(text)
    except ValueError:
        raise InvalidInputError(f"bad point {text!r}") from None


def format_point(s) -> str:
    if s == INF:
        return "inf"
    if isinstance(s, Fraction):
        for k in range(0, 40):
            v = s * 10**k
            if v.denominator == 1:
                if k == 0:
                    return str(v.numerator)
                digits = str(abs(v.numerator)).rjust(k + 1, "0")
                sign = "-" if v < 0 else ""
                return f"{sign}{digits[:-k]}.{digits[-k:]}"
    return str(s)


def schubert_count(problem: SchubertProblem) -> int:
    """Intersection number by iterated Littlewood-Richardson products in the box."""
    if not problem.is_complete():
        raise IncompleteProblemError(
            f"codimensions sum to {problem.total_codim()}, dimension is {problem.dimension}"
        )
    rows, cols = problem.n + 1, problem.d - problem.n
    state = {(): 1}
    for a, _ in problem.conditions:
        lam = tuple(x for x in a.partition() if x)
        nxt: dict = {}
        for mu, mult in state.items():
            for nu, c in lr_product(mu, lam, rows, cols):
                nxt[nu] = nxt.get(nu, 0) + mult * c
        state = nxt
    return state.get(tableaux.rectangle(rows, cols), 0)


# ---------------------------------------------------------------------------
# osculating flags and spaces of polynomials


@dataclass(frozen=True)
class OsculatingFlag:
    """F_i(s) = span{(t-s)^d, ..., (t-s)^(d-i+1)}; F_i(inf) = span{1, ..., t^(i-1)}."""

    s: object
    d: int

    def basis(self, i: int, kind: str = RATIONAL) -> list[Polynomial]:
        if not 0 <= i <= self.d + 1:
            raise InvalidInputError("flag index out of range")
        if self.s == INF:
            return [Polynomial.monomial(k, kind) for k in range(i)]
        lin = Polynomial([-self.s, 1], kind)
        return [lin ** (self.d - k) for k in range(i)]


@dataclass(frozen=True)
class PolySpace:
    """Subspace of C_d[t] in reduced echelon form with top-degree pivots."""

    n: int
    d: int
    basis: tuple  # f_0, ..., f_n ordered by increasing pivot degree

    @classmethod
    def from_basis(cls, polys: Sequence[Polynomial], n: int, d: int, tol=None) -> "PolySpace":
        if len(polys) != n + 1:
            raise InvalidInputError(f"need {n + 1} polynomials")
        kind = polys[0].kind
        if any(p.kind != kind for p in polys):
            raise InvalidInputError("mixed scalar kinds")
        if any(p.degree > d for p in polys):
            raise InvalidInputError(f"degree exceeds {d}")
        rows = [[p.coeff(k) for k in range(d + 1)] for p in polys]
        pivots = _echelon_top(rows, kind, tol)
        if len(pivots) != n + 1:
            raise InvalidInputError("polynomials are linearly dependent")
        order = sorted(range(n + 1), key=lambda i: pivots[i])
        basis = tuple(Polynomial(rows[i], kind) for i in order)
        return cls(n, d, basis)

    @classmethod
    def from_free_coeffs(cls, values: Sequence, n: int, d: int, kind: str = COMPLEX) -> "PolySpace":
        """Big-cell point from the (n+1)(d-n) non-pivot coefficients, f_i's block first."""
        m = d - n
        if len(values) != (n + 1) * m:
            raise InvalidInputError(f"need {(n + 1) * m} coordinates")
        basis = []
        for i in range(n + 1):
            cs = list(values[i * m : (i + 1) * m]) + [0] * i + [1]
            basis.append(Polynomial(cs, kind))
        return cls(n, d, tuple(basis))

    def free_coeffs(self) -> list:
        if not self.in_big_cell():
            raise InvalidInputError("not in the big cell")
        m = self.d - self.n
        return [f.coeff(k) for f in self.basis for k in range(m)]

    @property
    def kind(self) -> str:
        return self.basis[0].kind

    def pivot_degrees(self) -> tuple:
        return tuple(f.degree for f in self.basis)

    def in_big_cell(self) -> bool:
        return self.pivot_degrees() == tuple(range(self.d - self.n, self.d + 1))

    def wronskian(self) -> Polynomial:
        return wronskian(list(self.basis))

    def monic_wronskian(self) -> Polynomial:
        return self.wronskian().monic()

    def distance(self, other: "PolySpace"):
        return max(f.distance(g) for f, g in zip(self.basis, other.basis))

    def to_complex(self) -> "PolySpace":
        return PolySpace(self.n, self.d, tuple(f.to_complex() for f in self.basis))

    def conjugate(self) -> "PolySpace":
        return PolySpace(self.n, self.d, tuple(f.conjugate() for f in self.basis))

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "basis": [f.to_json() for f in self.basis]}

    @classmethod
    def from_json(cls, data: dict) -> "PolySpace":
        return cls(data["n"], data["d"], tuple(Polynomial.from_json(b) for b in data["basis"]))


def _is_zero(x, kind, tol) -> bool:
    if kind == RATIONAL and tol is None:
        return x == 0
    return abs(x) <= (tol if tol is not None else mp.mpf(2) ** (-(mp.prec // 2)))


def _echelon_top(rows: list[list], kind: str, tol=None) -> list[int]:
    """In-place reduced echelon form with pivots chosen from the highest column down.

    Returns the pivot column of each row. Rows become monic at their pivot with
    zeros in every other pivot column.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = [None] * nrows
    used = 0
    for col in range(ncols - 1, -1, -1):
        if used == nrows:
            break
        cand = range(used, nrows)
        if kind == RATIONAL and tol is None:
            piv = next((r for r in cand if rows[r][col] != 0), None)
        else:
            piv = max(cand, key=lambda r: abs(rows[r][col]))
            if _is_zero(rows[piv][col], kind, tol):
                piv = None
        if piv is None:
            continue
        rows[used], rows[piv] = rows[piv], rows[used]
        pv = rows[used][col]
        rows[used] = [x / pv for x in rows[used]]
        for r in range(nrows):
            if r != used:
                f = rows[r][col]
                if f != 0:
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[used])]
        pivots[used] = col
        used += 1
    return pivots[:used]


def _expand_at(f: Polynomial, s, d: int) -> list:
    """Coefficients of f in powers of (t - s), or of t^d f(1/t) when s is infinite."""
    g = f.reversed(d) if s == INF else f.shift(s)
    return [g.coeff(k) for k in range(d + 1)]


def _point_for(P: PolySpace, s):
    if s == INF:
        return s
    if P.kind == RATIONAL and not isinstance(s, (int, Fraction)):
        raise InvalidInputError("use a complex space for inexact points")
    if P.kind == COMPLEX:
        return mp.mpc(s)
    return Fraction(s)


def ramification(P: PolySpace, s, tol=None) -> RamificationSeq:
    """Orders of vanishing at s of a basis of P adapted to the point s."""
    s = _point_for(P, s)
    rows = [_expand_at(f, s, P.d) for f in P.basis]
    kind = P.kind
    orders = []
    used = 0
    nrows = len(rows)
    for col in range(P.d + 1):
        if used == nrows:
            break
        cand = range(used, nrows)
        if kind == RATIONAL and tol is None:
            piv = next((r for r in cand if rows[r][col] != 0), None)
        else:
            piv = max(cand, key=lambda r: abs(rows[r][col]))
            scale = max(abs(x) for row in rows for x in row)
            t = tol if tol is not None else mp.mpf(2) ** (-(mp.prec // 2)) * max(1, scale)
            if abs(rows[piv][col]) <= t:
                piv = None
        if piv is None:
            continue
        rows[used], rows[piv] = rows[piv], rows[used]
        pv = rows[used][col]
        for r in range(used + 1, nrows):
            f = rows[r][col] / pv
            if f != 0:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[used])]
        orders.append(col)
        used += 1
    return RamificationSeq(tuple(orders), P.n, P.d)


def _rank(rows: list[list], kind: str, tol=None) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    return len(_echelon_top(rows, kind, tol))


def in_schubert_variety(P: PolySpace, a: RamificationSeq, F: OsculatingFlag, tol=None) -> bool:
    """dim(P cap F_{d+1-a_j}) >= n+1-j for every j."""
    if (a.n, a.d) != (P.n, P.d) or F.d != P.d:
        raise InvalidInputError("ambient dimensions differ")
    kind = P.kind
    prow = [[f.coeff(k) for k in range(P.d + 1)] for f in P.basis]
    for j, aj in enumerate(a.a):
        Fi = F.basis(P.d + 1 - aj, kind)
        frow = [[g.coeff(k) for k in range(P.d + 1)] for g in Fi]
        dim_meet = (P.n + 1) + len(Fi) - _rank(prow + frow, kind, tol)
        if dim_meet < P.n + 1 - j:
            return False
    return True


@dataclass
class PluckerReport:
    total: int
    dimension: int
    points: list  # of (root, RamificationSeq)

    @property
    def ok(self) -> bool:
        return self.total == self.dimension


def plucker_check(P: PolySpace, precision: int | None = None) -> PluckerReport:
    """Total ramification over the roots of Wr(P); equals (n+1)(d-n) in the big cell."""
    if not P.in_big_cell():
        raise InvalidInputError("plucker_check needs a point of the big cell")
    W = P.wronskian()
    rs = roots(W, precision)
    Pc = P.to_complex()
    pts = []
    total = 0
    for r, _mult in rs.roots:
        a = ramification(Pc, r)
        pts.append((r, a))
        total += codim(a)
    return PluckerReport(total, (P.n + 1) * (P.d - P.n), pts)

"""Univariate polynomials over exact rationals or multiprecision complex numbers.

Coefficients are stored densely in ascending degree order. Each polynomial
carries its scalar kind ("rational" or "complex"); operations never mix kinds
silently, use :meth:`Polynomial.to_complex` to convert.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from mpmath.ctx_mp import MPContext

from .errors import (
    InvalidInputError,
    LinearlyDependentError,
    NotMonicError,
    PrecisionExhaustedError,
)

RATIONAL = "rational"
COMPLEX = "complex"


def default_precision_bits() -> int:
    return int(os.environ.get("WRONSKIT_PRECISION_BITS", "256"))


# A private mpmath context so that the package never touches mpmath.mp.
mp = MPContext()
mp.prec = default_precision_bits()


def _to_rational(c) -> Fraction:
    if isinstance(c, bool):
        raise InvalidInputError("booleans are not scalars")
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise InvalidInputError(f"not an exact rational scalar: {c!r}")


def _to_complex(c):
    if isinstance(c, Fraction):
        return mp.mpc(mp.mpf(c.numerator) / c.denominator)
    if isinstance(c, str):
        return _to_complex(Fraction(c))
    return mp.mpc(c)


def scalar_kind(c) -> str:
    if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
        return RATIONAL
    return COMPLEX


class Polynomial:
    """Immutable dense polynomial ``coeffs[0] + coeffs[1] t + ...``."""

    __slots__ = ("_coeffs", "_kind")

    def __init__(self, coeffs: Iterable, kind: str | None = None):
        coeffs = list(coeffs)
        if kind is None:
            kinds = {scalar_kind(c) for c in coeffs}
            kind = COMPLEX if COMPLEX in kinds else RATIONAL
        if kind == RATIONAL:
            cs = [_to_rational(c) for c in coeffs]
        elif kind == COMPLEX:
            cs = [_to_complex(c) for c in coeffs]
        else:
            raise InvalidInputError(f"unknown scalar kind {kind!r}")
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs = tuple(cs)
        self._kind = kind

    # -- constructors ------------------------------------------------------

    @classmethod
    def rational(cls, coeffs: Iterable) -> "Polynomial":
        return cls(coeffs, RATIONAL)

    @classmethod
    def complex(cls, coeffs: Iterable) -> "Polynomial":
        return cls(coeffs, COMPLEX)

    @classmethod
    def monomial(cls, k: int, kind: str = RATIONAL) -> "Polynomial":
        return cls([0] * k + [1], kind)

    @classmethod
    def from_roots(cls, roots: Sequence, kind: str | None = None) -> "Polynomial":
        if kind is None:
            kind = COMPLEX if any(scalar_kind(r) == COMPLEX for r in roots) else RATIONAL
        p = cls([1], kind)
        for r in roots:
            p = p * cls([-r if kind == RATIONAL else -_to_complex(r), 1], kind)
        return p

    # -- basic accessors ---------------------------------------------------

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self._coeffs) - 1

    @property
    def leading(self):
        return self._coeffs[-1] if self._coeffs else self._zero()

    def is_zero(self) -> bool:
        return not self._coeffs

    def coeff(self, k: int):
        return self._coeffs[k] if 0 <= k < len(self._coeffs) else self._zero()

    def _zero(self):
        return Fraction(0) if self._kind == RATIONAL else mp.mpc(0)

    def _one(self):
        return Fraction(1) if self._kind == RATIONAL else mp.mpc(1)

    def __repr__(self) -> str:
        return f"Polynomial({[str(c) for c in self._coeffs]}, {self._kind!r})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self._coeffs):
            if c == 0:
                continue
            cs = str(c) if self._kind == RATIONAL else mp.nstr(c, 8)
            terms.append(cs if k == 0 else f"({cs})*t^{k}")
        return " + ".join(terms)

    # -- kind handling -----------------------------------------------------

    def to_complex(self) -> "Polynomial":
        if self._kind == COMPLEX:
            return self
        return Polynomial(self._coeffs, COMPLEX)

    def _check(self, other: "Polynomial") -> None:
        if not isinstance(other, Polynomial):
            raise InvalidInputError(f"expected Polynomial, got {type(other).__name__}")
        if other._kind != self._kind:
            raise InvalidInputError(
                f"mixed scalar kinds: {self._kind} and {other._kind}; convert explicitly"
            )

    def _scalar(self, c):
        if isinstance(c, Polynomial):
            raise TypeError
        if self._kind == RATIONAL:
            if scalar_kind(c) != RATIONAL:
                raise InvalidInputError(f"cannot scale a rational polynomial by {c!r}")
            return Fraction(c)
        return _to_complex(c)

    # -- arithmetic ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._kind == other._kind and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._kind, tuple(str(c) for c in self._coeffs)))

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([self._scalar(other)], self._kind)
        self._check(other)
        n = max(len(self._coeffs), len(other._coeffs))
        return Polynomial([self.coeff(k) + other.coeff(k) for k in range(n)], self._kind)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self._coeffs], self._kind)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([self._scalar(other)], self._kind)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self._scalar(other)
            return Polynomial([c * a for a in self._coeffs], self._kind)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Polynomial([], self._kind)
        out = [self._zero()] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other._coeffs):
                out[i + j] += a * b
        return Polynomial(out, self._kind)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise InvalidInputError("negative power")
        out = Polynomial([1], self._kind)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, c):
        c = self._scalar(c)
        return Polynomial([a / c for a in self._coeffs], self._kind)

    def __divmod__(self, other: "Polynomial"):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._coeffs)
        dq = len(rem) - len(other._coeffs)
        if dq < 0:
            return Polynomial([], self._kind), self
        quot = [self._zero()] * (dq + 1)
        lead = other.leading
        for k in range(dq, -1, -1):
            q = rem[k + other.degree] / lead
            quot[k] = q
            for j, b in enumerate(other._coeffs):
                rem[k + j] -= q * b
        return Polynomial(quot, self._kind), Polynomial(rem[: other.degree], self._kind)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        if isinstance(x, Polynomial):
            self._check(x)
            out = Polynomial([], self._kind)
            for c in reversed(self._coeffs):
                out = out * x + c
            return out
        acc = self._zero() if self._kind == COMPLEX or scalar_kind(x) == RATIONAL else mp.mpc(0)
        for c in reversed(self._coeffs):
            acc = acc * x + c
        return acc

    # -- calculus and normalisation -----------------------------------------

    def derivative(self, k: int = 1) -> "Polynomial":
        cs = list(self._coeffs)
        for _ in range(k):
            cs = [i * cs[i] for i in range(1, len(cs))]
        return Polynomial(cs, self._kind)

    def monic(self) -> "Polynomial":
        if self.is_zero():
            raise InvalidInputError("the zero polynomial has no monic form")
        return self / self.leading

    def is_monic(self) -> bool:
        return not self.is_zero() and self.leading == 1

    def shift(self, a) -> "Polynomial":
        """Return f(t + a)."""
        return self.affine(1, a)

    def affine(self, a, b) -> "Polynomial":
        """Return f(a t + b)."""
        return self(Polynomial([b, a], self._kind))

    def reversed(self, d: int) -> "Polynomial":
        """Return t^d f(1/t) for d >= degree."""
        if d < self.degree:
            raise InvalidInputError("reversal degree below polynomial degree")
        cs = list(self._coeffs) + [self._zero()] * (d + 1 - len(self._coeffs))
        return Polynomial(cs[::-1], self._kind)

    def conjugate(self) -> "Polynomial":
        if self._kind == RATIONAL:
            return self
        return Polynomial([mp.conj(c) for c in self._coeffs], COMPLEX)

    def max_abs_coeff(self):
        if not self._coeffs:
            return mp.mpf(0)
        return max(abs(_to_complex(c)) for c in self._coeffs)

    def distance(self, other: "Polynomial"):
        """Max-norm distance between coefficient vectors (complex comparison)."""
        a, b = self.to_complex(), other.to_complex()
        n = max(len(a._coeffs), len(b._coeffs))
        return max((abs(a.coeff(k) - b.coeff(k)) for k in range(n)), default=mp.mpf(0))

    # -- serialisation -------------------------------------------------------

    def to_json(self) -> dict:
        if self._kind == RATIONAL:
            return {
                "kind": RATIONAL,
                "coeffs": [f"{c.numerator}/{c.denominator}" for c in self._coeffs],
            }
        return {
            "kind": COMPLEX,
            "coeffs": [[_round17(c.real), _round17(c.imag)] for c in self._coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Polynomial":
        kind = data.get("kind")
        if kind == RATIONAL:
            return cls([Fraction(c) for c in data["coeffs"]], RATIONAL)
        if kind == COMPLEX:
            return cls([mp.mpc(re, im) for re, im in data["coeffs"]], COMPLEX)
        raise InvalidInputError(f"unknown polynomial kind {kind!r}")


def _round17(x) -> float:
    return float(mp.nstr(x, 17, strip_zeros=False))


@dataclass(frozen=True)
class QuasiPolynomial:
    """The function ``exp(exponent * t) * poly(t)``."""

    exponent: object
    poly: Polynomial

    def __post_init__(self):
        if self.poly.is_zero():
            raise InvalidInputError("a quasi-polynomial needs a nonzero polynomial part")

    def evaluate(self, t):
        return mp.exp(_to_complex(self.exponent) * t) * self.poly.to_complex()(t)

    def shifted_part(self, h) -> Polynomial:
        """Polynomial part of t -> f(t + h), i.e. exp(b h) g(t + h)."""
        g = self.poly
        if self.exponent == 0 and g.kind == RATIONAL and scalar_kind(h) == RATIONAL:
            return g.shift(Fraction(h))
        g = g.to_complex()
        return g.shift(_to_complex(h)) * mp.exp(_to_complex(self.exponent) * _to_complex(h))

    def derivative_part(self, k: int) -> Polynomial:
        """Polynomial part of the k-th derivative, (d/dt + b)^k g."""
        g = self.poly
        b = self.exponent
        if b != 0:
            g = g if g.kind == COMPLEX or scalar_kind(b) == RATIONAL else g.to_complex()
        for _ in range(k):
            g = g.derivative() + g * b if b != 0 else g.derivative()
        return g


@dataclass(frozen=True)
class RootMultiset:
    roots: tuple  # of (mpc value, multiplicity)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.roots)

    def values(self) -> list:
        out = []
        for r, m in self.roots:
            out.extend([r] * m)
        return out

    def sorted(self) -> "RootMultiset":
        return RootMultiset(tuple(sorted(self.roots, key=lambda rm: (float(rm[0].real), float(rm[0].imag)))))


# ---------------------------------------------------------------------------
# determinants


def _det_scalar(rows: list[list], kind: str):
    """Determinant over Q (exact) or C (partial pivoting)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return Fraction(1) if kind == RATIONAL else mp.mpc(1)
    det = Fraction(1) if kind == RATIONAL else mp.mpc(1)
    for col in range(n):
        if kind == RATIONAL:
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        else:
            piv = max(range(col, n), key=lambda r: abs(a[r][col]))
            if a[piv][col] == 0:
                piv = None
        if piv is None:
            return Fraction(0) if kind == RATIONAL else mp.mpc(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f != 0:
                row, prow = a[r], a[col]
                for c in range(col, n):
                    row[c] -= f * prow[c]
    return det


def poly_det(matrix: list[list[Polynomial]]) -> Polynomial:
    """Determinant of a square matrix with polynomial entries.

    Expansion by minors memoised over column subsets, so the cost is
    k * 2^k polynomial products and no division is needed.
    """
    k = len(matrix)
    kind = matrix[0][0].kind
    for row in matrix:
        for e in row:
            if e.kind != kind:
                raise InvalidInputError("mixed scalar kinds in determinant")
    zero = Polynomial([], kind)
    # minors[mask] = det of rows (k - popcount(mask) .. k-1) restricted to columns in mask
    minors = {0: Polynomial([1], kind)}
    for depth in range(1, k + 1):
        r = k - depth
        new = {}
        for mask, sub in minors.items():
            if sub.is_zero():
                continue
            for c in range(k):
                if mask >> c & 1:
                    continue
                e = matrix[r][c]
                if e.is_zero():
                    continue
                sign = -1 if bin(mask & ((1 << c) - 1)).count("1") % 2 else 1
                m2 = mask | (1 << c)
                term = e * sub * sign
                new[m2] = new[m2] + term if m2 in new else term
        minors = new
    return minors.get((1 << k) - 1, zero)


# ---------------------------------------------------------------------------
# Wronskians


def _common_kind(fs: Sequence[Polynomial]) -> str:
    if not fs:
        raise InvalidInputError("need at least one function")
    kinds = {f.kind for f in fs}
    if len(kinds) != 1:
        raise InvalidInputError(f"mixed scalar kinds: {sorted(kinds)}")
    return kinds.pop()


def wronskian(fs: Sequence[Polynomial]) -> Polynomial:
    """det[f_i^{(j)}] for polynomials f_0..f_{k-1}."""
    _common_kind(fs)
    k = len(fs)
    return poly_det([[f.derivative(j) for j in range(k)] for f in fs])


def quasi_wronskian(fs: Sequence[QuasiPolynomial]) -> QuasiPolynomial:
    """Wronskian of quasi-polynomials, again a quasi-polynomial."""
    polys = [f.poly for f in fs]
    _common_kind(polys)
    k = len(fs)
    w = poly_det([[f.derivative_part(j) for j in range(k)] for f in fs])
    if w.is_zero():
        raise LinearlyDependentError("the functions are linearly dependent")
    return QuasiPolynomial(sum(f.exponent for f in fs), w)


def discrete_wronskian(fs: Sequence[QuasiPolynomial], h) -> QuasiPolynomial:
    """det[f_i(t + j h)] as a quasi-polynomial with exponent sum(b_i)."""
    _common_kind([f.poly for f in fs])
    k = len(fs)
    rows = [[f.shifted_part(j * h) if j else f.poly for j in range(k)] for f in fs]
    kinds = {e.kind for row in rows for e in row}
    if len(kinds) > 1:
        rows = [[e.to_complex() for e in row] for row in rows]
    w = poly_det(rows)
    if w.is_zero():
        raise LinearlyDependentError("the shifted functions are linearly dependent")
    return QuasiPolynomial(sum(f.exponent for f in fs), w)


def normalized_discrete_wronskian(fs: Sequence[QuasiPolynomial], h) -> Polynomial:
    """Polynomial part of Wr_h divided by h^(k(k-1)/2); tends to the Wronskian as h -> 0."""
    k = len(fs)
    w = discrete_wronskian(fs, h).poly
    scale = h ** (k * (k - 1) // 2)
    if w.kind == RATIONAL and scalar_kind(scale) == RATIONAL:
        return w / Fraction(scale)
    return w.to_complex() / _to_complex(scale)


# ---------------------------------------------------------------------------
# resultants and discriminants


def sylvester_matrix(f: Polynomial, g: Polynomial) -> list[list]:
    m, n = f.degree, g.degree
    size = m + n
    zero = f._zero()
    rows = []
    fd = list(reversed(f.coeffs))
    gd = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([zero] * i + fd + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + gd + [zero] * (size - n - 1 - i))
    return rows


def resultant(f: Polynomial, g: Polynomial):
    """prod over roots r of f and q of g of (r - q); f and g must be monic."""
    f._check(g)
    if not f.is_monic() or not g.is_monic():
        raise NotMonicError("resultant uses the root-product convention; normalise to monic first")
    if f.degree == 0 or g.degree == 0:
        return f._one()
    # For monic inputs the Sylvester determinant already equals the root product.
    return _det_scalar(sylvester_matrix(f, g), f.kind)


def discriminant(f: Polynomial):
    """prod_{j<k} (r_j - r_k)^2 over the roots of a monic f."""
    if not f.is_monic():
        raise NotMonicError("discriminant uses the root-product convention; normalise to monic first")
    m = f.degree
    if m <= 1:
        return f._one()
    # Res(f, f') = prod f'(r_i) = (-1)^{m(m-1)/2} prod_{j<k} (r_j - r_k)^2
    val = _det_scalar(sylvester_matrix(f, f.derivative()), f.kind)
    return -val if (m * (m - 1) // 2) % 2 else val


# ---------------------------------------------------------------------------
# root finding


def roots(f: Polynomial, precision: int | None = None) -> RootMultiset:
    """All complex roots of f, clustered into a multiset.

    Roots are computed at twice the requested precision so that roots of
    small multiplicity separate by far less than the clustering tolerance
    2^(-precision/2) (relative to the largest coefficient of the monic form).
    """
    if f.is_zero():
        raise InvalidInputError("the zero polynomial has no finite root multiset")
    precision = precision or mp.prec
    if f.degree == 0:
        return RootMultiset(())
    g = f.to_complex().monic()
    work = 2 * precision + 32
    with mp.workprec(work):
        cs = [mp.mpc(c) for c in reversed(g.coeffs)]
        try:
            approx, err = mp.polyroots(cs, maxsteps=400, extraprec=work, error=True)
        except mp.NoConvergence as exc:  # pragma: no cover - mpmath raises only on exhaustion
            raise PrecisionExhaustedError(f"root iteration did not converge: {exc}", None) from exc
        approx = [mp.mpc(r) for r in approx]
        scale = max(mp.mpf(1), g.max_abs_coeff())
        tol = mp.mpf(2) ** (-(precision // 2)) * scale
        clusters: list[list] = []
        for r in approx:
            for cl in clusters:
                if abs(cl[0] - r) < tol:
                    cl.append(r)
                    break
            else:
                clusters.append([r])
        out = []
        for cl in clusters:
            centre = mp.fsum(cl) / len(cl)
            out.append((centre, len(cl)))
        residual = max(abs(g(r)) for r, _ in out)
        eps = mp.mpf(2) ** (-precision // 2) * scale
        bad = [r for r, m in out if m == 1 and abs(g(r)) > eps]
    if bad:
        raise PrecisionExhaustedError(
            f"roots not resolved at {precision} bits (residual {mp.nstr(residual, 5)})", residual
        )
    out = [(+r, m) for r, m in out]
    return RootMultiset(tuple(out)).sorted()


def polynomial_from_roots(rs: Sequence) -> Polynomial:
    return Polynomial.from_roots(rs)

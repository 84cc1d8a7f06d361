"""Lines in 3-space meeting four tangent (or secant) lines of a twisted cubic.

The cubic is gamma(t) = (6t^2 - 1, 7/2 t^3 + 3/2 t, 3/2 t - 1/2 t^3). Its
tangent lines at -1, 0, 1 lie on the hyperboloid H: x^2 - y^2 + z^2 = 1, in
the ruling family

    x - y = mu (1 + z),  mu (x + y) = 1 - z.

Lines meeting all three belong to the other family

    x - y = lam (1 - z),  lam (x + y) = 1 + z,

so the lines meeting a fourth line L as well are the other-family rulings
through the points of L on H.

Coordinates are kept exact (``Fraction``) when the input is rational and
no square root is needed; everything else runs in the package's mp context.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from .errors import InvalidInputError, SingularConfigurationError
from .polyring import COMPLEX, RATIONAL, Polynomial, mp, wronskian

MEET_TOL = 1e-20
TANGENT_POINTS = (-1, 0, 1)


def _exact(x):
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(int(x.numerator), int(x.denominator))
    return None


def _num(x):
    """Fraction for rational input, an mp number otherwise."""
    e = _exact(x)
    if e is not None:
        return e
    if isinstance(x, (mp.mpf, mp.mpc)):
        return x
    if isinstance(x, complex):
        return mp.mpc(x) if x.imag else mp.mpf(x.real)
    return mp.mpmathify(x)


def _mp(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return x if isinstance(x, (mp.mpf, mp.mpc)) else mp.mpmathify(x)


def _is_zero(x) -> bool:
    return x == 0 if isinstance(x, Fraction) else abs(x) == 0


def _minus(x, y):
    if isinstance(x, Fraction) and not isinstance(y, Fraction):
        return _mp(x) - y
    return x - y


def _sub(a, b):
    return tuple(_minus(x, y) for x, y in zip(a, b))


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _norm(a):
    return mp.sqrt(sum(abs(_mp(x)) ** 2 for x in a))


@dataclass(frozen=True)
class Line3:
    """The affine line {point + u * direction}."""

    point: tuple
    direction: tuple

    def __post_init__(self):
        p = tuple(_num(x) for x in self.point)
        d = tuple(_num(x) for x in self.direction)
        if len(p) != 3 or len(d) != 3:
            raise InvalidInputError("points and directions live in 3-space")
        if all(_is_zero(x) for x in d):
            raise InvalidInputError("direction must be nonzero")
        object.__setattr__(self, "point", p)
        object.__setattr__(self, "direction", d)

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.point + self.direction)

    def at(self, u):
        u = _num(u)
        return tuple(p + u * d for p, d in zip(self.point, self.direction))

    def to_mp(self) -> "Line3":
        return Line3(tuple(_mp(x) for x in self.point), tuple(_mp(x) for x in self.direction))

    def is_real(self, tol: float = MEET_TOL) -> bool:
        """True iff the line is the complexification of a real line.

        The direction is first scaled so its largest entry is real.
        """
        if self.exact:
            return True
        d = [_mp(x) for x in self.direction]
        k = max(range(3), key=lambda i: abs(d[i]))
        d = [x / d[k] for x in d]
        if any(abs(mp.im(x)) > tol for x in d):
            return False
        # a real point exists iff the imaginary part of the base point is parallel to d
        im = [mp.im(_mp(x)) for x in self.point]
        return _norm(_cross(im, [mp.re(x) for x in d])) <= tol * max(1, _norm(self.point))

    def contains(self, q, tol: float = MEET_TOL) -> bool:
        diff = _sub(tuple(_num(x) for x in q), self.point)
        c = _cross(diff, self.direction)
        if self.exact and all(isinstance(x, Fraction) for x in c):
            return all(x == 0 for x in c)
        return _norm(c) <= tol * _norm(self.direction) * max(1, _norm(diff))

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, Fraction):
                return str(x)
            z = complex(_mp(x))
            return [z.real, z.imag] if z.imag else z.real

        return {"point": [enc(x) for x in self.point], "direction": [enc(x) for x in self.direction]}


def _half(t):
    return Fraction(1, 2) if isinstance(t, Fraction) else mp.mpf(1) / 2


def gamma(t):
    t = _num(t)
    h = _half(t)
    return (6 * t * t - 1, 7 * h * t**3 + 3 * h * t, 3 * h * t - h * t**3)


def gamma_prime(t):
    t = _num(t)
    h = _half(t)
    return (12 * t, 21 * h * t * t + 3 * h, 3 * h - 3 * h * t * t)


def tangent_line(s) -> Line3:
    return Line3(gamma(s), gamma_prime(s))


def secant_line(v, w) -> Line3:
    """The line through gamma(v) and gamma(w)."""
    if _num(v) == _num(w):
        raise SingularConfigurationError("a secant needs two distinct points; use tangent_line")
    a, b = gamma(v), gamma(w)
    return Line3(a, _sub(b, a))


def same_line(a: Line3, b: Line3, tol: float = MEET_TOL) -> bool:
    return a.contains(b.point, tol) and a.contains(b.at(1), tol)


def meet_deviation(a: Line3, b: Line3):
    """Scaled determinant det[q - p, d, e]; zero iff the lines are coplanar.

    Coplanar lines meet in projective space (possibly at infinity).
    """
    n = _cross(a.direction, b.direction)
    det = _dot(_sub(b.point, a.point), n)
    if isinstance(det, Fraction):
        if det == 0:
            return Fraction(0)
    scale = _norm(a.direction) * _norm(b.direction) * max(1, _norm(_sub(b.point, a.point)))
    return abs(_mp(det)) / scale


def lines_meet(a: Line3, b: Line3, tol: float = MEET_TOL) -> bool:
    return meet_deviation(a, b) <= tol


# ---------------------------------------------------------------------------
# the hyperboloid


def hyperboloid_value(p):
    x, y, z = p
    return x * x - y * y + z * z - 1


@dataclass
class HyperboloidMeet:
    """Intersection of a line with H, in the line's parameter u.

    ``contained`` marks the case where the whole line lies on H; then
    ``params`` is empty. A vanishing leading coefficient leaves one finite
    intersection (the other is at infinity).
    """

    line: Line3
    coeffs: tuple  # (A, B, C) of A u^2 + B u + C
    contained: bool
    params: list = field(default_factory=list)
    real: list = field(default_factory=list)

    @property
    def discriminant(self):
        A, B, C = self.coeffs
        return B * B - 4 * A * C

    @property
    def points(self) -> list:
        return [self.line.at(u) for u in self.params]


def _quadratic_coeffs(line: Line3, form=(1, -1, 1)):
    (x, y, z), (a, b, c) = line.point, line.direction
    f = form
    A = f[0] * a * a + f[1] * b * b + f[2] * c * c
    B = 2 * (f[0] * x * a + f[1] * y * b + f[2] * z * c)
    C = f[0] * x * x + f[1] * y * y + f[2] * z * z - 1
    return A, B, C


def meets_hyperboloid(line: Line3, real_tol: float = MEET_TOL) -> HyperboloidMeet:
    A, B, C = _quadratic_coeffs(line)
    if all(_is_zero(c) for c in (A, B, C)):
        return HyperboloidMeet(line, (A, B, C), True)
    line_real = line.is_real()
    scale = max(abs(_mp(A)), abs(_mp(B)), abs(_mp(C)))
    if abs(_mp(A)) <= real_tol * scale:
        if _is_zero(B):
            return HyperboloidMeet(line, (A, B, C), False)
        u = -_mp(C) / _mp(B)
        return HyperboloidMeet(line, (A, B, C), False, [u], [line_real])
    disc = _mp(B * B - 4 * A * C)
    root = mp.sqrt(disc) if mp.im(disc) != 0 or disc >= 0 else mp.sqrt(mp.mpc(disc))
    Am, Bm = _mp(A), _mp(B)
    params = [(-Bm + root) / (2 * Am), (-Bm - root) / (2 * Am)]
    real = [line_real and abs(mp.im(disc)) <= real_tol * scale**2 and mp.re(disc) >= 0] * 2
    return HyperboloidMeet(line, (A, B, C), False, params, real)


def ruling_parameter(p):
    """lam with x - y = lam (1 - z) and lam (x + y) = 1 + z; None for lam = infinity."""
    x, y, z = (_mp(c) for c in p)
    if abs(1 - z) >= abs(x + y):
        return (x - y) / (1 - z)
    if abs(x + y) == 0:
        return None
    return (1 + z) / (x + y)


def ruling_direction(lam):
    if lam is None:
        return (mp.mpf(-1), mp.mpf(1), mp.mpf(0))
    return (1 - lam * lam, 1 + lam * lam, 2 * lam)


def transversal_ruling(p) -> Line3:
    """The line of the transversal family through the point p of H."""
    return Line3(tuple(_mp(c) for c in p), ruling_direction(ruling_parameter(p)))


# ---------------------------------------------------------------------------
# the four-lines problem


@dataclass
class FourLinesSolution:
    s4: object
    lines: list
    real: list
    meet_deviations: list  # per line: max deviation over the four tangent lines
    discriminant: object

    @property
    def real_count(self) -> int:
        return sum(self.real)

    def to_json(self) -> dict:
        s4 = self.s4
        return {
            "s4": "inf" if s4 is None else str(s4),
            "lines": [L.to_json() for L in self.lines],
            "real": self.real,
            "max_meet_deviation": float(max(self.meet_deviations)),
            "discriminant": float(mp.re(_mp(self.discriminant))),
        }


def _is_infinite(s) -> bool:
    return s is None or (isinstance(s, float) and math.isinf(s)) or (isinstance(s, str) and s.lstrip("+") in ("inf", "oo"))


def _points_at_infinity_on_tangent():
    """Directions (b, a) -> (6b, 7a/2, -a/2) of the tangent line at infinity that lie on H.

    On the plane at infinity H becomes x^2 - y^2 + z^2 = 0, i.e. 36 b^2 = 12 a^2.
    """
    r = 1 / mp.sqrt(3)
    return [(6 * sgn * r, mp.mpf(7) / 2, mp.mpf(-1) / 2) for sgn in (1, -1)]


def _ruling_through_direction(q) -> Line3:
    # homogenised: x - y = lam (w - z) at w = 0
    lam = (q[0] - q[1]) / (-q[2])
    # the point with z = 0 on the ruling lam (lam != 0 here)
    point = ((lam + 1 / lam) / 2, (1 / lam - lam) / 2, mp.mpf(0))
    return Line3(point, ruling_direction(lam))


def lines_meeting_four(s4, tol: float = MEET_TOL) -> FourLinesSolution:
    """The two lines meeting the tangent lines at -1, 0, 1 and s4.

    ``s4`` may be real, complex, or infinite (``math.inf`` / ``None`` /
    ``"inf"``). Each result is checked to meet all four tangent lines.
    """
    fixed = [tangent_line(s) for s in TANGENT_POINTS]
    if _is_infinite(s4):
        lines = [_ruling_through_direction(q) for q in _points_at_infinity_on_tangent()]
        devs = []
        for L in lines:
            parallel = _norm(_cross(L.direction, _points_at_infinity_on_tangent()[lines.index(L)]))
            devs.append(max([meet_deviation(L, F) for F in fixed] + [parallel / _norm(L.direction)]))
        sol = FourLinesSolution(None, lines, [True, True], devs, discriminant_fourlines(-1, 0, 1, None))
    else:
        s = _num(s4)
        if any(s == t for t in TANGENT_POINTS):
            raise InvalidInputError("s4 must differ from -1, 0, 1")
        L4 = tangent_line(s)
        meet = meets_hyperboloid(L4)
        A, B, C = (_mp(c) for c in meet.coeffs)
        scale = max(abs(A), abs(B), abs(C)) ** 2
        if meet.contained or len(meet.params) < 2 or abs(_mp(meet.discriminant)) <= 2 ** (-mp.prec // 2) * scale:
            raise SingularConfigurationError("the fourth tangent line touches H; the two transversals coincide")
        lines = [transversal_ruling(p) for p in meet.points]
        devs = [max(meet_deviation(L, F) for F in fixed + [L4]) for L in lines]
        sol = FourLinesSolution(s, lines, [L.is_real() for L in lines], devs, discriminant_fourlines(-1, 0, 1, s))
    if max(devs) > tol:
        raise SingularConfigurationError(f"transversal check failed (deviation {mp.nstr(max(devs), 5)})")
    # the transversal family must not be the family of the fixed lines
    for L in lines:
        if same_line(L, fixed[1]):
            raise SingularConfigurationError("picked the ruling family of the fixed lines")
    return sol


# ---------------------------------------------------------------------------
# Wronskians of lines


def _null_space(rows: list, width: int) -> list:
    """Basis of {c : rows . c = 0} by elimination; works for Fraction or mp entries."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(width):
        piv = max(range(r, len(m)), key=lambda i: abs(_mp(m[i][col])), default=None)
        if piv is None or _is_zero(m[piv][col]):
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not _is_zero(m[i][col]):
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(width) if c not in pivots]
    basis = []
    one = Fraction(1) if all(isinstance(x, Fraction) for row in rows for x in row) else mp.mpf(1)
    for f in free:
        v = [0 * one] * width
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][f]
        basis.append(v)
    return basis


def _compose_with_gamma(c) -> list:
    """Coefficients (ascending) of c_w + c_x x(t) + c_y y(t) + c_z z(t) along gamma."""
    w, x, y, z = c
    h = _half(w)
    return [w - x, 3 * h * y + 3 * h * z, 6 * x, 7 * h * y - h * z]


def pencil_of_line(line: Line3) -> list:
    """The 2-dimensional space of cubics a(gamma(t)) for affine a vanishing on the line."""
    p, d = line.point, line.direction
    zero = Fraction(0) if line.exact else mp.mpf(0)
    one = Fraction(1) if line.exact else mp.mpf(1)
    rows = [[one, *p], [zero, *d]]
    if not line.exact:
        rows = [[_mp(x) for x in r] for r in rows]
    forms = _null_space(rows, 4)
    kind = RATIONAL if line.exact else COMPLEX
    return [Polynomial(_compose_with_gamma(c), kind) for c in forms]


def wronskian_of_line(line: Line3) -> Polynomial:
    """Wronskian of the line's pencil of cubics; it vanishes where the line meets a tangent line."""
    return wronskian(pencil_of_line(line))


# ---------------------------------------------------------------------------
# discriminant


def quartic_invariant(W: Polynomial):
    """I = ae - 4bd + 3c^2 for W = a t^4 + 4b t^3 + 6c t^2 + 4d t + e.

    Vanishes exactly when the four roots (counted on P^1) are equianharmonic,
    the configuration where the two solutions of the four-lines problem merge.
    """
    if W.degree > 4:
        raise InvalidInputError("need degree at most 4")
    c = [W.coeff(k) for k in range(5)]
    a, b, cc, d, e = c[4], c[3] / 4, c[2] / 6, c[1] / 4, c[0]
    return a * e - 4 * b * d + 3 * cc * cc


def discriminant_fourlines(*roots):
    """24 * I(prod (t - s_i)): the branch discriminant of the four-lines problem.

    Infinite roots are dropped (degree reversal convention). For four finite
    roots this equals the sum over the three pairings of
    (s_a - s_b)^2 (s_c - s_d)^2, so it is nonnegative on real configurations.
    A single ``Polynomial`` argument is read as the Wronskian itself.
    """
    if len(roots) == 1 and isinstance(roots[0], Polynomial):
        W = roots[0]
    else:
        if len(roots) != 4:
            raise InvalidInputError("need four roots")
        finite = [_num(s) for s in roots if not _is_infinite(s)]
        kind = RATIONAL if all(isinstance(s, Fraction) for s in finite) else COMPLEX
        W = Polynomial.from_roots(finite, kind) if finite else Polynomial([1], kind)
    val = 24 * quartic_invariant(W)
    if isinstance(val, Fraction):
        return val
    return mp.re(val) if mp.im(val) == 0 else val


def pairing_sum(roots: Sequence):
    """Sum over the three pairings of (s_a - s_b)^2 (s_c - s_d)^2 (four finite roots)."""
    a, b, c, d = (_num(s) for s in roots)
    return (a - b) ** 2 * (c - d) ** 2 + (a - c) ** 2 * (b - d) ** 2 + (a - d) ** 2 * (b - c) ** 2


@dataclass
class DiscriminantPolynomials:
    """Exact polynomials in s4 for the configuration {-1, 0, 1, s4}.

    ``tangent_quadratic`` is B^2 - 4AC for the intersection of the tangent
    line at s4 (parametrised as gamma(s4) + u gamma'(s4)) with H;
    ``invariant`` is discriminant_fourlines(-1, 0, 1, s4); ``square_factor``
    is the cofactor, a perfect square times a positive constant.
    """

    tangent_quadratic: Polynomial
    invariant: Polynomial
    square_factor: Polynomial


def discriminant_polynomials() -> DiscriminantPolynomials:
    s = Polynomial.rational([0, 1])
    g = [6 * s * s - 1, Fraction(7, 2) * s**3 + Fraction(3, 2) * s, Fraction(3, 2) * s - Fraction(1, 2) * s**3]
    dg = [p.derivative() for p in g]
    A = dg[0] * dg[0] - dg[1] * dg[1] + dg[2] * dg[2]
    B = 2 * (g[0] * dg[0] - g[1] * dg[1] + g[2] * dg[2])
    C = g[0] * g[0] - g[1] * g[1] + g[2] * g[2] - 1
    D = B * B - 4 * A * C
    # 24 I of t^4 - s t^3 - t^2 + s t, with (a, b, c, d, e) = (1, -s/4, -1/6, s/4, 0)
    inv = Polynomial.rational([2, 0, 6])
    q, r = divmod(D, inv)
    if not r.is_zero():  # pragma: no cover - exact identity
        raise ArithmeticError("tangent discriminant is not a multiple of the invariant")
    return DiscriminantPolynomials(D, inv, q)


# ---------------------------------------------------------------------------
# secant configurations


@dataclass
class MonotoneInstance:
    v: object
    w: object
    word: str
    monotone: bool
    real_count: int
    discriminant: object

    def to_json(self) -> dict:
        return {
            "v": float(_mp(self.v)),
            "w": float(_mp(self.w)),
            "ordering": self.word,
            "monotone": self.monotone,
            "real": self.real_count,
            "discriminant": float(_mp(self.discriminant)),
        }


def ordering_word(v, w) -> tuple[str, bool]:
    """Labels of -1, 0, 1 (as 1) and v, w (as 2) in increasing order, plus cyclic adjacency of the 2s."""
    pts = sorted([(_mp(_num(x)), "1") for x in TANGENT_POINTS] + [(_mp(_num(v)), "2"), (_mp(_num(w)), "2")])
    word = "".join(lbl for _, lbl in pts)
    i, j = [k for k, c in enumerate(word) if c == "2"]
    return word, (j - i == 1) or (i == 0 and j == 4)


def real_transversals_count(line: Line3, tol: float = MEET_TOL) -> tuple[int, object]:
    """Real lines meeting the tangent lines at -1, 0, 1 and the given real line."""
    meet = meets_hyperboloid(line)
    if meet.contained:
        raise SingularConfigurationError("the line lies on H; infinitely many transversals")
    disc = _mp(meet.discriminant)
    A, B, C = (_mp(c) for c in meet.coeffs)
    scale = max(abs(A), abs(B), abs(C)) ** 2
    if abs(disc) <= 2 ** (-mp.prec // 2) * scale:
        raise SingularConfigurationError("the line touches H; degenerate configuration")
    return (2 if disc > 0 else 0), disc


def monotone_flag_instance(v, w) -> MonotoneInstance:
    v, w = _num(v), _num(w)
    if any(x == t for x in (v, w) for t in TANGENT_POINTS):
        raise InvalidInputError("v and w must avoid -1, 0, 1")
    word, mono = ordering_word(v, w)
    count, disc = real_transversals_count(secant_line(v, w))
    return MonotoneInstance(v, w, word, mono, count, disc)


def _quadric_through_lines(lines: Sequence[Line3]) -> list:
    """Coefficients of the quadric through three skew lines, monomials in _QUADRIC_MONOMIALS order."""
    rows = []
    for L in lines:
        for u in (0, 1, -1):
            rows.append(_quadric_monomials(L.at(u)))
    null = _null_space([[_mp(x) for x in r] for r in rows], 10)
    if len(null) != 1:
        raise SingularConfigurationError("the three lines do not span a unique quadric")
    return null[0]


def _quadric_monomials(p):
    x, y, z = p
    return [1, x, y, z, x * x, y * y, z * z, x * y, x * z, y * z]


def _quadric_eval(q, p):
    return sum(a * b for a, b in zip(q, _quadric_monomials(p)))


def transversals(lines: Sequence[Line3], tol: float = 1e-15) -> list[Line3]:
    """The (generically two) lines meeting four given skew lines."""
    if len(lines) != 4:
        raise InvalidInputError("need four lines")
    L1, L2, L3, L4 = (L.to_mp() for L in lines)
    q = _quadric_through_lines([L1, L2, L3])
    # restrict to L4: Q(p + u d) = C + B u + A u^2, found by interpolation
    v0, v1, vm = (_quadric_eval(q, L4.at(u)) for u in (0, 1, -1))
    C, A = v0, (v1 + vm) / 2 - v0
    B = (v1 - vm) / 2
    scale = max(abs(A), abs(B), abs(C))
    if scale == 0:
        raise SingularConfigurationError("the fourth line lies on the quadric of the others")
    if abs(A) <= 2 ** (-mp.prec // 2) * scale:
        raise SingularConfigurationError("the fourth line meets the quadric at infinity")
    disc = B * B - 4 * A * C
    if abs(disc) <= 2 ** (-mp.prec // 2) * scale**2:
        raise SingularConfigurationError("tangential intersection; the two transversals coincide")
    root = mp.sqrt(mp.mpc(disc))
    out = []
    for u in ((-B + root) / (2 * A), (-B - root) / (2 * A)):
        if mp.im(u) == 0:
            u = mp.re(u)
        p = L4.at(u)
        n1 = _cross(_sub(L1.point, p), L1.direction)
        n2 = _cross(_sub(L2.point, p), L2.direction)
        T = Line3(p, _cross(n1, n2))
        dev = max(meet_deviation(T, L) for L in (L1, L2, L3, L4))
        if dev > tol:
            raise SingularConfigurationError(f"transversal check failed ({mp.nstr(dev, 5)})")
        out.append(T)
    return out

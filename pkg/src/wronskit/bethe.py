"""Master function, Bethe ansatz equations and the critical point <-> space dictionary.

Level i of a critical point holds i(d-n) values, the roots of the monic
polynomial p_i; the Wronskian W = p_{n+1} has the parameters s as roots. The
master function is

    Phi = prod_{i=1}^{n+1} Discr(p_i) / prod_{i=1}^{n} Res(p_i, p_{i+1}).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (
    HypothesesNotMetError,
    IncompleteSolveError,
    InvalidInputError,
    NearDegenerateError,
    NotCriticalPointError,
    SingularConfigurationError,
)
from .grassmann import PolySpace, degree_iota
from .polyring import (
    COMPLEX,
    RATIONAL,
    Polynomial,
    discriminant,
    mp,
    resultant,
    roots as poly_roots,
    wronskian,
)

DEGENERACY_TOL = 1e-9


def _canon_key(z) -> tuple:
    z = complex(z)
    return (round(z.real, 9) + 0.0, round(z.imag, 9) + 0.0, z.real, z.imag)


@dataclass(frozen=True)
class MasterParams:
    s: tuple
    n: int
    d: int

    def __post_init__(self):
        if not 0 < self.n < self.d:
            raise InvalidInputError("need 0 < n < d")
        N = (self.n + 1) * (self.d - self.n)
        if len(self.s) != N:
            raise InvalidInputError(f"need exactly {N} parameters")
        object.__setattr__(self, "s", tuple(mp.mpc(v) for v in self.s))
        for i in range(N):
            for j in range(i):
                if self.s[i] == self.s[j]:
                    raise InvalidInputError("parameters must be distinct")

    def min_separation(self) -> float:
        scale = max([1.0] + [abs(complex(v)) for v in self.s])
        return min(
            abs(complex(a) - complex(b)) / scale for k, a in enumerate(self.s) for b in self.s[:k]
        )

    def wronskian(self) -> Polynomial:
        return Polynomial.from_roots(list(self.s), COMPLEX)


@dataclass(frozen=True)
class CriticalPoint:
    """Levels x^(1), ..., x^(n); level i holds i(d-n) values."""

    levels: tuple

    @classmethod
    def from_levels(cls, levels: Sequence[Sequence]) -> "CriticalPoint":
        return cls(tuple(tuple(mp.mpc(v) for v in lv) for lv in levels))

    def check_shape(self, n: int, d: int) -> None:
        if len(self.levels) != n:
            raise InvalidInputError(f"need {n} levels")
        for i, lv in enumerate(self.levels, start=1):
            if len(lv) != i * (d - n):
                raise InvalidInputError(f"level {i} must hold {i * (d - n)} values")

    def canonical(self) -> "CriticalPoint":
        return CriticalPoint(tuple(tuple(sorted(lv, key=_canon_key)) for lv in self.levels))

    def flat(self) -> list:
        return [v for lv in self.levels for v in lv]

    def polys(self) -> list[Polynomial]:
        return [Polynomial.from_roots(list(lv), COMPLEX) for lv in self.levels]

    def is_conjugation_stable(self, tol: float = 1e-12) -> bool:
        for lv in self.levels:
            conj = [mp.conj(v) for v in lv]
            if _level_distance(list(lv), conj) > tol:
                return False
        return True

    def to_json(self) -> list:
        return [[[float(mp.re(v)), float(mp.im(v))] for v in lv] for lv in self.canonical().levels]


def _level_distance(a: Sequence, b: Sequence) -> float:
    """Smallest max-distance over matchings of two equal-size lists."""
    if len(a) != len(b):
        return float("inf")
    if not a:
        return 0.0
    A = np.array([complex(v) for v in a])
    B = np.array([complex(v) for v in b])
    cost = np.abs(A[:, None] - B[None, :])
    # minimise the bottleneck approximately via the sum, then report the max
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def orbit_distance(x: CriticalPoint, y: CriticalPoint) -> float:
    """Distance between S-orbits: matches values within each level."""
    if len(x.levels) != len(y.levels):
        return float("inf")
    return max((_level_distance(a, b) for a, b in zip(x.levels, y.levels)), default=0.0)


def _all_levels(x: CriticalPoint, s: MasterParams) -> list[list]:
    x.check_shape(s.n, s.d)
    return [[]] + [list(lv) for lv in x.levels] + [list(s.s)]


# ---------------------------------------------------------------------------
# master function


def master_value_direct(x: CriticalPoint, s: MasterParams):
    lv = _all_levels(x, s)
    num = mp.mpc(1)
    for level in lv[1:]:
        for j in range(len(level)):
            for k in range(j + 1, len(level)):
                num *= (level[j] - level[k]) ** 2
    den = mp.mpc(1)
    for i in range(1, s.n + 1):
        for a in lv[i]:
            for b in lv[i + 1]:
                den *= a - b
    if den == 0 or num == 0:
        raise SingularConfigurationError("a factor of the master function vanishes")
    return num / den


def master_value_resultant(x: CriticalPoint, s: MasterParams):
    ps = x.polys() + [s.wronskian()]
    num = mp.mpc(1)
    for p in ps:
        num *= discriminant(p)
    den = mp.mpc(1)
    for p, q in zip(ps, ps[1:]):
        den *= resultant(p, q)
    if den == 0 or num == 0:
        raise SingularConfigurationError("a factor of the master function vanishes")
    return num / den


def master_value(x: CriticalPoint, s: MasterParams, check: bool = True):
    """Phi(x; s) by the product formula, cross-checked against the Discr/Res form."""
    direct = master_value_direct(x, s)
    if check:
        other = master_value_resultant(x, s)
        if abs(direct - other) > mp.mpf(10) ** -20 * abs(direct):
            raise InvalidInputError("the two evaluations of the master function disagree")
    return direct


def bethe_residual(x: CriticalPoint, s: MasterParams) -> list:
    """Partial derivatives of log Phi in level order."""
    lv = _all_levels(x, s)
    out = []
    for i in range(1, s.n + 1):
        for j, xv in enumerate(lv[i]):
            acc = mp.mpc(0)
            for k, yv in enumerate(lv[i]):
                if k != j:
                    if xv == yv:
                        raise SingularConfigurationError("two variables of one level coincide")
                    acc += 2 / (xv - yv)
            for yv in lv[i - 1] + lv[i + 1]:
                if xv == yv:
                    raise SingularConfigurationError("variables of adjacent levels coincide")
                acc -= 1 / (xv - yv)
            out.append(acc)
    return out


def _structure(n: int, d: int) -> tuple[list[int], list[int]]:
    """Level index and offset of every flat variable."""
    m = d - n
    level_of, offsets = [], [0]
    for i in range(1, n + 1):
        level_of += [i] * (i * m)
        offsets.append(offsets[-1] + i * m)
    return level_of, offsets


def _residual_jacobian_np(X: np.ndarray, s: np.ndarray, n: int, d: int):
    """Batched residual and Jacobian (the Hessian of log Phi) in double precision."""
    level_of, offsets = _structure(n, d)
    B, V = X.shape
    lev = np.array(level_of)
    R = np.zeros((B, V), dtype=complex)
    J = np.zeros((B, V, V), dtype=complex)
    diff = X[:, :, None] - X[:, None, :]
    same = lev[:, None] == lev[None, :]
    adj = np.abs(lev[:, None] - lev[None, :]) == 1
    np.fill_diagonal(same, False)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / diff
        w = np.where(same, 2.0, 0.0) - np.where(adj, 1.0, 0.0)
        R = np.sum(np.where(w != 0, w * inv, 0), axis=2)
        off = np.where(w != 0, w * inv**2, 0)
        J = off.copy()
        diag = -np.sum(off, axis=2)
        top = lev == n
        ds = X[:, top][:, :, None] - s[None, None, :]
        R[:, top] -= np.sum(1.0 / ds, axis=2)
        diag[:, top] += np.sum(1.0 / ds**2, axis=2)
    idx = np.arange(V)
    J[:, idx, idx] = diag
    return R, J


def _mp_residual_jacobian(xs: list, s: Sequence, n: int, d: int):
    level_of, _ = _structure(n, d)
    V = len(xs)
    R = [mp.mpc(0)] * V
    J = mp.matrix(V, V)
    for a in range(V):
        for b in range(V):
            if a == b:
                continue
            la, lb = level_of[a], level_of[b]
            w = 2 if la == lb else (-1 if abs(la - lb) == 1 else 0)
            if w:
                inv = 1 / (xs[a] - xs[b])
                R[a] += w * inv
                J[a, b] = w * inv * inv
                J[a, a] -= w * inv * inv
        if level_of[a] == n:
            for sv in s:
                inv = 1 / (xs[a] - sv)
                R[a] -= inv
                J[a, a] += inv * inv
    return R, J


def _to_point(xs: Sequence, n: int, d: int) -> CriticalPoint:
    _, offsets = _structure(n, d)
    return CriticalPoint.from_levels([xs[offsets[i] : offsets[i + 1]] for i in range(n)]).canonical()


def polish_critical(x: CriticalPoint, s: MasterParams, max_iter: int = 30) -> CriticalPoint:
    xs = list(x.flat())
    eps = mp.mpf(2) ** (-mp.prec + 16)
    for _ in range(max_iter):
        R, J = _mp_residual_jacobian(xs, s.s, s.n, s.d)
        step = mp.lu_solve(J, mp.matrix(R))
        xs = [xs[i] - step[i] for i in range(len(xs))]
        if max(abs(step[i]) for i in range(len(xs))) <= eps * (1 + max(abs(v) for v in xs)):
            break
    return _to_point(xs, s.n, s.d)


def hessian_condition(x: CriticalPoint, s: MasterParams) -> float:
    _, J = _mp_residual_jacobian(list(x.flat()), s.s, s.n, s.d)
    M = np.array([[complex(J[i, j]) for j in range(J.cols)] for i in range(J.rows)])
    sv = np.linalg.svd(M, compute_uv=False)
    return float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")


# ---------------------------------------------------------------------------
# solving


def _check_generic(s: MasterParams) -> None:
    if s.min_separation() < DEGENERACY_TOL:
        raise NearDegenerateError("two parameters nearly coincide; the critical points degenerate")


def _finalise(points: list[CriticalPoint], s: MasterParams, max_cond: float = 1e14) -> list[CriticalPoint]:
    out = []
    for x in points:
        res = max(abs(r) for r in bethe_residual(x, s))
        if res > mp.mpf(10) ** -25:
            raise NotCriticalPointError(f"residual {float(res):.3g} after polishing")
        if hessian_condition(x, s) > max_cond:
            raise NearDegenerateError("a critical point has a nearly singular Hessian")
        out.append(x)
    out.sort(key=lambda x: [_canon_key(v) for v in x.flat()])
    return out


def solve_critical(
    s: MasterParams, *, seed: int = 0, max_starts: int | None = None
) -> list[CriticalPoint]:
    """One canonical representative per orbit of critical points.

    The spaces with Wronskian W are found first; each yields its critical
    point through p_i = Wr(f_0, ..., f_{i-1}).
    """
    from .wronski_solve import inverse_wronski

    _check_generic(s)
    fib = inverse_wronski(None, s.n, s.d, roots=list(s.s), seed=seed, max_starts=max_starts)
    pts = []
    for sol in fib.solutions:
        ps = recover_critical(sol.space)
        levels = [[r for r, _ in poly_roots(p).roots] for p in ps]
        pts.append(polish_critical(CriticalPoint.from_levels(levels).canonical(), s))
    pts = _dedup_points(pts)
    if len(pts) != fib.expected:
        raise IncompleteSolveError(
            f"found {len(pts)} of {fib.expected} orbits", found=len(pts), expected=fib.expected
        )
    return _finalise(pts, s)


def _newton_multistart_np(su: np.ndarray, n: int, d: int, count: int, rng) -> np.ndarray:
    """Damped Newton from random complex starts; returns the converged rows."""
    V = len(_structure(n, d)[0])
    # starts on random chords between parameters, slightly off the chord:
    # the orbits cluster near the parameters' hull
    ia = rng.integers(len(su), size=(count, V))
    ib = rng.integers(len(su), size=(count, V))
    u = rng.uniform(size=(count, V))
    noise = rng.choice([0.03, 0.15], size=(count, 1))
    X = su[ia] + u * (su[ib] - su[ia]) + noise * (rng.normal(size=(count, V)) + 1j * rng.normal(size=(count, V)))
    good = np.ones(count, dtype=bool)
    sn = np.full(count, np.inf)
    for _ in range(80):
        R, J = _residual_jacobian_np(X, su, n, d)
        good = np.all(np.isfinite(R), axis=1) & np.all(np.isfinite(J), axis=(1, 2))
        Jg = np.where(good[:, None, None], J, np.eye(V))
        good &= np.abs(np.linalg.det(Jg)) > 1e-300
        step = np.zeros_like(X)
        if np.any(good):
            step[good] = np.linalg.solve(J[good], R[good][..., None])[..., 0]
        sn = np.where(good, np.max(np.abs(step), axis=1), np.inf)
        X = X - np.minimum(1.0, 0.3 / np.maximum(sn, 1e-300))[:, None] * step
        if np.all((sn < 1e-12) | ~good):
            break
    R, _ = _residual_jacobian_np(X, su, n, d)
    ok = good & (sn < 1e-10) & np.all(np.isfinite(R), axis=1) & (np.max(np.abs(R), axis=1) < 1e-8)
    return X[ok]


def _correct_np(X: np.ndarray, su: np.ndarray, n: int, d: int, iters: int = 6):
    """Newton corrector for a batch; returns (X, converged mask)."""
    ok = np.ones(len(X), dtype=bool)
    for _ in range(iters):
        R, J = _residual_jacobian_np(X, su, n, d)
        with np.errstate(all="ignore"):
            try:
                step = np.linalg.solve(J, R[..., None])[..., 0]
            except np.linalg.LinAlgError:
                return X, np.zeros(len(X), dtype=bool)
        if not np.all(np.isfinite(step)):
            return X, np.zeros(len(X), dtype=bool)
        X = X - step
        ok = np.max(np.abs(step), axis=1) <= 1e-11 * (1 + np.max(np.abs(X), axis=1))
    return X, ok


def _track_params_np(X: np.ndarray, s0: np.ndarray, s1: np.ndarray, n: int, d: int, h_min: float = 1e-7):
    """Follow critical points while the parameters move linearly from s0 to s1.

    Returns the end points, or None when the step size collapses.
    """
    tau, h = 0.0, 0.05
    prev = None
    while tau < 1.0:
        h = min(h, 1.0 - tau)
        if prev is not None:
            guess = X + (X - prev[0]) * (h / prev[1])
        else:
            guess = X
        Y, ok = _correct_np(guess, s0 + (tau + h) * (s1 - s0), n, d)
        gap = _min_gap(X)
        moved = np.max(np.abs(Y - guess)) if np.all(np.isfinite(Y)) else np.inf
        if np.all(ok) and moved < gap / 4 and _min_gap(Y) > 1e-8:
            prev = (X, h)
            X = Y
            tau += h
            h = min(2 * h, 0.1)
        else:
            h /= 2
            prev = None if prev is None else prev
            if h < h_min:
                return None
    return X


def _min_gap(X: np.ndarray) -> float:
    if len(X) < 2:
        return np.inf
    D = np.max(np.abs(X[:, None, :] - X[None, :, :]), axis=2)
    D[np.diag_indices(len(X))] = np.inf
    return float(D.min())


def solve_critical_newton(
    s: MasterParams,
    *,
    seed: int = 0,
    starts_per_orbit: int = 200,
    batch: int = 256,
    max_loops: int = 60,
) -> list[CriticalPoint]:
    """Critical points from the Bethe equations alone (independent cross-check).

    Newton multistart from random complex starts runs first. Its basins are
    tiny for the orbits with nearly real conjugate pairs, so whatever it
    misses is filled in by moving the parameters around random loops and
    following the known critical points; the monodromy action on the fiber is
    transitive, so each loop can only add orbits.
    """
    _check_generic(s)
    n, d = s.n, s.d
    expected = degree_iota(n, d)
    sv = np.array([complex(v) for v in s.s])
    centre = sv.mean()
    radius = max(np.max(np.abs(sv - centre)), 1e-300)
    su = (sv - centre) / radius
    rng = np.random.default_rng(seed)
    keys: list[np.ndarray] = []
    rows: list[np.ndarray] = []

    def absorb(X: np.ndarray) -> None:
        for x in X:
            k = _canonical_np(x, n, d)
            if not any(np.max(np.abs(k - y)) < 1e-7 for y in keys):
                keys.append(k)
                rows.append(x)

    used, budget = 0, starts_per_orbit * expected
    while len(keys) < expected and used < budget:
        B = min(batch, budget - used)
        used += B
        absorb(_newton_multistart_np(su, n, d, B, rng))
    loops = 0
    while rows and len(keys) < expected and loops < max_loops:
        loops += 1
        X = np.array(rows)
        for _ in range(2):
            a = su + 0.6 * (rng.normal(size=su.shape) + 1j * rng.normal(size=su.shape))
            b = su + 0.6 * (rng.normal(size=su.shape) + 1j * rng.normal(size=su.shape))
            legs = [(su, a), (a, b), (b, su)]
            Y = X
            for s0, s1 in legs:
                Y = _track_params_np(Y, s0, s1, n, d)
                if Y is None:
                    break
            if Y is not None:
                absorb(Y)
                break

    kept: list[CriticalPoint] = []
    for x in rows:
        xs = [mp.mpc(complex(v)) * radius + centre for v in x]
        pt = polish_critical(_to_point(xs, n, d), s)
        if not any(orbit_distance(pt, q) < 1e-20 for q in kept):
            kept.append(pt)
    if len(kept) != expected:
        raise IncompleteSolveError(f"found {len(kept)} of {expected} orbits", found=len(kept), expected=expected)
    return _finalise(kept, s)


def _canonical_np(x: np.ndarray, n: int, d: int) -> np.ndarray:
    _, offsets = _structure(n, d)
    parts = [np.array(sorted(x[offsets[i] : offsets[i + 1]], key=_canon_key)) for i in range(n)]
    return np.concatenate(parts)


def _dedup_points(pts: list[CriticalPoint], tol: float = 1e-20) -> list[CriticalPoint]:
    kept: list[CriticalPoint] = []
    for p in pts:
        if all(orbit_distance(p, q) > tol for q in kept):
            kept.append(p)
    return kept


def orbit_sets_match(a: Sequence[CriticalPoint], b: Sequence[CriticalPoint], tol: float = 1e-10) -> bool:
    if len(a) != len(b):
        return False
    cost = np.array([[orbit_distance(x, y) for y in b] for x in a])
    r, c = linear_sum_assignment(cost)
    return bool(cost[r, c].max() < tol)


# ---------------------------------------------------------------------------
# fundamental operator and its kernel


@dataclass(frozen=True)
class FundamentalOperator:
    """(d/dt - ln'(W/p_n)) ... (d/dt - ln'(p_2/p_1)) (d/dt - ln'(p_1))."""

    polys: tuple  # p_1, ..., p_n
    W: Polynomial

    def __post_init__(self):
        n = len(self.polys)
        if self.W.degree % (n + 1):
            raise InvalidInputError("deg W must be a multiple of n+1")
        m = self.W.degree // (n + 1)
        for i, p in enumerate(self.polys, start=1):
            if p.degree != i * m:
                raise InvalidInputError(f"deg p_{i} must be {i * m}")
        if not all(p.is_monic() for p in self.polys) or not self.W.is_monic():
            raise InvalidInputError("operator polynomials must be monic")

    @property
    def n(self) -> int:
        return len(self.polys)

    @property
    def d(self) -> int:
        return self.W.degree // (self.n + 1) + self.n

    def chain(self) -> list[Polynomial]:
        """q_0 = 1, q_1 = p_1, ..., q_{n+1} = W."""
        one = Polynomial([1], self.W.kind)
        return [one] + [p for p in self.polys] + [self.W]

    def apply(self, g: Polynomial) -> tuple[Polynomial, Polynomial]:
        """D(g) as numerator/denominator, built without dividing.

        Each factor d/dt - (a'/a - b'/b) sends N/M to
        (N' M a b - N M' a b - (a' b - a b') N M) / (M^2 a b).
        """
        q = self.chain()
        N, M = g, Polynomial([1], g.kind)
        for b, a in zip(q, q[1:]):
            ab = a * b
            Wab = a.derivative() * b - a * b.derivative()
            N = (N.derivative() * M - N * M.derivative()) * ab - Wab * N * M
            M = M * M * ab
            # keep sizes in check by removing the common factor M (exact division)
            N, M = _cancel(N, M)
        return N, M


def _cancel(N: Polynomial, M: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Divide out monic factors of M that also divide N exactly (rational case only)."""
    if N.kind != RATIONAL or N.is_zero():
        return N, M
    g = _poly_gcd(N, M)
    if g.degree <= 0:
        return N, M
    return N // g, M // g


def _poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def fundamental_operator(x: CriticalPoint, s: MasterParams) -> FundamentalOperator:
    x.check_shape(s.n, s.d)
    return FundamentalOperator(tuple(x.polys()), s.wronskian())


def _null_space(rows: list[list], kind: str, tol=None) -> list[list]:
    """Basis of {v : A v = 0} for the matrix with the given rows."""
    if not rows:
        return []
    ncols = len(rows[0])
    A = [list(r) for r in rows]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        if r == len(A):
            break
        if kind == RATIONAL and tol is None:
            piv = next((k for k in range(r, len(A)) if A[k][c] != 0), None)
        else:
            piv = max(range(r, len(A)), key=lambda k: abs(A[k][c]))
            if abs(A[piv][c]) <= tol:
                piv = None
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pv = A[r][c]
        A[r] = [v / pv for v in A[r]]
        for k in range(len(A)):
            if k != r and A[k][c] != 0:
                f = A[k][c]
                A[k] = [u - f * v for u, v in zip(A[k], A[r])]
        pivots.append((r, c))
        r += 1
    pcols = {c for _, c in pivots}
    zero = 0 if kind == RATIONAL else mp.mpc(0)
    basis = []
    for free in range(ncols):
        if free in pcols:
            continue
        v = [zero] * ncols
        v[free] = 1 if kind == RATIONAL else mp.mpc(1)
        for row, c in pivots:
            v[c] = -A[row][free]
        basis.append(v)
    return basis


def kernel_polynomials(D: FundamentalOperator) -> PolySpace:
    """Polynomial solutions of degree <= d of D(f) = 0, in canonical echelon form."""
    n, d = D.n, D.d
    kind = D.W.kind
    images = [D.apply(Polynomial.monomial(k, kind))[0] for k in range(d + 1)]
    top = max(p.degree for p in images)
    rows = [[images[k].coeff(j) for k in range(d + 1)] for j in range(top + 1)]
    tol = None
    if kind == COMPLEX:
        scale = max([mp.mpf(1)] + [abs(v) for row in rows for v in row])
        tol = scale * mp.mpf(2) ** (-(mp.prec // 2))
    vecs = _null_space(rows, kind, tol)
    if len(vecs) != n + 1:
        raise NotCriticalPointError(f"kernel has dimension {len(vecs)}, expected {n + 1}")
    polys = [Polynomial(v, kind) for v in vecs]
    return PolySpace.from_basis(polys, n, d, tol=None if kind == RATIONAL else mp.mpf(0))


def _root_separation_ok(f: Polynomial, g: Polynomial | None = None) -> bool:
    if f.kind == RATIONAL:
        if g is None:
            return f.degree < 1 or discriminant(f.monic()) != 0
        return resultant(f.monic(), g.monic()) != 0
    rf = poly_roots(f)
    if g is None:
        return all(m == 1 for _, m in rf.roots)
    rg = poly_roots(g)
    scale = max([mp.mpf(1)] + [abs(r) for r in rf.values() + rg.values()])
    tol = scale * mp.mpf(2) ** (-(mp.prec // 4))
    return all(abs(a - b) > tol for a in rf.values() for b in rg.values())


def recover_critical(P: PolySpace) -> list[Polynomial]:
    """Monic f_0, Wr(f_0, f_1), ..., Wr(f_0, ..., f_{n-1}) for the echelon basis of P."""
    if not P.in_big_cell():
        raise HypothesesNotMetError("the space is not in the big cell")
    fs = [f.monic() for f in P.basis]
    for i, f in enumerate(fs):
        if not _root_separation_ok(f):
            raise HypothesesNotMetError(f"f_{i} is not square-free")
    for i in range(len(fs) - 1):
        if not _root_separation_ok(fs[i], fs[i + 1]):
            raise HypothesesNotMetError(f"f_{i} and f_{i + 1} have a common root")
    out = [fs[0]]
    for k in range(2, P.n + 1):
        out.append(wronskian(fs[:k]).monic())
    return out


# ---------------------------------------------------------------------------
# factorisation identity


@dataclass
class CheckResult:
    ok: bool
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _det_operator(fs: Sequence[Polynomial], g: Polynomial, t) -> object:
    """det of [f_0 .. f_n, g] and derivatives up to order n+1, at the point t."""
    k = len(fs) + 1
    cols = list(fs) + [g]
    rows = [[c.derivative(j)(t) for c in cols] for j in range(k)]
    bound = mp.mpf(1)
    for r in rows:
        bound *= mp.sqrt(mp.fsum(abs(v) ** 2 for v in r))
    return mp.det(mp.matrix(rows)), bound


def factorization_identity_check(P: PolySpace, *, points: int = 20, args: int = 5, seed: int = 0) -> CheckResult:
    """The determinant operator of P kills exactly P and equals Wr(P) times the factored operator."""
    rng = np.random.default_rng(seed)
    fs = [f.to_complex() for f in P.basis]
    n, d = P.n, P.d
    ps = [wronskian(fs[:k]) for k in range(1, n + 1)]
    W = wronskian(fs)
    if any(p.is_zero() for p in ps) or W.is_zero():
        return CheckResult(False, "a partial Wronskian vanishes")
    try:
        D = FundamentalOperator(tuple(p.monic() for p in ps), W.monic())
    except InvalidInputError as exc:
        return CheckResult(False, f"no fundamental operator: {exc}")
    lead_W = W
    ts = [mp.mpc(*rng.normal(size=2)) for _ in range(points)]
    tol = mp.mpf(10) ** -20

    def rand_poly(deg):
        return Polynomial([mp.mpc(*rng.normal(size=2)) for _ in range(deg + 1)], COMPLEX)

    members = [sum((mp.mpc(*rng.normal(size=2)) * f for f in fs), Polynomial([0], COMPLEX)) for _ in range(args)]
    others = [rand_poly(d + 1) for _ in range(args)]
    for g in members:
        for t in ts:
            v, bound = _det_operator(fs, g, t)
            if abs(v) > mp.mpf(10) ** -30 * bound:
                return CheckResult(False, f"determinant operator does not kill a member at t={complex(t)}")
    for g in members + others:
        N, M = D.apply(g)
        for t in ts:
            lhs, _ = _det_operator(fs, g, t)
            Mt = M(t)
            if abs(Mt) < tol:
                continue
            rhs = lead_W(t) * N(t) / Mt
            scale = max(abs(lhs), abs(rhs), mp.mpf(1))
            if abs(lhs - rhs) > mp.mpf(10) ** -15 * scale:
                return CheckResult(False, f"operators differ at t={complex(t)}")
    for g in others:
        if all(abs(v) < mp.mpf(10) ** -10 * b for v, b in (_det_operator(fs, g, t) for t in ts)):
            return CheckResult(False, "a random non-member is annihilated")
    return CheckResult(True, "determinant operator = Wr * factored operator; kernel is exactly P")

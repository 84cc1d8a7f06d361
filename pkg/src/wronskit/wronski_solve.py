"""Inverse Wronski problem: all spaces of polynomials with a prescribed Wronskian.

Unknowns are the (n+1)(d-n) free coefficients of the canonical echelon basis
f_i = t^(d-n+i) + sum_{k<d-n} x_{ik} t^k. The Wronskian of such a basis has the
integer leading coefficient prod_{i<j}(j-i), so matching the remaining
coefficients with those of the scaled target gives a square polynomial system.

The system is written through values at N points on a circle (N = number of
unknowns); the difference Wr(x) - c W has degree below N, so it vanishes iff
it vanishes at those points. Newton iterations run batched in double
precision from many random starts, converged points are deduplicated and then
polished with mpmath at the working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Sequence

import numpy as np

from .errors import (
    InvalidInputError,
    PathThroughDiscriminantError,
    SolverFailureError,
    UnsupportedInputError,
)
from .grassmann import PolySpace, degree_iota
from .polyring import COMPLEX, Polynomial, mp, roots as poly_roots

DEDUP_TOL = 1e-8


def vandermonde_of_degrees(n: int) -> int:
    return math.prod(j - i for j in range(n + 1) for i in range(j))


# ---------------------------------------------------------------------------
# the square system in double precision


class WronskiSystem:
    """Point-value form of the Wronski equations for G(n,d) and a monic target.

    The target is handled in normalised coordinates u = (t - centre) / radius,
    chosen so that its roots lie in the closed unit disc.
    """

    def __init__(self, n: int, d: int, target_roots: Sequence[complex]):
        if not 0 < n < d:
            raise InvalidInputError("need 0 < n < d")
        self.n, self.d = n, d
        self.m = d - n
        self.N = (n + 1) * self.m
        if len(target_roots) != self.N:
            raise InvalidInputError(f"target must have {self.N} roots")
        self.lead = vandermonde_of_degrees(n)
        k = np.arange(self.N)
        self.points = np.exp(2j * np.pi * (k + 0.5) / self.N)
        self.set_roots(np.asarray(target_roots, dtype=complex))
        # E[j, p, k] = k!/(k-j)! t_p^(k-j): j-th derivative of t^k at point p
        s = n + 1
        E = np.zeros((s, self.N, d + 1), dtype=complex)
        for j in range(s):
            for kk in range(j, d + 1):
                E[j, :, kk] = math.perm(kk, j) * self.points ** (kk - j)
        self.E = E
        self._minor_idx = [
            (i, j, [r for r in range(s) if r != i], [c for c in range(s) if c != j])
            for i in range(s)
            for j in range(s)
        ]

    def set_roots(self, target_roots: np.ndarray) -> None:
        self.roots = np.asarray(target_roots, dtype=complex)
        self.target_vals = self.lead * np.prod(self.points[:, None] - self.roots[None, :], axis=1)

    def coeff_tensor(self, x: np.ndarray) -> np.ndarray:
        """Dense coefficient arrays (B, n+1, d+1) of the echelon basis."""
        B = x.shape[0]
        C = np.zeros((B, self.n + 1, self.d + 1), dtype=complex)
        xr = x.reshape(B, self.n + 1, self.m)
        C[:, :, : self.m] = xr
        for i in range(self.n + 1):
            C[:, i, self.m + i] = 1.0
        return C

    def matrices(self, x: np.ndarray) -> np.ndarray:
        """A[b, p, i, j] = f_i^{(j)}(t_p)."""
        C = self.coeff_tensor(x)
        return np.einsum("bik,jpk->bpij", C, self.E)

    def residual_and_jacobian(self, x: np.ndarray, need_jac: bool = True):
        A = self.matrices(x)
        det = np.linalg.det(A)
        res = det - self.target_vals[None, :]
        if not need_jac:
            return res, None
        s = self.n + 1
        B = x.shape[0]
        cof = np.empty((B, self.N, s, s), dtype=complex)
        if s == 2:
            cof[..., 0, 0] = A[..., 1, 1]
            cof[..., 0, 1] = -A[..., 1, 0]
            cof[..., 1, 0] = -A[..., 0, 1]
            cof[..., 1, 1] = A[..., 0, 0]
        else:
            for i, j, rows, cols in self._minor_idx:
                sub = A[:, :, rows][:, :, :, cols]
                cof[..., i, j] = (-1) ** (i + j) * np.linalg.det(sub)
        # d det / d x_{ik} = sum_j cof_{ij} * E[j, p, k]
        J = np.einsum("bpij,jpk->bpik", cof, self.E[:, :, : self.m])
        return res, J.reshape(B, self.N, self.N)

    def scale(self) -> float:
        return float(np.max(np.abs(self.target_vals)))


def _newton_batch(sys: WronskiSystem, x: np.ndarray, iters: int = 60, tol: float = 1e-12):
    """Damped batched Newton; returns (x, converged mask, relative residual)."""
    scale = sys.scale()
    B = x.shape[0]
    active = np.ones(B, dtype=bool)
    rel = np.full(B, np.inf)
    xmax = 1e6
    for _ in range(iters):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        res, J = sys.residual_and_jacobian(x[idx])
        rel[idx] = np.max(np.abs(res), axis=1) / scale
        try:
            step = np.linalg.solve(J, res[..., None])[..., 0]
        except np.linalg.LinAlgError:
            step = np.zeros_like(res)
            for q in range(idx.size):
                try:
                    step[q] = np.linalg.lstsq(J[q], res[q], rcond=None)[0]
                except np.linalg.LinAlgError:
                    step[q] = 0
        sn = np.max(np.abs(step), axis=1)
        xn = np.max(np.abs(x[idx]), axis=1)
        limit = 0.5 * (1.0 + xn)
        damp = np.minimum(1.0, limit / np.maximum(sn, 1e-300))
        x[idx] = x[idx] - damp[:, None] * step
        done = (sn < tol * (1.0 + xn)) & (rel[idx] < 1e-9)
        bad = ~np.isfinite(sn) | (np.max(np.abs(x[idx]), axis=1) > xmax)
        active[idx[done | bad]] = False
        rel[idx[bad]] = np.inf
    res, _ = sys.residual_and_jacobian(x, need_jac=False)
    rel = np.max(np.abs(res), axis=1) / scale
    ok = np.isfinite(rel) & (rel < 1e-10)
    return x, ok, rel


def random_starts(sys: WronskiSystem, count: int, rng: np.random.Generator) -> np.ndarray:
    """Starting points from spaces spanned by polynomials with random roots in the unit disc."""
    n, m = sys.n, sys.m
    out = np.empty((count, sys.N), dtype=complex)
    for b in range(count):
        rows = []
        for i in range(n + 1):
            deg = m + i
            r = rng.uniform(0, 1.2, deg) * np.exp(2j * np.pi * rng.uniform(size=deg))
            rows.append(np.poly(r)[::-1])
        M = np.zeros((n + 1, sys.d + 1), dtype=complex)
        for i, c in enumerate(rows):
            M[i, : len(c)] = c
        top = M[:, m:]
        try:
            red = np.linalg.solve(top, M)
        except np.linalg.LinAlgError:
            red = M
        out[b] = red[:, :m].reshape(-1)
    return out


def _dedup(xs: np.ndarray, tol: float = DEDUP_TOL) -> list[np.ndarray]:
    kept: list[np.ndarray] = []
    for x in xs:
        if all(np.max(np.abs(x - y)) > tol * (1 + np.max(np.abs(y))) for y in kept):
            kept.append(x)
    return kept


# ---------------------------------------------------------------------------
# high precision


class MPWronskiSystem:
    """The same equations evaluated with mpmath at the current working precision."""

    def __init__(self, n: int, d: int, target_roots: Sequence):
        self.n, self.d, self.m = n, d, d - n
        self.N = (n + 1) * self.m
        self.lead = vandermonde_of_degrees(n)
        self.points = [mp.expjpi(mp.mpf(2 * k + 1) / self.N) for k in range(self.N)]
        self.roots = [mp.mpc(r) for r in target_roots]
        self.target_vals = []
        for t in self.points:
            v = mp.mpc(self.lead)
            for r in self.roots:
                v *= t - r
            self.target_vals.append(v)
        self.pow_tables = []
        for t in self.points:
            pw = [mp.mpc(1)]
            for _ in range(d):
                pw.append(pw[-1] * t)
            self.pow_tables.append(pw)

    def _deriv_row(self, coeffs: list, p: int) -> list:
        pw = self.pow_tables[p]
        s = self.n + 1
        out = []
        for j in range(s):
            acc = mp.mpc(0)
            for k in range(j, self.d + 1):
                c = coeffs[k]
                if c != 0:
                    acc += math.perm(k, j) * c * pw[k - j]
            out.append(acc)
        return out

    def residual_and_jacobian(self, x: list):
        m, s = self.m, self.n + 1
        coeffs = []
        for i in range(s):
            c = list(x[i * m : (i + 1) * m]) + [mp.mpc(0)] * (self.d + 1 - m)
            c[m + i] = mp.mpc(1)
            coeffs.append(c)
        res = []
        J = mp.matrix(self.N, self.N)
        for p in range(self.N):
            A = [self._deriv_row(coeffs[i], p) for i in range(s)]
            cof = _cofactors(A)
            det = mp.fsum(A[0][j] * cof[0][j] for j in range(s))
            res.append(det - self.target_vals[p])
            pw = self.pow_tables[p]
            for i in range(s):
                for k in range(m):
                    acc = mp.mpc(0)
                    for j in range(min(k, s - 1) + 1):
                        acc += cof[i][j] * math.perm(k, j) * pw[k - j]
                    J[p, i * m + k] = acc
        return res, J


def _det_small(A: list) -> object:
    s = len(A)
    if s == 1:
        return A[0][0]
    if s == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    return mp.fsum(
        (-1) ** j * A[0][j] * _det_small([row[:j] + row[j + 1 :] for row in A[1:]]) for j in range(s)
    )


def _cofactors(A: list) -> list:
    s = len(A)
    if s == 1:
        return [[mp.mpc(1)]]
    out = []
    for i in range(s):
        row = []
        for j in range(s):
            minor = [r[:j] + r[j + 1 :] for k, r in enumerate(A) if k != i]
            row.append((-1) ** (i + j) * _det_small(minor))
        out.append(row)
    return out


def polish(msys: MPWronskiSystem, x0: Sequence, max_iter: int = 12):
    """Newton refinement at the working precision; returns (x, relative residual)."""
    x = [mp.mpc(v) for v in x0]
    scale = max(abs(v) for v in msys.target_vals)
    eps = mp.mpf(2) ** (-mp.prec + 16)
    rel = mp.inf
    for _ in range(max_iter):
        res, J = msys.residual_and_jacobian(x)
        rel = max(abs(r) for r in res) / scale
        step = mp.lu_solve(J, mp.matrix(res))
        x = [x[i] - step[i] for i in range(len(x))]
        sn = max(abs(step[i]) for i in range(len(x)))
        if sn <= eps * (1 + max(abs(v) for v in x)):
            break
    res, _ = msys.residual_and_jacobian(x)
    rel = max(abs(r) for r in res) / scale
    return x, rel


# ---------------------------------------------------------------------------
# fibers


@dataclass
class Normalisation:
    """u = (t - centre) / radius maps the target roots into the unit disc."""

    centre: object
    radius: object

    @classmethod
    def for_roots(cls, rs: Sequence) -> "Normalisation":
        rs = [mp.mpc(r) for r in rs]
        centre = mp.fsum(rs) / len(rs)
        radius = max(abs(r - centre) for r in rs)
        if radius == 0:
            radius = mp.mpf(1)
        if all(abs(mp.im(r)) == 0 for r in rs):
            centre = mp.mpc(mp.re(centre))
        return cls(centre, radius)

    @classmethod
    def scaling(cls, rs: Sequence) -> "Normalisation":
        """Pure rescaling by the largest root modulus."""
        radius = max([abs(mp.mpc(r)) for r in rs] + [mp.mpf(0)])
        return cls(mp.mpc(0), radius if radius > 0 else mp.mpf(1))

    def to_u(self, t):
        return (mp.mpc(t) - self.centre) / self.radius

    def space_to_t(self, n: int, d: int, x: Sequence) -> PolySpace:
        """Canonical space in t from canonical coordinates in u."""
        P = PolySpace.from_free_coeffs(x, n, d, COMPLEX)
        inv = 1 / self.radius
        basis = [f.affine(inv, -self.centre * inv) for f in P.basis]
        return PolySpace.from_basis(basis, n, d, tol=mp.mpf(0))

    def space_to_u(self, P: PolySpace) -> list:
        basis = [f.to_complex().affine(self.radius, self.centre) for f in P.basis]
        return PolySpace.from_basis(basis, P.n, P.d, tol=mp.mpf(0)).free_coeffs()


@dataclass
class FiberSolution:
    space: PolySpace
    residual: object
    jacobian_sv: float
    u_coords: list = field(repr=False, default_factory=list)

    def to_json(self, real_tol: float = 1e-20) -> dict:
        return {
            "space": self.space.to_json(),
            "residual": float(self.residual),
            "jacobian_sv": self.jacobian_sv,
            "real": is_real_space(self.space, real_tol),
        }


@dataclass
class WronskiFiber:
    n: int
    d: int
    target: Polynomial
    target_roots: list
    solutions: list
    expected: int
    normalisation: Normalisation = field(repr=False, default=None)
    starts_used: int = 0
    track_report: object = field(repr=False, default=None)

    @property
    def complete(self) -> bool:
        return len(self.solutions) == self.expected

    def to_json(self, real_tol: float = 1e-20) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "target": self.target.to_json(),
            "expected": self.expected,
            "found": len(self.solutions),
            "complete": self.complete,
            "solutions": [s.to_json(real_tol) for s in self.solutions],
        }


def is_real_space(P: PolySpace, tol=1e-20) -> bool:
    """True iff every canonical coefficient has imaginary part below tol."""
    if P.kind != COMPLEX:
        return True
    return all(abs(mp.im(c)) < tol for f in P.basis for c in f.coeffs)


def _check_distinct(rs: list, rel_tol: float = 1e-10) -> None:
    scale = max([1.0] + [abs(complex(r)) for r in rs])
    for i in range(len(rs)):
        for j in range(i + 1, len(rs)):
            if abs(complex(rs[i]) - complex(rs[j])) <= rel_tol * scale:
                raise UnsupportedInputError("the target has repeated roots; its fiber may be nonreduced")


def target_roots_of(W: Polynomial) -> list:
    rs = poly_roots(W)
    if any(m > 1 for _, m in rs.roots):
        raise UnsupportedInputError("the target has repeated roots; its fiber may be nonreduced")
    return [r for r, _ in rs.roots]


def _sort_key(x: np.ndarray) -> tuple:
    return tuple(np.round(np.concatenate([x.real, x.imag]), 8))


def inverse_wronski(
    W: Polynomial | None,
    n: int,
    d: int,
    *,
    roots: Sequence | None = None,
    seed: int = 0,
    max_starts: int | None = None,
    batch: int = 128,
    extra_starts: Sequence[np.ndarray] = (),
) -> WronskiFiber:
    """All points of G(n,d) whose Wronskian is proportional to W.

    Either W or its roots may be given. The fiber is complete when the number
    of distinct solutions equals degree_iota(n, d).
    """
    N = (n + 1) * (d - n)
    if N > 12:
        raise InvalidInputError("only (n+1)(d-n) <= 12 is supported")
    if roots is None:
        if W is None:
            raise InvalidInputError("give W or its roots")
        if W.degree != N:
            raise InvalidInputError(f"the target must have degree {N}")
        rts = target_roots_of(W)
    else:
        rts = [mp.mpc(r) for r in roots]
        if len(rts) != N:
            raise InvalidInputError(f"need {N} roots")
    _check_distinct(rts)
    if W is None:
        W = Polynomial.from_roots(rts, COMPLEX)
    W = W.to_complex().monic()
    expected = degree_iota(n, d)
    norm = Normalisation.for_roots(rts)
    u_roots = [norm.to_u(r) for r in rts]
    sys = WronskiSystem(n, d, [complex(r) for r in u_roots])
    rng = np.random.default_rng(seed)
    if max_starts is None:
        max_starts = max(400, 300 * expected)
    msys = MPWronskiSystem(n, d, u_roots)
    accept = mp.mpf(2) ** (-(mp.prec // 2))
    tried: list[np.ndarray] = []
    kept: list = []
    used = 0
    pending = [np.asarray(e, dtype=complex) for e in extra_starts]
    while len(kept) < expected and used < max_starts:
        count = min(batch, max_starts - used)
        starts = random_starts(sys, count, rng)
        if pending:
            k = min(len(pending), count)
            starts[:k] = np.array(pending[:k])
            pending = pending[k:]
        used += count
        xs, ok, _ = _newton_batch(sys, starts)
        fresh = [x for x in _dedup(list(xs[ok])) if not _near_any(x, tried)]
        tried.extend(fresh)
        for x in fresh:
            xp, rel = polish(msys, [complex(v) for v in x])
            if not rel < accept:
                continue
            if any(_mp_close(xp, y) for y in kept):
                continue
            kept.append(xp)
    kept.sort(key=lambda xp: _sort_key(np.array([complex(v) for v in xp])))
    solutions = []
    for xp in kept:
        P = norm.space_to_t(n, d, xp)
        solutions.append(FiberSolution(P, _residual_t(P, W), scaled_jacobian_sv(P, rts), xp))
    return WronskiFiber(n, d, W, rts, solutions, expected, norm, used)


def _near_any(x: np.ndarray, others: Sequence[np.ndarray], tol: float = DEDUP_TOL) -> bool:
    return any(np.max(np.abs(x - y)) <= tol * (1 + np.max(np.abs(y))) for y in others)


def _mp_close(a: Sequence, b: Sequence, tol: float = DEDUP_TOL) -> bool:
    return max(abs(u - v) for u, v in zip(a, b)) <= tol * (1 + max(abs(v) for v in b))


def _residual_t(P: PolySpace, W: Polynomial):
    """Max coefficient error of the monic Wronskian, relative to the target's size."""
    Wp = P.wronskian().monic()
    return Wp.distance(W) / max(mp.mpf(1), W.max_abs_coeff())


def solution_distance_matrix(fib: WronskiFiber):
    xs = [np.array([complex(v) for v in s.u_coords]) for s in fib.solutions]
    k = len(xs)
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            out[i, j] = np.max(np.abs(xs[i] - xs[j]))
    return out


# ---------------------------------------------------------------------------
# transversality metric


def _equilibrating_scalings(L: np.ndarray, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Log2 row/column scalings giving unit 2-norm rows and columns.

    The fixed point minimises the convex function
    sum_ij |J_ij|^2 exp(x_i + y_j) - sum x - sum y (natural-log scalings of the
    squared entries), solved by damped Newton; the gauge x + c, y - c is fixed
    by pinning the last column scaling.
    """
    A = np.where(np.isinf(L), -np.inf, 2 * np.log(2) * L)
    rows, cols = A.shape
    x = -np.max(A, axis=1) / 2
    y = np.zeros(cols)
    y[:] = -np.max(A + x[:, None], axis=0)

    def value(x, y):
        with np.errstate(over="ignore"):
            return np.sum(np.exp(A + x[:, None] + y[None, :])) - x.sum() - y.sum()

    for _ in range(200):
        E = np.exp(A + x[:, None] + y[None, :])
        gx, gy = E.sum(axis=1) - 1, E.sum(axis=0) - 1
        if max(np.max(np.abs(gx)), np.max(np.abs(gy))) < tol:
            break
        H = np.block([[np.diag(E.sum(axis=1)), E], [E.T, np.diag(E.sum(axis=0))]])
        g = np.concatenate([gx, gy])
        step = np.zeros(rows + cols)
        # least squares: decomposable sparsity patterns leave extra gauge directions
        step[:-1] = np.linalg.lstsq(H[:-1, :-1], g[:-1], rcond=None)[0]
        f0, lam = value(x, y), 1.0
        while lam > 1e-12:
            xn, yn = x - lam * step[:rows], y - lam * step[rows:]
            if value(xn, yn) <= f0 - 1e-4 * lam * g.dot(step):
                break
            lam /= 2
        else:
            break
        x, y = xn, yn
    ln2 = np.log(2)
    return (x / (2 * ln2))[:, None], (y / (2 * ln2))[None, :]


def _mp_equilibrated_sv(J) -> float:
    """sigma_min / sigma_max after row/column 2-norm equilibration.

    The scalings are found on log2 magnitudes in double precision, so entries
    far outside the double exponent range are handled.
    """
    rows, cols = J.rows, J.cols
    L = np.full((rows, cols), -np.inf)
    for i in range(rows):
        for j in range(cols):
            if J[i, j] != 0:
                L[i, j] = float(mp.log(abs(J[i, j]), 2))
    if np.any(np.all(np.isinf(L), axis=0)) or np.any(np.all(np.isinf(L), axis=1)):
        return 0.0
    rs, cs = _equilibrating_scalings(L)
    M = np.empty((rows, cols), dtype=complex)
    for i in range(rows):
        for j in range(cols):
            M[i, j] = complex(J[i, j] * mp.mpf(2) ** (rs[i, 0] + cs[0, j]))
    s = np.linalg.svd(M, compute_uv=False)
    return float(s[-1] / s[0])


def scaled_jacobian_sv(P: PolySpace, roots: Sequence) -> float:
    """Transversality proxy for a fiber point.

    The Jacobian of x -> (non-leading coefficients of Wr) is taken in the chart
    t = rho * u with rho the largest root modulus, then diagonally equilibrated;
    the result is sigma_min / sigma_max. Diagonal equilibration makes the value
    independent of rescaling t, which matters for clustered configurations.
    """
    rho = max([mp.mpf(1)] + [abs(mp.mpc(r)) for r in roots])
    chart = Normalisation(mp.mpc(0), rho)
    x = chart.space_to_u(P)
    msys = MPWronskiSystem(P.n, P.d, [chart.to_u(r) for r in roots])
    _, Jp = msys.residual_and_jacobian(x)
    N = msys.N
    # point values -> coefficients: the sample points are rotated roots of unity
    conj_pows = [[mp.conj(t) ** k for t in msys.points] for k in range(N)]
    Jc = mp.matrix(N, N)
    for k in range(N):
        for col in range(N):
            Jc[k, col] = mp.fsum(conj_pows[k][p] * Jp[p, col] for p in range(N)) / N
    return _mp_equilibrated_sv(Jc)


# ---------------------------------------------------------------------------
# paths and continuation


@dataclass
class RootPath:
    """A path tau in [0, 1] -> list of roots, with labels carried along.

    Built from waypoints (piecewise linear) or from a function. ``breaks``
    are parameter values the tracker must land on exactly.
    """

    func: Callable[[float], list]
    breaks: tuple = (0.0, 1.0)

    @classmethod
    def linear(cls, waypoints: Sequence[Sequence]) -> "RootPath":
        pts = [np.asarray([complex(v) for v in w]) for w in waypoints]
        if len(pts) < 2:
            pts = pts * 2
        k = len(pts) - 1

        def func(tau: float) -> list:
            if tau >= 1:
                return list(pts[-1])
            seg = min(int(tau * k), k - 1)
            lam = tau * k - seg
            return list((1 - lam) * pts[seg] + lam * pts[seg + 1])

        return cls(func, tuple(i / k for i in range(k + 1)))

    @classmethod
    def constant(cls, roots: Sequence) -> "RootPath":
        return cls.linear([roots, roots])

    @classmethod
    def from_function(cls, func: Callable[[float], Sequence]) -> "RootPath":
        return cls(lambda tau: [complex(v) for v in func(tau)])

    @classmethod
    def swap(cls, roots: Sequence, i: int, j: int, sense: int = 1) -> "RootPath":
        """Exchange roots i and j along opposite half circles; other roots stay."""
        base = [complex(r) for r in roots]
        a, b = base[i], base[j]
        mid, half = (a + b) / 2, (a - b) / 2

        def func(tau: float) -> list:
            out = list(base)
            rot = np.exp(1j * np.pi * tau * sense)
            out[i] = mid + half * rot
            out[j] = mid - half * rot
            return out

        return cls(func)

    def then(self, other: "RootPath") -> "RootPath":
        def func(tau: float) -> list:
            return self.func(2 * tau) if tau < 0.5 else other.func(2 * tau - 1)

        breaks = tuple(b / 2 for b in self.breaks) + tuple(0.5 + b / 2 for b in other.breaks)
        return RootPath(func, tuple(sorted(set(breaks))))

    def start(self) -> list:
        return self.func(0.0)

    def end(self) -> list:
        return self.func(1.0)

    def min_separation(self, samples: int = 2001) -> float:
        best = np.inf
        for tau in np.linspace(0, 1, samples):
            r = np.asarray(self.func(float(tau)))
            diff = np.abs(r[:, None] - r[None, :])
            np.fill_diagonal(diff, np.inf)
            best = min(best, float(diff.min()))
        return best

    def is_loop(self, tol: float = 1e-9) -> bool:
        return _match_sets(self.start(), self.end(), tol) is not None


def _match_sets(a: Sequence, b: Sequence, tol: float):
    a, b = list(map(complex, a)), list(map(complex, b))
    if len(a) != len(b):
        return None
    used, out = set(), []
    scale = max([1.0] + [abs(v) for v in a])
    for v in a:
        k = min((k for k in range(len(b)) if k not in used), key=lambda k: abs(b[k] - v), default=None)
        if k is None or abs(b[k] - v) > tol * scale:
            return None
        used.add(k)
        out.append(k)
    return out


@dataclass
class TrackReport:
    steps: int
    rejected: int
    min_solution_gap: float
    min_root_gap: float


def _pairwise_gap(x: np.ndarray) -> float:
    if x.shape[0] < 2:
        return np.inf
    diff = np.max(np.abs(x[:, None, :] - x[None, :, :]), axis=2)
    np.fill_diagonal(diff, np.inf)
    return float(diff.min())


def _track_double(
    sys: WronskiSystem,
    path: RootPath,
    norm: Normalisation,
    x: np.ndarray,
    *,
    h_max: float = 0.02,
    h_min: float = 1e-9,
    gap_floor: float = 1e-6,
) -> tuple[np.ndarray, TrackReport]:
    """Predictor-corrector for all solutions at once with a shared step size."""
    c, r = complex(norm.centre), float(norm.radius)

    def u_roots(tau):
        return (np.asarray(path.func(tau), dtype=complex) - c) / r

    breaks = sorted(set(path.breaks) | {0.0, 1.0})
    tau, h = 0.0, h_max / 4
    vel = np.zeros_like(x)
    steps = rejected = 0
    min_gap = _pairwise_gap(x)
    min_root_gap = np.inf
    while tau < 1.0:
        nxt = min(b for b in breaks if b > tau + 1e-15)
        tn = min(tau + h, nxt)
        if nxt - tn < 1e-12:
            tn = nxt
        ur = u_roots(tn)
        rd = np.abs(ur[:, None] - ur[None, :])
        np.fill_diagonal(rd, np.inf)
        min_root_gap = min(min_root_gap, float(rd.min()))
        sys.set_roots(ur)
        gap = _pairwise_gap(x)
        xn = x + (tn - tau) * vel
        ok = True
        prev = np.inf
        for it in range(6):
            res, J = sys.residual_and_jacobian(xn)
            try:
                step = np.linalg.solve(J, res[..., None])[..., 0]
            except np.linalg.LinAlgError:
                ok = False
                break
            sn = float(np.max(np.abs(step)))
            if not np.isfinite(sn) or (it > 0 and sn > 0.5 * prev):
                if sn > 1e-13 * (1 + float(np.max(np.abs(xn)))):
                    ok = False
                    break
            xn = xn - step
            prev = sn
            if sn < 1e-13 * (1 + float(np.max(np.abs(xn)))):
                break
        else:
            ok = prev < 1e-10 * (1 + float(np.max(np.abs(xn))))
        if ok:
            move = float(np.max(np.abs(xn - x)))
            new_gap = _pairwise_gap(xn)
            if move > gap / 3 or new_gap < gap_floor:
                ok = False
        if not ok:
            rejected += 1
            h /= 2
            if h < h_min:
                raise PathThroughDiscriminantError(
                    f"step size fell below {h_min} near tau={tau:.6g}; "
                    "the path passes too close to the discriminant"
                )
            continue
        vel = (xn - x) / (tn - tau)
        x, tau = xn, tn
        min_gap = min(min_gap, _pairwise_gap(x))
        steps += 1
        h = min(h_max, h * 1.5)
    return x, TrackReport(steps, rejected, min_gap, min_root_gap)


def _path_normalisation(path: RootPath, samples: int = 257) -> Normalisation:
    pts = np.concatenate([np.asarray(path.func(float(t))) for t in np.linspace(0, 1, samples)])
    centre = complex(np.mean(pts))
    if np.all(np.abs(pts.imag) == 0):
        centre = complex(centre.real)
    radius = float(np.max(np.abs(pts - centre))) or 1.0
    return Normalisation(mp.mpc(centre), mp.mpf(radius))


def _finish_fiber(n: int, d: int, end_roots: Sequence, xs_u: list, norm: Normalisation, jac: bool = True):
    msys = MPWronskiSystem(n, d, [norm.to_u(r) for r in end_roots])
    W = Polynomial.from_roots([mp.mpc(r) for r in end_roots], COMPLEX)
    sols = []
    for x in xs_u:
        xp, _ = polish(msys, x)
        P = norm.space_to_t(n, d, xp)
        sv = scaled_jacobian_sv(P, end_roots) if jac else float("nan")
        sols.append(FiberSolution(P, _residual_t(P, W), sv, xp))
    return WronskiFiber(n, d, W, [mp.mpc(r) for r in end_roots], sols, degree_iota(n, d), norm)


def continue_fiber(
    fiber: WronskiFiber,
    path: RootPath,
    *,
    h_max: float = 0.02,
    loop_tol: float = 1e-9,
    compute_jacobian: bool = False,
) -> tuple[WronskiFiber, list | None]:
    """Carry every solution of ``fiber`` along ``path``.

    Returns the end fiber and, when the path is a loop, the permutation perm
    with perm[i] = index of the start solution that solution i arrives at.
    Solutions in the end fiber keep the start labels.
    """
    if not fiber.complete:
        raise InvalidInputError("continuation needs a complete fiber")
    start = path.start()
    if _match_sets(start, [complex(r) for r in fiber.target_roots], 1e-8) is None:
        raise InvalidInputError("the path does not start at the fiber's target roots")
    n, d = fiber.n, fiber.d
    norm = _path_normalisation(path)
    sys = WronskiSystem(n, d, [complex(norm.to_u(r)) for r in start])
    x0 = np.array([[complex(v) for v in norm.space_to_u(s.space)] for s in fiber.solutions])
    x1, report = _track_double(sys, path, norm, x0, h_max=h_max)
    end = path.end()
    out = _finish_fiber(n, d, end, [list(v) for v in x1], norm, jac=compute_jacobian)
    out.track_report = report
    _check_separated(out)
    perm = None
    if _match_sets(start, end, loop_tol) is not None:
        perm = []
        for s in out.solutions:
            dists = [float(s.space.distance(t.space.to_complex())) for t in fiber.solutions]
            perm.append(int(np.argmin(dists)))
        if sorted(perm) != list(range(len(perm))):
            raise PathThroughDiscriminantError("continued solutions merged; the path jumped")
    return out, perm


def _check_separated(fib: WronskiFiber) -> None:
    sols = fib.solutions
    for i in range(len(sols)):
        for j in range(i + 1, len(sols)):
            if sols[i].space.distance(sols[j].space) <= DEDUP_TOL:
                raise PathThroughDiscriminantError("two continued solutions coincide at the end of the path")


def cycle_notation(perm: Sequence[int]) -> str:
    seen, parts = set(), []
    for i in range(len(perm)):
        if i in seen:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = perm[j]
        if len(cyc) > 1:
            parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def generated_group_is_transitive(perms: Sequence[Sequence[int]], size: int) -> bool:
    reach, frontier = {0}, [0]
    while frontier:
        i = frontier.pop()
        for p in perms:
            for j in (p[i], list(p).index(i)):
                if j not in reach:
                    reach.add(j)
                    frontier.append(j)
    return len(reach) == size


def _extra_bits(roots: Sequence, d: int) -> int:
    """Bits lost when moving between the unit-disc chart and t."""
    rs = [abs(mp.mpc(r)) for r in roots]
    spread = max(rs + [mp.mpf(1)]) / max(min(rs + [mp.mpf(1)]), mp.mpf(2) ** -64)
    return int(d * float(mp.log(spread, 2))) + 32


def track_high_precision(
    n: int,
    d: int,
    spaces: Sequence[PolySpace],
    path_roots: Callable[[object], list],
    *,
    h0: float = 0.05,
    h_max: float = 0.25,
    h_min: float = 1e-6,
    retries: int = 3,
) -> tuple[list[PolySpace], TrackReport]:
    """Continuation with an mpmath corrector, re-normalising the chart at every step.

    Slower than the batched double tracker but immune to the huge coefficient
    ranges of clustered configurations. ``path_roots`` maps tau in [0, 1] to mp
    roots. A step is accepted when every corrector converges quickly and
    contracts; merged paths are caught at the end by counting distinct
    endpoints, and the whole path is then retried with a smaller step cap.
    """
    spaces = list(spaces)
    for attempt in range(retries + 1):
        out, report = _track_hp_once(n, d, spaces, path_roots, h0, h_max, h_min)
        if len(_dedup_spaces(out)) == len(spaces):
            return out, report
        h_max /= 4
        h0 = min(h0, h_max)
    raise PathThroughDiscriminantError("paths merged even with the smallest step cap")


def _geometric_step(a, b, lam):
    """Extrapolate a coordinate that behaves like a power of the path parameter."""
    if a == 0 or b == 0:
        return a + lam * (a - b)
    q = a / b
    if abs(q - 1) > 0.5:
        return a + lam * (a - b)
    return a * mp.exp(lam * mp.log(q))


def _track_hp_once(n, d, spaces, path_roots, h0, h_max, h_min):
    tau, h = mp.mpf(0), mp.mpf(h0)
    steps = rejected = 0
    prev: tuple | None = None  # (tau, spaces) one accepted step back
    # mid-path points only need to seed the next corrector; endpoints are polished
    eps = mp.mpf(2) ** (-mp.prec // 4)
    while tau < 1:
        tn = min(mp.mpf(1), tau + h)
        roots = path_roots(tn)
        norm = Normalisation.scaling(roots)
        msys = MPWronskiSystem(n, d, [norm.to_u(r) for r in roots])
        xs_now = [norm.space_to_u(P) for P in spaces]
        if prev is not None:
            lam = (tn - tau) / (tau - prev[0])
            xs_old = [norm.space_to_u(P) for P in prev[1]]
            xs0 = [[_geometric_step(a, b, lam) for a, b in zip(xa, xb)] for xa, xb in zip(xs_now, xs_old)]
        else:
            xs0 = xs_now
        new_x, ok = [], True
        for x in xs0:
            x = list(x)
            last = None
            for it in range(8):
                res, J = msys.residual_and_jacobian(x)
                step = mp.lu_solve(J, mp.matrix(res))
                sn = max(abs(step[i]) for i in range(len(x)))
                x = [x[i] - step[i] for i in range(len(x))]
                if last is not None and sn > last / 4 and sn > eps * (1 + max(abs(v) for v in x)):
                    ok = False
                    break
                last = sn
                if sn <= eps * (1 + max(abs(v) for v in x)):
                    break
            else:
                ok = False
            if not ok:
                break
            new_x.append(x)
        if not ok:
            rejected += 1
            h /= 2
            prev = None
            if h < h_min:
                raise PathThroughDiscriminantError(f"step size fell below {h_min} near tau={float(tau):.6g}")
            continue
        if tn == 1:
            new_x = [polish(msys, x)[0] for x in new_x]
        prev = (tau, spaces)
        spaces = [norm.space_to_t(n, d, x) for x in new_x]
        tau = tn
        steps += 1
        h = min(mp.mpf(h_max), h * mp.mpf(1.5))
    return spaces, TrackReport(steps, rejected, float("nan"), float("nan"))


@dataclass
class ClusteredReport:
    n: int
    d: int
    ratio: float
    roots: list
    count: int
    expected: int
    real: list
    min_jacobian_sv: float
    max_residual: float
    fiber: WronskiFiber = field(repr=False, default=None)

    @property
    def all_real(self) -> bool:
        return all(self.real)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "ratio": self.ratio,
            "count": self.count,
            "expected": self.expected,
            "real": self.real,
            "min_jacobian_sv": self.min_jacobian_sv,
            "max_residual": self.max_residual,
        }


def clustered_reality_probe(
    n: int, d: int, ratio: float, *, start_ratio: float = 3.0, seed: int = 0, real_tol: float = 1e-20
) -> ClusteredReport:
    """Solve the fiber over roots ratio^1, ..., ratio^N and test reality and transversality.

    When the spread is large the fiber is first solved at ``start_ratio`` and
    carried to ``ratio`` along s_k = r^k with an mpmath corrector.
    """
    if ratio <= 1:
        raise InvalidInputError("ratio must exceed 1")
    N = (n + 1) * (d - n)
    ratio_mp = mp.mpf(ratio)
    target = [ratio_mp**k for k in range(1, N + 1)]
    with mp.workprec(max(mp.prec, 256) + _extra_bits(target, d)):
        target = [mp.mpf(ratio) ** k for k in range(1, N + 1)]
        fib = inverse_wronski(None, n, d, roots=target, seed=seed)
        spaces = [s.space for s in fib.solutions]
        if not fib.complete and ratio > start_ratio:
            # double precision cannot resolve the spread; carry a mild configuration instead
            r0 = mp.mpf(start_ratio)
            base = inverse_wronski(None, n, d, roots=[r0**k for k in range(1, N + 1)], seed=seed)
            if not base.complete:
                raise SolverFailureError("could not solve the starting configuration")
            la, lb = mp.log(r0), mp.log(ratio_mp)

            def path_roots(tau):
                r = mp.exp((1 - tau) * la + tau * lb)
                return [r**k for k in range(1, N + 1)]

            spaces, _ = track_high_precision(n, d, [s.space for s in base.solutions], path_roots)
        W = Polynomial.from_roots([mp.mpc(r) for r in target], COMPLEX)
        sols = []
        for P in spaces:
            sols.append(FiberSolution(P, _residual_t(P, W), scaled_jacobian_sv(P, target)))
        fib = WronskiFiber(n, d, W, [mp.mpc(r) for r in target], sols, degree_iota(n, d))
        distinct = len(_dedup_spaces(spaces))
        real = [is_real_space(s.space, real_tol) for s in sols]
        return ClusteredReport(
            n,
            d,
            float(ratio),
            [float(r) for r in target],
            distinct,
            fib.expected,
            real,
            min(s.jacobian_sv for s in sols),
            float(max(s.residual for s in sols)),
            fib,
        )


def _dedup_spaces(spaces: Sequence[PolySpace]) -> list[PolySpace]:
    kept: list[PolySpace] = []
    for P in spaces:
        if all(P.distance(Q) > DEDUP_TOL * (1 + max(f.max_abs_coeff() for f in Q.basis)) for Q in kept):
            kept.append(P)
    return kept


# ---------------------------------------------------------------------------
# loops of real configurations on RP^1
#
# A real root s = tan(pi q / 2) is sent to u = -exp(i pi q) by the Cayley map
# u = (t - i)/(t + i). The Wronski map commutes with Moebius changes of
# variable, so monodromy can be computed in the u chart, where roots passing
# through infinity stay finite.


def cayley_root(q) -> complex:
    return -complex(np.exp(1j * np.pi * float(q)))


def circle_root_path(waypoints: Sequence[Sequence]) -> RootPath:
    """Piecewise linear motion of angles (units of pi), seen in the Cayley chart."""
    qs = [np.array([float(v) for v in w]) for w in waypoints]
    k = len(qs) - 1

    def func(tau: float) -> list:
        seg = min(int(tau * k), k - 1)
        lam = tau * k - seg
        q = (1 - lam) * qs[seg] + lam * qs[seg + 1]
        return list(-np.exp(1j * np.pi * q))

    return RootPath(func, tuple(i / k for i in range(k + 1)))


def rotation_waypoints(base: Sequence, steps: int, weights: Sequence | None = None) -> list[list]:
    """Angle waypoints moving label i to the position of label i+steps (cyclically).

    ``base`` must be increasing inside an interval of length 2. Optional
    ``weights`` in (0, 1) insert an intermediate waypoint where label i has
    covered that fraction of its way, which changes the order of crossings.
    """
    from fractions import Fraction

    base = [Fraction(v) for v in base]
    N = len(base)
    end = []
    for i in range(N):
        j = i + steps
        end.append(base[j % N] + 2 * (j // N))
    pts = [base]
    if weights is not None:
        pts.append([a + Fraction(w) * (b - a) for a, b, w in zip(base, end, weights)])
    pts.append(end)
    return pts


@dataclass
class SlideMonodromyReport:
    """Comparison of continuation permutations with slide permutations on SYT."""

    tableaux: list
    bijection: list  # bijection[solution index] = tableau index
    candidates: int
    loops: list  # (description, geometric perm, slide perm, agrees)

    @property
    def all_agree(self) -> bool:
        return all(ok for *_, ok in self.loops)


def slide_permutation(shape: tuple, waypoints: Sequence[Sequence]) -> tuple[list, list]:
    """Permutation of SYT(shape) induced by sliding along a loop of angles."""
    from .tableaux import SlidePath, enumerate_syt, ord_tableau, signed_from_ord, slide_path

    path = SlidePath.on_circle(waypoints)
    tabs = enumerate_syt(shape)
    index = {T: k for k, T in enumerate(tabs)}
    perm = []
    for T in tabs:
        S = slide_path(signed_from_ord(T, path.start), path)
        perm.append(index[ord_tableau(S)])
    return tabs, perm


def slide_monodromy_check(
    n: int,
    d: int,
    base: Sequence,
    loops: Sequence[tuple[str, list]],
    *,
    seed: int = 0,
) -> SlideMonodromyReport:
    """Search for one bijection fiber <-> SYT intertwining every loop's two permutations.

    ``loops`` holds (description, angle waypoints) pairs, each a closed loop
    of real configurations starting at the angles ``base``.
    """
    shape = tuple([d - n] * (n + 1))
    fib = inverse_wronski(None, n, d, roots=[cayley_root(q) for q in base], seed=seed)
    if not fib.complete:
        raise SolverFailureError("base fiber is incomplete")
    results = []
    tabs = None
    for desc, wps in loops:
        tabs, sperm = slide_permutation(shape, wps)
        _, gperm = continue_fiber(fib, circle_root_path(wps))
        results.append([desc, gperm, sperm])
    k = len(fib.solutions)

    def intertwines(phi, g, s) -> bool:
        return g is not None and all(phi[g[i]] == s[phi[i]] for i in range(k))

    cands = [phi for phi in permutations(range(k)) if all(intertwines(phi, g, s) for _, g, s in results)]
    if not cands:
        # no single bijection works; report agreement under the best one for the first loop
        cands_first = [phi for phi in permutations(range(k)) if intertwines(phi, results[0][1], results[0][2])]
        if not cands_first:
            return SlideMonodromyReport(tabs, [], 0, [(a, g, s, False) for a, g, s in results])
        phi = list(max(cands_first, key=lambda c: sum(intertwines(c, g, s) for _, g, s in results)))
        loops_out = [(a, g, s, intertwines(phi, g, s)) for a, g, s in results]
        return SlideMonodromyReport(tabs, phi, 0, loops_out)
    phi = list(cands[0])
    loops_out = [(a, g, s, intertwines(phi, g, s)) for a, g, s in results]
    return SlideMonodromyReport(tabs, phi, len(cands), loops_out)

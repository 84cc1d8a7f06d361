"""The structured matrix Z, its Wronskian identities, and Calogero-Moser pairs.

Z has diagonal alpha and off-diagonal entries (b_i - b_j)^{-1}. With
a_i = alpha_i + m_ii (m = V^{-1} W below) its eigenvalues are the roots of the
polynomial part of Wr((t - a_0) e^{b_0 t}, ..., (t - a_n) e^{b_n t}).

Commutator convention for pairs: [X, Z] := Z X - X Z, so that for diagonal X
the entries are z_ij (b_j - b_i) and a pair with [X, Z] = I - (all ones) has Z
exactly in the form above.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InvalidInputError, NearDegenerateError, WronskitError
from .polyring import (
    COMPLEX,
    Polynomial,
    QuasiPolynomial,
    mp,
    normalized_discrete_wronskian,
    poly_det,
    quasi_wronskian,
    roots as poly_roots,
)

RANK_TOL = 1e-10
EIG_BITS = 128


class InvariantViolationError(WronskitError):
    pass


def _mpc_list(xs) -> list:
    return [mp.mpc(x) for x in xs]


def _check_distinct_real(b: Sequence) -> list:
    bs = [mp.mpf(x) if not isinstance(x, complex) or x.imag == 0 else None for x in b]
    if any(v is None for v in bs):
        raise InvalidInputError("exponents b must be real")
    for i in range(len(bs)):
        for j in range(i):
            if bs[i] == bs[j]:
                raise InvalidInputError("exponents b must be distinct")
    return bs


def _eigenvalues(A: mp.matrix) -> list:
    with mp.workprec(max(mp.prec, EIG_BITS)):
        # mpmath returns (E, ER, EL) for 1x1 input regardless of the flags
        ev = [A[0, 0]] if A.rows == 1 else mp.eig(A, left=False, right=False)
    return [mp.mpc(e) for e in ev]


# ---------------------------------------------------------------------------
# Z and the Vandermonde identities


@dataclass(frozen=True)
class ZMatrix:
    b: tuple
    alpha: tuple

    def __post_init__(self):
        if len(self.b) != len(self.alpha):
            raise InvalidInputError("b and alpha must have equal length")

    @property
    def size(self) -> int:
        return len(self.b)

    def matrix(self) -> mp.matrix:
        k = self.size
        Z = mp.matrix(k, k)
        for i in range(k):
            for j in range(k):
                Z[i, j] = mp.mpc(self.alpha[i]) if i == j else 1 / (mp.mpf(self.b[i]) - mp.mpf(self.b[j]))
        return Z

    def eigenvalues(self) -> list:
        return _eigenvalues(self.matrix())

    def to_json(self) -> dict:
        return {
            "b": [float(x) for x in self.b],
            "alpha": [[float(mp.re(a)), float(mp.im(a))] for a in self.alpha],
        }


def build_Z(b: Sequence, alpha: Sequence) -> ZMatrix:
    bs = _check_distinct_real(b)
    return ZMatrix(tuple(bs), tuple(_mpc_list(alpha)))


def eigen_real_test(Z: ZMatrix, tol: float = 1e-20) -> bool:
    ev = Z.eigenvalues()
    scale = max([mp.mpf(1)] + [abs(e) for e in ev])
    return all(abs(mp.im(e)) < tol * scale for e in ev)


@dataclass(frozen=True)
class VandermondeKit:
    b: tuple

    @classmethod
    def of(cls, b: Sequence) -> "VandermondeKit":
        return cls(tuple(_check_distinct_real(b)))

    @property
    def size(self) -> int:
        return len(self.b)

    def V(self) -> mp.matrix:
        k = self.size
        return mp.matrix([[self.b[j] ** i for j in range(k)] for i in range(k)])

    def W(self) -> mp.matrix:
        k = self.size
        return mp.matrix([[i * self.b[j] ** (i - 1) if i else mp.mpf(0) for j in range(k)] for i in range(k)])

    def lagrange(self) -> mp.matrix:
        """(l_ij): coefficient of u^j in the i-th Lagrange basis polynomial."""
        k = self.size
        L = mp.matrix(k, k)
        for i in range(k):
            others = [self.b[q] for q in range(k) if q != i]
            p = Polynomial.from_roots([mp.mpc(x) for x in others], COMPLEX)
            denom = mp.fprod([self.b[i] - x for x in others])
            for j in range(k):
                L[i, j] = mp.re(p.coeff(j)) / denom
        return L

    def m_entry(self, i: int, j: int):
        """Closed form of (V^{-1} W)_ij."""
        b, k = self.b, self.size
        if i == j:
            return mp.fsum(1 / (b[i] - b[q]) for q in range(k) if q != i)
        num = mp.fprod([b[j] - b[q] for q in range(k) if q not in (i, j)])
        return num / mp.fprod([b[i] - b[q] for q in range(k) if q != i])

    def m_matrix(self) -> mp.matrix:
        k = self.size
        return mp.matrix([[self.m_entry(i, j) for j in range(k)] for i in range(k)])

    def B(self) -> mp.matrix:
        k = self.size
        return mp.diag([mp.fprod([self.b[i] - self.b[q] for q in range(k) if q != i]) for i in range(k)])


def _rel_dev(A: mp.matrix, B: mp.matrix):
    scale = max(mp.mnorm(A, 1), mp.mnorm(B, 1), mp.mpf(10) ** -300)
    return mp.mnorm(A - B, 1) / scale


@dataclass
class VandermondeReport:
    lagrange_inverse: float
    m_closed_form: float
    b_conjugation: float

    @property
    def worst(self) -> float:
        return max(self.lagrange_inverse, self.m_closed_form, self.b_conjugation)


def vandermonde_check(b: Sequence, alpha: Sequence) -> VandermondeReport:
    """Lagrange inverse, closed forms of V^{-1}W, and B^{-1} Z B = diag(alpha) + M - V^{-1}W."""
    kit = VandermondeKit.of(b)
    V, W, L = kit.V(), kit.W(), kit.lagrange()
    k = kit.size
    inv_dev = _rel_dev(L, mp.inverse(V))
    VW = mp.inverse(V) * W
    m_dev = _rel_dev(kit.m_matrix(), VW)
    Z = build_Z(b, alpha).matrix()
    B = kit.B()
    lhs = mp.inverse(B) * Z * B
    rhs = mp.diag([mp.mpc(alpha[i]) + VW[i, i] for i in range(k)]) - VW
    return VandermondeReport(float(inv_dev), float(m_dev), float(_rel_dev(lhs, rhs)))


# ---------------------------------------------------------------------------
# Wronskian of (t - a_i) e^{b_i t}


def _charpoly(C: mp.matrix) -> Polynomial:
    k = C.rows
    rows = [
        [Polynomial([-mp.mpc(C[i, j]), mp.mpc(1 if i == j else 0)], COMPLEX) for j in range(k)]
        for i in range(k)
    ]
    return poly_det(rows)


def wronskian_poly_part(a: Sequence, b: Sequence) -> Polynomial:
    """Polynomial part of Wr((t - a_i) e^{b_i t}) by symbolic determinant."""
    fs = [QuasiPolynomial(mp.mpf(bi), Polynomial([-mp.mpc(ai), mp.mpc(1)], COMPLEX)) for ai, bi in zip(a, b)]
    return quasi_wronskian(fs).poly


def wronskian_via_matrix(a: Sequence, b: Sequence) -> Polynomial:
    """prod_{i<j} (b_j - b_i) det[I t - (A - V^{-1} W)]."""
    kit = VandermondeKit.of(b)
    k = kit.size
    VW = mp.inverse(kit.V()) * kit.W()
    C = mp.diag(_mpc_list(a)) - VW
    lead = mp.fprod([kit.b[j] - kit.b[i] for i in range(k) for j in range(i + 1, k)])
    return _charpoly(C) * lead


@dataclass
class IdentityReport:
    deviation: float
    symbolic: Polynomial
    matrix_form: Polynomial

    def to_json(self) -> dict:
        return {"deviation": self.deviation, "polynomial": self.symbolic.to_json()}


def wr_identity_check(a: Sequence, b: Sequence) -> IdentityReport:
    if len(a) != len(b):
        raise InvalidInputError("a and b must have equal length")
    lhs = wronskian_poly_part(a, b)
    rhs = wronskian_via_matrix(a, b)
    scale = max(lhs.max_abs_coeff(), mp.mpf(10) ** -300)
    return IdentityReport(float(lhs.distance(rhs) / scale), lhs, rhs)


def match_multisets(xs: Sequence, ys: Sequence) -> float:
    """Largest distance under the best pairing."""
    if len(xs) != len(ys):
        return float("inf")
    if not xs:
        return 0.0
    C = np.array([[float(abs(mp.mpc(x) - mp.mpc(y))) for y in ys] for x in xs])
    r, c = linear_sum_assignment(C)
    return float(max(abs(mp.mpc(xs[i]) - mp.mpc(ys[j])) for i, j in zip(r, c)))


@dataclass
class RelationReport:
    alpha: list
    eigenvalues: list
    roots: list
    deviation: float

    @property
    def ok(self) -> bool:
        return self.deviation < 1e-15

    def to_json(self) -> dict:
        cx = lambda z: [float(mp.re(z)), float(mp.im(z))]
        return {
            "alpha": [cx(z) for z in self.alpha],
            "eigenvalues": [cx(z) for z in self.eigenvalues],
            "roots": [cx(z) for z in self.roots],
            "deviation": self.deviation,
        }


def relation_roundtrip(a: Sequence, b: Sequence) -> RelationReport:
    """alpha_i := a_i - m_ii; eig(Z) should equal the Wronskian's roots."""
    kit = VandermondeKit.of(b)
    alpha = [mp.mpc(ai) - kit.m_entry(i, i) for i, ai in enumerate(a)]
    ev = build_Z(b, alpha).eigenvalues()
    rts = poly_roots(wronskian_poly_part(a, b)).values()
    return RelationReport(alpha, ev, rts, match_multisets(ev, rts))


# ---------------------------------------------------------------------------
# sampling


def trial_rng(seed: int, counter: int) -> np.random.Generator:
    """Independent per-trial stream derived from (master seed, counter)."""
    return np.random.default_rng([seed, counter])


def sample_b(rng: np.random.Generator, size: int, gap: float = 1e-2) -> np.ndarray:
    while True:
        b = rng.uniform(-5, 5, size=size)
        if size < 2 or np.min(np.diff(np.sort(b))) >= gap:
            return b


def sample_nonreal_alpha(rng: np.random.Generator, size: int, min_imag: float = 0.1) -> np.ndarray:
    while True:
        al = rng.uniform(-5, 5, size=size) + 1j * rng.uniform(-5, 5, size=size)
        if np.max(np.abs(al.imag)) >= min_imag:
            return al


def _z_numpy(b: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    D = b[:, None] - b[None, :]
    np.fill_diagonal(D, 1.0)
    Z = (1.0 / D).astype(complex)
    np.fill_diagonal(Z, alpha)
    return Z


@dataclass
class SampleReport:
    size: int
    trials: int
    violations: int
    min_max_imag: float
    escalated: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def theorem2_contrapositive_sample(size: int, trials: int, seed: int = 0, imag_tol: float = 1e-8) -> SampleReport:
    """Non-real alpha should always give some eigenvalue with |imag| > imag_tol.

    Double precision screens each trial; trials whose largest |imag| is within
    a factor 10^4 of the tolerance are recomputed at 128 bits or more.
    """
    if size < 1 or size > 8:
        raise InvalidInputError("size must be between 1 and 8")
    violations = escalated = 0
    worst = float("inf")
    for k in range(trials):
        rng = trial_rng(seed, k)
        b = sample_b(rng, size)
        al = sample_nonreal_alpha(rng, size)
        ev = np.linalg.eigvals(_z_numpy(b, al))
        mi = float(np.max(np.abs(ev.imag)))
        if mi < imag_tol * 1e4:
            escalated += 1
            Z = build_Z([float(x) for x in b], [complex(x) for x in al])
            mi = float(max(abs(mp.im(e)) for e in Z.eigenvalues()))
        worst = min(worst, mi)
        if mi <= imag_tol:
            violations += 1
    return SampleReport(size, trials, violations, worst, escalated)


# ---------------------------------------------------------------------------
# Calogero-Moser pairs


def commutator(X: mp.matrix, Z: mp.matrix) -> mp.matrix:
    """[X, Z] in the convention of this module: Z X - X Z."""
    return Z * X - X * Z


def _svals(A: mp.matrix) -> list:
    s = mp.svd_c(mp.matrix(A), compute_uv=False)
    return sorted((abs(s[i]) for i in range(len(s))), reverse=True)


@dataclass
class CMPair:
    X: mp.matrix
    Z: mp.matrix

    def __post_init__(self):
        self.X = mp.matrix(self.X)
        self.Z = mp.matrix(self.Z)
        if self.X.rows != self.X.cols or (self.X.rows, self.X.cols) != (self.Z.rows, self.Z.cols):
            raise InvalidInputError("X and Z must be square of the same size")

    @property
    def size(self) -> int:
        return self.X.rows

    def defect(self) -> mp.matrix:
        """[X, Z] - I, which should have rank one."""
        return commutator(self.X, self.Z) - mp.eye(self.size)

    def rank_one_ratio(self) -> float:
        s = _svals(self.defect())
        if s[0] == 0:
            return float("inf")
        return float(s[1] / s[0]) if len(s) > 1 else 0.0

    def is_valid(self, tol: float = RANK_TOL) -> bool:
        return self.rank_one_ratio() < tol

    def conjugated(self, G: mp.matrix) -> "CMPair":
        Gi = mp.inverse(G)
        return CMPair(G * self.X * Gi, G * self.Z * Gi)

    @classmethod
    def from_z(cls, Z: ZMatrix) -> "CMPair":
        return cls(mp.diag([mp.mpc(x) for x in Z.b]), Z.matrix())


@dataclass
class NormalizedPair:
    pair: CMPair
    zmatrix: ZMatrix
    offdiag_deviation: float


def cm_normalize(pair: CMPair, tol: float = RANK_TOL) -> NormalizedPair:
    """Conjugate so that X = diag(b) (b sorted) and [X, Z] = I - (all ones)."""
    if not pair.is_valid(tol):
        raise InvariantViolationError("[X, Z] - I does not have rank one")
    k = pair.size
    ev, P = mp.eig(pair.X)
    order = sorted(range(k), key=lambda i: (float(mp.re(ev[i])), float(mp.im(ev[i]))))
    b = [ev[i] for i in order]
    P = mp.matrix([[P[r, i] for i in order] for r in range(k)])
    scale = max([mp.mpf(1)] + [abs(x) for x in b])
    if any(abs(b[i] - b[j]) < mp.mpf(tol) * scale for i in range(k) for j in range(i)):
        raise NearDegenerateError("X has repeated eigenvalues; the pair is not in the generic stratum")
    Pi = mp.inverse(P)
    X1, Z1 = Pi * pair.X * P, Pi * pair.Z * P
    K = mp.eye(k) - commutator(X1, Z1)
    # K = beta gamma^T with beta_i gamma_i = 1; read beta off the first column
    piv = max(range(k), key=lambda j: abs(K[0, j]))
    beta = [K[i, piv] / K[0, piv] for i in range(k)]
    if any(abs(x) == 0 for x in beta):
        raise InvariantViolationError("the rank-one factor has a zero entry")
    D, Di = mp.diag(beta), mp.diag([1 / x for x in beta])
    X2, Z2 = Di * X1 * D, Di * Z1 * D
    X2 = mp.diag(b)
    dev = mp.mpf(0)
    for i in range(k):
        for j in range(k):
            if i != j:
                dev = max(dev, abs(Z2[i, j] - 1 / (b[i] - b[j])) * abs(b[i] - b[j]))
    bre = [mp.re(x) for x in b]
    if max(abs(mp.im(x)) for x in b) > mp.mpf(tol) * scale:
        # complex b: the Z-matrix view needs real exponents, keep complex values
        bre = b
    zm = ZMatrix(tuple(bre), tuple(Z2[i, i] for i in range(k)))
    return NormalizedPair(CMPair(X2, Z2), zm, float(dev))


def upsilon(pair: CMPair) -> tuple[list, list]:
    """Unordered spectra of X and Z, each sorted by (real, imag)."""
    key = lambda z: (float(mp.re(z)), float(mp.im(z)))
    ex = sorted(_eigenvalues(pair.X), key=key)
    ez = sorted(_eigenvalues(pair.Z), key=key)
    return ex, ez


def random_conjugator(rng: np.random.Generator, size: int) -> mp.matrix:
    while True:
        G = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
        if np.linalg.cond(G) < 1e4:
            return mp.matrix([[mp.mpc(complex(v)) for v in row] for row in G])


@dataclass
class RoundTripReport:
    size: int
    trials: int
    max_b_error: float
    max_alpha_error: float
    max_rank_ratio: float

    def ok(self, tol: float = 1e-15) -> bool:
        return self.max_b_error < tol and self.max_alpha_error < tol and self.max_rank_ratio < RANK_TOL


def cm_roundtrip(size: int, trials: int, seed: int = 0) -> RoundTripReport:
    """Random normalized pair -> random conjugation -> cm_normalize recovers (b, alpha)."""
    eb = ea = rr = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        b = np.sort(sample_b(rng, size))
        al = rng.uniform(-5, 5, size=size) + 1j * rng.uniform(-5, 5, size=size)
        Z = build_Z([float(x) for x in b], [complex(x) for x in al])
        pair = CMPair.from_z(Z).conjugated(random_conjugator(rng, size))
        rr = max(rr, pair.rank_one_ratio())
        norm = cm_normalize(pair)
        eb = max(eb, max(float(abs(mp.mpc(x) - mp.mpf(y))) for x, y in zip(norm.zmatrix.b, Z.b)))
        ea = max(ea, max(float(abs(x - y)) for x, y in zip(norm.zmatrix.alpha, Z.alpha)))
    return RoundTripReport(size, trials, eb, ea, rr)


@dataclass
class CMRealityReport:
    size: int
    trials: int
    real_spectra: int
    violations: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def cm_reality_sample(size: int, trials: int, seed: int = 0, tol: float = 1e-20) -> CMRealityReport:
    """Pairs with real spectra of X and Z should normalize to real matrices.

    Half of the trials draw real alpha (these often give real spectra), half
    draw non-real alpha; each pair is hidden by a random complex conjugation.
    """
    real_cases = violations = 0
    for k in range(trials):
        rng = trial_rng(seed, k)
        b = np.sort(sample_b(rng, size))
        if k % 2 == 0:
            al = rng.uniform(-5, 5, size=size).astype(complex)
        else:
            al = sample_nonreal_alpha(rng, size)
        Z = build_Z([float(x) for x in b], [complex(x) for x in al])
        pair = CMPair.from_z(Z).conjugated(random_conjugator(rng, size))
        ex, ez = upsilon(pair)
        scale = max([mp.mpf(1)] + [abs(e) for e in ex + ez])
        if all(abs(mp.im(e)) < mp.mpf(10) ** -12 * scale for e in ex + ez):
            real_cases += 1
            norm = cm_normalize(pair)
            Zn = norm.pair.Z
            imag = max(abs(mp.im(Zn[i, j])) for i in range(size) for j in range(size))
            if imag > tol * scale:
                violations += 1
    return CMRealityReport(size, trials, real_cases, violations)


# ---------------------------------------------------------------------------
# discrete Wronskians of quasi-polynomial spaces


@dataclass
class DiscreteSampleReport:
    trials: int
    real_coefficients: int
    real_separated_roots: int
    limit_deviation: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def discrete_wronskian_sample(n: int, h: float, trials: int, seed: int = 0, degree: int = 2) -> DiscreteSampleReport:
    """Forward sampling for real quasi-polynomial spaces.

    For random real spaces spanned by e^{b_i t} g_i(t): counts how often the
    polynomial part of the normalized discrete Wronskian has real coefficients
    (always, for a real space), and how often its roots are real and pairwise
    at least |h| apart. Also reports how far Wr_h / h^{k(k-1)/2} is from the
    ordinary Wronskian at step h * 1e-12.
    """
    real_coeff = real_sep = 0
    limit = 0.0
    for k in range(trials):
        rng = trial_rng(seed, k)
        b = sample_b(rng, n + 1)
        fs = [
            QuasiPolynomial(mp.mpf(float(bi)), Polynomial([mp.mpc(float(c)) for c in rng.normal(size=degree + 1)], COMPLEX))
            for bi in b
        ]
        w = normalized_discrete_wronskian(fs, mp.mpf(h))
        if max(abs(mp.im(c)) for c in w.coeffs) <= mp.mpf(10) ** -30 * w.max_abs_coeff():
            real_coeff += 1
        rts = poly_roots(w).values()
        scale = max([mp.mpf(1)] + [abs(r) for r in rts])
        if all(abs(mp.im(r)) < mp.mpf(10) ** -20 * scale for r in rts) and all(
            abs(rts[i] - rts[j]) >= h for i in range(len(rts)) for j in range(i)
        ):
            real_sep += 1
        w0 = quasi_wronskian(fs).poly
        wh = normalized_discrete_wronskian(fs, mp.mpf(h) * mp.mpf(10) ** -12)
        limit = max(limit, float(wh.distance(w0) / w0.max_abs_coeff()))
    return DiscreteSampleReport(trials, real_coeff, real_sep, limit)

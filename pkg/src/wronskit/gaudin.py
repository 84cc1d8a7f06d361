"""Gaudin operators on tensor powers of the last fundamental sl_{n+1} module.

The module V = C^{n+1} carries basis v_1, ..., v_{n+1} with v_{n+1} highest and
v_a = E_{a+1,a} v_{a+1}. In that basis gl_{n+1} acts as the dual of the defining
representation:

    E_ij v_b = -(-1)^(i+j) [b = i] v_j.

Operator coefficients are kept exact: every coefficient of d^j/dt^j is a finite
sum of integer sparse matrices times prod_k (t - s_k)^(-e_k). Numbers only
enter when a coefficient is evaluated at a point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .bethe import CriticalPoint, FundamentalOperator, MasterParams
from .errors import InvalidInputError, NotCriticalPointError, UnsupportedInputError
from .polyring import Polynomial, mp

MAX_SIZE = 10**5
SINGULAR_TOL = 1e-25


# ---------------------------------------------------------------------------
# weights and tensor vectors


@dataclass(frozen=True)
class WeightBookkeeping:
    """Weights of sl_{n+1} as integer vectors in the epsilon basis, modulo (1, ..., 1)."""

    n: int

    def omega(self, i: int) -> tuple[int, ...]:
        return tuple(1 if k < i else 0 for k in range(self.n + 1))

    def alpha(self, i: int) -> tuple[int, ...]:
        return tuple((k == i - 1) - (k == i) for k in range(self.n + 1))

    @staticmethod
    def equal(a: Sequence[int], b: Sequence[int]) -> bool:
        diff = [x - y for x, y in zip(a, b)]
        return all(v == diff[0] for v in diff)

    def top_identity_holds(self) -> bool:
        """(n+1) omega_n equals alpha_1 + 2 alpha_2 + ... + n alpha_n."""
        lhs = [(self.n + 1) * v for v in self.omega(self.n)]
        rhs = [0] * (self.n + 1)
        for i in range(1, self.n + 1):
            rhs = [r + i * a for r, a in zip(rhs, self.alpha(i))]
        return self.equal(lhs, rhs)

    def lowering_counts(self, b: Sequence[int]) -> tuple[int, ...]:
        """How often each alpha_i is subtracted from m * omega_n to reach v_b."""
        return tuple(sum(1 for x in b if x <= i) for i in range(1, self.n + 1))

    def zero_weight_counts(self, m: int) -> tuple[int, ...]:
        if m % (self.n + 1):
            raise InvalidInputError("weight 0 needs m divisible by n + 1")
        return tuple(i * m // (self.n + 1) for i in range(1, self.n + 1))


def _basis_index(b: Sequence[int], n: int) -> int:
    idx = 0
    for x in b:
        idx = idx * (n + 1) + (x - 1)
    return idx


def _basis_sequence(idx: int, n: int, m: int) -> tuple[int, ...]:
    out = []
    for _ in range(m):
        idx, r = divmod(idx, n + 1)
        out.append(r + 1)
    return tuple(reversed(out))


def _check_size(n: int, m: int) -> None:
    if n < 1 or n > 2:
        raise UnsupportedInputError("only sl_2 and sl_3 are supported")
    if m * (n + 1) ** m > MAX_SIZE:
        raise UnsupportedInputError(f"m (n+1)^m exceeds {MAX_SIZE}")


@dataclass(frozen=True)
class TensorVector:
    n: int
    m: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != (self.n + 1) ** self.m:
            raise InvalidInputError("coefficient count does not match (n+1)^m")

    @classmethod
    def basis(cls, n: int, m: int, b: Sequence[int]) -> "TensorVector":
        c = [mp.mpc(0)] * (n + 1) ** m
        c[_basis_index(b, n)] = mp.mpc(1)
        return cls(n, m, tuple(c))

    @classmethod
    def from_terms(cls, n: int, m: int, terms: dict) -> "TensorVector":
        c = [mp.mpc(0)] * (n + 1) ** m
        for b, v in terms.items():
            c[_basis_index(b, n)] += mp.mpc(v)
        return cls(n, m, tuple(c))

    def norm(self):
        return mp.sqrt(mp.fsum(abs(v) ** 2 for v in self.coeffs))

    def __add__(self, other: "TensorVector") -> "TensorVector":
        return TensorVector(self.n, self.m, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TensorVector") -> "TensorVector":
        return TensorVector(self.n, self.m, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> "TensorVector":
        return TensorVector(self.n, self.m, tuple(c * a for a in self.coeffs))

    def weight_counts(self, tol=0) -> set[tuple[int, ...]]:
        wb = WeightBookkeeping(self.n)
        return {
            wb.lowering_counts(_basis_sequence(i, self.n, self.m))
            for i, v in enumerate(self.coeffs)
            if abs(v) > tol
        }

    def terms(self, tol=0) -> dict:
        return {
            _basis_sequence(i, self.n, self.m): v for i, v in enumerate(self.coeffs) if abs(v) > tol
        }


# ---------------------------------------------------------------------------
# sparse integer operators


def site_matrix(n: int, i: int, j: int) -> sp.csr_array:
    """E_ij on V in the basis v_1..v_{n+1}."""
    M = sp.lil_array((n + 1, n + 1), dtype=np.int64)
    M[j - 1, i - 1] = -((-1) ** (i + j))
    return M.tocsr()


def tensor_site(n: int, m: int, k: int, i: int, j: int) -> sp.csr_array:
    """E_ij acting in factor k (0-based) of the m-fold tensor power."""
    left = sp.identity((n + 1) ** k, dtype=np.int64, format="csr")
    right = sp.identity((n + 1) ** (m - k - 1), dtype=np.int64, format="csr")
    return sp.csr_array(sp.kron(sp.kron(left, site_matrix(n, i, j)), right, format="csr"))


def total_action(n: int, m: int, i: int, j: int) -> sp.csr_array:
    dim = (n + 1) ** m
    out = sp.csr_array((dim, dim), dtype=np.int64)
    for k in range(m):
        out = out + tensor_site(n, m, k, i, j)
    return out


def apply_sparse(A: sp.csr_array, v: TensorVector, w=1) -> list:
    out = [mp.mpc(0)] * len(v.coeffs)
    coo = A.tocoo()
    for r, c, val in zip(coo.row, coo.col, coo.data):
        if v.coeffs[c] != 0:
            out[r] += int(val) * v.coeffs[c]
    if w != 1:
        out = [w * x for x in out]
    return out


# ---------------------------------------------------------------------------
# operators with matrix-rational coefficients

Coefficient = dict  # exponent tuple -> sparse integer matrix


def _coef_add(a: Coefficient, b: Coefficient, sign: int = 1) -> Coefficient:
    out = dict(a)
    for e, M in b.items():
        out[e] = out[e] + sign * M if e in out else sign * M
    return {e: M for e, M in out.items() if M.count_nonzero()}


def _coef_scale(a: Coefficient, c: int) -> Coefficient:
    return {e: c * M for e, M in a.items()} if c else {}


def _coef_mul(a: Coefficient, b: Coefficient) -> Coefficient:
    out: Coefficient = {}
    for ea, A in a.items():
        for eb, B in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            P = sp.csr_array(A @ B)
            out[e] = out[e] + P if e in out else P
    return {e: M for e, M in out.items() if M.count_nonzero()}


def _coef_derivative(a: Coefficient) -> Coefficient:
    out: Coefficient = {}
    for e, A in a.items():
        for k, ek in enumerate(e):
            if ek:
                f = e[:k] + (ek + 1,) + e[k + 1 :]
                out[f] = out[f] - ek * A if f in out else -ek * A
    return {e: M for e, M in out.items() if M.count_nonzero()}


def _coef_nth_derivative(a: Coefficient, r: int) -> Coefficient:
    for _ in range(r):
        a = _coef_derivative(a)
    return a


@dataclass
class MatRatOperator:
    """sum_j C_j(t) d^j/dt^j; ``coeffs[j]`` maps pole exponents to integer matrices."""

    n: int
    s: tuple
    coeffs: list = field(default_factory=list)

    @property
    def m(self) -> int:
        return len(self.s)

    @property
    def dim(self) -> int:
        return (self.n + 1) ** self.m

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def _zero_key(self) -> tuple:
        return (0,) * self.m

    @classmethod
    def identity(cls, n: int, s: Sequence) -> "MatRatOperator":
        op = cls(n, tuple(s))
        op.coeffs = [{op._zero_key(): sp.identity(op.dim, dtype=np.int64, format="csr")}]
        return op

    def __add__(self, other: "MatRatOperator") -> "MatRatOperator":
        r = max(self.order, other.order)
        cs = []
        for j in range(r + 1):
            a = self.coeffs[j] if j <= self.order else {}
            b = other.coeffs[j] if j <= other.order else {}
            cs.append(_coef_add(a, b))
        return MatRatOperator(self.n, self.s, cs)

    def scaled(self, c: int) -> "MatRatOperator":
        return MatRatOperator(self.n, self.s, [_coef_scale(a, c) for a in self.coeffs])

    def compose(self, other: "MatRatOperator") -> "MatRatOperator":
        """self o other, moving derivatives to the right with the Leibniz rule."""
        out = [dict() for _ in range(self.order + other.order + 1)]
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                db = b
                for l in range(i + 1):
                    if l:
                        db = _coef_derivative(db)
                    if not db:
                        break
                    term = _coef_scale(_coef_mul(a, db), math.comb(i, l))
                    out[i - l + j] = _coef_add(out[i - l + j], term)
        while len(out) > 1 and not out[-1]:
            out.pop()
        return MatRatOperator(self.n, self.s, out)

    def coefficient(self, j: int) -> Coefficient:
        return self.coeffs[j] if 0 <= j <= self.order else {}

    def hamiltonian(self, i: int) -> Coefficient:
        """Coefficient of d^(order - i)/dt^(order - i)."""
        return self.coefficient(self.order - i)

    def pole_orders(self, j: int) -> list[int]:
        """Largest exponent of each (t - s_k) in the coefficient of d^j/dt^j."""
        out = [0] * self.m
        for e in self.coefficient(j):
            out = [max(a, b) for a, b in zip(out, e)]
        return out

    def _weights(self, coef: Coefficient, t0) -> dict:
        t0 = mp.mpc(t0)
        diffs = [t0 - sk for sk in self.s]
        if any(abs(x) == 0 for x in diffs):
            raise InvalidInputError("evaluation point is a pole")
        return {e: mp.fprod([diffs[k] ** (-ek) for k, ek in enumerate(e) if ek]) for e in coef}

    def evaluate_coef(self, coef: Coefficient, t0) -> np.ndarray:
        """Dense object array of mp numbers."""
        out = np.empty((self.dim, self.dim), dtype=object)
        out.fill(mp.mpc(0))
        for e, w in self._weights(coef, t0).items():
            coo = coef[e].tocoo()
            for r, c, val in zip(coo.row, coo.col, coo.data):
                out[r, c] += int(val) * w
        return out

    def evaluate_hamiltonian(self, i: int, t0) -> np.ndarray:
        return self.evaluate_coef(self.hamiltonian(i), t0)

    def apply_coef(self, coef: Coefficient, t0, v: TensorVector) -> TensorVector:
        acc = [mp.mpc(0)] * self.dim
        for e, w in self._weights(coef, t0).items():
            acc = [a + b for a, b in zip(acc, apply_sparse(coef[e], v, w))]
        return TensorVector(self.n, self.m, tuple(acc))


def _x_operator(n: int, s: tuple, i: int, j: int) -> MatRatOperator:
    """X_ij = [i == j] d/dt - sum_k E_ji^(k) / (t - s_k)."""
    m = len(s)
    dim = (n + 1) ** m
    c0: Coefficient = {}
    for k in range(m):
        e = tuple(1 if q == k else 0 for q in range(m))
        c0[e] = -tensor_site(n, m, k, j, i)
    coeffs = [c0]
    if i == j:
        coeffs.append({(0,) * m: sp.identity(dim, dtype=np.int64, format="csr")})
    return MatRatOperator(n, s, coeffs)


def _perm_sign(p: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def build_M(s: Sequence, n: int) -> MatRatOperator:
    """The determinant operator sum_sigma sgn(sigma) X_{1,sigma(1)} ... X_{n+1,sigma(n+1)}.

    Factors are composed left to right in row order; they do not commute.
    """
    s = tuple(mp.mpc(v) for v in s)
    m = len(s)
    if m:
        _check_size(n, m)
    if len(set(s)) != m:
        raise InvalidInputError("marked points must be distinct")
    X = {(i, j): _x_operator(n, s, i, j) for i in range(1, n + 2) for j in range(1, n + 2)}
    total = None
    for perm in itertools.permutations(range(n + 1)):
        term = X[(1, perm[0] + 1)]
        for row in range(1, n + 1):
            term = term.compose(X[(row + 1, perm[row] + 1)])
        term = term.scaled(_perm_sign(perm))
        total = term if total is None else total + term
    return total


def conjugate_K(M: MatRatOperator) -> MatRatOperator:
    """(-1)^r sum_j (-1)^j d^j/dt^j o C_j, rewritten in standard form.

    Applied to M of order n+1 this gives K with K_1 = -M_1 and
    K_2 = M_2 - n M_1'; in general the coefficient of d^(r-i) is
    sum_{l <= i} (-1)^l binom(r - l, i - l) M_l^((i - l)). Applying it twice
    returns the original operator.
    """
    r = M.order
    out = [dict() for _ in range(r + 1)]
    for j, C in enumerate(M.coeffs):
        sign = (-1) ** (r + j)
        D = C
        for l in range(j + 1):
            if l:
                D = _coef_derivative(D)
            if not D:
                break
            out[j - l] = _coef_add(out[j - l], _coef_scale(D, sign * math.comb(j, l)))
    return MatRatOperator(M.n, M.s, out)


# ---------------------------------------------------------------------------
# singular vectors


def raising_operators(n: int, m: int) -> list[sp.csr_array]:
    return [total_action(n, m, i, i + 1) for i in range(1, n + 1)]


def lowering_operators(n: int, m: int) -> list[sp.csr_array]:
    return [total_action(n, m, i + 1, i) for i in range(1, n + 1)]


def is_singular(v: TensorVector, tol: float = SINGULAR_TOL) -> bool:
    scale = v.norm()
    if scale == 0:
        return True
    for E in raising_operators(v.n, v.m):
        out = apply_sparse(E, v)
        if mp.sqrt(mp.fsum(abs(x) ** 2 for x in out)) > tol * scale:
            return False
    return True


def weight_indices(n: int, m: int, counts: Sequence[int]) -> list[int]:
    wb = WeightBookkeeping(n)
    counts = tuple(counts)
    return [
        i for i in range((n + 1) ** m) if wb.lowering_counts(_basis_sequence(i, n, m)) == counts
    ]


def _resolve_weight(n: int, m: int, weight) -> tuple[int, ...]:
    if weight == 0 or weight is None:
        return WeightBookkeeping(n).zero_weight_counts(m)
    counts = tuple(int(c) for c in weight)
    if len(counts) != n:
        raise InvalidInputError("weight must be 0 or n lowering counts")
    return counts


def sing_dimension(n: int, m: int, weight=0) -> int:
    """Dimension of the singular vectors of the given weight.

    ``weight`` is 0 or the tuple of lowering counts (how often each simple root
    is subtracted from m omega_n).
    """
    _check_size(n, m)
    cols = weight_indices(n, m, _resolve_weight(n, m, weight))
    if not cols:
        return 0
    blocks = [E.tocsc()[:, cols].toarray() for E in raising_operators(n, m)]
    A = np.vstack(blocks).astype(float)
    return len(cols) - int(np.linalg.matrix_rank(A))


def singular_basis(n: int, m: int, weight=0) -> list[TensorVector]:
    """Exact (integer-derived) basis of the singular vectors of a weight."""
    from fractions import Fraction

    from .bethe import _null_space

    cols = weight_indices(n, m, _resolve_weight(n, m, weight))
    rows = []
    for E in raising_operators(n, m):
        dense = E.tocsc()[:, cols].toarray()
        rows.extend([[Fraction(int(v)) for v in r] for r in dense if np.any(r)])
    if not rows:
        vecs = [[Fraction(int(i == j)) for j in range(len(cols))] for i in range(len(cols))]
    else:
        vecs = _null_space(rows, "rational")
    out = []
    for v in vecs:
        c = [mp.mpc(0)] * (n + 1) ** m
        for idx, val in zip(cols, v):
            c[idx] = mp.mpc(mp.mpf(val.numerator) / val.denominator)
        out.append(TensorVector(n, m, tuple(c)))
    return out


# ---------------------------------------------------------------------------
# universal weight function


def admissible_sequences(n: int, d: int) -> list[tuple[int, ...]]:
    """Sequences b with #{k : b_k <= i} = i (d - n); each value occurs d - n times."""
    m1 = d - n
    base = [a for a in range(1, n + 2) for _ in range(m1)]
    return sorted(set(itertools.permutations(base)))


def _weight_coefficient(b: Sequence[int], levels: list[list], s: Sequence, n: int):
    """w_B: the sum over assignments of level-i variables to the factors with b_k <= i."""
    positions = [[k for k, bk in enumerate(b) if bk <= i] for i in range(1, n + 1)]
    total = mp.mpc(0)
    for assign in itertools.product(*(itertools.permutations(range(len(lv))) for lv in levels)):
        # assign[i-1][r] is the index of the level-i variable given to positions[i-1][r]
        var = [dict(zip(positions[i], assign[i])) for i in range(n)]
        term = mp.mpc(1)
        for k, bk in enumerate(b):
            if bk == n + 1:
                continue
            for i in range(bk, n):
                term /= levels[i - 1][var[i - 1][k]] - levels[i][var[i][k]]
            term /= levels[n - 1][var[n - 1][k]] - s[k]
        total += term
    return total


def universal_weight_vector(x: CriticalPoint, s: MasterParams, check: bool = True) -> TensorVector:
    """Bethe vector sum_B w_B(x; s) v_B."""
    n, d = s.n, s.d
    x.check_shape(n, d)
    m = (n + 1) * (d - n)
    _check_size(n, m)
    levels = [list(lv) for lv in x.levels]
    terms = {b: _weight_coefficient(b, levels, s.s, n) for b in admissible_sequences(n, d)}
    v = TensorVector.from_terms(n, m, terms)
    if check and v.norm() < mp.mpf(10) ** -30:
        raise NotCriticalPointError("the weight function vanishes at this point")
    return v


# ---------------------------------------------------------------------------
# eigenvalues from the fundamental operator


def _taylor(p: Polynomial, t0, order: int) -> list:
    cs = list(p.to_complex().shift(mp.mpc(t0)).coeffs)
    cs += [mp.mpc(0)] * (order + 1)
    return cs[: order + 1]


def _series_div(a: list, b: list) -> list:
    out = []
    for k in range(len(a)):
        acc = a[k] - mp.fsum(out[j] * b[k - j] for j in range(k))
        out.append(acc / b[0])
    return out


def _series_mul(a: list, b: list) -> list:
    return [mp.fsum(a[j] * b[k - j] for j in range(k + 1)) for k in range(len(a))]


def _series_derivative(a: list) -> list:
    return [k * a[k] for k in range(1, len(a))] + [mp.mpc(0)]


def _log_derivative_series(p: Polynomial, t0, order: int) -> list:
    return _series_div(_taylor(p.derivative(), t0, order), _taylor(p, t0, order))


def fundamental_eigenvalues(D: FundamentalOperator, t0) -> list:
    """lambda_1(t0), ..., lambda_{n+1}(t0) from the factored operator

    (d - ln'(W/p_n)) (d - ln'(p_n/p_{n-1})) ... (d - ln'(p_1)).
    """
    chain = D.chain()
    n = len(chain) - 2
    T = n + 3
    for q in chain:
        if abs(q.to_complex()(mp.mpc(t0))) == 0:
            raise InvalidInputError("evaluation point is a root of the critical-point polynomials")
    # operator as Taylor series coefficients of d^0 .. d^k; start with the identity
    ops = [[mp.mpc(1)] + [mp.mpc(0)] * (T - 1)]
    for i in range(1, n + 2):  # rightmost factor first
        g = [u - v for u, v in zip(_log_derivative_series(chain[i], t0, T - 1), _log_derivative_series(chain[i - 1], t0, T - 1))]
        new = [[mp.mpc(0)] * T for _ in range(len(ops) + 1)]
        for j, a in enumerate(ops):
            da = _series_derivative(a)
            ga = _series_mul(g, a)
            for k in range(T):
                new[j][k] += da[k] - ga[k]
                new[j + 1][k] += a[k]
        ops = new
    order = len(ops) - 1
    return [ops[order - i][0] for i in range(1, order + 1)]


# ---------------------------------------------------------------------------
# checks


@dataclass
class CheckReport:
    name: str
    ok: bool
    deviation: float
    detail: str = ""

    def to_json(self) -> dict:
        return {"check": self.name, "ok": self.ok, "deviation": self.deviation, "detail": self.detail}


def _vec_norm(v: Iterable):
    return mp.sqrt(mp.fsum(abs(x) ** 2 for x in v))


def _check_point(K: MatRatOperator, t0) -> None:
    t0 = mp.mpc(t0)
    if any(abs(t0 - sk) == 0 for sk in K.s):
        raise InvalidInputError("evaluation point is a pole")


def eigen_check(K: MatRatOperator, v: TensorVector, D: FundamentalOperator, t0, tol: float = 1e-20) -> CheckReport:
    """K_i(t0) v = lambda_i(t0) v for every i, with lambda from the fundamental operator."""
    _check_point(K, t0)
    lams = fundamental_eigenvalues(D, t0)
    worst = mp.mpf(0)
    for i, lam in enumerate(lams, start=1):
        Kv = K.apply_coef(K.hamiltonian(i), t0, v)
        num = _vec_norm(a - lam * b for a, b in zip(Kv.coeffs, v.coeffs))
        den = max(_vec_norm(Kv.coeffs), abs(lam) * v.norm(), mp.mpf(10) ** -300)
        worst = max(worst, num / den)
    return CheckReport("eigen", bool(worst < tol), float(worst), f"t0={complex(t0)}")


def _matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A.dot(B)


def _fro(A: np.ndarray):
    return mp.sqrt(mp.fsum(abs(x) ** 2 for x in A.flat))


def commutation_check(M: MatRatOperator, pairs: int = 5, seed: int = 0, tol: float = 1e-20) -> CheckReport:
    """[M_i(u), M_j(v)] = 0 as matrices at random (u, v)."""
    rng = np.random.default_rng(seed)
    worst = mp.mpf(0)
    order = M.order
    for _ in range(pairs):
        u, w = (complex(*rng.normal(size=2)) * 2 for _ in range(2))
        Mu = [M.evaluate_hamiltonian(i, u) for i in range(1, order + 1)]
        Mw = [M.evaluate_hamiltonian(i, w) for i in range(1, order + 1)]
        for A in Mu:
            for B in Mw:
                C = _matmul(A, B) - _matmul(B, A)
                scale = max(_fro(A) * _fro(B), mp.mpf(10) ** -300)
                worst = max(worst, _fro(C) / scale)
    return CheckReport("commute", bool(worst < tol), float(worst), f"{pairs} pairs")


def sl_commutation_check(K: MatRatOperator, points: int = 3, seed: int = 0, tol: float = 1e-20) -> CheckReport:
    """Each K_i(t0) commutes with the total E_{i,i+1} and E_{i+1,i}."""
    rng = np.random.default_rng(seed)
    gens = raising_operators(K.n, K.m) + lowering_operators(K.n, K.m)
    gens = [G.toarray().astype(object) for G in gens]
    worst = mp.mpf(0)
    for _ in range(points):
        t0 = complex(*rng.normal(size=2)) * 2
        for i in range(1, K.order + 1):
            A = K.evaluate_hamiltonian(i, t0)
            for G in gens:
                C = _matmul(A, G) - _matmul(G, A)
                worst = max(worst, _fro(C) / max(_fro(A) * _fro(G), mp.mpf(10) ** -300))
    return CheckReport("sl-commute", bool(worst < tol), float(worst))


def shapovalov_symmetry_check(K: MatRatOperator, t0, trials: int = 20, seed: int = 0, tol: float = 1e-20) -> CheckReport:
    """<K_i(t0) u, w> = <u, K_i(t0) w> for the Hermitian form making the tensor basis orthonormal.

    For real s and t0 this is the Euclidean form; complex data break the
    symmetry even though the matrices stay complex symmetric.
    """
    _check_point(K, t0)
    rng = np.random.default_rng(seed)
    worst = mp.mpf(0)
    for i in range(1, K.order + 1):
        A = K.evaluate_hamiltonian(i, t0)
        AH = np.vectorize(mp.conj, otypes=[object])(A.T)
        anti = _fro(A - AH) / max(_fro(A), mp.mpf(10) ** -300)
        worst = max(worst, anti)
        for _ in range(trials):
            u = [mp.mpf(float(x)) for x in rng.normal(size=K.dim)]
            w = [mp.mpf(float(x)) for x in rng.normal(size=K.dim)]
            Au, Aw = A.dot(u), A.dot(w)
            lhs = mp.fsum(mp.conj(a) * b for a, b in zip(Au, w))
            rhs = mp.fsum(a * b for a, b in zip(u, Aw))
            scale = max(_vec_norm(Au) * _vec_norm(w), _vec_norm(u) * _vec_norm(Aw), mp.mpf(10) ** -300)
            worst = max(worst, abs(lhs - rhs) / scale)
    return CheckReport("shapovalov", bool(worst < tol), float(worst), f"t0={complex(t0)}")


def restricted_matrix(A: np.ndarray, basis: Sequence[TensorVector]) -> mp.matrix:
    """Matrix of A on the span of ``basis`` (assumed invariant), by least squares."""
    S = mp.matrix([[b.coeffs[r] for b in basis] for r in range(len(basis[0].coeffs))])
    AS = mp.matrix([[x for x in A.dot(list(b.coeffs))] for b in basis]).T
    StS = S.H * S
    return mp.lu_solve(StS, S.H * AS) if len(basis) == 1 else mp.inverse(StS) * (S.H * AS)


def real_spectrum_check(K: MatRatOperator, t0, tol: float = 1e-20) -> CheckReport:
    """Eigenvalues of K_i(t0) on the weight-0 singular vectors are real (real s, real t0)."""
    _check_point(K, t0)
    basis = singular_basis(K.n, K.m, 0)
    worst = mp.mpf(0)
    for i in range(1, K.order + 1):
        R = restricted_matrix(K.evaluate_hamiltonian(i, t0), basis)
        # mpmath returns (E, ER, EL) for 1x1 input regardless of the flags
        ev = [R[0, 0]] if R.rows == 1 else mp.eig(R, left=False, right=False)
        scale = max([abs(e) for e in ev] + [mp.mpf(10) ** -300])
        worst = max(worst, max(abs(mp.im(e)) for e in ev) / scale)
    return CheckReport("real-spectrum", bool(worst < tol), float(worst), f"dim={len(basis)}")


def bethe_vectors_independent(vectors: Sequence[TensorVector], tol: float = 1e-20) -> tuple[bool, int]:
    """Numerical rank of the vectors at 2^-prec/2 relative singular value cutoff."""
    if not vectors:
        return True, 0
    A = mp.matrix([[mp.mpc(c) for c in v.coeffs] for v in vectors])
    sv = mp.svd_c(A, compute_uv=False)
    sv = [abs(sv[i]) for i in range(len(sv))]
    top = max(sv)
    rank = sum(1 for x in sv if x > tol * top)
    return rank == len(vectors), rank


def simple_spectrum_check(eigen_tuples: Sequence[Sequence], tol: float = 1e-10) -> CheckReport:
    """Distinct Bethe vectors carry distinct eigenvalue tuples."""
    worst = mp.inf
    for a, b in itertools.combinations(eigen_tuples, 2):
        gap = max(abs(x - y) for x, y in zip(a, b)) / max([abs(x) for x in a + b] + [mp.mpf(1)])
        worst = min(worst, gap)
    if worst == mp.inf:
        worst = mp.mpf(1)
    return CheckReport("simple-spectrum", bool(worst > tol), float(worst), f"{len(eigen_tuples)} vectors")


ALL_CHECKS = ("singular", "independent", "eigen", "simple-spectrum", "commute", "sl-commute", "shapovalov", "real-spectrum", "sing-dimension")


@dataclass
class GaudinInstanceReport:
    n: int
    d: int
    s: list
    orbits: int
    expected: int
    checks: list
    real_orbits: int = 0

    @property
    def ok(self) -> bool:
        return self.orbits == self.expected and all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "s": [str(complex(v)) for v in self.s],
            "orbits": self.orbits,
            "real_orbits": self.real_orbits,
            "expected": self.expected,
            "ok": self.ok,
            "checks": [c.to_json() for c in self.checks],
        }


def gaudin_instance_checks(
    n: int, d: int, s: Sequence, *, t0=None, checks: Sequence[str] = ALL_CHECKS, seed: int = 0
) -> GaudinInstanceReport:
    """Solve the Bethe equations for s and run the requested operator checks.

    ``t0`` defaults to a point away from every s_k; the Shapovalov and
    real-spectrum checks are skipped (reported as not ok) for non-real s or t0.
    """
    from .bethe import fundamental_operator, solve_critical
    from .grassmann import degree_iota

    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise InvalidInputError(f"unknown checks: {sorted(unknown)}")
    params = MasterParams(tuple(s), n, d)
    if t0 is None:
        t0 = max(float(mp.re(v)) for v in params.s) + 0.5
    pts = solve_critical(params, seed=seed)
    M = build_M(params.s, n)
    K = conjugate_K(M)
    vecs = [universal_weight_vector(x, params) for x in pts]
    real_data = all(mp.im(v) == 0 for v in params.s) and mp.im(mp.mpc(t0)) == 0
    out = []
    if "singular" in checks:
        bad = sum(not is_singular(v) for v in vecs)
        out.append(CheckReport("singular", bad == 0, float(bad), f"{len(vecs)} vectors"))
    if "independent" in checks:
        ok, rank = bethe_vectors_independent(vecs)
        out.append(CheckReport("independent", ok, float(rank), f"rank {rank}"))
    if "eigen" in checks or "simple-spectrum" in checks:
        ops = [fundamental_operator(x, params) for x in pts]
        if "eigen" in checks:
            reps = [eigen_check(K, v, D, t0) for v, D in zip(vecs, ops)]
            worst = max(r.deviation for r in reps)
            out.append(CheckReport("eigen", all(r.ok for r in reps), worst, f"t0={complex(t0)}"))
        if "simple-spectrum" in checks:
            out.append(simple_spectrum_check([fundamental_eigenvalues(D, t0) for D in ops]))
    if "commute" in checks:
        out.append(commutation_check(M, seed=seed))
    if "sl-commute" in checks:
        out.append(sl_commutation_check(K, seed=seed))
    for name, fn in (("shapovalov", shapovalov_symmetry_check), ("real-spectrum", real_spectrum_check)):
        if name in checks:
            if real_data:
                out.append(fn(K, t0))
            else:
                out.append(CheckReport(name, False, float("nan"), "needs real s and t0"))
    if "sing-dimension" in checks:
        dim = sing_dimension(n, len(params.s), 0)
        out.append(CheckReport("sing-dimension", dim == degree_iota(n, d), float(dim), f"expected {degree_iota(n, d)}"))
    real = sum(x.is_conjugation_stable() for x in pts)
    return GaudinInstanceReport(n, d, list(params.s), len(pts), degree_iota(n, d), out, real)

"""Jacobi band coefficients of the hypergeometric family and related tools.

The recurrence matrix J has a unit superdiagonal, beta on the diagonal and
alpha, gamma on the first two subdiagonals:

    x B^(n) = gamma_{n-1} B^(n-2) + alpha_n B^(n-1) + beta_n B^(n) + B^(n+1)

All three bands are products of a single sequence lambda_n, which also gives
the bidiagonal factorization J = L1 L2 U.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .checks import CheckResult
from .exactnum import poly_lincomb, poly_shift, poly_trim
from .hyperfun import KAPPA, HyperTuple, ParameterError


class BandedMatrix:
    """Square N x N matrix stored as sparse rows (dict column -> value)."""

    def __init__(self, N: int, rows: Optional[list] = None):
        self.N = N
        self.rows: list[dict] = rows if rows is not None else [dict() for _ in range(N)]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i].get(j, Fraction(0))

    def __setitem__(self, ij, v):
        i, j = ij
        if 0 <= i < self.N and 0 <= j < self.N:
            if v:
                self.rows[i][j] = v
            else:
                self.rows[i].pop(j, None)

    def band(self, k: int) -> list:
        """Entries M[i][i+k] along offset k."""
        return [self[i, i + k] for i in range(max(0, -k), min(self.N, self.N - k))]

    def row_sum(self, i: int) -> Fraction:
        return sum(self.rows[i].values(), Fraction(0))

    def transpose(self) -> "BandedMatrix":
        T = BandedMatrix(self.N)
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                T.rows[j][i] = v
        return T

    def __matmul__(self, other: "BandedMatrix") -> "BandedMatrix":
        out = BandedMatrix(self.N)
        for i, row in enumerate(self.rows):
            acc: dict = {}
            for k, v in row.items():
                for j, w in other.rows[k].items():
                    acc[j] = acc.get(j, 0) + v * w
            out.rows[i] = {j: v for j, v in acc.items() if v}
        return out

    def dense(self) -> list[list[Fraction]]:
        return [[self[i, j] for j in range(self.N)] for i in range(self.N)]

    def scaled(self, left: list, right: list) -> "BandedMatrix":
        """diag(left) M diag(right)."""
        out = BandedMatrix(self.N)
        for i, row in enumerate(self.rows):
            out.rows[i] = {j: left[i] * v * right[j] for j, v in row.items()}
        return out

    def block_equal(self, other: "BandedMatrix", M: int) -> bool:
        return all(self[i, j] == other[i, j] for i in range(M) for j in range(M))


def c_seq(t: HyperTuple, n: int) -> Fraction:
    """c_{2k-1} = c + k, c_{2k} = d + k (so c_{-1} = c, c_0 = d)."""
    if n % 2:
        return t.c + (n + 1) // 2
    return t.d + n // 2


def lambda_n(t: HyperTuple, idx: int) -> Fraction:
    a, b = t.a, t.b
    n, r = divmod(idx, 3)
    cn, cm = c_seq(t, n), c_seq(t, n - 1)
    if r == 0:
        if n == 0:
            return Fraction(0)
        num = n * (b + n - 1) * (cn - a - 1)
        den = (cn + n - 2) * (cn + n - 1) * (cm + n - 1)
    elif r == 1:
        if n == 0:
            return Fraction(0)
        num = n * (a + n) * (cm - b)
        den = (cn + n - 1) * (cm + n - 1) * (cm + n)
    elif n == 0:
        # (c_0 - 1)/(c_0 - 1) cancels; keeps d = 1 tuples finite
        num, den = a * b, t.c * t.d
    else:
        num = (a + n) * (b + n) * (cn - 1)
        den = (cn + n - 1) * (cn + n) * (cm + n)
    if den == 0:
        raise ParameterError(f"lambda_{idx} has a zero denominator for tuple {t}")
    return num / den


@dataclass
class BandCoefficients:
    tuple: Optional[HyperTuple]
    lam: list
    beta: list   # beta[n], n >= 0
    alpha: list  # alpha[n], n >= 1 (alpha[0] = 0 placeholder)
    gamma: list  # gamma[n], n >= 1 (gamma[0] = 0 placeholder)
    kappa: Fraction = KAPPA

    @property
    def N(self):
        return len(self.beta)

    def jacobi_matrix(self, N: Optional[int] = None) -> BandedMatrix:
        N = N or self.N
        J = BandedMatrix(N)
        for n in range(N):
            J[n, n + 1] = Fraction(1)
            J[n, n] = self.beta[n]
            if n + 1 < N:
                J[n + 1, n] = self.alpha[n + 1]
            if n + 2 < N:
                J[n + 2, n] = self.gamma[n + 1]
        return J


def band_coefficients(t: HyperTuple, N: int) -> BandCoefficients:
    """beta_n for n < N plus alpha, gamma up to index N."""
    lam = [lambda_n(t, i) for i in range(3 * N + 6)]
    beta = [lam[3 * n] + lam[3 * n + 1] + lam[3 * n + 2] for n in range(N)]
    alpha = [Fraction(0)] + [
        (lam[3 * n + 1] + lam[3 * n + 2]) * lam[3 * n + 3] + lam[3 * n + 2] * lam[3 * n + 4]
        for n in range(N)
    ]
    gamma = [Fraction(0)] + [lam[3 * n + 2] * lam[3 * n + 4] * lam[3 * n + 6] for n in range(N)]
    return BandCoefficients(t, lam, beta, alpha, gamma)


def bands_from_jacobi(J: BandedMatrix) -> BandCoefficients:
    """Read beta, alpha, gamma back off a Jacobi matrix (no lambda data)."""
    N = J.N
    beta = [J[n, n] for n in range(N)]
    alpha = [Fraction(0)] + [J[n + 1, n] for n in range(N - 1)]
    gamma = [Fraction(0)] + [J[n + 2, n] for n in range(N - 2)]
    return BandCoefficients(None, [], beta, alpha, gamma)


def jacobi_from_sequences(seqs, N: int) -> BandedMatrix:
    """J recovered by expanding x B^(n) in the B basis (independent of lambda)."""
    J = BandedMatrix(N)
    for n in range(N):
        p = poly_shift(seqs.B[n])
        # peel off B^(n+1), then lower terms by leading coefficient
        if n + 1 < len(seqs.B):
            J[n, n + 1] = Fraction(1)
            p = poly_lincomb((1, p), (-1, seqs.B[n + 1]))
        else:
            p = p[: n + 1]
        for m in range(n, -1, -1):
            c = p[m] if m < len(p) else Fraction(0)
            if c:
                J[n, m] = c
                p = poly_lincomb((1, p), (-c, seqs.B[m]))
        if poly_trim(p):
            raise ArithmeticError("x B^(n) is not in the span of B^(0..n+1)")
    return J


def recurrence_check(seqs, bands: BandCoefficients, N: int) -> CheckResult:
    """Four-term recurrence for B and its dual for A1, A2 separately."""
    res = CheckResult("four-term recurrences")
    be, al, ga = bands.beta, bands.alpha, bands.gamma
    B, A1, A2 = seqs.B, seqs.A1, seqs.A2
    for n in range(N - 1):
        terms = [(1, B[n + 1]), (be[n], B[n])]
        if n >= 1:
            terms.append((al[n], B[n - 1]))
        if n >= 2:
            terms.append((ga[n - 1], B[n - 2]))
        ok = poly_lincomb((1, poly_shift(B[n])), *((-s, p) for s, p in terms)) == []
        if not res.record(ok, {"family": "B", "n": n}):
            return res
    for name, A in (("A1", A1), ("A2", A2)):
        for n in range(N - 2):
            terms = [(be[n], A[n]), (al[n + 1], A[n + 1]), (ga[n + 1], A[n + 2])]
            if n >= 1:
                terms.append((1, A[n - 1]))
            ok = poly_lincomb((1, poly_shift(A[n])), *((-s, p) for s, p in terms)) == []
            if not res.record(ok, {"family": name, "n": n}):
                return res
    return res


def lu3_factorize(bands: BandCoefficients, N: int):
    """Bidiagonal factors with J = L1 L2 U (exact away from the truncation edge)."""
    lam = bands.lam
    if len(lam) < 3 * N + 3:
        raise ValueError("not enough lambda values for this N")
    L1, L2, U = BandedMatrix(N), BandedMatrix(N), BandedMatrix(N)
    for n in range(N):
        L1[n, n] = L2[n, n] = Fraction(1)
        if n + 1 < N:
            L1[n + 1, n] = lam[3 * n + 3]
            L2[n + 1, n] = lam[3 * n + 4]
        if lam[3 * n + 2] == 0:
            raise ArithmeticError(f"U has a zero diagonal entry at n={n}")
        U[n, n] = lam[3 * n + 2]
        U[n, n + 1] = Fraction(1)
    return L1, L2, U


def nonnegativity_region(t: HyperTuple) -> bool:
    return t.is_nonnegative()


# ------------------------------------------------------- uniform registry

def _T(*v):
    return HyperTuple(*(Fraction(s) for s in v))


STOCHASTIC = [
    _T("1/3", "2/3", "1/2", 1), _T("2/3", "1/3", "1/2", 1),
    _T("2/3", "4/3", 1, "3/2"), _T("4/3", "2/3", 1, "3/2"),
    _T("4/3", "5/3", "3/2", 2), _T("5/3", "4/3", "3/2", 2),
]
SEMI_STOCHASTIC = [
    _T("1/3", "2/3", 1, "3/2"), _T("2/3", "1/3", 1, "3/2"),
    _T("2/3", "4/3", "3/2", 2), _T("4/3", "2/3", "3/2", 2),
    _T("4/3", "5/3", 2, "5/2"), _T("5/3", "4/3", 2, "5/2"),
]


@dataclass(frozen=True)
class UniformEntry:
    tuple: HyperTuple
    family: str  # "stochastic" | "semi-stochastic"
    partner: HyperTuple


def uniform_tuples() -> list[UniformEntry]:
    out = []
    for fam, lst in (("stochastic", STOCHASTIC), ("semi-stochastic", SEMI_STOCHASTIC)):
        out.extend(UniformEntry(t, fam, t.swap()) for t in lst)
    return out


def in_registry(t: HyperTuple) -> bool:
    return t in STOCHASTIC or t in SEMI_STOCHASTIC


def toeplitz_deviation(bands: BandCoefficients, N: Optional[int] = None) -> list:
    """Band entries differing from (3k, 3k^2, k^3), as (name, index, value)."""
    k = bands.kappa
    N = min(N or bands.N, bands.N)
    dev = []
    for n in range(N):
        if bands.beta[n] != 3 * k:
            dev.append(("beta", n, bands.beta[n]))
    for n in range(1, N + 1):
        if bands.alpha[n] != 3 * k * k:
            dev.append(("alpha", n, bands.alpha[n]))
        if bands.gamma[n] != k**3:
            dev.append(("gamma", n, bands.gamma[n]))
    return dev


def is_almost_uniform(bands: BandCoefficients, N: Optional[int] = None) -> bool:
    """Toeplitz except possibly in column 0 (beta_0, alpha_1, gamma_1)."""
    allowed = {("beta", 0), ("alpha", 1), ("gamma", 1)}
    return all((name, i) in allowed for name, i, _ in toeplitz_deviation(bands, N))

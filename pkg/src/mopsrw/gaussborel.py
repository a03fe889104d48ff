"""Step-line moment matrix and its exact LDU factorization.

The moment matrix is g[i][2k] = rho1[i+k], g[i][2k+1] = rho2[i+k].  Writing
g = S^{-1} H St^{-T} with S, St lower unitriangular, the rows of S are the
monic type II polynomials B^(n) and the rows of H^{-1} St, split by column
parity, are the type I pairs (A1^(n), A2^(n)).

Integrals against the weights are never done by quadrature: a polynomial
integrates to a finite dot product with the moment sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from .checks import CheckResult
from .exactnum import binomial, poly_trim, pochhammer, poly_eval
from .hyperfun import HyperTuple


class NotPerfectError(ArithmeticError):
    def __init__(self, index: int):
        super().__init__(f"zero pivot at index {index}: system is not perfect there")
        self.index = index


class MomentTable:
    """Lazily evaluated moment sequences rho1[n], rho2[n].

    Built either from a tuple (closed-form Pochhammer quotients) or from two
    arbitrary callables, which is how Christoffel images are represented.
    """

    def __init__(self, rho1: Callable[[int], Fraction], rho2: Callable[[int], Fraction],
                 tuple: Optional[HyperTuple] = None, label: str = ""):
        self._f = (rho1, rho2)
        self._cache: tuple[dict, dict] = ({}, {})
        self.tuple = tuple
        self.label = label or (str(tuple) if tuple else "custom")

    def rho(self, a: int, n: int) -> Fraction:
        cache = self._cache[a - 1]
        if n not in cache:
            cache[n] = Fraction(self._f[a - 1](n))
        return cache[n]

    def rho1(self, n):
        return self.rho(1, n)

    def rho2(self, n):
        return self.rho(2, n)

    def table(self, N: int) -> tuple[list, list]:
        return [self.rho1(n) for n in range(N)], [self.rho2(n) for n in range(N)]

    def integrate(self, poly, a: int) -> Fraction:
        """Integral of poly(x) * w_a(x) d(mu)."""
        return sum((c * self.rho(a, i) for i, c in enumerate(poly) if c), Fraction(0))

    def pair(self, p, A1, A2) -> Fraction:
        """Integral of p(x) * (A1(x) w1(x) + A2(x) w2(x)) d(mu)."""
        tot = Fraction(0)
        for i, pi in enumerate(p):
            if not pi:
                continue
            for j, c in enumerate(A1):
                if c:
                    tot += pi * c * self.rho1(i + j)
            for j, c in enumerate(A2):
                if c:
                    tot += pi * c * self.rho2(i + j)
        return tot


def moments(t: HyperTuple, N: Optional[int] = None, check_region: bool = True) -> MomentTable:
    """Closed-form moments of the hypergeometric pair (W1, W2).

    rho1[n] = (a)_n (b)_n / ((c)_n (d)_n); rho2 uses the shift (a, b+1; c+1, d).
    ``N`` only pre-fills the cache.
    """
    if check_region:
        t.require_perfect()
    a, b, c, d = t.astuple()

    def r1(n):
        return pochhammer(a, n) * pochhammer(b, n) / (pochhammer(c, n) * pochhammer(d, n))

    def r2(n):
        return pochhammer(a, n) * pochhammer(b + 1, n) / (pochhammer(c + 1, n) * pochhammer(d, n))

    mt = MomentTable(r1, r2, tuple=t)
    if N:
        mt.table(N)
    return mt


def moment_matrix(mt: MomentTable, N: int) -> list[list[Fraction]]:
    return [[mt.rho(1 + (j & 1), i + j // 2) for j in range(N)] for i in range(N)]


@dataclass
class GaussBorelFactorization:
    """S g St^T = H, grown one index at a time."""

    moments: MomentTable
    S: list = field(default_factory=list)
    Stilde: list = field(default_factory=list)
    H: list = field(default_factory=list)
    # Doolittle factors g = L D U, kept for incremental growth
    _L: list = field(default_factory=list, repr=False)
    _U: list = field(default_factory=list, repr=False)

    @property
    def N(self) -> int:
        return len(self.H)

    def g(self, i, j):
        return self.moments.rho(1 + (j & 1), i + j // 2)

    def extend(self, N: int) -> "GaussBorelFactorization":
        L, U, D = self._L, self._U, self.H
        for n in range(self.N, N):
            # row n of L and column n of U against the existing block
            Lrow = []
            for j in range(n):
                s = self.g(n, j) - sum(Lrow[k] * D[k] * U[k][j] for k in range(j))
                Lrow.append(s / (D[j] * U[j][j]))
            Ucol = []
            for i in range(n):
                s = self.g(i, n) - sum(L[i][k] * D[k] * Ucol[k] for k in range(i))
                Ucol.append(s / (L[i][i] * D[i]))
            piv = self.g(n, n) - sum(Lrow[k] * D[k] * Ucol[k] for k in range(n))
            if piv == 0:
                raise NotPerfectError(n)
            L.append(Lrow + [Fraction(1)])
            for i in range(n):
                U[i].append(Ucol[i])
            U.append([Fraction(0)] * n + [Fraction(1)])
            D.append(piv)
            # S = L^{-1}; St = (U^{-1})^T, i.e. St row n = column n of U^{-1}
            Srow = [-sum(Lrow[k] * self.S[k][j] for k in range(j, n)) for j in range(n)]
            self.S.append(Srow + [Fraction(1)])
            Strow = [-sum(self.Stilde[k][j] * Ucol[k] for k in range(j, n)) for j in range(n)]
            self.Stilde.append(Strow + [Fraction(1)])
        return self

    def dense(self, which: str, N: Optional[int] = None):
        N = N or self.N
        rows = getattr(self, which)
        return [[rows[i][j] if j <= i else Fraction(0) for j in range(N)] for i in range(N)]


def factorize(mt: MomentTable, N: int) -> GaussBorelFactorization:
    return GaussBorelFactorization(mt).extend(N)


@dataclass
class PolynomialSequences:
    B: list
    A1: list
    A2: list

    @property
    def N(self):
        return len(self.B)

    def q_eval(self, n: int, w1, w2, x):
        """Linear form q^(n) = A1 w1 + A2 w2 at a point where w1, w2 are known."""
        return poly_eval(self.A1[n], x) * w1 + poly_eval(self.A2[n], x) * w2


def extract_sequences(f: GaussBorelFactorization) -> PolynomialSequences:
    B, A1, A2 = [], [], []
    for n in range(f.N):
        B.append(list(f.S[n][: n + 1]))
        row = [v / f.H[n] for v in f.Stilde[n][: n + 1]]
        A1.append(poly_trim(row[0::2]))
        A2.append(poly_trim(row[1::2]))
    return PolynomialSequences(B, A1, A2)


@lru_cache(maxsize=64)
def _cached(t: HyperTuple, N: int):
    mt = moments(t)
    f = factorize(mt, N)
    return mt, f, extract_sequences(f)


def sequences_for(t: HyperTuple, N: int):
    """(MomentTable, factorization, sequences) for a tuple, memoised."""
    return _cached(t, N)


def biorthogonality_check(seqs: PolynomialSequences, mt: MomentTable, N: int) -> CheckResult:
    res = CheckResult("biorthogonality")
    for m in range(N):
        for k in range(N):
            v = mt.pair(seqs.B[m], seqs.A1[k], seqs.A2[k])
            if not res.record(v == (1 if m == k else 0), {"m": m, "k": k, "value": v}):
                return res
    return res


def type2_orthogonality_check(seqs: PolynomialSequences, mt: MomentTable, N: int) -> CheckResult:
    """B^(n) annihilates x^k w1 for k <= (n-1)//2 and x^k w2 for k < n//2."""
    res = CheckResult("type II orthogonality")
    for n in range(N):
        for a, kmax in ((1, (n + 1) // 2), (2, n // 2)):
            for k in range(kmax):
                v = mt.integrate([0] * k + seqs.B[n], a)
                if not res.record(v == 0, {"n": n, "weight": a, "k": k, "value": v}):
                    return res
    return res


def type1_orthogonality_check(seqs: PolynomialSequences, mt: MomentTable, N: int) -> CheckResult:
    """x^k against q^(n): zero for k < n and one at k = n."""
    res = CheckResult("type I orthogonality")
    for n in range(N):
        for k in range(n + 1):
            v = mt.pair([0] * k + [1], seqs.A1[n], seqs.A2[n])
            if not res.record(v == (1 if k == n else 0), {"n": n, "k": k, "value": v}):
                return res
    return res


def reconstruction_check(f: GaussBorelFactorization) -> CheckResult:
    """S g St^T == diag(H) on the computed block (equivalent to g = S^-1 H St^-T)."""
    res = CheckResult("LDU reconstruction")
    N = f.N
    g = moment_matrix(f.moments, N)
    Sg = [[sum(f.S[i][k] * g[k][j] for k in range(i + 1)) for j in range(N)] for i in range(N)]
    for i in range(N):
        for j in range(N):
            v = sum(Sg[i][k] * f.Stilde[j][k] for k in range(j + 1))
            if not res.record(v == (f.H[i] if i == j else 0), (i, j)):
                return res
    return res


# ------------------------------------------------------------ closed forms

def H_closed_form(t: HyperTuple, n: int) -> Fraction:
    a, b, c, d = t.astuple()
    P = pochhammer
    m, odd = divmod(n, 2)
    if not odd:
        num = P(1, 2 * m) * P(a, 2 * m) * P(b, 2 * m) * P(d - a, m) * P(d - b, m)
        den = P(c, 3 * m) * P(d, 3 * m) * P(d + m - 1, 2 * m)
    else:
        num = P(1, 2 * m + 1) * P(a, 2 * m + 1) * P(b + 1, 2 * m) * P(c - a + 1, m) * P(c - b, m + 1)
        den = P(c + 1, 3 * m + 1) * P(c + m, 2 * m + 1) * P(d, 3 * m + 1)
    return num / den


def H_pineiro(a, b, n: int) -> Fraction:
    """H_n for the reduction c = a, d = b + 1."""
    a, b = Fraction(a), Fraction(b)
    P = pochhammer
    m, odd = divmod(n, 2)
    if not odd:
        num = P(1, m) * P(1, 2 * m) * P(a, 2 * m) * P(b, 2 * m) * P(b + 1 - a, m)
        den = P(a, 3 * m) * P(b + 1, 3 * m) * P(b + m, 2 * m)
    else:
        num = P(1, m) * P(1, 2 * m + 1) * P(a, 2 * m + 1) * P(b + 1, 2 * m) * P(a - b, m + 1)
        den = P(a + 1, 3 * m + 1) * P(a + m, 2 * m + 1) * P(b + 1, 3 * m + 1)
    return num / den


def B_explicit(t: HyperTuple, n: int) -> list[Fraction]:
    """Monic B^(n) from its terminating 3F2 representation."""
    a, b, c, d = t.astuple()
    cn = c + n // 2
    dn = d + (n - 1) // 2
    coeffs = [Fraction(0)] * (n + 1)
    for j in range(n + 1):
        num = pochhammer(a + n - j, j) * pochhammer(b + n - j, j)
        den = pochhammer(cn + n - j, j) * pochhammer(dn + n - j, j)
        coeffs[n - j] = (-1) ** j * binomial(n, j) * num / den
    return coeffs


def to_json(f: GaussBorelFactorization, seqs: PolynomialSequences) -> dict:
    from .exactnum import fmt_rational as s

    return {
        "S": [[s(v) for v in row] for row in f.S],
        "Stilde": [[s(v) for v in row] for row in f.Stilde],
        "H": [s(v) for v in f.H],
        "B": [[s(v) for v in p] for p in seqs.B],
        "A1": [[s(v) for v in p] for p in seqs.A1],
        "A2": [[s(v) for v in p] for p in seqs.A2],
    }

"""Markov chains built from the Jacobi matrix.

Normalising J by the values of the type II polynomials at x = 1 gives a
transition matrix P_II; normalising its transpose by the type I linear forms
at x = 1 gives P_I.  Everything here is exact except the float ratio and
Rodrigues checks at the bottom.

r-step probabilities are available through two independent routes: moment
integrals (``kmcg_transition``) and banded matrix powers
(``matrix_power_transition``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .checks import CheckResult
from .exactnum import binomial, pochhammer, poly_eval, poly_lincomb, poly_mul, poly_shift
from .gaussborel import PolynomialSequences, sequences_for
from .hyperfun import (
    KAPPA,
    HyperTuple,
    ParameterError,
    F_ratio,
    gauss2F1_float,
    r_plus,
    weight_eval,
)
from .jacobi import BandCoefficients, BandedMatrix, band_coefficients, lu3_factorize


class AssumptionError(ArithmeticError):
    """A normaliser that the theory expects to be positive is not."""


class WindowError(ValueError):
    """Truncation too small for an exact finite-window computation."""


# ------------------------------------------------------------ unity values

def q_at_unity(t: HyperTuple, N: int) -> list[Fraction]:
    a, b, c, d = t.astuple()
    P = pochhammer
    out = []
    for n in range(N):
        m, odd = divmod(n, 2)
        if odd:
            v = P(c, 3 * m + 2) * P(d, 3 * m + 1) / (P(1, n) * P(a, n) * P(b, n))
        else:
            v = P(c, 3 * m) * P(d, 3 * m) / (P(1, n) * P(a, n) * P(b, n))
        out.append(v)
    return out


def b_at_unity(seqs: PolynomialSequences, N: Optional[int] = None) -> list[Fraction]:
    N = N or seqs.N
    return [poly_eval(seqs.B[n], Fraction(1)) for n in range(N)]


def b_at_unity_recurrence(bands: BandCoefficients, N: int, x=Fraction(1)) -> list:
    """B^(n)(x) for n < N from the four-term recurrence (no polynomials)."""
    if N > bands.N + 1:
        raise ValueError("bands too short")
    be, al, ga = bands.beta, bands.alpha, bands.gamma
    B = [Fraction(1) if isinstance(x, Fraction) else 1.0]
    for n in range(N - 1):
        v = (x - be[n]) * B[n]
        if n >= 1:
            v -= al[n] * B[n - 1]
        if n >= 2:
            v -= ga[n - 1] * B[n - 2]
        B.append(v)
    return B[:N]


def q_from_sequences(t: HyperTuple, seqs: PolynomialSequences, N: Optional[int] = None) -> list:
    """q^(n)(1) = A1^(n)(1) + (c/b) A2^(n)(1), since w1(1) = 1, w2(1) = c/b."""
    N = N or seqs.N
    one = Fraction(1)
    return [poly_eval(seqs.A1[n], one) + t.c / t.b * poly_eval(seqs.A2[n], one) for n in range(N)]


@dataclass
class UnityValues:
    qAt1: list
    bAt1: list

    @classmethod
    def for_tuple(cls, t: HyperTuple, N: int) -> "UnityValues":
        return cls(q_at_unity(t, N), b_at_unity_recurrence(band_coefficients(t, N), N))


# ----------------------------------------------------- stochastic matrices

def classify_row(s: Fraction):
    if s == 1:
        return "stochastic"
    return ("sink", 1 - s) if s < 1 else ("source", s - 1)


@dataclass
class StochasticSystem:
    kind: str  # "I" | "II"
    sigma: list
    P: BandedMatrix
    rowBalance: list = field(default_factory=list)
    tuple: Optional[HyperTuple] = None
    uniform_sigma: bool = False

    @property
    def N(self):
        return self.P.N

    def interior_rows(self):
        # last two rows lose mass to the truncated columns
        return range(max(self.N - 2, 0))

    def row_sums(self):
        return [self.P.row_sum(i) for i in range(self.N)]


def _balance(P: BandedMatrix, rows) -> list:
    return [classify_row(P.row_sum(i)) for i in rows]


def stochastic_normalize(bands: BandCoefficients, unity: UnityValues, kind: str,
                         N: Optional[int] = None) -> StochasticSystem:
    """P_II = sigma J sigma^{-1} with sigma_n = 1/B^(n)(1); P_I = sigma Jt sigma^{-1}, sigma_n = 1/q^(n)(1)."""
    N = N or bands.N
    vals = unity.bAt1 if kind == "II" else unity.qAt1
    if len(vals) < N:
        raise ValueError("not enough unity values")
    for n, v in enumerate(vals[:N]):
        if v <= 0:
            raise AssumptionError(f"normaliser at n={n} is {v}, expected positive")
    J = bands.jacobi_matrix(N)
    sigma = [1 / v for v in vals[:N]]
    inv = list(vals[:N])
    M = J if kind == "II" else J.transpose()
    P = M.scaled(sigma, inv)
    sysm = StochasticSystem(kind, sigma, P, tuple=bands.tuple)
    sysm.rowBalance = _balance(P, sysm.interior_rows())
    return sysm


def stochastic_system(t: HyperTuple, kind: str, N: int) -> StochasticSystem:
    bands = band_coefficients(t, N + 2)
    return stochastic_normalize(bands, UnityValues.for_tuple(t, N + 3), kind, N)


def semi_stochastic_uniform(t: HyperTuple, N: int = 12) -> tuple[StochasticSystem, StochasticSystem]:
    """(P_I, P_II) for a registry tuple, with sigma_II,n = (2 kappa)^-n and sigma_I = sigma_II^-1."""
    from .jacobi import in_registry

    if not in_registry(t):
        raise ParameterError(f"{t} is not one of the twelve uniform tuples")
    bands = band_coefficients(t, N + 2)
    J = bands.jacobi_matrix(N)
    s = [(2 * KAPPA) ** (-n) for n in range(N)]
    s_inv = [1 / v for v in s]
    P2 = J.scaled(s, s_inv)
    P1 = J.transpose().scaled(s_inv, s)
    out = []
    for kind, P, sig in (("I", P1, s_inv), ("II", P2, s)):
        sy = StochasticSystem(kind, sig, P, tuple=t, uniform_sigma=True)
        sy.rowBalance = _balance(P, sy.interior_rows())
        out.append(sy)
    return out[0], out[1]


def typeI_entries_closed_form(t: HyperTuple, n: int) -> dict:
    """Closed forms for the P_I entries in rows 2n, 2n+1, keyed by (row, col)."""
    a, b, c, d = t.astuple()
    P = pochhammer

    def guard(coef, num, den):
        # n = 0 kills some terms whose denominators may vanish
        return Fraction(0) if coef == 0 else coef * num / den

    e = {}
    if n == 0:
        # (d - 1)/(d - 1) cancels at n = 0; keeps d = 1 finite
        e[(0, 2)] = (d - a) * (d - b) / (d * (d + 1))
    else:
        e[(2 * n, 2 * n + 2)] = (d + n - 1) * (d - a + n) * (d - b + n) / P(d + 3 * n - 1, 3)
    e[(2 * n + 1, 2 * n + 3)] = (c + n) * (c - a + n + 1) * (c - b + n + 1) / P(c + 3 * n + 1, 3)
    # subdiagonal entries are q^(k-1)(1)/q^(k)(1)
    e[(2 * n + 1, 2 * n)] = (2 * n + 1) * (a + 2 * n) * (b + 2 * n) / (P(c + 3 * n, 2) * (d + 3 * n))
    e[(2 * n + 2, 2 * n + 1)] = (2 * n + 2) * (a + 2 * n + 1) * (b + 2 * n + 1) / (
        (c + 3 * n + 2) * P(d + 3 * n + 1, 2))
    e[(2 * n, 2 * n)] = (2 * n + 1) * (a + 2 * n) * (b + 2 * n) / ((c + 3 * n) * (d + 3 * n)) - guard(
        2 * n, (a + 2 * n - 1) * (b + 2 * n - 1), (c + 3 * n - 1) * (d + 3 * n - 2))
    e[(2 * n + 1, 2 * n + 1)] = 2 * (n + 1) * (a + 2 * n + 1) * (b + 2 * n + 1) / (
        (c + 3 * n + 2) * (d + 3 * n + 1)) - (2 * n + 1) * (a + 2 * n) * (b + 2 * n) / ((c + 3 * n) * (d + 3 * n))
    e[(2 * n, 2 * n + 1)] = (
        guard(n, (a + 2 * n - 1) * (b + 2 * n - 1) * (c + 3 * n + 1), (c + 3 * n - 1) * (d + 3 * n - 1))
        - (2 * n + 1) * (a + 2 * n) * (b + 2 * n) * (c + 3 * n + 1) / ((c + 3 * n) * (d + 3 * n))
        + (n + 1) * (a + 2 * n + 1) * (b + 2 * n + 1) / (d + 3 * n + 1)
    )
    e[(2 * n + 1, 2 * n + 2)] = (d + 3 * n + 2) * (
        -2 * (n + 1) * (a + 2 * n + 1) * (b + 2 * n + 1) / ((c + 3 * n + 2) * (d + 3 * n + 1))
        + (2 * n + 3) * (a + 2 * n + 2) * (b + 2 * n + 2) / (2 * (c + 3 * n + 3) * (d + 3 * n + 2))
        + (2 * n + 1) * (a + 2 * n) * (b + 2 * n) / (2 * (c + 3 * n + 1) * (d + 3 * n))
    )
    return e


# -------------------------------------------------------- stochastic LU

@dataclass
class StochasticFactors:
    kind: str
    factors: tuple  # (left, middle, right) with P = left @ middle @ right
    names: tuple
    d1: list
    d2: list


def stochastic_lu(t: HyperTuple, kind: str, N: int = 16) -> StochasticFactors:
    """Three nonnegative row-stochastic bidiagonal factors of P_I or P_II."""
    M = N + 3
    bands = band_coefficients(t, M + 2)
    lam = bands.lam
    L1, L2, U = lu3_factorize(bands, N)
    if kind == "II":
        B = b_at_unity_recurrence(bands, M)
        d1 = [lam[3 * n + 2] * B[n] + B[n + 1] for n in range(M - 1)]
        d2 = [d1[0]] + [lam[3 * n + 1] * d1[n - 1] + d1[n] for n in range(1, M - 1)]
        _positive(d1[:N], "d1")
        _positive(d2[:N], "d2")
        sig = [1 / v for v in B[:N]]
        F1 = L1.scaled(sig, d2[:N])                              # sigma L1 D2^-1
        F2 = L2.scaled([1 / v for v in d2[:N]], d1[:N])          # D2 L2 D1^-1
        F3 = U.scaled([1 / v for v in d1[:N]], B[:N])            # D1 U sigma^-1
        names = ("PL_II_1", "PL_II_2", "PU_II")
    elif kind == "I":
        q = q_at_unity(t, M)
        d1 = [q[n] + lam[3 * n + 3] * q[n + 1] for n in range(M - 1)]
        d2 = [d1[n] + lam[3 * n + 4] * d1[n + 1] for n in range(M - 2)]
        _positive(d1[:N], "d1")
        _positive(d2[:N], "d2")
        sig = [1 / v for v in q[:N]]
        F1 = U.transpose().scaled(sig, d2[:N])                   # sigma Ut D2^-1
        F2 = L2.transpose().scaled([1 / v for v in d2[:N]], d1[:N])
        F3 = L1.transpose().scaled([1 / v for v in d1[:N]], q[:N])
        names = ("PL_I", "PU_I_2", "PU_I_1")
    else:
        raise ValueError("kind must be 'I' or 'II'")
    return StochasticFactors(kind, (F1, F2, F3), names, d1, d2)


def _positive(vals, name):
    for n, v in enumerate(vals):
        if v == 0:
            raise ArithmeticError(f"{name}[{n}] = 0: stochastic factorization breaks down")
        if v < 0:
            raise AssumptionError(f"{name}[{n}] = {v} < 0")


def typeI_factors_closed_form(t: HyperTuple, N: int):
    """Entry dictionaries for PL_I, PU_I_2, PU_I_1 in closed form (rows < N)."""
    a, b, c, d = t.astuple()
    L, U2, U1 = {}, {}, {}
    L[(0, 0)] = Fraction(1)
    for n in range((N + 1) // 2 + 1):
        if n >= 1:
            L[(2 * n, 2 * n - 1)] = 2 * n / (3 * n - 1 + d)
            L[(2 * n, 2 * n)] = (n - 1 + d) / (3 * n - 1 + d)
        L[(2 * n + 1, 2 * n)] = (2 * n + 1) / (3 * n + 1 + c)
        L[(2 * n + 1, 2 * n + 1)] = (n + c) / (3 * n + 1 + c)
        U2[(2 * n, 2 * n + 1)] = (n + d - b) / (3 * n + d)
        U2[(2 * n, 2 * n)] = (2 * n + b) / (3 * n + d)
        U2[(2 * n + 1, 2 * n + 2)] = (n + 1 + c - b) / (3 * n + 2 + c)
        U2[(2 * n + 1, 2 * n + 1)] = (2 * n + 1 + b) / (3 * n + 2 + c)
        U1[(2 * n, 2 * n + 1)] = (n + c - a) / (3 * n + c)
        U1[(2 * n, 2 * n)] = (2 * n + a) / (3 * n + c)
        U1[(2 * n + 1, 2 * n + 2)] = (n + d - a) / (3 * n + 1 + d)
        U1[(2 * n + 1, 2 * n + 1)] = (2 * n + 1 + a) / (3 * n + 1 + d)
    keep = lambda D: {k: v for k, v in D.items() if k[0] < N and k[1] < N}
    return keep(L), keep(U2), keep(U1)


def is_uniform_factor(F: BandedMatrix, rows, lower: bool) -> bool:
    """Constant diagonal and constant off-diagonal over the given rows of a bidiagonal factor."""
    off = -1 if lower else 1
    pairs = {(F[i, i], F[i, i + off]) for i in rows}
    return len(pairs) == 1


def has_uniform_factorization(t: HyperTuple, N: int = 12) -> bool:
    f = stochastic_lu(t, "I", N)
    L, U2, U1 = f.factors
    rows = range(1, N - 2)
    return (is_uniform_factor(L, rows, True) and is_uniform_factor(U2, rows, False)
            and is_uniform_factor(U1, rows, False))


def uniform_factorization_exists(t: HyperTuple, N: int = 12) -> bool:
    """True when P_I (shared by t and its a<->b partner) has constant-band factors."""
    return has_uniform_factorization(t, N) or has_uniform_factorization(t.swap(), N)


# ------------------------------------------------------ r-step transitions

def kmcg_transition(t: HyperTuple, n: int, m: int, r: int, kind: str = "II") -> Fraction:
    """r-step probability from the spectral integral of x^r B q against mu."""
    N = max(n, m) + 1
    mt, _, seqs = sequences_for(t, N)
    q = q_at_unity(t, N)
    B = b_at_unity(seqs, N)
    if kind == "II":
        i, j, scale = n, m, B[m] / B[n]
    elif kind == "I":
        i, j, scale = m, n, q[m] / q[n]
    else:
        raise ValueError("kind must be 'I' or 'II'")
    integral = mt.pair(poly_shift(seqs.B[i], r), seqs.A1[j], seqs.A2[j])
    return scale * integral


def _propagate(P: BandedMatrix, start: int, steps: int) -> list[dict]:
    """Row vectors e_start P^k for k = 0..steps."""
    v = {start: Fraction(1)}
    out = [v]
    for _ in range(steps):
        w: dict = {}
        for i, p in v.items():
            for j, x in P.rows[i].items():
                w[j] = w.get(j, 0) + p * x
        v = w
        out.append(v)
    return out


def matrix_power_transition(system: StochasticSystem, n: int, m: int, r: int) -> Fraction:
    """Exact (P^r)[n, m].  Paths that reach m within r steps never leave a window of size max(n,m)+r+1."""
    if system.N < max(n, m) + r + 1:
        raise WindowError(f"truncation {system.N} < {max(n, m) + r + 1} needed for exactness")
    return Fraction(_propagate(system.P, n, r)[-1].get(m, 0))


def transition_table(system: StochasticSystem, n: int, r: int) -> dict:
    if system.N < n + 2 * r + 1:
        raise WindowError("truncation too small for the full row")
    return {m: p for m, p in _propagate(system.P, n, r)[-1].items() if p}


# ------------------------------------------------------- generating series

def series_mul(p: list, q: list, R: int) -> list:
    return [sum((p[i] * q[k - i] for i in range(k + 1) if i < len(p) and k - i < len(q)), Fraction(0))
            for k in range(R + 1)]


def series_inverse(p: list, R: int) -> list:
    if not p or p[0] == 0:
        raise ZeroDivisionError("series has zero constant term")
    inv = [1 / Fraction(p[0])]
    for k in range(1, R + 1):
        s = sum((p[i] * inv[k - i] for i in range(1, k + 1) if i < len(p)), Fraction(0))
        inv.append(-s / p[0])
    return inv


@dataclass
class TransitionSeries:
    n: int
    m: int
    R: int
    P: list
    F: list


def generating_series(system: StochasticSystem, n: int, m: int, R: int) -> TransitionSeries:
    if R < 1:
        raise ValueError("R >= 1")
    if system.N < max(n, m) + R + 1:
        raise WindowError("truncation too small for series order")
    Pnm = [Fraction(v.get(m, 0)) for v in _propagate(system.P, n, R)]
    if n == m:
        inv = series_inverse(Pnm, R)
        F = [Fraction(1) - inv[0]] + [-c for c in inv[1:]]
    else:
        Pmm = [Fraction(v.get(m, 0)) for v in _propagate(system.P, m, R)]
        F = series_mul(Pnm, series_inverse(Pmm, R), R)
    return TransitionSeries(n, m, R, Pnm, F)


# ------------------------------------------------------------ classification

def classify(t: HyperTuple) -> str:
    dl = t.delta
    if dl <= 0:
        raise ParameterError(f"delta = {dl} <= 0 is outside the region")
    return "recurrent" if dl <= 1 else "transient"


def steady_vector(unity: UnityValues, N: int) -> list:
    return [unity.bAt1[n] * unity.qAt1[n] for n in range(N)]


def steady_vector_check(unity: UnityValues, system: StochasticSystem) -> CheckResult:
    """pi P = pi on columns whose whole support lies inside the truncation."""
    N = system.N
    pi = steady_vector(unity, N)
    res = CheckResult(f"steady vector P_{system.kind}")
    reach = 2 if system.kind == "II" else 1  # largest row index feeding column m is m + reach
    for m in range(N - reach):
        v = sum((pi[i] * system.P[i, m] for i in range(max(0, m - 2), min(N, m + 3))), Fraction(0))
        if not res.record(v == pi[m], {"m": m, "piP": v, "pi": pi[m]}):
            break
    return res


def steady_partial_sums(unity: UnityValues, N: int) -> list[float]:
    """Partial sums of pi; reported only as a divergence diagnostic."""
    out, s = [], Fraction(0)
    for v in steady_vector(unity, N):
        s += v
        out.append(float(s))
    return out


# ------------------------------------------------------ CD-type identities

def cd_identity_check(t: HyperTuple, N: int) -> CheckResult:
    mt, _, seqs = sequences_for(t, N + 3)
    bands = band_coefficients(t, N + 3)
    q = q_at_unity(t, N + 3)
    B = b_at_unity(seqs, N + 3)
    al, ga = bands.alpha, bands.gamma
    res = CheckResult("Christoffel-Darboux at unity")
    for n in range(N):
        v = (q[n + 1] * B[n + 2] - q[n + 2] * (ga[n + 1] * B[n] + al[n + 2] * B[n + 1])
             - q[n + 3] * ga[n + 2] * B[n + 1])
        res.record(v == 0, {"n": n, "value": v})
    for name, A in (("A1", seqs.A1), ("A2", seqs.A2)):
        for n in range(N):
            p = poly_lincomb(
                (1, poly_mul(A[n + 1], seqs.B[n + 2])),
                (-1, poly_mul(A[n + 2], poly_lincomb((ga[n + 1], seqs.B[n]), (al[n + 2], seqs.B[n + 1])))),
                (-ga[n + 2], poly_mul(A[n + 3], seqs.B[n + 1])),
            )
            res.record(p == [], {"component": name, "n": n})
    return res


# ------------------------------------------------------ float diagnostics

def _ratio(p: Fraction, q: Fraction) -> float:
    return float(p / q)


def ratio_convergence(t: HyperTuple, N: int, x: Optional[float] = None) -> dict:
    """Distances of unity ratios from 27/8 and 8/27 at n = N (and at x > 1 when given)."""
    q = q_at_unity(t, N + 2)
    bands = band_coefficients(t, N + 2)
    B = b_at_unity_recurrence(bands, N + 2)
    rep = {
        "n": N,
        "q_ratio": _ratio(q[N + 1], q[N]),
        "q_ratio_error": abs(_ratio(q[N + 1], q[N]) - 27 / 8),
        "B_ratio": _ratio(B[N + 1], B[N]),
        "B_ratio_error": abs(_ratio(B[N + 1], B[N]) - 8 / 27),
    }
    if x is not None:
        xq = Fraction(x).limit_denominator(10**12) if isinstance(x, float) else Fraction(x)
        Bx = b_at_unity_recurrence(bands, N + 2, xq)
        target = -float(KAPPA) / F_ratio(float(xq))
        rep["x"] = float(xq)
        rep["B_ratio_x"] = _ratio(Bx[N + 1], Bx[N])
        rep["B_ratio_x_error"] = abs(rep["B_ratio_x"] - target)
        rep["r_plus"] = r_plus(float(xq))
    return rep


def rodrigues_q(t: HyperTuple, n: int, x: float) -> float:
    """q^(n)(x) = A1 w1 + A2 w2 from its double-sum Rodrigues expansion (float)."""
    m, odd = divmod(n, 2)
    if odd:
        pref = float(pochhammer(t.c, 3 * m + 2) * pochhammer(t.d, 3 * m + 1)
                     / (pochhammer(1, n) * pochhammer(t.a, n) * pochhammer(t.b, n) * pochhammer(t.delta, n)))
        e1, e2 = t.c - t.b + m + 1, t.d - t.b + m
        top1 = lambda k: t.c - t.b + 3 * m + 2 - k
        top2 = lambda k: t.d - t.b + 3 * m + 1 - k
        bot = lambda k: t.delta + 4 * m + 2 - k
    else:
        pref = float(pochhammer(t.c, 3 * m) * pochhammer(t.d, 3 * m)
                     / (pochhammer(1, n) * pochhammer(t.a, n) * pochhammer(t.b, n) * pochhammer(t.delta, n)))
        e1, e2 = t.c - t.b + m, t.d - t.b + m
        top1 = lambda k: t.c - t.b + 3 * m - k
        top2 = lambda k: t.d - t.b + 3 * m - k
        bot = lambda k: t.delta + 4 * m - k
    total = 0.0
    for k in range(n + 1):
        shift = float(pochhammer(e1, n - k) * pochhammer(e2, n - k) / pochhammer(t.delta + n, n - k))
        hyp = gauss2F1_float(top1(k), top2(k), bot(k), 1 - x)
        inner = 0.0
        for l in range(k + 1):
            inner += ((-1) ** (l + k) * float(binomial(n, k) * binomial(k, l))
                      * float(pochhammer(t.a + n - k + l, k - l) * pochhammer(t.delta + n - l, l))
                      * x ** (n - k + l) * (1 - x) ** (n - l))
        total += inner * shift * hyp
    return pref * total


def q_float(t: HyperTuple, seqs: PolynomialSequences, n: int, x: float) -> float:
    """A1(x) w1(x) + A2(x) w2(x) in float."""
    return (float(poly_eval(seqs.A1[n], Fraction(x))) * weight_eval(t, "w1", x)
            + float(poly_eval(seqs.A2[n], Fraction(x))) * weight_eval(t, "w2", x))


def dual_limit_gap(t: HyperTuple, n: int = 200) -> dict:
    """|P_I[n, n+k] - P_II[n+k, n]| for k in {-2,-1,0,1} at large n (float)."""
    N = n + 4
    bands = band_coefficients(t, N + 2)
    uv = UnityValues(q_at_unity(t, N + 3), b_at_unity_recurrence(bands, N + 3))
    P1 = stochastic_normalize(bands, uv, "I", N)
    P2 = stochastic_normalize(bands, uv, "II", N)
    return {k: abs(float(P1.P[n, n + k] - P2.P[n + k, n])) for k in (-2, -1, 0, 1)}

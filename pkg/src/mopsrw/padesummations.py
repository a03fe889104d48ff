"""Generalized type II moments and the Hermite-Pade remainders they build.

eta[N, m, a] = integral of B^(N)(x) x^(N//2 + m) w_a(x) d(mu).

Two independent routes: direct moment expansion, and finite theta-sums of
Karp-Prilepkina type (valid when c - d is not an integer).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .checks import CheckResult
from .exactnum import pochhammer as P
from .exactnum import poly_trim
from .gaussborel import H_closed_form, moments, sequences_for
from .hyperfun import HyperTuple, ParameterError, pFq_terminating


def eta_direct(t: HyperTuple, N: int, m: int, a: int) -> Fraction:
    mt, _, seqs = sequences_for(t, N + 1)
    k = N // 2 + m
    return mt.integrate([0] * k + seqs.B[N], a)


def eta_5F4(t: HyperTuple, N: int, k: int, a: int) -> Fraction:
    """integral B^(N) x^k w_a d(mu) through its terminating 5F4 at unity."""
    A, B, C, D = t.astuple()
    n, odd = divmod(N, 2)
    cs, ds = C + n, D + n - 1 + odd
    bb = B + (a == 2)
    cc = C + (a == 2)
    pre = P(A, N) * P(B, N) * P(A, k) * P(bb, k) / (P(cs, N) * P(ds, N) * P(cc, k) * P(D, k))
    val = pFq_terminating((-N, A + k, bb + k, cs, ds), (A, B, cc + k, D + k), 1)
    return (-1 if odd else 1) * pre * val


def _d_shift(D: Fraction, n: int) -> Fraction:
    """(D)_{3n-1}, with (D)_{-1} = 1/(D-1)."""
    return P(D, 3 * n) / (D + 3 * n - 1)


def _thetas(t: HyperTuple, N: int, m: int, a: int) -> list[Fraction]:
    C, D = t.c, t.d
    odd = N % 2
    nc = m + (a == 2)
    if not odd:
        return [C + i for i in range(nc)] + [D - 1 + i for i in range(m + 1)]
    return [C + i for i in range(nc)] + [D + i for i in range(m)]


def theta_hypothesis(t: HyperTuple) -> bool:
    return (t.c - t.d).denominator != 1


def eta_karp_prilepkina(t: HyperTuple, N: int, m: int, a: int) -> Fraction:
    """Finite theta-sum evaluation of eta[N, m, a]."""
    if a not in (1, 2):
        raise ValueError("weight index must be 1 or 2")
    if not theta_hypothesis(t):
        raise ParameterError(f"c - d is an integer for {t}; theta values may collide")
    A, B, C, D = t.astuple()
    n, odd = divmod(N, 2)
    if odd and m == 0:
        # empty theta set: orthogonality for w1, and H_{2n+1} for w2
        return Fraction(0) if a == 1 else H_closed_form(t, N)
    th = _thetas(t, N, m, a)
    if len(set(th)) != len(th):
        raise ParameterError("theta values collide")
    lead = factorial(N) * P(A, N) * P(B, N)
    if not odd:
        pre = lead / (P(C, 3 * n) * _d_shift(D, n))
    else:
        pre = -lead / (P(C, 3 * n + 1) * P(D, 3 * n + 1))
    if a == 2:
        pre *= -C / B
    total = Fraction(0)
    for l, x in enumerate(th):
        den = Fraction(1)
        for i, y in enumerate(th):
            if i != l:
                den *= y - x
        den *= (x + n) * P(x + n + 1, N)
        top = P(x - A - m + 1, n + m)
        top *= P(x - B - m + 1, n + m) if a == 1 else P(x - B - m, n + m + 1)
        total += top / den
    return pre * total


def eta_remark_examples(t: HyperTuple, n: int) -> dict[str, tuple[Fraction, Fraction]]:
    """The four special cases written out term by term, paired with eta_direct."""
    A, B, C, D = t.astuple()
    f = factorial
    lead_e = f(2 * n) * P(A, 2 * n) * P(B, 2 * n)
    lead_o = f(2 * n + 1) * P(A, 2 * n + 1) * P(B, 2 * n + 1)
    de = P(C, 3 * n) * _d_shift(D, n)
    out = {}
    v = -(C / B) * lead_e / (de * (D - C - 1)) * (
        P(C - A + 1, n) * P(C - B, n + 1) / ((C + n) * P(C + n + 1, 2 * n))
        - P(D - A, n) * P(D - 1 - B, n + 1) / ((D - 1 + n) * P(D + n, 2 * n))
    )
    out["eta_even_0_2"] = (v, eta_direct(t, 2 * n, 0, 2))
    v = -lead_o / (P(C, 3 * n + 1) * P(D, 3 * n + 1) * (D - C)) * (
        P(C - A, n + 1) * P(C - B, n + 1) / ((C + n) * P(C + n + 1, 2 * n + 1))
        - P(D - A, n + 1) * P(D - B, n + 1) / ((D + n) * P(D + n + 1, 2 * n + 1))
    )
    out["eta_odd_1_1"] = (v, eta_direct(t, 2 * n + 1, 1, 1))
    v = lead_e / de * (
        P(C - A, n + 1) * P(C - B, n + 1) / ((D - C) * (D - 1 - C) * (C + n) * P(C + n + 1, 2 * n))
        + P(D - 1 - A, n + 1) * P(D - 1 - B, n + 1) / ((C - D + 1) * (D - 1 + n) * P(D + n, 2 * n))
        - P(D - A, n + 1) * P(D - B, n + 1) / ((C - D) * (D + n) * P(D + n + 1, 2 * n))
    )
    out["eta_even_1_1"] = (v, eta_direct(t, 2 * n, 1, 1))
    v = (C / B) * lead_o / (P(C, 3 * n + 1) * P(D, 3 * n + 1)) * (
        P(C - A, n + 1) * P(C - B - 1, n + 2) / ((D - C) * (C + n) * P(C + n + 1, 2 * n + 1))
        - P(C + 1 - A, n + 1) * P(C - B, n + 2) / ((D - C - 1) * (C + 1 + n) * P(C + n + 2, 2 * n + 1))
        + P(D - A, n + 1) * P(D - B - 1, n + 2) / ((C - D) * (C + 1 - D) * (D + n) * P(D + n + 1, 2 * n + 1))
    )
    out["eta_odd_1_2"] = (v, eta_direct(t, 2 * n + 1, 1, 2))
    return out


def eta_dual_route_check(t: HyperTuple, nmax: int = 5, mmax: int = 3) -> CheckResult:
    """eta_karp_prilepkina == eta_direct over both parities and both weights."""
    res = CheckResult(f"eta dual route {t}")
    for N in range(2 * nmax + 2):
        for m in range(mmax + 1):
            for a in (1, 2):
                kp = eta_karp_prilepkina(t, N, m, a)
                d = eta_direct(t, N, m, a)
                if not res.record(kp == d, {"N": N, "m": m, "a": a, "kp": kp, "direct": d}):
                    return res
    return res


# ------------------------------------------------------------ second kind

@dataclass
class SecondKindSeries:
    """B^(n)(z) S_a(z) = P_a(z) + sum_j f[j] z^-(j+1), truncated at j < R."""

    n: int
    a: int
    B: list
    P: list  # associated polynomial, ascending
    f: list  # f[j] multiplies z^-(j+1)

    def order(self) -> int:
        """Index of the first nonzero remainder coefficient (R if none found)."""
        for j, v in enumerate(self.f):
            if v:
                return j
        return len(self.f)


def second_kind_series(t: HyperTuple, n: int, a: int, R: int) -> SecondKindSeries:
    mt, _, seqs = sequences_for(t, n + 1)
    B = seqs.B[n]
    rho = [mt.rho(a, j) for j in range(len(B) + R)]
    # coefficient of z^e in B(z) * sum_j rho_j z^-(j+1)
    Pcoef = [sum((B[i] * rho[i - e - 1] for i in range(e + 1, len(B))), Fraction(0))
             for e in range(len(B) - 1)]
    f = [sum((B[i] * rho[i + j] for i in range(len(B))), Fraction(0)) for j in range(R)]
    return SecondKindSeries(n, a, B, poly_trim(Pcoef), f)


def second_kind_check(t: HyperTuple, n: int, a: int, R: int = 8) -> CheckResult:
    """Remainder coefficients are generalized moments; the first ones vanish."""
    res = CheckResult(f"second kind n={n} a={a}")
    s = second_kind_series(t, n, a, R)
    mt = moments(t)
    for j in range(R):
        # tail coefficients are the generalized moments eta[n, j - n//2, a]
        ref = eta_direct(t, n, j - n // 2, a) if j >= n // 2 else mt.integrate([0] * j + s.B, a)
        res.record(s.f[j] == ref, {"j": j})
    # B^(n) annihilates x^j w1 for j < ceil(n/2) and x^j w2 for j < floor(n/2)
    vanish = (n + 1) // 2 if a == 1 else n // 2
    res.record(s.order() >= min(vanish, R), {"order": s.order(), "expected": vanish})
    res.record(len(s.P) <= n, {"deg P": len(s.P) - 1})
    return res

"""Hypergeometric evaluation and the parameter tuple (a, b, c, d).

Terminating series are summed exactly.  Nonterminating ``2F1`` and the weight
functions are evaluated in float64; they only ever feed tolerance checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .exactnum import Q, parse_rational, poly_trim

KAPPA = Fraction(4, 27)
OMEGA = cmath.exp(2j * math.pi / 3)


class PoleError(ArithmeticError):
    """A bottom parameter hit a nonpositive integer before the series ended."""


class ConvergenceError(ArithmeticError):
    pass


class ParameterError(ValueError):
    """A tuple lies outside the region an operation requires."""


def _is_nonpos_int(x: Fraction) -> bool:
    return x.denominator == 1 and x <= 0


@dataclass(frozen=True)
class HyperTuple:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, Q(getattr(self, name)))

    @classmethod
    def parse(cls, text: str) -> "HyperTuple":
        parts = text.split(",")
        if len(parts) != 4:
            raise ValueError(f"expected a,b,c,d; got {text!r}")
        return cls(*(parse_rational(p) for p in parts))

    @property
    def delta(self) -> Fraction:
        return self.c + self.d - self.a - self.b

    def astuple(self):
        return (self.a, self.b, self.c, self.d)

    def swap(self) -> "HyperTuple":
        """The gauge partner (b, a, c, d)."""
        return HyperTuple(self.b, self.a, self.c, self.d)

    def __str__(self):
        from .exactnum import fmt_rational

        return ",".join(fmt_rational(v) for v in self.astuple())

    def is_perfect(self) -> bool:
        """Sufficient condition for every H_n to be finite and nonzero."""
        a, b, c, d = self.astuple()
        if a <= 0 or b <= 0 or self.delta <= 0:
            return False
        return not any(_is_nonpos_int(v) for v in (d - a, d - b, c + 1 - a, c - b))

    def require_perfect(self):
        if not self.is_perfect():
            raise ParameterError(f"tuple {self} is outside the perfectness region")

    def is_nonnegative(self) -> bool:
        """Region where every Jacobi band coefficient is >= 0."""
        a, b, c, d = self.astuple()
        return a > 0 and b > 0 and d > max(a, b) and c >= a and c + 1 >= b


# ------------------------------------------------------------ exact series

def _termination_order(top: Sequence[Fraction]) -> int:
    orders = [-t for t in top if _is_nonpos_int(t)]
    if not orders:
        raise ValueError("no top parameter is a nonpositive integer; series does not terminate")
    return int(min(orders))


def pFq_terms(top, bottom) -> list[Fraction]:
    """Coefficients t_k of sum_k t_k x^k for a terminating pFq."""
    top = [Q(t) for t in top]
    bottom = [Q(t) for t in bottom]
    N = _termination_order(top)
    terms = [Fraction(1)]
    t = Fraction(1)
    for k in range(N):
        num = Fraction(1)
        for p in top:
            num *= p + k
        den = Fraction(k + 1)
        for p in bottom:
            if p + k == 0:
                raise PoleError(f"bottom parameter {p} reaches zero at term {k + 1}")
            den *= p + k
        t = t * num / den
        terms.append(t)
    return terms


def pFq_terminating(top, bottom, x) -> Fraction:
    """Exact value of a terminating generalized hypergeometric series."""
    x = Q(x)
    acc = Fraction(0)
    for t in reversed(pFq_terms(top, bottom)):
        acc = acc * x + t
    return acc


def pFq_poly(top, bottom) -> list[Fraction]:
    """The terminating series as a polynomial in x (ascending coefficients)."""
    return poly_trim(pFq_terms(top, bottom))


# ------------------------------------------------------------ float paths

def gauss2F1_float(alpha, beta, gamma, z: float, max_terms: int = 10**6) -> float:
    if abs(z) >= 1:
        raise ValueError("gauss2F1_float needs |z| < 1")
    al, be, ga = float(alpha), float(beta), float(gamma)
    total, term = 1.0, 1.0
    for k in range(max_terms):
        term *= (al + k) * (be + k) / ((ga + k) * (k + 1)) * z
        total += term
        if term == 0.0 or abs(term) < 1e-17 * abs(total):
            return total
    raise ConvergenceError(f"2F1 series did not converge in {max_terms} terms at z={z}")


def _log_abs_gamma_sign(x: float) -> tuple[float, int]:
    if x > 0:
        return math.lgamma(x), 1
    if x == int(x):
        raise ParameterError(f"Gamma pole at {x}")
    return math.lgamma(x), (-1 if math.floor(x) % 2 else 1)


def gamma_prefactor(t: HyperTuple) -> float:
    """Gamma(c)Gamma(d) / (Gamma(a)Gamma(b)Gamma(delta)), via log-gamma."""
    logv, sign = 0.0, 1
    for v, s in ((t.c, 1), (t.d, 1), (t.a, -1), (t.b, -1), (t.delta, -1)):
        lg, sg = _log_abs_gamma_sign(float(v))
        logv += s * lg
        sign *= sg
    return sign * math.exp(logv)


def weight_eval(t: HyperTuple, which: str, x):
    """Pointwise W1, W2, w1, w2 or the density of d(mu).

    W1 = w1 * mu and W2 = w2 * mu.  At x = 1 the small weights are returned
    exactly: w1(1) = 1 and w2(1) = c/b.
    """
    if which not in ("W1", "W2", "w1", "w2", "mu_density"):
        raise ValueError(f"unknown weight {which!r}")
    if isinstance(x, Fraction) or isinstance(x, int):
        if x == 1 and which in ("w1", "w2"):
            return Fraction(1) if which == "w1" else t.c / t.b
    x = float(x)
    if not 0 < x <= 1:
        raise ValueError("weights are defined on (0, 1]")
    a, b, c, d = t.astuple()
    dl = t.delta
    if which == "w1":
        return 1.0 if x == 1 else gauss2F1_float(c - b, d - b, dl, 1 - x)
    if which == "w2":
        f = 1.0 if x == 1 else gauss2F1_float(c - b, d - b - 1, dl, 1 - x)
        return float(c / b) * f
    if x == 1:
        raise ValueError("the density is evaluated on the open interval (0, 1)")
    mu = gamma_prefactor(t) * x ** float(a - 1) * (1 - x) ** float(dl - 1)
    if which == "mu_density":
        return mu
    return mu * weight_eval(t, "w1" if which == "W1" else "w2", x)


def real_cbrt(v: float) -> float:
    return math.copysign(abs(v) ** (1.0 / 3.0), v)


def theta_pm(x: float) -> tuple[float, float]:
    """Real cube roots of 1 +- sqrt(1 - x) on [0, 1]."""
    if not 0 <= x <= 1:
        raise ValueError("theta_pm is defined on [0, 1]")
    s = math.sqrt(1 - x)
    return real_cbrt(1 + s), real_cbrt(1 - s)


def F_ratio(x: float) -> float:
    """The algebraic function with F(1+) = -1/2 solving x F = kappa (F - 1)^3, x > 1.

    sqrt(1 - x) is imaginary here and the cube roots are the principal complex
    ones.  Their combination is real and picks the root in (-1/2, 0), i.e. the
    one with -kappa/F the dominant solution of x r^2 = (r + kappa)^3.  At
    x = 1 both candidate branches meet at -1/2 (where cbrt(-1) = -1 suffices).
    """
    if x <= 1:
        raise ValueError("F_ratio is implemented on the real branch x > 1")
    s = cmath.sqrt(1 - x)
    u = (s - 1) ** (1.0 / 3.0)
    v = (-s - 1) ** (1.0 / 3.0)
    val = 1 - 1.5 * real_cbrt(x) * (OMEGA**2 * u + OMEGA * v)
    if abs(val.imag) > 1e-9 * max(1.0, abs(val.real)):
        raise ArithmeticError(f"F_ratio left the real branch at x={x}")
    return val.real


def r_plus(x: float) -> float:
    """Limit of q^{(n+1)}(x)/q^{(n)}(x) for x > 1."""
    F = F_ratio(x)
    k = float(KAPPA)
    rad = (x / k) * (F - 4) / (F - 1)
    if rad < 0:
        raise ArithmeticError(f"negative radicand in r_plus at x={x}")
    return (F - 3 + math.sqrt(rad)) / (2 * k)


# -------------------------------------------- closed-form uniform weights

_S3 = math.sqrt(3.0)


def _sum_pow(k, x):
    tp, tm = theta_pm(x)
    return tp**k + tm**k


def _diff_pow(k, x):
    tp, tm = theta_pm(x)
    return tp**k - tm**k


def _mk(coef, xpow, kind, k, sq):
    """coef * x**xpow * (theta+^k +- theta-^k) / (pi * sqrt(1-x)**sq)."""

    def f(x: float) -> float:
        part = _sum_pow(k, x) if kind == "+" else _diff_pow(k, x)
        den = math.pi * (math.sqrt(1 - x) if sq else 1.0)
        return coef * x**xpow * part / den

    return f


def _T(*v):
    return tuple(Fraction(s) for s in v)


# (W1, W2, W2 of the a<->b partner) for the six tuples with a < b.
UNIFORM_WEIGHTS: dict[tuple, tuple[Callable, Callable, Callable]] = {
    _T("1/3", "2/3", "1/2", 1): (
        _mk(_S3 / 4, -2 / 3, "+", 1, True),
        _mk(3 * _S3 / 16, -2 / 3, "+", 4, True),
        _mk(3 * _S3 / 8, -1 / 3, "+", 2, True),
    ),
    _T("2/3", "4/3", 1, "3/2"): (
        _mk(3 * _S3 / 8, -1 / 3, "+", 2, True),
        _mk(9 * _S3 / 32, -1 / 3, "+", 5, True),
        _mk(9 * _S3 / 16, 1 / 3, "+", 1, True),
    ),
    _T("4/3", "5/3", "3/2", 2): (
        _mk(9 * _S3 / 16, 1 / 3, "+", 1, True),
        _mk(81 * _S3 / 160, 1 / 3, "+", 4, True),
        _mk(81 * _S3 / 128, 2 / 3, "+", 2, True),
    ),
    _T("1/3", "2/3", 1, "3/2"): (
        _mk(3 * _S3 / 4, -2 / 3, "-", 1, False),
        _mk(9 * _S3 / 32, -2 / 3, "-", 4, False),
        _mk(9 * _S3 / 8, -1 / 3, "-", 2, False),
    ),
    _T("2/3", "4/3", "3/2", 2): (
        _mk(9 * _S3 / 8, -1 / 3, "-", 2, False),
        _mk(81 * _S3 / 160, -1 / 3, "-", 5, False),
        _mk(81 * _S3 / 16, 1 / 3, "-", 1, False),
    ),
    _T("4/3", "5/3", 2, "5/2"): (
        _mk(81 * _S3 / 16, 1 / 3, "-", 1, False),
        _mk(243 * _S3 / 160, 1 / 3, "-", 4, False),
        _mk(243 * _S3 / 64, 2 / 3, "-", 2, False),
    ),
}


def uniform_weight_closed_form(t: HyperTuple, which: str, x: float) -> float:
    """W1/W2 in radicals for the six a<b uniform tuples; also their partners."""
    key = t.astuple()
    if key in UNIFORM_WEIGHTS:
        w1, w2, _ = UNIFORM_WEIGHTS[key]
        return {"W1": w1, "W2": w2}[which](x)
    sk = t.swap().astuple()
    if sk in UNIFORM_WEIGHTS:
        w1, _, w2hat = UNIFORM_WEIGHTS[sk]
        return {"W1": w1, "W2": w2hat}[which](x)
    raise ParameterError(f"no closed-form weights for {t}")

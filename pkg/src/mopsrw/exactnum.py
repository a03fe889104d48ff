"""Exact rational primitives and dense polynomial helpers.

Polynomials are plain lists of Fractions in ascending powers of x.  Trailing
zeros are stripped by :func:`poly_trim`; the zero polynomial is ``[]``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

Poly = list  # list[Fraction], ascending powers


def Q(x) -> Fraction:
    """Coerce int/str/Fraction to Fraction (floats are rejected)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted on exact paths")
    return Fraction(x)


def pochhammer(a, n: int) -> Fraction:
    """Rising factorial (a)_n = a(a+1)...(a+n-1), with (a)_0 = 1."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    a = Q(a)
    out = Fraction(1)
    for i in range(n):
        out *= a + i
        if out == 0:
            return out
    return out


def binomial(n: int, k: int) -> Fraction:
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"binomial({n}, {k}) outside 0 <= k <= n")
    return Fraction(comb(n, k))


def trinomial(k: int, k1: int, k2: int, k3: int) -> Fraction:
    """k! / (k1! k2! k3!) with k1+k2+k3 = k."""
    if min(k1, k2, k3) < 0 or k1 + k2 + k3 != k:
        raise ValueError("trinomial parts must be nonnegative and sum to k")
    return Fraction(factorial(k), factorial(k1) * factorial(k2) * factorial(k3))


def fmt_rational(x) -> str:
    x = Q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    """Parse "p", "-p" or "p/q" into a Fraction; anything else raises ValueError."""
    s = s.strip()
    if not s:
        raise ValueError("empty rational")
    parts = s.split("/")
    if len(parts) > 2:
        raise ValueError(f"malformed rational {s!r}")
    try:
        num = int(parts[0])
        den = int(parts[1]) if len(parts) == 2 else 1
    except ValueError:
        raise ValueError(f"malformed rational {s!r}") from None
    if den == 0:
        raise ValueError(f"zero denominator in {s!r}")
    return Fraction(num, den)


# ---------------------------------------------------------------- polynomials

def poly_trim(p: Iterable) -> Poly:
    p = [Q(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(p: Sequence, q: Sequence) -> Poly:
    n = max(len(p), len(q))
    return poly_trim(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def poly_scale(p: Sequence, s) -> Poly:
    s = Q(s)
    return poly_trim(c * s for c in p)


def poly_lincomb(*terms) -> Poly:
    """Sum of scalar*poly pairs: poly_lincomb((s1, p1), (s2, p2), ...)."""
    out: Poly = []
    for s, p in terms:
        out = poly_add(out, poly_scale(p, s))
    return out


def poly_mul(p: Sequence, q: Sequence) -> Poly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return poly_trim(out)


def poly_shift(p: Sequence, k: int = 1) -> Poly:
    """Multiply by x**k."""
    p = poly_trim(p)
    return [Fraction(0)] * k + p if p else []


def poly_eval(p: Sequence, x):
    acc = 0 * x if not isinstance(x, Fraction) else Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_divx(p: Sequence) -> Poly:
    """Exact division by x; raises if p(0) != 0."""
    p = poly_trim(p)
    if p and p[0] != 0:
        raise ArithmeticError("polynomial is not divisible by x")
    return p[1:]

"""Hypergeometric multiple orthogonal polynomials and the random walks they induce.

Everything exact runs on :class:`fractions.Fraction`.  Float code paths exist
only for weight evaluation and asymptotic ratio checks.
"""

from .exactnum import binomial, pochhammer, trinomial, fmt_rational, parse_rational
from .hyperfun import KAPPA, HyperTuple, pFq_terminating

__all__ = [
    "KAPPA",
    "HyperTuple",
    "binomial",
    "fmt_rational",
    "parse_rational",
    "pFq_terminating",
    "pochhammer",
    "trinomial",
]

__version__ = "0.1.0"

from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from mopsrw.gaussborel import (
    B_explicit, H_closed_form, H_pineiro, MomentTable, NotPerfectError, biorthogonality_check,
    factorize, moment_matrix, moments, reconstruction_check, sequences_for, to_json,
    type1_orthogonality_check, type2_orthogonality_check,
)
from mopsrw.hyperfun import HyperTuple, ParameterError

from conftest import GENERIC, PINEIRO, SEMI, STOCH

TUPLES = [GENERIC, SEMI, STOCH, PINEIRO]
pos = st.fractions(min_value=Fraction(1, 6), max_value=4, max_denominator=6)


@st.composite
def perfect_tuples(draw):
    t = HyperTuple(draw(pos), draw(pos), draw(pos), draw(pos))
    assume(t.is_perfect())
    return t


def test_first_moments():
    mt = moments(GENERIC)
    assert mt.rho1(0) == mt.rho2(0) == 1
    assert mt.rho1(1) == Fraction(1 * 2, 3 * Fraction(7, 2))
    assert mt.rho2(1) == Fraction(1 * 3, 4 * Fraction(7, 2))


def test_moments_reject_imperfect_region():
    with pytest.raises(ParameterError):
        moments(HyperTuple(2, 2, 1, 1))


def test_pivots_match_sympy_LDU():
    N = 7
    mt = moments(GENERIC)
    g = sympy.Matrix(N, N, lambda i, j: sympy.Rational(str(moment_matrix(mt, N)[i][j])))
    L, U, _ = g.LUdecomposition()
    f = factorize(mt, N)
    assert [sympy.Rational(str(h)) for h in f.H] == [U[i, i] for i in range(N)]


@pytest.mark.parametrize("t", TUPLES, ids=str)
def test_factorization_reconstructs_moment_matrix(t):
    assert reconstruction_check(factorize(moments(t), 8))


@pytest.mark.parametrize("t", TUPLES, ids=str)
def test_orthogonality_families(t):
    mt, _, seqs = sequences_for(t, 10)
    assert biorthogonality_check(seqs, mt, 10)
    assert type2_orthogonality_check(seqs, mt, 10)
    assert type1_orthogonality_check(seqs, mt, 10)


@pytest.mark.parametrize("t", TUPLES, ids=str)
def test_H_closed_form(t):
    f = factorize(moments(t), 13)
    assert [H_closed_form(t, n) for n in range(13)] == f.H


def test_H_pineiro_reduction():
    f = factorize(moments(PINEIRO), 13)
    assert [H_pineiro(PINEIRO.a, PINEIRO.b, n) for n in range(13)] == f.H


@given(perfect_tuples())
def test_H_closed_form_property(t):
    f = factorize(moments(t), 6)
    assert f.H == [H_closed_form(t, n) for n in range(6)]


@given(perfect_tuples(), st.integers(0, 6))
def test_B_explicit_is_factorized_B(t, n):
    seqs = sequences_for(t, n + 1)[2]
    assert B_explicit(t, n) == seqs.B[n]


def test_incremental_growth_is_stable():
    f = factorize(moments(SEMI), 4)
    f.extend(9)
    g = factorize(moments(SEMI), 9)
    assert f.H == g.H and f.S == g.S and f.Stilde == g.Stilde


def test_zero_pivot_raises():
    mt = MomentTable(lambda n: Fraction(1), lambda n: Fraction(1))
    with pytest.raises(NotPerfectError) as e:
        factorize(mt, 3)
    assert e.value.index == 1


def test_json_export_uses_rational_strings():
    f = factorize(moments(STOCH), 3)
    mt, _, seqs = sequences_for(STOCH, 3)
    js = to_json(f, seqs)
    assert js["H"][0] == "1"
    assert all(isinstance(v, str) for row in js["S"] for v in row)

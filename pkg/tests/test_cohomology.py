"""Restriction tables, the cross-wall restriction identity, Gamma series."""

from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from toricwall.errors import ConvergenceRadius
from toricwall.cohomology import (GammaSeriesContext, LinForm, c0_form,
                                  gamma_series, ring_presentation,
                                  verify_div_lemma)
from toricwall.wall import GitData


def lf(*lam_coeffs):
    out = LinForm()
    for j, c in enumerate(lam_coeffs):
        out = out + LinForm.lam(j).scale(Fraction(c))
    return out


def test_flop_restriction_table(flop):
    # At delta = {1}: D_j = c * D_1 with c = D_j (rank one), so
    # U_j = mu_j - (D_j) mu_1.
    t = flop.table_plus
    d1 = frozenset({0})
    assert t.U[d1][0] == LinForm()
    assert t.U[d1][1] == lf(-1, 1)
    assert t.U[d1][2] == lf(1, 0, 1)
    assert t.U[d1][3] == lf(1, 0, 0, 1)
    # rho = theta(sum D_i) vanishes for a crepant wall direction in rank 1
    # only when the character sum is zero, which holds for the flop.
    assert t.rho(d1) == LinForm()


def test_c3z3_restriction_table(c3z3):
    t = c3z3.table_minus
    d4 = frozenset({3})
    # D_j = (-1/3) D_4 for j < 4.
    for j in range(3):
        expect = LinForm.lam(j) + LinForm.lam(3).scale(Fraction(1, 3))
        assert t.U[d4][j] == expect
    assert t.U[d4][3] == LinForm()


def test_div_lemma_exact(flop, c3z3, rank2):
    for bundle in (flop, c3z3, rank2):
        rep = verify_div_lemma(bundle.git, bundle.wall, bundle.table_plus,
                               bundle.table_minus, bundle.anticone_pairs,
                               bundle.wall.W_basis)
        assert rep["pass"], rep
        assert len(rep["pairs"]) == len(bundle.anticone_pairs)


def test_c0_form(flop):
    c0 = c0_form(flop.git)
    assert c0 == lf(1, 1, 1, 1)


def test_ring_presentation_flop(flop):
    pres = ring_presentation(flop.git, list(flop.omega_plus))
    # One linear relation per free quotient direction (m - r = 3).
    assert len(pres["linear"]) == 3
    # The irrelevant ideal: u_1 u_2 = 0 on the plus side.
    assert frozenset({0, 1}) in pres["monomials"]
    assert pres["S"] == frozenset()


def test_gamma_series_matches_reference():
    ctx = GammaSeriesContext()
    with mp.workdps(ctx.dps):
        for x in (mp.mpf("0.3"), mp.mpc("0.1", "0.7"), mp.mpc("-0.4", "0.2"),
                  mp.mpc("0", "0.9")):
            got = gamma_series(x, ctx)
            want = mp.gamma(1 + x)
            assert abs(got - want) < 1e-25


def test_gamma_series_radius():
    ctx = GammaSeriesContext()
    with pytest.raises(ConvergenceRadius):
        gamma_series(mp.mpf("1.2"), ctx)


@given(st.integers(-45, 45).filter(lambda n: n != 0),
       st.integers(-45, 45))
@settings(max_examples=30, deadline=None)
def test_gamma_series_reflection(a, b):
    # Gamma(1+x) Gamma(1-x) = pi x / sin(pi x), checked against mpmath.
    ctx = GammaSeriesContext()
    with mp.workdps(ctx.dps):
        x = mp.mpc(a, b) / 100
        lhs = gamma_series(x, ctx) * gamma_series(-x, ctx)
        rhs = mp.pi * x / mp.sin(mp.pi * x)
        assert abs(lhs - rhs) < 1e-24 * max(1, abs(rhs))


def test_gamma_series_nilpotent():
    # Coefficient list mode agrees with the analytic derivative.
    ctx = GammaSeriesContext()
    with mp.workdps(ctx.dps):
        x0 = mp.mpf("0.25")
        out = gamma_series([x0, 1], ctx)
        assert abs(out[0] - mp.gamma(1 + x0)) < 1e-25
        assert abs(out[1] - mp.gamma(1 + x0) * mp.digamma(1 + x0)) < 1e-24


def test_linform_arithmetic():
    a = LinForm.lam(0) + LinForm.lam(1).scale(Fraction(2))
    b = LinForm.lam(1).scale(Fraction(2))
    assert a - b == LinForm.lam(0)
    assert (a - a).is_zero()
    vals = [complex(3, 0), complex(0, 1)]
    assert a.evaluate(vals) == complex(3, 2)

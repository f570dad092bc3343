"""Numeric series restrictions against classical special-function oracles,
and the exact transform between the two series attached to a chamber."""

from fractions import Fraction

import mpmath as mp
import pytest

from toricwall.errors import OutsideConvergence
from toricwall.series import (SeriesTruncation, restrict_h, transport_log_y,
                              verify_i_h_relation)
from toricwall.cohomology import restriction_table
from toricwall.wall import (AdaptedBasis, GitData, anticones,
                            dual_lattice_basis, fixed_data, k_classes,
                            minimal_anticones, overlattice_basis)

TWO_PI_I = 2j * mp.pi

LAM = [complex(0.137, 0.051), complex(-0.223, 0.094),
       complex(0.071, -0.183), complex(-0.067, 0.029)]


def single_chamber(D, omega):
    git = GitData(D)
    mins = minimal_anticones(anticones(git, omega))
    classes = k_classes(git, omega)
    table = restriction_table(git, mins)
    fixed = fixed_data(mins, classes)
    basis = overlattice_basis(git, classes)
    adapted = AdaptedBasis(p=tuple(tuple(row)
                                   for row in dual_lattice_basis(basis)),
                           side=+1)
    return git, mins, table, fixed, adapted


def test_p1_restriction_is_bessel_type():
    # Two characters (1, 1): the fixed-point restriction is a 0F1 value.
    git, mins, table, fixed, adapted = single_chamber([[1], [1]], [1])
    lam = LAM[:2]
    log_y = complex(mp.log(mp.mpf("0.35")))
    delta = frozenset({0})
    kc = next(k for d, k in fixed if d == delta)
    got = restrict_h(git, table, delta, kc, adapted, [log_y], lam,
                     trunc=SeriesTruncation(max_y=30))
    y = mp.e ** log_y
    a = (lam[1] - lam[0]) / TWO_PI_I
    pref = mp.e ** ((-lam[0] * log_y + lam[0] + lam[1]) / TWO_PI_I)
    oracle = pref * mp.hyp0f1(1 + a, y) / mp.gamma(1 + a)
    assert abs(got - oracle) < 1e-12 * abs(oracle)


def flop_oracle(log_y, lam):
    """Gauss-series value of the first fixed-point restriction of the flop
    plus-side series, via mpmath's hypergeometric continuation."""
    y = mp.e ** mp.mpmathify(log_y)
    a2 = (lam[1] - lam[0]) / TWO_PI_I
    a3 = (lam[2] + lam[0]) / TWO_PI_I
    a4 = (lam[3] + lam[0]) / TWO_PI_I
    pref = mp.e ** ((-lam[0] * mp.mpmathify(log_y) + sum(lam)) / TWO_PI_I)
    front = (mp.sin(-mp.pi * a3) * mp.sin(-mp.pi * a4) / mp.pi ** 2
             * mp.gamma(-a3) * mp.gamma(-a4) / mp.gamma(1 + a2))
    return pref * front * mp.hyp2f1(-a3, -a4, 1 + a2, y)


def test_flop_restriction_is_gauss_series(flop):
    log_y = complex(mp.log(mp.mpf("0.4")))
    delta = frozenset({0})
    kc = next(k for d, k in flop.fixed_plus if d == delta)
    got = restrict_h(flop.git, flop.table_plus, delta, kc, flop.ad_plus,
                     [log_y], LAM, trunc=SeriesTruncation(max_y=40))
    oracle = flop_oracle(log_y, LAM)
    assert abs(got - oracle) < 1e-12 * abs(oracle)


def test_restrict_h_outside_radius_raises(flop):
    delta = frozenset({0})
    kc = next(k for d, k in flop.fixed_plus if d == delta)
    with pytest.raises(OutsideConvergence):
        restrict_h(flop.git, flop.table_plus, delta, kc, flop.ad_plus,
                   [complex(mp.log(2))], LAM,
                   trunc=SeriesTruncation(max_y=30))


def test_transport_log_y_roundtrip(rank2):
    log_y = [complex(-0.3, 0.1), complex(-0.7, 0.4)]
    there = transport_log_y(rank2.ad_plus, rank2.ad_minus, log_y)
    back = transport_log_y(rank2.ad_minus, rank2.ad_plus, there)
    assert max(abs(a - b) for a, b in zip(log_y, back)) < 1e-12


def test_i_h_transform_p1():
    git, mins, table, fixed, adapted = single_chamber([[1], [1]], [1])
    rep = verify_i_h_relation(git, table, fixed, adapted,
                              trunc=SeriesTruncation(max_y=2))
    assert rep["pass"], rep
    assert len(rep["terms"]) >= 6


def test_i_h_transform_flop(flop):
    rep = verify_i_h_relation(flop.git, flop.table_plus, flop.fixed_plus,
                              flop.ad_plus, trunc=SeriesTruncation(max_y=2))
    assert rep["pass"], rep
    rep_minus = verify_i_h_relation(flop.git, flop.table_minus,
                                    flop.fixed_minus, flop.ad_plus,
                                    trunc=SeriesTruncation(max_y=2))
    assert rep_minus["pass"], rep_minus


def test_i_h_transform_c3z3_twisted_sectors(c3z3):
    rep = verify_i_h_relation(c3z3.git, c3z3.table_minus, c3z3.fixed_minus,
                              c3z3.ad_minus, trunc=SeriesTruncation(max_y=1))
    assert rep["pass"], rep
    # Twisted sectors genuinely exercised.
    fs = {tuple(t["f"]) for t in rep["terms"]}
    assert len(fs) == 3


def test_i_h_transform_detects_rho_perturbation(flop):
    rep = verify_i_h_relation(flop.git, flop.table_plus, flop.fixed_plus,
                              flop.ad_plus, trunc=SeriesTruncation(max_y=1),
                              perturb_rho=1)
    assert not rep["pass"]

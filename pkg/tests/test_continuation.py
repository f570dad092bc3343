"""Contour-integral continuation, connection coefficients, and the
wall-crossing comparison of fixed-point restrictions."""

from fractions import Fraction

import mpmath as mp
import pytest

from toricwall.continuation import (build_U_H, connection_coefficient,
                                    continued_restriction, make_integrand,
                                    mb_integral, residue_sum,
                                    verify_theta_commutation,
                                    verify_wall_crossing_theorem)
from toricwall.series import SeriesTruncation, restrict_h
from toricwall.lattice import dot

from test_series import LAM, flop_oracle

LAM7 = LAM + [complex(0.042, -0.118), complex(-0.155, 0.201),
              complex(0.093, 0.077)]


def sample_log_y(bundle, x_abs):
    """Plus-side coordinates with |y^e| = x_abs inside the branch sector."""
    wall = bundle.wall
    pe = [dot(p, wall.e) for p in bundle.ad_plus.p]
    assert len(pe) == 1 and pe[0] != 0
    x_log = complex(mp.log(x_abs)) + 1j * float(mp.pi * wall.w + 0.7)
    return [x_log / float(pe[0])]


@pytest.mark.parametrize("x_abs", [0.25, 0.5])
def test_flop_inside_routes_agree(flop, x_abs):
    log_y = sample_log_y(flop, x_abs)
    for delta, kc in flop.fixed_plus:
        direct = restrict_h(flop.git, flop.table_plus, delta, kc,
                            flop.ad_plus, log_y, LAM,
                            trunc=SeriesTruncation(max_y=60), tol=1e-11)
        via_mb = continued_restriction(flop.git, flop.wall, flop.table_plus,
                                       delta, kc, flop.ad_plus, log_y, LAM,
                                       route="mb", target=1e-10)
        via_res = continued_restriction(flop.git, flop.wall, flop.table_plus,
                                        delta, kc, flop.ad_plus, log_y, LAM,
                                        route="right")
        scale = max(1.0, float(abs(direct)))
        assert abs(via_mb - direct) / scale < 1e-8
        assert abs(via_res - direct) / scale < 1e-8


def test_c3z3_inside_routes_agree(c3z3):
    radius = float(abs(c3z3.wall.conifold))
    for frac in (0.25, 0.5):
        log_y = sample_log_y(c3z3, frac * radius)
        for delta, kc in c3z3.fixed_plus:
            direct = restrict_h(c3z3.git, c3z3.table_plus, delta, kc,
                                c3z3.ad_plus, log_y, LAM,
                                trunc=SeriesTruncation(max_y=60), tol=1e-11)
            via_mb = continued_restriction(c3z3.git, c3z3.wall,
                                           c3z3.table_plus, delta, kc,
                                           c3z3.ad_plus, log_y, LAM,
                                           route="mb", target=1e-10)
            via_res = continued_restriction(c3z3.git, c3z3.wall,
                                            c3z3.table_plus, delta, kc,
                                            c3z3.ad_plus, log_y, LAM,
                                            route="right")
            scale = max(1.0, float(abs(direct)))
            assert abs(via_mb - direct) / scale < 1e-8
            assert abs(via_res - direct) / scale < 1e-8


def test_flop_continuation_matches_gauss(flop):
    # Outside the radius the continued restriction must match mpmath's own
    # continuation of the Gauss series (independent oracle).
    delta = frozenset({0})
    kc = next(k for d, k in flop.fixed_plus if d == delta)
    for x_abs in (1.5, 2.0, 4.0):
        log_y = sample_log_y(flop, x_abs)
        got = continued_restriction(flop.git, flop.wall, flop.table_plus,
                                    delta, kc, flop.ad_plus, log_y, LAM,
                                    route="left")
        oracle = flop_oracle(log_y[0], LAM)
        assert abs(got - oracle) < 1e-10 * max(1, abs(oracle))


def test_flop_mb_equals_left_residues(flop):
    delta = frozenset({1})
    kc = next(k for d, k in flop.fixed_plus if d == delta)
    log_y = sample_log_y(flop, 2.0)
    left = continued_restriction(flop.git, flop.wall, flop.table_plus,
                                 delta, kc, flop.ad_plus, log_y, LAM,
                                 route="left")
    via_mb = continued_restriction(flop.git, flop.wall, flop.table_plus,
                                   delta, kc, flop.ad_plus, log_y, LAM,
                                   route="mb", target=1e-10)
    assert abs(left - via_mb) < 1e-8 * max(1, abs(left))


def test_wall_crossing_theorem_flop(flop):
    samples = [sample_log_y(flop, x) for x in (1.5, 2.0, 4.0)]
    rep = verify_wall_crossing_theorem(
        flop.git, flop.wall, flop.table_plus, flop.table_minus,
        flop.fixed_plus, flop.fixed_minus, flop.class_pairs,
        flop.ad_plus, flop.ad_minus, samples, LAM, tol=1e-6)
    assert rep["pass"], rep
    assert rep["max_deviation"] < 1e-9


def test_wall_crossing_theorem_c3z3(c3z3):
    radius = float(abs(c3z3.wall.conifold))
    samples = [sample_log_y(c3z3, 2.0 * radius)]
    rep = verify_wall_crossing_theorem(
        c3z3.git, c3z3.wall, c3z3.table_plus, c3z3.table_minus,
        c3z3.fixed_plus, c3z3.fixed_minus, c3z3.class_pairs,
        c3z3.ad_plus, c3z3.ad_minus, samples, LAM, tol=1e-6)
    assert rep["pass"], rep


def test_wall_crossing_detects_w_perturbation(flop):
    samples = [sample_log_y(flop, 2.0)]
    rep = verify_wall_crossing_theorem(
        flop.git, flop.wall, flop.table_plus, flop.table_minus,
        flop.fixed_plus, flop.fixed_minus, flop.class_pairs,
        flop.ad_plus, flop.ad_minus, samples, LAM, tol=1e-6,
        w_override=flop.wall.w + 1)
    assert not rep["pass"]
    assert rep["max_deviation"] > 1e-3


def test_u_h_identity_on_common_rows(rank2):
    matrix = build_U_H(rank2.git, rank2.wall, rank2.table_plus,
                       rank2.table_minus, rank2.fixed_plus,
                       rank2.fixed_minus, rank2.class_pairs, LAM7)
    shared = {(d, k.f) for d, k in rank2.fixed_plus} & {
        (d, k.f) for d, k in rank2.fixed_minus}
    for key in shared:
        assert matrix[(key, key)] == mp.mpc(1)


def test_theta_commutation_rank2(rank2):
    rep = verify_theta_commutation(
        rank2.git, rank2.wall, rank2.table_plus, rank2.table_minus,
        rank2.fixed_plus, rank2.fixed_minus, rank2.class_pairs)
    assert rep["pass"], rep
    assert len(rep["entries"]) == 15  # 9 paired + 6 shared, one wall class


def test_connection_coefficient_row_sum_flop(flop):
    # At lambda -> 0 the coefficients of the flop reduce to the classical
    # conifold values: each row of the transition matrix sums to 1 in the
    # w-twisted normalization (checked at small lambda by continuity).
    lam_small = [x * 1e-3 for x in LAM]
    matrix = build_U_H(flop.git, flop.wall, flop.table_plus,
                       flop.table_minus, flop.fixed_plus, flop.fixed_minus,
                       flop.class_pairs, lam_small)
    rows = {}
    for (row, col), c in matrix.items():
        rows.setdefault(row, []).append(c)
    for row, cs in rows.items():
        assert len(cs) == 2
        total = sum(cs)
        # Classical flop monodromy: coefficients sum to a unit phase.
        assert abs(abs(total) - 1) < 1e-2


def test_classify_poles_no_collisions(flop):
    delta = frozenset({0})
    kc = next(k for d, k in flop.fixed_plus if d == delta)
    ig = make_integrand(flop.git, flop.wall, flop.table_plus, delta, kc, LAM)
    from toricwall.continuation import classify_poles

    info = classify_poles(ig)
    assert info["right"]
    assert all(n >= 0 for n in info["right"])

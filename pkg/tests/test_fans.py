"""Cones, fans, star subdivision, and the common blow-up stability data."""

from fractions import Fraction

import pytest

from toricwall.errors import NonSmoothStar
from toricwall.fans import (Cone, Fan, blowup_git, cones_equal, dual_cone,
                            intersect_cones, is_simplicial, is_smooth,
                            star_subdivision)
from toricwall.lattice import Eps
from toricwall.wall import GitData, wall_between, chamber


def test_dual_cone_first_quadrant():
    c = Cone.from_generators([[1, 0], [0, 1]])
    d = dual_cone(c)
    assert cones_equal(d, c)


def test_dual_cone_halfplane():
    c = Cone.from_generators([[1, 0], [-1, 0], [0, 1]])
    d = dual_cone(c)
    assert cones_equal(d, Cone.from_generators([[0, 1]], dim_ambient=2))


def test_cone_membership_and_dim():
    c = Cone.from_generators([[2, 1], [1, 2]])
    assert c.dim == 2
    assert c.contains([1, 1])
    assert not c.contains([1, -1])


def test_smoothness():
    assert is_smooth(Cone.from_generators([[1, 0], [0, 1]]))
    assert not is_smooth(Cone.from_generators([[1, 0], [1, 2]]))
    assert is_simplicial(Cone.from_generators([[1, 0], [1, 2]]))


def test_star_subdivision_c2():
    # Subdividing the smooth 2-dimensional cone inserts the ray (1, 1).
    fan = Fan(rays=((1, 0), (0, 1)), maximal_cones=(frozenset({0, 1}),),
              dim_ambient=2)
    sub = star_subdivision(fan, frozenset({0, 1}))
    assert (1, 1) in sub.rays
    assert len(sub.maximal_cones) == 2
    for mc in sub.maximal_cones:
        assert is_smooth(sub.cone_of(mc))


def test_star_subdivision_nonsmooth_rejected():
    fan = Fan(rays=((1, 0), (1, 2)), maximal_cones=(frozenset({0, 1}),),
              dim_ambient=2)
    with pytest.raises(NonSmoothStar):
        star_subdivision(fan, frozenset({0, 1}))


def test_blowup_git_flop():
    git = GitData([[1], [1], [-1], [-1]])
    wall = wall_between(git, [1], [-1])
    blown, omega = blowup_git(git, wall)
    # Positive-pairing rows acquire -pairing; a fresh exceptional row appears.
    assert blown.D == ((1, -1), (1, -1), (-1, 0), (-1, 0), (0, 1))
    assert len(omega) == 2
    assert omega[0].b == 0 and omega[1] == Eps(0, -1)
    # The perturbed stability parameter lies in a genuine chamber.
    cone = chamber(blown, omega)
    assert cone.dim == 2


def test_blowup_git_c3z3():
    git = GitData([[1], [1], [1], [-3]])
    wall = wall_between(git, [1], [-1])
    blown, _ = blowup_git(git, wall)
    assert blown.D == ((1, -1), (1, -1), (1, -1), (-3, 0), (0, 1))


def test_intersect_cones():
    a = Cone.from_generators([[1, 0], [1, 1]])
    b = Cone.from_generators([[1, 1], [0, 1]])
    c = intersect_cones(a, b)
    assert cones_equal(c, Cone.from_generators([[1, 1]], dim_ambient=2))

"""Shared fixtures: the bundled examples with their wall structures."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import pytest

from toricwall.wall import (GitData, adapted_coordinates, anticones,
                            fixed_data, k_classes, minimal_anticones,
                            pair_anticones, wall_between)
from toricwall.cohomology import restriction_table


@dataclass
class Bundle:
    """Everything the wall-crossing checks need for one example."""

    git: GitData
    omega_plus: tuple
    omega_minus: tuple
    wall: object = None
    mins_plus: set = None
    mins_minus: set = None
    classes_plus: list = None
    classes_minus: list = None
    table_plus: object = None
    table_minus: object = None
    fixed_plus: list = None
    fixed_minus: list = None
    ad_plus: object = None
    ad_minus: object = None
    anticone_pairs: list = None
    class_pairs: list = None


def build_bundle(D, omega_plus, omega_minus) -> Bundle:
    git = GitData(D)
    b = Bundle(git=git, omega_plus=tuple(omega_plus),
               omega_minus=tuple(omega_minus))
    b.wall = wall_between(git, list(omega_plus), list(omega_minus))
    b.mins_plus = minimal_anticones(anticones(git, list(omega_plus)))
    b.mins_minus = minimal_anticones(anticones(git, list(omega_minus)))
    b.classes_plus = k_classes(git, list(omega_plus))
    b.classes_minus = k_classes(git, list(omega_minus))
    b.table_plus = restriction_table(git, b.mins_plus)
    b.table_minus = restriction_table(git, b.mins_minus)
    b.fixed_plus = fixed_data(b.mins_plus, b.classes_plus)
    b.fixed_minus = fixed_data(b.mins_minus, b.classes_minus)
    b.ad_plus, b.ad_minus = adapted_coordinates(
        b.wall, git, b.classes_plus, b.classes_minus)
    b.anticone_pairs, b.class_pairs = pair_anticones(
        b.wall, git, b.mins_plus, b.mins_minus,
        b.classes_plus, b.classes_minus)
    return b


@pytest.fixture(scope="session")
def flop() -> Bundle:
    return build_bundle([[1], [1], [-1], [-1]], (1,), (-1,))


@pytest.fixture(scope="session")
def c3z3() -> Bundle:
    return build_bundle([[1], [1], [1], [-3]], (1,), (-1,))


@pytest.fixture(scope="session")
def rank2() -> Bundle:
    return build_bundle(
        [[1, 0], [1, 0], [-1, 0], [-1, 0], [0, 1], [-2, 1], [-1, 1]],
        (-1, 2), (-3, 2))


def seeded_lambdas(seed: int, m: int, count: int = 1):
    """Deterministic complex-rational draws matching the CLI convention."""
    import random

    rng = random.Random(seed)
    from toricwall.cli import draw_lambdas

    return [draw_lambdas(rng, m) for _ in range(count)]

"""Cones, fans, star subdivisions, and the blow-up stability data.

All cone computations are exact over the rationals.  Cones are given by
generator lists; H-descriptions are produced on demand by dualizing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import InvalidFan, NonSmoothStar
from .lattice import (
    Eps,
    cone_membership,
    dot,
    int_kernel,
    matrix_rank,
    primitive_vector,
    rat_kernel,
    smith_normal_form,
    transpose,
    vec_add,
)


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone given by generators in N_R coordinates."""

    generators: tuple[tuple, ...]
    dim_ambient: int

    @staticmethod
    def from_generators(gens, dim_ambient=None) -> "Cone":
        gens = [g for g in gens if any(g)]
        if dim_ambient is None:
            if not gens:
                raise ValueError("ambient dimension required for the zero cone")
            dim_ambient = len(gens[0])
        prim = []
        seen = set()
        for g in gens:
            p = tuple(primitive_vector(g))
            if p not in seen:
                seen.add(p)
                prim.append(p)
        return Cone(generators=tuple(prim), dim_ambient=dim_ambient)

    @property
    def dim(self) -> int:
        return matrix_rank(list(self.generators)) if self.generators else 0

    def contains(self, x) -> bool:
        return cone_membership(list(self.generators), list(x), strict=False)

    def minimal_generators(self) -> list[tuple]:
        """Extreme rays: generators not in the cone of the others."""
        gens = list(self.generators)
        out = []
        for i, g in enumerate(gens):
            rest = [h for j, h in enumerate(gens) if j != i]
            if not cone_membership(rest, list(g), strict=False):
                out.append(g)
        return out

    def is_strongly_convex(self) -> bool:
        for g in self.generators:
            if cone_membership(list(self.generators), [-a for a in g], strict=False):
                return False
        return True


def dual_cone(cone: Cone) -> Cone:
    """Generators of {x : g . x >= 0 for all generators g}."""
    d = cone.dim_ambient
    G = [list(g) for g in cone.generators]
    rho = matrix_rank(G) if G else 0
    gens: list[tuple] = []
    if rho == 0:
        for i in range(d):
            e = [0] * d
            e[i] = 1
            gens.append(tuple(e))
            gens.append(tuple(-x for x in e))
        return Cone.from_generators(gens, d)
    lineality = rat_kernel(G)
    for v in lineality:
        gens.append(tuple(primitive_vector(v)))
        gens.append(tuple(-x for x in primitive_vector(v)))

    def in_span(v, basis):
        if not basis:
            return not any(v)
        return matrix_rank(basis + [list(v)]) == matrix_rank(basis)

    lin_basis = [list(v) for v in lineality]
    for subset in combinations(range(len(G)), rho - 1):
        sub = [G[i] for i in subset]
        if sub and matrix_rank(sub) != rho - 1:
            continue
        for u in rat_kernel(sub) if sub else [list(row) for row in _std_basis(d)]:
            if in_span(u, lin_basis):
                continue
            vals = [dot(g, u) for g in G]
            if all(v >= 0 for v in vals):
                gens.append(tuple(primitive_vector(u)))
            elif all(v <= 0 for v in vals):
                gens.append(tuple(primitive_vector([-x for x in u])))
    return Cone.from_generators(gens, d)


def _std_basis(d):
    out = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        out.append(e)
        out.append([-x for x in e])
    return out


def cones_equal(a: Cone, b: Cone) -> bool:
    return (all(b.contains(g) for g in a.generators)
            and all(a.contains(g) for g in b.generators))


def intersect_cones(a: Cone, b: Cone) -> Cone:
    """Intersection via the union of the two H-descriptions."""
    ha = dual_cone(a).generators
    hb = dual_cone(b).generators
    combined = Cone.from_generators(list(ha) + list(hb), a.dim_ambient)
    return dual_cone(combined)


def is_simplicial(cone: Cone) -> bool:
    gens = cone.minimal_generators()
    return matrix_rank([list(g) for g in gens]) == len(gens)


def is_smooth(cone: Cone) -> bool:
    gens = cone.minimal_generators()
    if matrix_rank([list(g) for g in gens]) != len(gens):
        return False
    if not gens:
        return True
    diag = smith_normal_form([list(g) for g in gens]).diagonal
    return all(x == 1 for x in diag[: len(gens)])


@dataclass(frozen=True)
class Fan:
    """A simplicial fan stored via maximal cones; faces are implicit.

    Maximal cones carry their ray index sets against the shared ray list so
    face containment is a subset test.
    """

    rays: tuple[tuple, ...]
    maximal_cones: tuple[frozenset, ...]
    dim_ambient: int

    def cone_of(self, index_set) -> Cone:
        gens = [self.rays[i] for i in index_set]
        return Cone.from_generators(gens, self.dim_ambient)

    def has_cone(self, index_set) -> bool:
        s = frozenset(index_set)
        return any(s <= mc for mc in self.maximal_cones)

    def all_cones(self) -> list[frozenset]:
        seen = set()
        for mc in self.maximal_cones:
            for k in range(len(mc) + 1):
                for sub in combinations(sorted(mc), k):
                    seen.add(frozenset(sub))
        return sorted(seen, key=lambda s: (len(s), sorted(s)))

    def validate(self) -> None:
        """Check simpliciality and that pairwise intersections are faces."""
        for mc in self.maximal_cones:
            cone = self.cone_of(mc)
            if not is_simplicial(cone) or len(cone.minimal_generators()) != len(mc):
                raise InvalidFan(f"cone {sorted(mc)} is not simplicial")
            if not cone.is_strongly_convex():
                raise InvalidFan(f"cone {sorted(mc)} contains a line")
        for a, b in combinations(self.maximal_cones, 2):
            ca, cb = self.cone_of(a), self.cone_of(b)
            inter = intersect_cones(ca, cb)
            shared = a & b
            if not cones_equal(inter, self.cone_of(shared)):
                raise InvalidFan(
                    f"cones {sorted(a)} and {sorted(b)} do not meet along a face")

    def support_contains(self, x) -> bool:
        return any(self.cone_of(mc).contains(x) for mc in self.maximal_cones)


def star_subdivision(fan: Fan, tau: frozenset) -> Fan:
    """Subdivide along the cone spanned by the rays indexed by tau.

    The new ray is the sum of the rays of tau.  Every cone containing tau
    must be smooth; otherwise NonSmoothStar is raised.  Subdividing along a
    single ray returns the fan unchanged.
    """
    tau = frozenset(tau)
    if not tau:
        raise ValueError("cannot subdivide along the zero cone")
    if not fan.has_cone(tau):
        raise InvalidFan(f"{sorted(tau)} is not a cone of the fan")
    if len(tau) == 1:
        return fan
    for mc in fan.maximal_cones:
        if tau <= mc and not is_smooth(fan.cone_of(mc)):
            raise NonSmoothStar(f"cone {sorted(mc)} containing tau is not smooth")
    u_tau = [0] * fan.dim_ambient
    for i in tau:
        u_tau = vec_add(u_tau, fan.rays[i])
    new_rays = list(fan.rays) + [tuple(u_tau)]
    new_index = len(fan.rays)
    new_max = []
    for mc in fan.maximal_cones:
        if not (tau <= mc):
            new_max.append(mc)
            continue
        for rho in sorted(tau):
            new_max.append((mc - {rho}) | {new_index})
    return Fan(rays=tuple(new_rays),
               maximal_cones=tuple(frozenset(c) for c in new_max),
               dim_ambient=fan.dim_ambient)


def blowup_git(git, wall):
    """Stability data of the common blow-up across a crepant wall.

    Characters gain one coordinate: rows with positive pairing against e pick
    up minus that pairing, a fresh character (0, ..., 0, 1) is appended, and
    the stability parameter becomes (omega0, -eps) with omega0 interior to
    the wall face of the plus chamber and eps an infinitesimal handled by
    lexicographic perturbation.
    """
    from .wall import GitData, chamber

    e = wall.e
    new_D = []
    for Di in git.D:
        de = dot(Di, e)
        extra = -de if de > 0 else 0
        new_D.append(list(Di) + [extra])
    new_D.append([0] * git.r + [1])
    omega0 = _wall_interior_point(git, wall)
    omega_tilde = [Eps(x, 0) for x in omega0] + [Eps(0, -1)]
    blown = GitData(D=[tuple(row) for row in new_D], base=git.base,
                    Lambda=None)
    return blown, omega_tilde


def _wall_interior_point(git, wall):
    """A rational point interior to the wall face of the plus chamber."""
    from .wall import chamber

    cplus = chamber(git, wall.omega_plus)
    face_gens = [g for g in cplus.generators if dot(g, wall.e) == 0]
    if not face_gens:
        return [Fraction(0)] * git.r
    total = [Fraction(0)] * git.r
    for g in face_gens:
        total = vec_add(total, g)
    return total

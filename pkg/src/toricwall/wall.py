"""Stability data, anticones, chambers, walls, and fractional classes.

Index convention: characters are indexed 0..m-1 internally; reports render
them 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil

from .errors import DegenerateStability, InvalidFan, NotAdjacent, NotCrepant
from .fans import Cone, Fan, dual_cone, is_simplicial
from .lattice import (
    FgAbGroup,
    cokernel_with_projection,
    cone_membership,
    dot,
    dual_characters,
    frac_ceil_parts,
    hnf_columns,
    int_kernel,
    matrix_rank,
    primitive_vector,
    rat_kernel,
    smith_normal_form,
    solve_rational,
    transpose,
    vec_add,
    vec_scale,
    vec_sub,
)


@dataclass(frozen=True)
class GitData:
    """Characters and auxiliary data defining a problem instance.

    D is the list of m characters, each an integer vector of length r.
    Lambda optionally holds base-class degree rows (one per character) over a
    basis of degree-two classes of the base; None means the base is a point.
    """

    D: tuple
    base: str = "point"
    Lambda: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "D", tuple(tuple(int(x) for x in row) for row in self.D))
        if self.Lambda is not None:
            object.__setattr__(
                self, "Lambda",
                tuple(tuple(Fraction(x) for x in row) for row in self.Lambda))

    @property
    def m(self) -> int:
        return len(self.D)

    @property
    def r(self) -> int:
        return len(self.D[0]) if self.D else 0

    def character_sum(self):
        total = [0] * self.r
        for row in self.D:
            total = vec_add(total, row)
        return total


Anticone = frozenset


def anticones(git: GitData, omega) -> set[frozenset]:
    """All subsets I with omega in the strictly positive span of {D_i: i in I}.

    Raises DegenerateStability when the full index set fails, or when some
    anticone does not span (omega on a wall or outside the support).
    """
    m, r = git.m, git.r
    if all(_is_zero(x) for x in omega):
        raise DegenerateStability("stability parameter is zero")
    result = set()
    for k in range(1, m + 1):
        for I in combinations(range(m), k):
            cols = [list(git.D[i]) for i in I]
            if cone_membership(cols, list(omega), strict=True):
                result.add(frozenset(I))
    if frozenset(range(m)) not in result:
        raise DegenerateStability("full index set is not an anticone")
    for I in result:
        if matrix_rank([list(git.D[i]) for i in I]) != r:
            raise DegenerateStability(
                f"anticone {sorted(i + 1 for i in I)} does not span")
    return result


def _is_zero(x) -> bool:
    return x == 0


def minimal_anticones(acs: set[frozenset]) -> set[frozenset]:
    out = {I for I in acs if not any(J < I for J in acs)}
    return out


def s_set(acs: set[frozenset], m: int) -> frozenset:
    """Indices whose removal from the full set leaves a non-anticone."""
    full = frozenset(range(m))
    return frozenset(i for i in range(m) if (full - {i}) not in acs)


def chamber(git: GitData, omega) -> Cone:
    """The closed chamber containing omega, as a cone in the dual space.

    The chamber is the intersection of the anticone spans; minimal anticones
    are the binding ones.
    """
    acs = minimal_anticones(anticones(git, omega))
    halfspaces = []
    for I in acs:
        c = Cone.from_generators([list(git.D[i]) for i in I], git.r)
        halfspaces.extend(dual_cone(c).generators)
    hcone = Cone.from_generators(halfspaces, git.r)
    return dual_cone(hcone)


@dataclass(frozen=True)
class WallData:
    """Geometry of a crepant wall between two adjacent chambers."""

    W_basis: tuple
    e: tuple
    j_plus_set: tuple
    j_minus_set: tuple
    k: tuple
    l_list: tuple
    w: int
    conifold: Fraction
    omega_plus: tuple
    omega_minus: tuple

    def pairing(self, j: int, git: GitData) -> int:
        return dot(git.D[j], self.e)

    def l_of(self, j_minus: int, git: GitData) -> int:
        val = -dot(git.D[j_minus], self.e)
        assert val > 0
        return val


def wall_between(git: GitData, omega_plus, omega_minus) -> WallData:
    """Wall data for the crepant crossing between two chambers."""
    omega_plus = tuple(Fraction(x) for x in omega_plus)
    omega_minus = tuple(Fraction(x) for x in omega_minus)
    c_plus = chamber(git, omega_plus)
    c_minus = chamber(git, omega_minus)
    from .fans import intersect_cones

    wall_cone = intersect_cones(c_plus, c_minus)
    wall_gens = wall_cone.minimal_generators()
    span = [list(g) for g in wall_gens]
    if matrix_rank(span) != git.r - 1:
        raise NotAdjacent("chambers do not share a codimension-one face")
    # Independent spanning subset of the wall.
    W_basis = _independent_subset(span, git.r - 1)
    perp = rat_kernel(W_basis) if W_basis else rat_kernel([[0] * git.r])
    assert len(perp) == 1
    e = primitive_vector(perp[0])
    if dot(omega_plus, e) < 0:
        e = [-x for x in e]
    assert dot(omega_plus, e) > 0 and dot(omega_minus, e) < 0
    if dot(git.character_sum(), e) != 0:
        raise NotCrepant("character sum does not pair to zero with e")
    pairings = [dot(Di, e) for Di in git.D]
    j_plus = tuple(j for j, p in enumerate(pairings) if p > 0)
    j_minus = tuple(j for j, p in enumerate(pairings) if p < 0)
    w_plus = -1 + sum(pairings[j] for j in j_plus)
    w_minus = -1 - sum(pairings[j] for j in j_minus)
    assert w_plus == w_minus
    conifold = Fraction(1)
    for p in pairings:
        if p != 0:
            conifold *= Fraction(p) ** p
    return WallData(
        W_basis=tuple(tuple(x) for x in W_basis),
        e=tuple(e),
        j_plus_set=j_plus,
        j_minus_set=j_minus,
        k=tuple(max(p, 0) for p in pairings),
        l_list=tuple(max(-p, 0) for p in pairings),
        w=w_plus,
        conifold=conifold,
        omega_plus=omega_plus,
        omega_minus=omega_minus,
    )


def _independent_subset(vectors, target_rank):
    out = []
    for v in vectors:
        if matrix_rank(out + [list(v)]) > matrix_rank(out):
            out.append(list(v))
        if len(out) == target_rank:
            break
    assert len(out) == target_rank
    return out


@dataclass(frozen=True)
class KClassIndex:
    """A fractional class with its integrality set, age, and box element."""

    f: tuple
    I_f: frozenset
    age: Fraction
    box: tuple

    def key(self):
        return self.f


def k_classes(git: GitData, omega) -> list[KClassIndex]:
    """One representative per fractional class, normalized into [0,1)^r.

    For each minimal anticone delta, the classes with all delta-pairings
    integral form a finite group enumerated through the Smith form of the
    delta-submatrix; the union over delta is complete because every
    integrality set contains a minimal anticone.
    """
    acs = minimal_anticones(anticones(git, omega))
    group, _ = cokernel_with_projection([list(row) for row in git.D])
    reps: dict[tuple, KClassIndex] = {}
    for delta in sorted(acs, key=sorted):
        A = [list(git.D[i]) for i in sorted(delta)]
        snf = smith_normal_form(A)
        diag = snf.diagonal
        Vinv = _int_inverse(snf.V)
        Uinv = _int_inverse(snf.U)
        # Solutions f with A f integral: f = V s^{-1} t over integer t.
        ranges = [range(d) for d in diag]
        for t in _product(ranges):
            coords = [Fraction(t[i], diag[i]) for i in range(git.r)]
            f = [sum(Fraction(snf.V[i][j]) * coords[j] for j in range(git.r))
                 for i in range(git.r)]
            f = tuple(x - (x.numerator // x.denominator) for x in f)
            if f in reps:
                continue
            I_f = frozenset(i for i in range(git.m)
                            if dot(git.D[i], f).denominator == 1)
            age = sum((frac_ceil_parts(dot(git.D[i], f))[1]
                       for i in range(git.m) if i not in I_f), Fraction(0))
            box = tuple(group.project([ceil(-dot(git.D[i], f))
                                       for i in range(git.m)]))
            reps[f] = KClassIndex(f=f, I_f=I_f, age=age, box=box)
    _ = Uinv  # transform bookkeeping not needed beyond the Smith data
    return sorted(reps.values(), key=lambda kc: kc.f)


def _product(ranges):
    if not ranges:
        yield ()
        return
    for head in ranges[0]:
        for tail in _product(ranges[1:]):
            yield (head,) + tail


def _int_inverse(M):
    """Exact inverse of a unimodular integer matrix."""
    n = len(M)
    cols = []
    for j in range(n):
        b = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        x = solve_rational(M, b)
        cols.append([int(v) for v in x])
    return transpose(cols)


@dataclass(frozen=True)
class ExtendedStackyFan:
    N: FgAbGroup
    rays: tuple        # images of the coordinate vectors, torsion included
    fan: Fan           # on the free parts of the non-extended rays
    beta: tuple        # projection matrix rows
    S: frozenset
    ray_index: tuple   # character index carried by each fan ray


def to_stacky_fan(git: GitData, omega) -> ExtendedStackyFan:
    acs = anticones(git, omega)
    mins = minimal_anticones(acs)
    S = s_set(acs, git.m)
    group, proj = cokernel_with_projection([list(row) for row in git.D])
    rays_full = [tuple(group.project(_unit(git.m, i))) for i in range(git.m)]
    free_rays = [tuple(group.free_part(_unit(git.m, i))) for i in range(git.m)]
    fan_indices = [i for i in range(git.m) if i not in S]
    index_of = {i: k for k, i in enumerate(fan_indices)}
    maximal = []
    for delta in mins:
        complement = [i for i in range(git.m) if i not in delta]
        assert all(i in index_of for i in complement)
        maximal.append(frozenset(index_of[i] for i in complement))
    fan = Fan(rays=tuple(free_rays[i] for i in fan_indices),
              maximal_cones=tuple(maximal),
              dim_ambient=group.free_rank)
    return ExtendedStackyFan(N=group, rays=tuple(rays_full), fan=fan,
                             beta=tuple(tuple(row) for row in proj),
                             S=S, ray_index=tuple(fan_indices))


def _unit(m, i):
    v = [0] * m
    v[i] = 1
    return v


def from_stacky_fan(esf: ExtendedStackyFan) -> tuple[GitData, tuple]:
    """Recover stability data from an extended stacky fan.

    Returns the characters in the canonical kernel basis and a stability
    parameter interior to the recovered chamber.
    """
    for mc in esf.fan.maximal_cones:
        if not is_simplicial(esf.fan.cone_of(mc)):
            raise InvalidFan("fan has a non-simplicial cone")
    m = len(esf.rays)
    group = esf.N
    # Ray consistency: fan rays must be the free parts of the carried indices.
    for k, i in enumerate(esf.ray_index):
        expected = tuple(group.free_part(_unit(m, i)))
        if esf.fan.dim_ambient and tuple(esf.fan.rays[k]) != expected:
            raise InvalidFan("fan rays do not match the projection images")
    D = dual_characters(group)
    git = GitData(D=tuple(tuple(row) for row in D))
    index_of = {i: k for k, i in enumerate(esf.ray_index)}
    mins = []
    for mc in esf.fan.maximal_cones:
        used = {i for i in esf.ray_index if index_of[i] in mc}
        delta = frozenset(range(m)) - used
        mins.append(delta)
    omega = _interior_stability(git, mins)
    return git, omega


def _interior_stability(git: GitData, minimal_deltas) -> tuple:
    halfspaces = []
    for delta in minimal_deltas:
        c = Cone.from_generators([list(git.D[i]) for i in delta], git.r)
        halfspaces.extend(dual_cone(c).generators)
    hcone = Cone.from_generators(halfspaces, git.r)
    cham = dual_cone(hcone)
    total = [Fraction(0)] * git.r
    for g in cham.generators:
        total = vec_add(total, list(g))
    if all(x == 0 for x in total):
        raise InvalidFan("recovered chamber has empty interior")
    return tuple(total)


# ---------------------------------------------------------------------------
# Adapted wall coordinates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdaptedBasis:
    """Basis p_1..p_r of the dual overlattice on one side of the wall.

    The first r-1 vectors lie on the wall and are shared by both sides; the
    last one pairs nontrivially with e, positively on the plus side and
    negatively on the minus side.
    """

    p: tuple
    side: int  # +1 or -1

    def exponents(self, d) -> list[Fraction]:
        return [dot(pi, d) for pi in self.p]


def overlattice_basis(git: GitData, classes: list[KClassIndex]) -> list[list[Fraction]]:
    """Basis of the lattice generated by ZZ^r and the class representatives."""
    gens = [[Fraction(x) for x in _unit(git.r, i)] for i in range(git.r)]
    for kc in classes:
        gens.append([Fraction(x) for x in kc.f])
    denom = 1
    for g in gens:
        for x in g:
            denom = denom * x.denominator // _gcd(denom, x.denominator)
    scaled = [[int(x * denom) for x in g] for g in gens]
    basis = hnf_columns(scaled)
    return [[Fraction(x, denom) for x in col] for col in basis]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def dual_lattice_basis(basis: list[list[Fraction]]) -> list[list[Fraction]]:
    """Dual basis: rows of the inverse of the basis matrix (columns)."""
    r = len(basis)
    B = transpose(basis)  # columns are basis vectors
    rows = []
    for i in range(r):
        target = [Fraction(1) if j == i else Fraction(0) for j in range(r)]
        # Solve p . b_j = delta_ij, i.e. B^T p = e_i.
        p = solve_rational(transpose(B), target)
        rows.append(list(p))
    return rows


def adapted_coordinates(wall: WallData, git: GitData,
                        classes_plus: list[KClassIndex],
                        classes_minus: list[KClassIndex]) -> tuple[AdaptedBasis, AdaptedBasis]:
    """Shared wall basis plus per-side completion of the dual overlattices."""
    out = []
    wall_part_cache = None
    duals = {}
    for side, classes in ((+1, classes_plus), (-1, classes_minus)):
        lat = overlattice_basis(git, classes)
        duals[side] = dual_lattice_basis(lat)
    wall_sub = {}
    for side in (+1, -1):
        dual = duals[side]
        # Integer combinations a with (sum a_i p_i) . e = 0.
        coeffs = [[sum(dual[i][j] * wall.e[j] for j in range(git.r))] for i in range(git.r)]
        denom = 1
        for row in coeffs:
            denom = denom * row[0].denominator // _gcd(denom, row[0].denominator)
        int_rows = [[int(row[0] * denom)] for row in coeffs]
        kernel = int_kernel(transpose(int_rows))
        vecs = []
        for a in kernel:
            v = [sum(Fraction(a[i]) * dual[i][j] for i in range(git.r))
                 for j in range(git.r)]
            vecs.append(v)
        wall_sub[side] = _canonical_fraction_basis(vecs)
    assert wall_sub[+1] == wall_sub[-1], "wall sublattices differ between sides"
    shared = wall_sub[+1]
    for side in (+1, -1):
        p_last = _complete_dual_basis(shared, duals[side], git.r)
        if side * dot(p_last, wall.e) < 0:
            p_last = [-x for x in p_last]
        basis = [tuple(v) for v in shared] + [tuple(p_last)]
        out.append(AdaptedBasis(p=tuple(basis), side=side))
    return out[0], out[1]


def _canonical_fraction_basis(vecs):
    if not vecs:
        return []
    denom = 1
    for v in vecs:
        for x in v:
            denom = denom * x.denominator // _gcd(denom, x.denominator)
    scaled = [[int(x * denom) for x in v] for v in vecs]
    basis = hnf_columns(scaled)
    return [[Fraction(x, denom) for x in col] for col in basis]


def _complete_dual_basis(shared, dual_rows, r):
    """Complete the shared wall vectors to a basis of the dual overlattice."""
    if not shared:
        assert r == 1
        return list(dual_rows[0])
    # Coordinates of the shared vectors in the dual lattice basis.
    C = []
    for v in shared:
        coords = solve_rational(transpose(dual_rows), v)
        C.append([int(x) for x in coords])
    snf = smith_normal_form(C)
    assert all(x == 1 for x in snf.diagonal[: len(shared)]), \
        "wall sublattice is not saturated in the dual overlattice"
    Vinv = _int_inverse(snf.V)
    extra_coords = Vinv[r - 1]
    return [sum(Fraction(extra_coords[i]) * dual_rows[i][j] for i in range(r))
            for j in range(r)]


# ---------------------------------------------------------------------------
# Fixed data and cross-wall pairing
# ---------------------------------------------------------------------------

def fixed_data(acs_min: set[frozenset], classes: list[KClassIndex]):
    """All (delta, f) with delta inside the integrality set of f."""
    out = []
    for delta in sorted(acs_min, key=sorted):
        for kc in classes:
            if delta <= kc.I_f:
                out.append((delta, kc))
    return out


def class_shift_along_e(f_plus, f_minus, e):
    """Rational alpha with f_minus = f_plus + alpha*e modulo ZZ^r, or None."""
    g = vec_sub(list(f_minus), list(f_plus))
    g = [Fraction(x) for x in g]
    pivots = [i for i, x in enumerate(e) if x != 0]
    if not pivots:
        return None
    i0 = min(pivots, key=lambda i: abs(e[i]))
    candidates = []
    ei = e[i0]
    for kshift in range(abs(ei)):
        alpha = (g[i0] + kshift) / ei
        if all((g[i] - alpha * e[i]).denominator == 1 for i in range(len(g))):
            candidates.append(alpha)
    return candidates[0] if candidates else None


def pair_anticones(wall: WallData, git: GitData,
                   mins_plus: set[frozenset], mins_minus: set[frozenset],
                   classes_plus: list[KClassIndex], classes_minus: list[KClassIndex]):
    """Cross-wall pairs of anticones and of fixed data.

    Anticone pairs share r-1 wall indices and swap one positive-pairing index
    for one negative-pairing index.  Fixed-data pairs additionally require
    the class difference to be a rational multiple of e.
    """
    flipped_plus = mins_plus - mins_minus
    flipped_minus = mins_minus - mins_plus
    anticone_pairs = []
    for dp in sorted(flipped_plus, key=sorted):
        for dm in sorted(flipped_minus, key=sorted):
            kappa = dp & dm
            if len(kappa) != git.r - 1:
                continue
            if any(dot(git.D[i], wall.e) != 0 for i in kappa):
                continue
            (jp,) = dp - kappa
            (jm,) = dm - kappa
            if dot(git.D[jp], wall.e) > 0 and dot(git.D[jm], wall.e) < 0:
                anticone_pairs.append((dp, dm))
    class_pairs = []
    for dp, dm in anticone_pairs:
        for kp in classes_plus:
            if not dp <= kp.I_f:
                continue
            for km in classes_minus:
                if not dm <= km.I_f:
                    continue
                alpha = class_shift_along_e(kp.f, km.f, wall.e)
                if alpha is not None:
                    class_pairs.append(((dp, kp), (dm, km), alpha))
    return anticone_pairs, class_pairs

"""Exact integer and rational linear algebra.

Everything downstream (anticones, walls, restriction tables) is an exact
statement, so this module works with arbitrary-precision integers and
``fractions.Fraction`` throughout; no floating point.

Matrices are lists of row lists.  Vectors are lists (or tuples) of numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, floor
from typing import Sequence


Vec = Sequence
Mat = Sequence[Sequence]


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A: Mat, B: Mat) -> list[list]:
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    assert not A or len(A[0]) == k
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def mat_vec(A: Mat, x: Vec) -> list:
    return [sum(row[j] * x[j] for j in range(len(x))) for row in A]


def transpose(A: Mat) -> list[list]:
    return [list(col) for col in zip(*A)] if A else []


def dot(u: Vec, v: Vec):
    assert len(u) == len(v)
    return sum(a * b for a, b in zip(u, v))


def vec_add(u: Vec, v: Vec) -> list:
    return [a + b for a, b in zip(u, v)]


def vec_sub(u: Vec, v: Vec) -> list:
    return [a - b for a, b in zip(u, v)]


def vec_scale(c, u: Vec) -> list:
    return [c * a for a in u]


def frac_ceil_parts(x) -> tuple[int, Fraction]:
    """Return (ceil(x), fractional part x - floor(x)) exactly."""
    x = Fraction(x)
    return ceil(x), x - floor(x)


def _gcd_vec(v: Vec) -> int:
    g = 0
    for a in v:
        g = _gcd(g, int(a))
    return g


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def primitive_vector(v: Vec) -> list[int]:
    """Scale a nonzero rational vector to a primitive integer vector.

    The direction (sign) is preserved.
    """
    fracs = [Fraction(a) for a in v]
    assert any(fracs), "zero vector has no primitive representative"
    lcm = 1
    for f in fracs:
        lcm = lcm * f.denominator // _gcd(lcm, f.denominator)
    ints = [int(f * lcm) for f in fracs]
    g = _gcd_vec(ints)
    return [a // g for a in ints]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SnfDecomposition:
    """U @ A @ V == S with U, V unimodular and S in Smith form."""

    U: list[list[int]]
    S: list[list[int]]
    V: list[list[int]]

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i][i] for i in range(min(len(self.S), len(self.S[0]) if self.S else 0))]


def smith_normal_form(A: Mat) -> SnfDecomposition:
    """Compute the Smith normal form with transforms.

    Pivot choice: the smallest-absolute-value nonzero entry of the remaining
    block, scanning rows then columns, so the decomposition is deterministic.
    """
    n = len(A)
    m = len(A[0]) if n else 0
    S = [[int(x) for x in row] for row in A]
    U = identity_matrix(n)
    V = identity_matrix(m)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, c):
        # row i += c * row j
        S[i] = [a + c * b for a, b in zip(S[i], S[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]

    def add_col(i, j, c):
        for row in S:
            row[i] += c * row[j]
        for row in V:
            row[i] += c * row[j]

    def negate_row(i):
        S[i] = [-a for a in S[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while t < min(n, m):
        # Find the smallest nonzero pivot in the remaining block.
        pivot = None
        for i in range(t, n):
            for j in range(t, m):
                if S[i][j] != 0 and (pivot is None or abs(S[i][j]) < abs(S[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, n):
                if S[i][t] != 0:
                    q = S[i][t] // S[t][t]
                    add_row(i, t, -q)
                    if S[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, m):
                if S[t][j] != 0:
                    q = S[t][j] // S[t][t]
                    add_col(j, t, -q)
                    if S[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
        if S[t][t] < 0:
            negate_row(t)
        t += 1

    # Enforce the divisibility chain d_1 | d_2 | ...
    r = min(n, m)
    changed = True
    while changed:
        changed = False
        for i in range(r - 1):
            a, b = S[i][i], S[i + 1][i + 1]
            if a != 0 and b % a != 0:
                # Fold entry (i+1, i+1) into the (i, i) block and re-reduce.
                add_col(i, i + 1, 1)
                dirty = True
                while dirty:
                    dirty = False
                    if S[i + 1][i] != 0:
                        q = S[i + 1][i] // S[i][i]
                        add_row(i + 1, i, -q)
                        if S[i + 1][i] != 0:
                            swap_rows(i, i + 1)
                            dirty = True
                    if S[i][i + 1] != 0:
                        q = S[i][i + 1] // S[i][i]
                        add_col(i + 1, i, -q)
                        if S[i][i + 1] != 0:
                            swap_cols(i, i + 1)
                            dirty = True
                if S[i][i] < 0:
                    negate_row(i)
                if S[i + 1][i + 1] < 0:
                    negate_row(i + 1)
                changed = True
    return SnfDecomposition(U=U, S=S, V=V)


def int_kernel(A: Mat) -> list[list[int]]:
    """Basis (list of vectors) of the integer kernel of A: ZZ^m -> ZZ^n."""
    n = len(A)
    m = len(A[0]) if n else 0
    if n == 0:
        return identity_matrix(m)
    snf = smith_normal_form(A)
    diag = snf.diagonal
    cols = [j for j in range(m) if j >= len(diag) or diag[j] == 0]
    V = snf.V
    return [[V[i][j] for i in range(m)] for j in cols]


def hnf_columns(basis: list[list[int]]) -> list[list[int]]:
    """Canonical column-style Hermite form of a list of basis vectors.

    Vectors are the columns of the implied matrix.  The result spans the same
    lattice, with positive pivots at increasing row indices and entries in
    each pivot row reduced into [0, pivot) for the other columns.
    """
    cols = [list(v) for v in basis]
    if not cols:
        return []
    nrows = len(cols[0])
    done = 0
    for row in range(nrows):
        if done >= len(cols):
            break
        live = [j for j in range(done, len(cols)) if cols[j][row] != 0]
        if not live:
            continue
        # Euclid on the live columns to leave a single nonzero in this row.
        while len(live) > 1:
            live.sort(key=lambda j: abs(cols[j][row]))
            a = live[0]
            for j in live[1:]:
                q = cols[j][row] // cols[a][row]
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[a])]
            live = [j for j in live if cols[j][row] != 0]
        j = live[0]
        cols[done], cols[j] = cols[j], cols[done]
        if cols[done][row] < 0:
            cols[done] = [-x for x in cols[done]]
        p = cols[done][row]
        for j in range(len(cols)):
            if j != done and cols[j][row] != 0:
                q = cols[j][row] // p
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[done])]
        done += 1
    return [c for c in cols if any(c)]


# ---------------------------------------------------------------------------
# Cokernels and finitely generated abelian groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FgAbGroup:
    """ZZ^free_rank + sum of ZZ/d_i, presented via a projection from ZZ^m.

    ``projection`` has free_rank + len(torsion) rows; the first block maps
    onto the free part, the second is understood modulo the matching torsion
    order.
    """

    free_rank: int
    torsion: list[int]
    projection: list[list[int]]

    @property
    def ambient_dim(self) -> int:
        return len(self.projection[0]) if self.projection else 0

    def project(self, x: Vec) -> list:
        """Image of an ambient vector, torsion coordinates reduced."""
        img = mat_vec(self.projection, x)
        for t, d in enumerate(self.torsion):
            img[self.free_rank + t] %= d
        return img

    def free_part(self, x: Vec) -> list:
        return mat_vec(self.projection[: self.free_rank], x)

    def element_eq(self, a: Vec, b: Vec) -> bool:
        if list(a[: self.free_rank]) != list(b[: self.free_rank]):
            return False
        for t, d in enumerate(self.torsion):
            if (a[self.free_rank + t] - b[self.free_rank + t]) % d != 0:
                return False
        return True


def cokernel_with_projection(A: Mat) -> tuple[FgAbGroup, list[list[int]]]:
    """Cokernel of A: ZZ^r -> ZZ^m together with the quotient projection.

    Returns (group, projection); the projection is also stored on the group.
    """
    m = len(A)
    r = len(A[0]) if m else 0
    if r == 0:
        proj = identity_matrix(m)
        grp = FgAbGroup(free_rank=m, torsion=[], projection=proj)
        return grp, proj
    snf = smith_normal_form(A)
    diag = snf.diagonal
    # Coordinates of U @ x: diagonal d == 1 rows die, d > 1 rows are torsion,
    # rows beyond the rank (d == 0 or past the diagonal) are free.
    free_rows = [i for i in range(m) if i >= len(diag) or diag[i] == 0]
    tors_rows = [i for i in range(m) if i < len(diag) and diag[i] > 1]
    torsion = [diag[i] for i in tors_rows]
    proj = [snf.U[i] for i in free_rows] + [snf.U[i] for i in tors_rows]
    grp = FgAbGroup(free_rank=len(free_rows), torsion=torsion, projection=proj)
    return grp, proj


def dual_characters(group: FgAbGroup) -> list[list[int]]:
    """Recover the character matrix from a cokernel presentation.

    The kernel of the projection is the image lattice of the original
    inclusion; its canonical (column-Hermite) basis provides the dual basis
    against which each coordinate vector maps to a character.  Characters are
    returned as the rows D_i of the inclusion matrix in that basis.
    """
    m = group.ambient_dim
    f, t = group.free_rank, len(group.torsion)
    if f + t == 0:
        return [list(row) for row in identity_matrix(m)]
    # Kernel of x -> (P_free x, P_tors x mod d): augment with torsion moduli.
    aug = [list(group.projection[i]) + [0] * t for i in range(f)]
    for k in range(t):
        row = list(group.projection[f + k]) + [0] * t
        row[m + k] = group.torsion[k]
        aug.append(row)
    ker = int_kernel(aug)
    basis = hnf_columns([v[:m] for v in ker])
    # D_i is the coordinate row of e_i with respect to the kernel basis; the
    # basis matrix K (m x r) gives D = K directly, rows indexed by i.
    if not basis:
        return [[] for _ in range(m)]
    K = transpose(basis)  # m x r, columns are the basis vectors
    return [list(row) for row in K]


# ---------------------------------------------------------------------------
# Rational solving
# ---------------------------------------------------------------------------

def solve_rational(A: Mat, b: Vec):
    """Solve A x = b over the rationals.

    Returns the solution list, or None if the system is inconsistent.  When
    the solution is not unique an arbitrary particular solution is returned;
    use rat_kernel for the homogeneous directions.  Entries of b may be any
    values supporting +, -, and multiplication/division by Fraction (this is
    what lets the stability perturbation Eps ride along).
    """
    n = len(A)
    m = len(A[0]) if n else 0
    M = [[Fraction(A[i][j]) for j in range(m)] for i in range(n)]
    rhs = list(b)
    pivots = []
    row = 0
    for col in range(m):
        piv = next((i for i in range(row, n) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        rhs[row], rhs[piv] = rhs[piv], rhs[row]
        inv = Fraction(1) / M[row][col]
        M[row] = [x * inv for x in M[row]]
        rhs[row] = rhs[row] * inv
        for i in range(n):
            if i != row and M[i][col] != 0:
                c = M[i][col]
                M[i] = [x - c * y for x, y in zip(M[i], M[row])]
                rhs[i] = rhs[i] - rhs[row] * c
        pivots.append(col)
        row += 1
        if row == n:
            break
    for i in range(row, n):
        if rhs[i] != 0:
            return None
    x = [Eps(0, 0)] * m if any(isinstance(v, Eps) for v in rhs) else [Fraction(0)] * m
    for i, col in enumerate(pivots):
        x[col] = rhs[i]
    return x


def rat_kernel(A: Mat) -> list[list[Fraction]]:
    """Basis of the rational kernel of A."""
    n = len(A)
    m = len(A[0]) if n else 0
    M = [[Fraction(A[i][j]) for j in range(m)] for i in range(n)]
    pivots = []
    row = 0
    for col in range(m):
        piv = next((i for i in range(row, n) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = Fraction(1) / M[row][col]
        M[row] = [x * inv for x in M[row]]
        for i in range(n):
            if i != row and M[i][col] != 0:
                c = M[i][col]
                M[i] = [x - c * y for x, y in zip(M[i], M[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * m
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][fc]
        basis.append(v)
    return basis


def matrix_rank(A: Mat) -> int:
    m = len(A[0]) if A else 0
    return m - len(rat_kernel(A)) if A else 0


# ---------------------------------------------------------------------------
# Lexicographic perturbation scalars
# ---------------------------------------------------------------------------

class Eps:
    """A scalar a + b*eps with eps an infinitesimal positive quantity.

    Supports exactly the operations needed on the right-hand side of a
    rational linear solve (addition, subtraction, scaling by Fraction) plus
    lexicographic comparison against zero.  Products of two Eps values never
    occur in that use and are rejected.
    """

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    def __add__(self, other):
        if isinstance(other, Eps):
            return Eps(self.a + other.a, self.b + other.b)
        return Eps(self.a + Fraction(other), self.b)

    __radd__ = __add__

    def __neg__(self):
        return Eps(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Eps) else Eps(-Fraction(other)))

    def __rsub__(self, other):
        return Eps(Fraction(other)) + (-self)

    def __mul__(self, other):
        if isinstance(other, Eps):
            raise TypeError("Eps * Eps is not defined in this context")
        return Eps(self.a * Fraction(other), self.b * Fraction(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Eps):
            raise TypeError("Eps / Eps is not defined in this context")
        return Eps(self.a / Fraction(other), self.b / Fraction(other))

    def _key(self):
        return (self.a, self.b)

    def __eq__(self, other):
        return self._key() == _as_eps(other)._key()

    def __lt__(self, other):
        return self._key() < _as_eps(other)._key()

    def __le__(self, other):
        return self._key() <= _as_eps(other)._key()

    def __gt__(self, other):
        return self._key() > _as_eps(other)._key()

    def __ge__(self, other):
        return self._key() >= _as_eps(other)._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Eps({self.a}, {self.b})"


def _as_eps(x) -> Eps:
    return x if isinstance(x, Eps) else Eps(x)


# ---------------------------------------------------------------------------
# Exact cone membership
# ---------------------------------------------------------------------------

def _independent(cols: list[list]) -> bool:
    return matrix_rank(transpose(cols)) == len(cols)


def cone_membership(generators: list[Vec], target: Vec, strict: bool) -> bool:
    """Decide whether target is a (strictly) positive combination of generators.

    Exact rational feasibility via basic-solution enumeration: the feasible
    set {a >= 0 : G a = target} is pointed, so it is nonempty iff some basic
    solution is feasible, and coordinate i can be made positive iff it is
    positive at some basic solution or on some nonnegative circuit of the
    recession cone.  Averaging feasible points then yields a strictly
    positive solution exactly when every index is achievable.

    The target entries may be Eps values (lexicographic perturbation); the
    generator entries must be plain rationals.
    """
    k = len(generators)
    if k == 0:
        # The (strictly) positive span of the empty set is {0}.
        return all(_as_eps(t) == 0 for t in target)
    dim = len(generators[0])
    cols = [list(g) for g in generators]
    use_eps = any(isinstance(t, Eps) for t in target)
    tgt = [_as_eps(t) for t in target] if use_eps else [Fraction(t) for t in target]
    zero = Eps(0) if use_eps else Fraction(0)

    feasible = False
    achievable: set[int] = set()

    # Basic solutions: supports of linearly independent generator subsets.
    max_support = min(k, dim)
    for size in range(0, max_support + 1):
        for subset in combinations(range(k), size):
            sub = [cols[j] for j in subset]
            if size and not _independent(sub):
                continue
            A = transpose(sub) if sub else [[] for _ in range(dim)]
            sol = _solve_exact(A, tgt, dim, size)
            if sol is None:
                continue
            if all(s >= zero for s in sol):
                feasible = True
                for j, s in zip(subset, sol):
                    if s > zero:
                        achievable.add(j)
        if feasible and len(achievable) == k:
            break

    if not feasible:
        return False
    if not strict:
        return True
    if len(achievable) == k:
        return True

    # Recession directions: nonnegative circuits of {a >= 0 : G a = 0}.
    for size in range(2, k + 1):
        for subset in combinations(range(k), size):
            sub = [cols[j] for j in subset]
            kerb = rat_kernel(transpose(sub))
            if len(kerb) != 1:
                continue
            v = kerb[0]
            if all(x >= 0 for x in v) and any(x > 0 for x in v):
                pass
            elif all(x <= 0 for x in v) and any(x < 0 for x in v):
                v = [-x for x in v]
            else:
                continue
            for j, x in zip(subset, v):
                if x > 0:
                    achievable.add(j)
        if len(achievable) == k:
            return True
    return len(achievable) == k


def _solve_exact(A, tgt, dim, size):
    """Solve A x = tgt for a square-ish exact system; None if inconsistent."""
    if size == 0:
        return [] if all(t == (Eps(0) if isinstance(t, Eps) else 0) for t in tgt) else None
    rows = [[A[i][j] for j in range(size)] for i in range(dim)]
    sol = solve_rational(rows, tgt)
    if sol is None:
        return None
    # solve_rational returns a particular solution; uniqueness holds because
    # the columns are independent.
    return sol[:size]

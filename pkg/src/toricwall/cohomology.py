"""Equivariant classes via fixed-point restriction tables.

Classes are represented by their exact restrictions at the T-fixed data, as
linear forms in the equivariant parameters.  This keeps every identity a
finite exact statement and avoids quotient-ring arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import ConvergenceRadius, SingularRestriction
from .lattice import dot, rat_kernel, solve_rational, transpose
from .wall import GitData, WallData, minimal_anticones, s_set


# ---------------------------------------------------------------------------
# Linear forms in the equivariant parameters
# ---------------------------------------------------------------------------

class LinForm:
    """A rational linear combination of parameter symbols.

    Symbols are ("lam", j) for the torus parameters and ("h", k) for the
    degree-two base classes; both carry equivariant degree 2.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {k: Fraction(v) for k, v in (coeffs or {}).items()
                       if Fraction(v) != 0}

    @staticmethod
    def lam(j: int) -> "LinForm":
        return LinForm({("lam", j): 1})

    @staticmethod
    def base_class(k: int) -> "LinForm":
        return LinForm({("h", k): 1})

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return LinForm(out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) - v
        return LinForm(out)

    def __neg__(self):
        return LinForm({k: -v for k, v in self.coeffs.items()})

    def scale(self, c) -> "LinForm":
        c = Fraction(c)
        return LinForm({k: v * c for k, v in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, LinForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, v in sorted(self.coeffs.items()):
            name = f"{k[0]}{k[1] + 1}"
            parts.append(f"{v}*{name}")
        return " + ".join(parts)

    def evaluate(self, lam_values, h_values=None):
        """Numeric value; base-class symbols default to zero."""
        total = 0
        for (kind, idx), c in self.coeffs.items():
            if kind == "lam":
                total += complex(c) * lam_values[idx] if not isinstance(
                    lam_values[idx], Fraction) else c * lam_values[idx]
            else:
                hv = (h_values or {}).get(idx, 0)
                total += complex(c) * hv if not isinstance(hv, Fraction) else c * hv
        return total

    def to_sympy(self, lam_symbols, h_symbols=None):
        import sympy

        total = sympy.Integer(0)
        for (kind, idx), c in self.coeffs.items():
            sym = lam_symbols[idx] if kind == "lam" else h_symbols[idx]
            total += sympy.Rational(c.numerator, c.denominator) * sym
        return total


def c0_form(git: GitData) -> LinForm:
    """The sum of all torus parameters."""
    out = LinForm()
    for j in range(git.m):
        out = out + LinForm.lam(j)
    return out


def mu_form(git: GitData, j: int) -> LinForm:
    """Combined parameter for character j: torus part plus base degrees."""
    out = LinForm.lam(j)
    if git.Lambda is not None:
        for k, c in enumerate(git.Lambda[j]):
            out = out + LinForm.base_class(k).scale(c)
    return out


# ---------------------------------------------------------------------------
# Ring presentation
# ---------------------------------------------------------------------------

def ring_presentation(git: GitData, omega):
    """Linear and monomial relations presenting the equivariant ring.

    Returns a dict with ``linear`` (one coefficient row per dual basis class
    of the free part of the quotient group) and ``monomials`` (index sets
    whose u-product vanishes; one per maximal non-anticone).  Indices in S
    are checked to be forced to zero by the monomial ideal.
    """
    from .lattice import cokernel_with_projection
    from .wall import anticones

    acs = anticones(git, omega)
    group, _ = cokernel_with_projection([list(row) for row in git.D])
    m = git.m
    linear = []
    for k in range(group.free_rank):
        # chi = k-th dual basis vector of the free part: relation
        # sum_i <chi, b_i> u_i with b_i the projection of e_i.
        row = []
        for i in range(m):
            unit = [0] * m
            unit[i] = 1
            row.append(group.free_part(unit)[k])
        linear.append(row)
    all_subsets_not = [frozenset(I) for I in _subsets(m) if frozenset(I) not in acs]
    maximal_non = [I for I in all_subsets_not
                   if not any(I < J for J in all_subsets_not)]
    monomials = [frozenset(range(m)) - I for I in maximal_non]
    S = s_set(acs, m)
    for i in S:
        assert frozenset({i}) in monomials, "u_i not forced to zero for i in S"
    return {"linear": linear, "monomials": sorted(monomials, key=sorted), "S": S}


def _subsets(m):
    from itertools import combinations

    for k in range(m + 1):
        for I in combinations(range(m), k):
            yield I


# ---------------------------------------------------------------------------
# Restriction tables
# ---------------------------------------------------------------------------

@dataclass
class RestrictionTable:
    """Exact restrictions U_j(delta) and theta(p)(delta) per minimal anticone."""

    git: GitData
    U: dict            # delta -> list of LinForm, one per character
    expansion: dict    # delta -> {j: coefficient list over sorted(delta)}

    def theta(self, p, delta) -> LinForm:
        """Restriction of the splitting class of a rational character p."""
        idx = sorted(delta)
        A = transpose([list(self.git.D[i]) for i in idx])
        c = solve_rational(A, [Fraction(x) for x in p])
        if c is None:
            raise SingularRestriction("character not in the anticone span")
        out = LinForm()
        for pos, i in enumerate(idx):
            out = out - mu_form(self.git, i).scale(c[pos])
        return out

    def sigma_log_coeffs(self, delta, adapted) -> list[LinForm]:
        """Coefficients of log y_i in the restricted prefactor exponent."""
        return [self.theta(p, delta) for p in adapted.p]

    def rho(self, delta) -> LinForm:
        """Restriction of the splitting class of the character sum."""
        return self.theta(self.git.character_sum(), delta)


def restriction_table(git: GitData, mins) -> RestrictionTable:
    """Build U_j(delta) = mu_j - sum_i c_i mu_i from the exact expansions
    D_j = sum_{i in delta} c_i D_i."""
    U = {}
    expansion = {}
    for delta in mins:
        idx = sorted(delta)
        A = transpose([list(git.D[i]) for i in idx])
        row_forms = []
        row_exp = {}
        for j in range(git.m):
            if j in delta:
                row_forms.append(LinForm())
                continue
            c = solve_rational(A, [Fraction(x) for x in git.D[j]])
            if c is None:
                raise SingularRestriction(
                    f"delta {sorted(i + 1 for i in delta)} cannot expand D_{j + 1}")
            form = mu_form(git, j)
            for pos, i in enumerate(idx):
                form = form - mu_form(git, i).scale(c[pos])
            row_forms.append(form)
            row_exp[j] = list(c)
        U[delta] = row_forms
        expansion[delta] = row_exp
    return RestrictionTable(git=git, U=U, expansion=expansion)


def verify_div_lemma(git: GitData, wall: WallData,
                     table_plus: RestrictionTable, table_minus: RestrictionTable,
                     anticone_pairs, wall_basis=None) -> dict:
    """Exact check of the cross-wall divisor restriction identity.

    For each paired (delta_plus, delta_minus) and every character j:
    U_j(delta_plus) = U_j(delta_minus)
                      + (D_j.e / D_{j_minus}.e) * U_{j_minus}(delta_plus),
    and the analogous identity for the splitting classes of any wall basis
    vectors p (for which the correction term drops since p.e = 0).
    """
    results = []
    all_pass = True
    for dp, dm in anticone_pairs:
        (jm,) = dm - (dp & dm)
        de_jm = dot(git.D[jm], wall.e)
        assert de_jm < 0
        ok = True
        for j in range(git.m):
            ratio = Fraction(dot(git.D[j], wall.e), de_jm)
            lhs = table_plus.U[dp][j]
            rhs = table_minus.U[dm][j] + table_plus.U[dp][jm].scale(ratio)
            if lhs != rhs:
                ok = False
        for p in wall_basis or []:
            assert dot(p, wall.e) == 0
            lhs = table_plus.theta(p, dp)
            rhs = table_minus.theta(p, dm)
            if lhs != rhs:
                ok = False
        results.append({"delta_plus": sorted(i + 1 for i in dp),
                        "delta_minus": sorted(i + 1 for i in dm),
                        "pass": ok})
        all_pass = all_pass and ok
    return {"pairs": results, "pass": all_pass}


# ---------------------------------------------------------------------------
# Grading
# ---------------------------------------------------------------------------

def y_degrees(git: GitData, adapted) -> list[Fraction]:
    """Degrees of the coordinates solving sum deg(y_i) p_i = 2 sum D_i."""
    A = transpose([list(p) for p in adapted.p])
    twice = [2 * Fraction(x) for x in git.character_sum()]
    sol = solve_rational(A, twice)
    assert sol is not None, "grading system unsolvable"
    return list(sol)


# ---------------------------------------------------------------------------
# Gamma evaluations
# ---------------------------------------------------------------------------

@dataclass
class GammaSeriesContext:
    """Constants for the logarithmic expansion of Gamma(1 + x)."""

    n_max: int = 2000
    dps: int = 30

    def __post_init__(self):
        with mp.workdps(self.dps + 10):
            self.euler = +mp.euler
        self._zetas = {}

    def zeta(self, k: int):
        if k not in self._zetas:
            with mp.workdps(self.dps + 10):
                self._zetas[k] = mp.zeta(k)
        return self._zetas[k]


def gamma_series(x, ctx: GammaSeriesContext):
    """Gamma(1 + x) via the logarithmic series.

    ``x`` may be a number with |x| < 1, or a list of polynomial coefficients
    [c_0, c_1, ...] in a nilpotent variable (truncated at its own length), in
    which case a coefficient list of the same length is returned.
    """
    if isinstance(x, (list, tuple)):
        return _gamma_series_nilpotent(list(x), ctx)
    x = mp.mpmathify(x)
    if abs(x) >= 1:
        raise ConvergenceRadius(f"|x| = {abs(x)} >= 1")
    tol = mp.mpf(10) ** (-(ctx.dps + 5))
    log_gamma = -ctx.euler * x
    neg_pow = -x
    for k in range(2, ctx.n_max + 1):
        neg_pow = neg_pow * (-x)
        log_gamma += ctx.zeta(k) * neg_pow / k
        if abs(neg_pow) / k < tol:
            break
    return mp.e ** log_gamma


def _gamma_series_nilpotent(coeffs, ctx):
    order = len(coeffs)
    c0 = mp.mpmathify(coeffs[0])
    if abs(c0) >= 1:
        raise ConvergenceRadius(f"|constant term| = {abs(c0)} >= 1")
    x = [mp.mpmathify(c) for c in coeffs]
    log_gamma = _poly_scale(x, -ctx.euler)
    neg_x = _poly_scale(x, -1)
    neg_pow = list(neg_x)
    tol = mp.mpf(10) ** (-(ctx.dps + 5))
    for k in range(2, ctx.n_max + 1):
        neg_pow = _poly_mul(neg_pow, neg_x, order)
        log_gamma = _poly_add(log_gamma, _poly_scale(neg_pow, ctx.zeta(k) / k))
        if max(abs(c) for c in neg_pow) / k < tol and k > order:
            break
    return _poly_exp(log_gamma, order)


def _poly_add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
            for i in range(n)]


def _poly_scale(a, c):
    return [c * x for x in a]


def _poly_mul(a, b, order):
    out = [mp.mpf(0)] * order
    for i, ai in enumerate(a[:order]):
        for j, bj in enumerate(b[: order - i]):
            out[i + j] += ai * bj
    return out


def _poly_exp(a, order):
    const = a[0]
    nil = [mp.mpf(0)] + list(a[1:order])
    result = [mp.mpf(0)] * order
    result[0] = mp.mpf(1)
    term = [mp.mpf(0)] * order
    term[0] = mp.mpf(1)
    for k in range(1, order):
        term = _poly_scale(_poly_mul(term, nil, order), mp.mpf(1) / k)
        result = _poly_add(result, term)
    return _poly_scale(result, mp.e ** const)

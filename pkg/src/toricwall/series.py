"""Hypergeometric series attached to a chamber and their restrictions.

Two layers:
 * numeric restriction sums (mpmath) used by the contour-integral checks;
 * exact symbolic coefficients (sympy) used to verify that the two series
   attached to a chamber agree after the degree/Gamma transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

import mpmath as mp

from .errors import OutsideConvergence, SlowConvergence, TruncationOverflow
from .lattice import dot, frac_ceil_parts, solve_rational, transpose
from .cohomology import LinForm, RestrictionTable, c0_form, y_degrees
from .wall import AdaptedBasis, GitData, KClassIndex


@dataclass(frozen=True)
class SeriesTruncation:
    """Windows for the lattice sum and the 1/z expansion."""

    max_y: int = 12     # bound on sum of |integer shift| coordinates
    max_z: int = 6      # 1/z expansion order where applicable


@dataclass(frozen=True)
class BaseJFunction:
    """Base-curve class data; the point base has the single zero class."""

    base: str = "point"

    def classes(self):
        if self.base != "point":
            raise NotImplementedError("only the point base is implemented")
        return [0]

    def coeff(self, curve_class):
        return 1 if curve_class == 0 else 0

    def c1_pairing(self, curve_class):
        return 0


# ---------------------------------------------------------------------------
# Numeric restrictions
# ---------------------------------------------------------------------------

def transport_log_y(ad_from: AdaptedBasis, ad_to: AdaptedBasis, log_y):
    """Express the same torus point in the other side's coordinates.

    Determined by requiring sum_i log(y_i) (p_i . d) to be intrinsic in d.
    """
    r = len(ad_from.p)
    # Solve p_from_i = sum_j M[i][j] p_to_j; then ly_to = M^T ly_from.
    A = transpose([list(p) for p in ad_to.p])
    M = []
    for p in ad_from.p:
        M.append(list(solve_rational(A, [Fraction(x) for x in p])))
    out = []
    for j in range(r):
        out.append(sum(complex(M[i][j]) * log_y[i] for i in range(r)))
    return out


def _lattice_shifts(r, radius):
    for n in iproduct(range(-radius, radius + 1), repeat=r):
        yield n


def restrict_h(git: GitData, table: RestrictionTable, delta, kc: KClassIndex,
               adapted: AdaptedBasis, log_y, lam_values,
               trunc: SeriesTruncation = SeriesTruncation(),
               tol: float = 1e-12, check_convergence: bool = True):
    """Numeric value of the (delta, f)-restriction of the H-series.

    ``log_y`` are logarithms of the chamber coordinates; the lattice sum runs
    over d = f + n with n in a box of radius ``trunc.max_y``.  Raises
    SlowConvergence when the outermost shells still matter at ``tol`` and
    OutsideConvergence when they grow.
    """
    r, m = git.r, git.m
    two_pi_i = 2j * mp.pi
    u_vals = [complex(table.U[delta][j].evaluate(lam_values)) for j in range(m)]
    c0 = complex(c0_form(git).evaluate(lam_values))
    theta_vals = [complex(table.theta(p, delta).evaluate(lam_values))
                  for p in adapted.p]
    sigma = sum(theta_vals[i] * log_y[i] for i in range(r)) + c0
    prefactor = mp.e ** (mp.mpmathify(sigma) / two_pi_i)

    total = mp.mpc(0)
    shell_mag = {}
    for n in _lattice_shifts(r, trunc.max_y):
        d = [Fraction(kc.f[i]) + n[i] for i in range(r)]
        pairings = [dot(git.D[j], d) for j in range(m)]
        if any(p.denominator == 1 and p < 0 for j, p in enumerate(pairings)
               if j in delta):
            continue
        exps = adapted.exponents(d)
        term = mp.e ** sum(mp.mpmathify(complex(exps[i]) * log_y[i])
                           for i in range(r))
        for j in range(m):
            if j in delta:
                term *= mp.rgamma(1 + int(pairings[j]))
            else:
                term *= mp.rgamma(1 + mp.mpmathify(u_vals[j]) / two_pi_i
                                  + mp.mpf(pairings[j].numerator)
                                  / pairings[j].denominator)
        total += term
        shell = max(abs(x) for x in n) if n else 0
        shell_mag[shell] = shell_mag.get(shell, mp.mpf(0)) + abs(term)
    value = prefactor * total
    if check_convergence and trunc.max_y >= 3:
        last = shell_mag.get(trunc.max_y, mp.mpf(0))
        prev = shell_mag.get(trunc.max_y - 1, mp.mpf(0))
        scale = max(abs(total), mp.mpf(1e-300))
        if last > prev and last / scale > tol:
            raise OutsideConvergence(
                f"terms grow at the truncation edge (shell {trunc.max_y})")
        if last / scale > tol:
            raise SlowConvergence(
                f"tail estimate {float(last / scale):.3e} above tol {tol}")
    return value


def h_function(git: GitData, table: RestrictionTable, fixed, adapted,
               log_y, lam_values, trunc=SeriesTruncation(), tol=1e-12):
    """All fixed-point restrictions of the H-series as a dict."""
    out = {}
    for delta, kc in fixed:
        out[(delta, kc.f)] = restrict_h(git, table, delta, kc, adapted,
                                        log_y, lam_values, trunc, tol)
    return out


# ---------------------------------------------------------------------------
# Exact symbolic coefficients and the I <-> H transform
# ---------------------------------------------------------------------------

def _sympy_context(git: GitData):
    import sympy

    lam = [sympy.Symbol(f"lam{j + 1}") for j in range(git.m)]
    z = sympy.Symbol("z", positive=True)
    return lam, z


def i_function(git: GitData, table: RestrictionTable, delta, kc: KClassIndex,
               adapted: AdaptedBasis, d, symbols=None):
    """Exact coefficient of y^d in the (delta, f)-restriction of the
    z^{-1}-scaled I-series, with the exponential prefactor included.

    Returns a sympy expression in lam_1..lam_m, z, y_1..y_r, L_1..L_r where
    L_i stands for log(y_i).
    """
    import sympy

    lam, z = symbols or _sympy_context(git)
    r, m = git.r, git.m
    Lsyms = [sympy.Symbol(f"L{i + 1}") for i in range(r)]
    ysyms = [sympy.Symbol(f"y{i + 1}", positive=True) for i in range(r)]

    u = [table.U[delta][j].to_sympy(lam) for j in range(m)]
    theta = [table.theta(p, delta).to_sympy(lam) for p in adapted.p]
    c0 = c0_form(git).to_sympy(lam)
    sigma = sum(theta[i] * Lsyms[i] for i in range(r)) + c0
    expr = sympy.exp(sigma / z)
    exps = adapted.exponents(d)
    for i in range(r):
        expr *= ysyms[i] ** sympy.Rational(exps[i].numerator, exps[i].denominator)
    char_sum_d = sum(dot(git.D[j], d) for j in range(m))
    expr *= z ** (-sympy.Rational(char_sum_d.numerator, char_sum_d.denominator))
    expr *= z ** (-sympy.Rational(kc.age.numerator, kc.age.denominator))
    for j in range(m):
        pairing = dot(git.D[j], d)
        frac = frac_ceil_parts(-pairing)[1]
        top = 1 + u[j] / z - sympy.Rational(frac.numerator, frac.denominator)
        bot = 1 + u[j] / z + sympy.Rational(pairing.numerator, pairing.denominator)
        expr *= sympy.gamma(top) / sympy.gamma(bot)
    return expr


def psi_transform(git: GitData, table: RestrictionTable, delta, kc: KClassIndex,
                  adapted: AdaptedBasis, d, symbols=None):
    """Image under the degree/Gamma transform of the y^d term of the
    H-series restriction at (delta, f), as an exact sympy expression.

    The pipeline: substitute y_i -> z^{-deg(y_i)/2} y_i, take the component
    through inversion, scale the equivariant grading by 2 pi i, multiply by
    the Gamma class restriction, multiply by z^{rho(delta)}, then scale the
    grading by 1/z together with the age shift of the component.
    """
    import sympy

    lam, z = symbols or _sympy_context(git)
    r, m = git.r, git.m
    Lsyms = [sympy.Symbol(f"L{i + 1}") for i in range(r)]
    ysyms = [sympy.Symbol(f"y{i + 1}", positive=True) for i in range(r)]
    two_pi_i = 2 * sympy.pi * sympy.I

    u = [table.U[delta][j].to_sympy(lam) for j in range(m)]
    theta = [table.theta(p, delta).to_sympy(lam) for p in adapted.p]
    c0 = c0_form(git).to_sympy(lam)
    degs = y_degrees(git, adapted)

    # H-series term for exponent d, with the coordinate substitution applied:
    # log y_i -> L_i - (deg y_i / 2) log z.
    logz = sympy.log(z)
    Lsub = [Lsyms[i] - sympy.Rational(degs[i].numerator, degs[i].denominator)
            / 2 * logz for i in range(r)]
    sigma = sum(theta[i] * Lsub[i] for i in range(r)) + c0
    expr = sympy.exp(sigma / two_pi_i)
    exps = adapted.exponents(d)
    for i in range(r):
        q = sympy.Rational(exps[i].numerator, exps[i].denominator)
        expr *= (ysyms[i] ** q) * z ** (-q * sympy.Rational(
            degs[i].numerator, degs[i].denominator) / 2)
    for j in range(m):
        pairing = dot(git.D[j], d)
        arg = 1 + u[j] / two_pi_i + sympy.Rational(pairing.numerator,
                                                   pairing.denominator)
        expr *= 1 / sympy.gamma(arg)

    # Scale the equivariant grading by 2 pi i.
    expr = expr.subs({lam[k]: two_pi_i * lam[k] for k in range(m)},
                     simultaneous=True)
    # Gamma class of the component [-d] = f of the inverted inertia.
    for j in range(m):
        frac = frac_ceil_parts(dot(git.D[j], kc.f))[1]
        expr *= sympy.gamma(1 + u[j] - sympy.Rational(frac.numerator,
                                                      frac.denominator))
    # z^{rho(delta)}.
    rho = table.rho(delta).to_sympy(lam)
    expr *= sympy.exp(rho * logz)
    # Scale the grading by 1/z, with the age shift of the component.
    expr = expr.subs({lam[k]: lam[k] / z for k in range(m)}, simultaneous=True)
    expr *= z ** (-sympy.Rational(kc.age.numerator, kc.age.denominator))
    return expr


def verify_i_h_relation(git: GitData, table: RestrictionTable, fixed,
                        adapted: AdaptedBasis,
                        trunc: SeriesTruncation = SeriesTruncation(max_y=2),
                        perturb_rho: int = 0) -> dict:
    """Exact coefficientwise check that the degree/Gamma transform carries
    the H-series restrictions onto the z^{-1}-scaled I-series restrictions.

    All lattice exponents d = f + n with max|n_i| <= trunc.max_y are checked
    for every fixed datum.  ``perturb_rho`` shifts the z-power by a constant
    and must make the check fail (negative control).
    """
    import sympy

    symbols = _sympy_context(git)
    _, z = symbols
    results = []
    all_pass = True
    for delta, kc in fixed:
        for n in _lattice_shifts(git.r, trunc.max_y):
            # The component f collects exponents with class -f through the
            # inertia inversion.
            d = tuple(-Fraction(kc.f[i]) + n[i] for i in range(git.r))
            if any(dot(git.D[j], d) < 0 for j in delta):
                continue
            lhs = i_function(git, table, delta, kc, adapted, d, symbols)
            rhs = psi_transform(git, table, delta, kc, adapted, d, symbols)
            if perturb_rho:
                rhs *= z ** sympy.Integer(perturb_rho)
            ratio = sympy.simplify(sympy.powsimp(
                sympy.gammasimp(lhs / rhs), force=True))
            ok = ratio == 1
            results.append({"delta": sorted(i + 1 for i in delta),
                            "f": [str(x) for x in kc.f],
                            "d": [str(x) for x in d], "pass": bool(ok)})
            all_pass = all_pass and bool(ok)
    return {"terms": results, "pass": all_pass}

"""Analytic continuation of restriction series across the wall.

The restriction of the plus-side series at a fixed datum is written as a
contour integral of Gamma-function type.  Closing the contour to the right
recovers the convergent series; closing it to the left gives the analytic
continuation, which reorganizes into a connection-coefficient-weighted sum
of minus-side restrictions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import (NonGenericParameters, NotPaired, OutsideConvergence,
                     QuadratureFailure, SlowConvergence)
from .lattice import dot
from .cohomology import RestrictionTable, c0_form
from .series import SeriesTruncation, restrict_h
from .wall import (AdaptedBasis, GitData, KClassIndex, WallData,
                   class_shift_along_e)

TWO_PI_I = 2j * mp.pi


def conifold_point(wall: WallData) -> Fraction:
    return wall.conifold


# ---------------------------------------------------------------------------
# Integrand
# ---------------------------------------------------------------------------

@dataclass
class MBIntegrand:
    """All numeric data of one contour integrand.

    a[j] = U_j(delta_plus)/(2 pi i) + D_j . d_rep for the chosen lattice
    representative d_rep with 0 <= D_{j_plus} . d_rep < D_{j_plus} . e.
    """

    git: GitData
    wall: WallData
    delta_plus: frozenset
    d_rep: tuple
    a: list
    j_plus: int
    neg: list      # indices with D_j.e < 0
    nonneg: list   # indices with D_j.e >= 0

    def gamma_ratio(self, s):
        """The Gamma product excluding Gamma(s)Gamma(1-s)."""
        out = mp.mpc(1)
        for j in self.neg:
            lj = -dot(self.git.D[j], self.wall.e)
            out *= mp.gamma(-self.a[j] + s * int(lj))
        for j in self.nonneg:
            kj = dot(self.git.D[j], self.wall.e)
            out *= mp.rgamma(1 + self.a[j] + s * int(kj))
        return out

    def full(self, s, x_log):
        w = self.wall.w
        return (mp.pi / mp.sin(mp.pi * s) * self.gamma_ratio(s)
                * mp.e ** (s * (x_log - 1j * mp.pi * w)))


def make_integrand(git: GitData, wall: WallData, table: RestrictionTable,
                   delta_plus: frozenset, kc_plus: KClassIndex, lam_values,
                   transverse=None) -> MBIntegrand:
    """Build the integrand for one fixed datum (and one transverse coset)."""
    r = git.r
    d0 = [Fraction(x) for x in kc_plus.f]
    if transverse is not None:
        for i in range(r):
            d0[i] += transverse[i]
    j_plus = None
    for j in sorted(delta_plus):
        if dot(git.D[j], wall.e) > 0:
            j_plus = j
    if j_plus is None:
        raise NotPaired("anticone has no positive-pairing index; "
                        "no continuation needed")
    kappa = dot(git.D[j_plus], wall.e)
    v = dot(git.D[j_plus], d0)
    t = -(v.numerator // v.denominator) // int(kappa) if v.denominator == 1 \
        else -((v / kappa).numerator // (v / kappa).denominator)
    # Shift so that the j_plus pairing lands in [0, kappa).
    while dot(git.D[j_plus], [d0[i] + t * wall.e[i] for i in range(r)]) < 0:
        t += 1
    while dot(git.D[j_plus], [d0[i] + t * wall.e[i] for i in range(r)]) >= kappa:
        t -= 1
    d_rep = tuple(d0[i] + t * wall.e[i] for i in range(r))
    a = []
    for j in range(git.m):
        u = complex(table.U[delta_plus][j].evaluate(lam_values))
        pairing = dot(git.D[j], d_rep)
        a.append(mp.mpmathify(u) / TWO_PI_I
                 + mp.mpf(pairing.numerator) / pairing.denominator)
    neg = [j for j in range(git.m) if dot(git.D[j], wall.e) < 0]
    nonneg = [j for j in range(git.m) if dot(git.D[j], wall.e) >= 0]
    return MBIntegrand(git=git, wall=wall, delta_plus=delta_plus, d_rep=d_rep,
                       a=a, j_plus=j_plus, neg=neg, nonneg=nonneg)


def classify_poles(ig: MBIntegrand, n_right: int = 40, n_left: int = 40,
                   min_gap: float = 1e-4) -> dict:
    """Right integer poles, vanishing negative-integer poles, and the left
    families; collisions within ``min_gap`` raise NonGenericParameters."""
    right = [mp.mpf(k) for k in range(n_right)]
    right_negative = [mp.mpf(-1 - n) for n in range(n_left)]
    left = {}
    for j in ig.neg:
        lj = -dot(ig.git.D[j], ig.wall.e)
        left[j] = [(ig.a[j] - n) / int(lj) for n in range(n_left)]
    all_left = [s for fam in left.values() for s in fam]
    for i, s in enumerate(all_left):
        for t in all_left[i + 1:]:
            if abs(s - t) < min_gap:
                raise NonGenericParameters(
                    f"left poles collide: {s} vs {t}")
        for k in right + right_negative:
            if abs(s - k) < min_gap:
                raise NonGenericParameters(
                    f"left pole {s} collides with integer {k}")
    return {"right": right, "right_negative": right_negative, "left": left}


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

def _left_pole_residue(ig: MBIntegrand, j: int, n: int, x_log):
    """Residue of the full integrand at the n-th pole of the j family."""
    lj = int(-dot(ig.git.D[j], ig.wall.e))
    s = (ig.a[j] - n) / lj
    rest = mp.mpc(1)
    for j2 in ig.neg:
        if j2 == j:
            continue
        l2 = int(-dot(ig.git.D[j2], ig.wall.e))
        rest *= mp.gamma(-ig.a[j2] + s * l2)
    for j2 in ig.nonneg:
        k2 = int(dot(ig.git.D[j2], ig.wall.e))
        rest *= mp.rgamma(1 + ig.a[j2] + s * k2)
    w = ig.wall.w
    return (mp.pi / mp.sin(mp.pi * s) * ((-1) ** n)
            / (mp.factorial(n) * lj) * rest
            * mp.e ** (s * (x_log - 1j * mp.pi * w)))


def mb_integral(ig: MBIntegrand, x_log, target: float = 1e-9,
                s0: float = -0.5, dps: int = 35):
    """-(1/2 pi i) times the contour integral along a vertical line.

    The line sits at Re s = s0 (nudged if a pole comes too close); any left
    pole to the right of the line is accounted for by adding its residue, so
    the result always corresponds to the contour separating the two
    families.  Returns (value, error_estimate).
    """
    with mp.workdps(dps):
        x_log = mp.mpmathify(x_log)
        w = ig.wall.w
        phi = mp.im(x_log) - mp.pi * w
        if abs(phi) >= mp.pi:
            raise QuadratureFailure(
                "argument outside the continuation sector")
        rate = mp.pi - abs(phi)
        T = max(mp.mpf(40), (mp.mpf(dps) * mp.log(10) + 15) / rate)
        poles = classify_poles(ig, n_left=80)
        all_left = [(j, n, s) for j, fam in poles["left"].items()
                    for n, s in enumerate(fam)]
        s0 = mp.mpf(s0)
        for _ in range(50):
            near = [s for _, _, s in all_left if abs(mp.re(s) - s0) < 0.05]
            if not near and abs(s0) > 0.05 and abs(s0 + 1) > 0.05:
                break
            s0 -= mp.mpf("0.017")
            if s0 < mp.mpf("-0.95"):
                raise NonGenericParameters(
                    "no admissible vertical line in (-1, 0)")
        crossed = [(j, n, s) for j, n, s in all_left if mp.re(s) > s0]
        # Geometric subdivision keeps the oscillatory tails tractable for
        # the tanh-sinh rule.
        heights = [mp.mpf(1)]
        while heights[-1] < T:
            heights.append(min(heights[-1] * 3, T))
        path = ([mp.mpc(s0, -h) for h in reversed(heights)]
                + [mp.mpc(s0, 0)] + [mp.mpc(s0, h) for h in heights])
        value, err = mp.quad(lambda s: ig.full(s, x_log), path,
                             error=True, maxdegree=8)
        value = -value / TWO_PI_I
        # Moving the separating contour to the straight line crosses these
        # poles; subtract their residues to restore the separating contour.
        for j, n, _s in crossed:
            value -= _left_pole_residue(ig, j, n, x_log)
        err = abs(err) / (2 * mp.pi)
        if err > target:
            raise QuadratureFailure(f"error estimate {float(err)} > {target}")
        return value, err


# ---------------------------------------------------------------------------
# Residue sums
# ---------------------------------------------------------------------------

def residue_sum(ig: MBIntegrand, side: str, x_log, tail_target: float = 1e-12,
                max_terms: int = 400, split: bool = False):
    """Sum of residues: ``right`` reproduces the convergent series, ``left``
    gives minus the continuation (the function returns the continuation,
    i.e. -sum, so both sides return the same analytic function)."""
    x_log = mp.mpmathify(x_log)
    w = ig.wall.w
    log_X = x_log - 1j * mp.pi * w
    conifold_abs = abs(mp.mpf(ig.wall.conifold.numerator)
                       / ig.wall.conifold.denominator)
    x_abs = mp.e ** mp.re(x_log)
    if side == "right":
        if x_abs >= conifold_abs:
            raise OutsideConvergence(
                f"|x| = {float(x_abs)} >= {float(conifold_abs)}")
        total = mp.mpc(0)
        flat = 0
        for k in range(max_terms):
            term = ((-1) ** k) * ig.gamma_ratio(k) * mp.e ** (k * log_X)
            total += term
            if abs(term) < tail_target * max(1, abs(total)):
                flat += 1
                if flat >= 3:
                    return total
            else:
                flat = 0
        raise SlowConvergence("right residue series tail above target")
    if side != "left":
        raise ValueError("side must be 'right' or 'left'")
    if x_abs <= conifold_abs:
        raise OutsideConvergence(
            f"|x| = {float(x_abs)} <= {float(conifold_abs)}")
    total = mp.mpc(0)
    for j in ig.neg:
        lj = int(-dot(ig.git.D[j], ig.wall.e))
        fam = mp.mpc(0)
        flat = 0
        if split:
            # Regroup n = k * lj + l; each residual class l is summed as its
            # own geometric-type series in k.
            n_values = [k * lj + l for l in range(lj)
                        for k in range(max_terms // lj + 1)]
        else:
            n_values = range(max_terms)
        for n in n_values:
            term = _left_pole_residue(ig, j, n, x_log)
            fam += term
            if abs(term) < tail_target * max(1, abs(fam)):
                flat += 1
                if not split and flat >= 3:
                    break
            else:
                flat = 0
        else:
            if flat == 0:
                raise SlowConvergence("left residue family tail above target")
        total += fam
    return -total


# ---------------------------------------------------------------------------
# Full restriction values by contour routes
# ---------------------------------------------------------------------------

def _prefactor(git, table, delta, adapted, log_y, lam_values):
    c0 = complex(c0_form(git).evaluate(lam_values))
    theta_vals = [complex(table.theta(p, delta).evaluate(lam_values))
                  for p in adapted.p]
    sigma = sum(mp.mpmathify(theta_vals[i]) * log_y[i]
                for i in range(git.r)) + c0
    return mp.e ** (sigma / TWO_PI_I)


def continued_restriction(git: GitData, wall: WallData, table: RestrictionTable,
                          delta_plus, kc_plus: KClassIndex,
                          adapted: AdaptedBasis, log_y, lam_values,
                          route: str = "left", target: float = 1e-9):
    """Value of the (delta_plus, f_plus) restriction of the plus series at a
    torus point given by ``log_y`` (plus-side coordinates), computed through
    the contour integral: route 'right' (inside), 'left' or 'mb' (both sides
    of the circle |x| = |conifold|)."""
    ig = make_integrand(git, wall, table, delta_plus, kc_plus, lam_values)
    r = git.r
    x_log = sum(mp.mpmathify(log_y[i]) * int(dot(adapted.p[i], wall.e))
                if dot(adapted.p[i], wall.e).denominator == 1
                else mp.mpmathify(log_y[i]) * mp.mpf(
                    dot(adapted.p[i], wall.e).numerator)
                / dot(adapted.p[i], wall.e).denominator
                for i in range(r))
    mono = mp.e ** sum(mp.mpmathify(log_y[i])
                       * mp.mpf(dot(adapted.p[i], ig.d_rep).numerator)
                       / dot(adapted.p[i], ig.d_rep).denominator
                       for i in range(r))
    sin_fac = mp.mpc(1)
    for j in ig.neg:
        sin_fac *= -mp.sin(mp.pi * ig.a[j]) / mp.pi
    if route == "mb":
        core, _ = mb_integral(ig, x_log, target=target)
    else:
        core = residue_sum(ig, route, x_log, tail_target=target * 1e-3)
    pref = _prefactor(git, table, delta_plus, adapted, log_y, lam_values)
    return pref * mono * sin_fac * core


# ---------------------------------------------------------------------------
# Connection coefficients and the transition matrix
# ---------------------------------------------------------------------------

def connection_coefficient(git: GitData, wall: WallData,
                           table_plus: RestrictionTable,
                           table_minus: RestrictionTable,
                           dp, kp: KClassIndex, dm, km: KClassIndex,
                           lam_values, w_override=None):
    """Closed-form coefficient carrying the (dm, km) minus-restriction into
    the continuation of the (dp, kp) plus-restriction."""
    kappa = dp & dm
    if len(kappa) != git.r - 1 or len(dp - kappa) != 1 or len(dm - kappa) != 1:
        raise NotPaired("anticones do not differ by a single index")
    (jp,) = dp - kappa
    (jm,) = dm - kappa
    if dot(git.D[jp], wall.e) <= 0 or dot(git.D[jm], wall.e) >= 0:
        raise NotPaired("pairing signs are wrong")
    if class_shift_along_e(kp.f, km.f, wall.e) is None:
        raise NotPaired("classes do not differ along e")
    w = wall.w if w_override is None else w_override
    dje = int(dot(git.D[jm], wall.e))
    df = [Fraction(kp.f[i]) - Fraction(km.f[i]) for i in range(git.r)]
    u_jm = complex(table_plus.U[dp][jm].evaluate(lam_values))
    A = mp.mpmathify(u_jm) / TWO_PI_I + mp.mpf(
        dot(git.D[jm], df).numerator) / dot(git.D[jm], df).denominator
    value = mp.e ** (1j * mp.pi * w * A / dje)
    value *= mp.sin(mp.pi * A) / ((-dje) * mp.sin(mp.pi * A / (-dje)))
    for j in range(git.m):
        if dot(git.D[j], wall.e) >= 0 or j == jm:
            continue
        up = complex(table_plus.U[dp][j].evaluate(lam_values))
        um = complex(table_minus.U[dm][j].evaluate(lam_values))
        fp = dot(git.D[j], kp.f)
        fm = dot(git.D[j], km.f)
        value *= (mp.sin(mp.pi * (mp.mpmathify(up) / TWO_PI_I
                                  + mp.mpf(fp.numerator) / fp.denominator))
                  / mp.sin(mp.pi * (mp.mpmathify(um) / TWO_PI_I
                                    + mp.mpf(fm.numerator) / fm.denominator)))
    return value


def build_U_H(git: GitData, wall: WallData, table_plus, table_minus,
              fixed_plus, fixed_minus, class_pairs, lam_values,
              w_override=None) -> dict:
    """Matrix of the wall-crossing transform on fixed-point restrictions.

    Keys are (row, col) with row = (delta_plus, f_plus), col = (delta_minus,
    f_minus); identity on fixed data shared by both sides, connection
    coefficients on paired flipped data.
    """
    matrix = {}
    minus_keys = {(dm, km.f) for dm, km in fixed_minus}
    for dp, kp in fixed_plus:
        row = (dp, kp.f)
        if row in minus_keys:
            matrix[(row, row)] = mp.mpc(1)
    for (dp, kp), (dm, km), _alpha in class_pairs:
        matrix[((dp, kp.f), (dm, km.f))] = connection_coefficient(
            git, wall, table_plus, table_minus, dp, kp, dm, km, lam_values,
            w_override=w_override)
    return matrix


def apply_U_H(matrix: dict, minus_vector: dict) -> dict:
    out = {}
    for (row, col), c in matrix.items():
        out[row] = out.get(row, mp.mpc(0)) + c * minus_vector[col]
    return out


def verify_theta_commutation(git: GitData, wall: WallData,
                             table_plus, table_minus,
                             fixed_plus, fixed_minus, class_pairs) -> dict:
    """Exact check that multiplication by any wall-basis splitting class
    commutes with the transform: paired entries must have equal theta
    restrictions (lambda-symbol identity)."""
    results = []
    all_pass = True
    entries = [((dp, kp), (dm, km)) for (dp, kp), (dm, km), _ in class_pairs]
    minus_lookup = {(dm, km.f): (dm, km) for dm, km in fixed_minus}
    for dp, kp in fixed_plus:
        if (dp, kp.f) in minus_lookup:
            entries.append(((dp, kp), minus_lookup[(dp, kp.f)]))
    for p in wall.W_basis:
        for (dp, kp), (dm, km) in entries:
            lhs = table_plus.theta(p, dp)
            rhs = table_minus.theta(p, dm)
            ok = lhs == rhs
            results.append({"p": list(p), "row": sorted(i + 1 for i in dp),
                            "col": sorted(i + 1 for i in dm), "pass": ok})
            all_pass = all_pass and ok
    return {"entries": results, "pass": all_pass}


def verify_wall_crossing_theorem(git: GitData, wall: WallData,
                                 table_plus, table_minus,
                                 fixed_plus, fixed_minus, class_pairs,
                                 ad_plus: AdaptedBasis, ad_minus: AdaptedBasis,
                                 log_y_samples, lam_values,
                                 tol: float = 1e-6, route: str = "left",
                                 trunc=SeriesTruncation(max_y=60),
                                 w_override=None) -> dict:
    """Numeric check that the continued plus restrictions match the
    coefficient-weighted minus restrictions at each sample point.

    ``log_y_samples`` are plus-side logarithmic coordinates with |x| above
    the conifold radius and argument inside the continuation sector.
    """
    from .series import transport_log_y

    matrix = build_U_H(git, wall, table_plus, table_minus, fixed_plus,
                       fixed_minus, class_pairs, lam_values,
                       w_override=w_override)
    theta_rep = verify_theta_commutation(git, wall, table_plus, table_minus,
                                         fixed_plus, fixed_minus, class_pairs)
    rows = []
    max_dev = mp.mpf(0)
    for log_y in log_y_samples:
        log_y_minus = transport_log_y(ad_plus, ad_minus, log_y)
        minus_vec = {}
        for dm, km in fixed_minus:
            minus_vec[(dm, km.f)] = restrict_h(
                git, table_minus, dm, km, ad_minus, log_y_minus, lam_values,
                trunc=trunc, tol=1e-10)
        rhs = apply_U_H(matrix, minus_vec)
        for dp, kp in fixed_plus:
            row = (dp, kp.f)
            has_pair = any(r == row for (r, _c) in matrix)
            if not has_pair:
                continue
            if all(r != row or c == row for (r, c) in matrix):
                continue  # identity row; equality is structural
            lhs = continued_restriction(git, wall, table_plus, dp, kp,
                                        ad_plus, log_y, lam_values,
                                        route=route)
            dev = abs(lhs - rhs[row])
            scale = max(mp.mpf(1), abs(lhs))
            rows.append({"row": (sorted(i + 1 for i in dp),
                                 tuple(str(x) for x in kp.f)),
                         "deviation": float(dev / scale)})
            max_dev = max(max_dev, dev / scale)
    return {"rows": rows, "max_deviation": float(max_dev),
            "theta_commutation": theta_rep,
            "pass": bool(max_dev < tol and theta_rep["pass"])}

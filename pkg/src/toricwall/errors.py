"""Error types shared across the library.

Every failure mode that callers are expected to handle gets its own class so
reports and tests can match on stable names.  All of them derive from
``ToricWallError``.
"""


class ToricWallError(Exception):
    """Base class for all library errors."""

    code = "error"


class DegenerateStability(ToricWallError):
    """The stability parameter lies on a wall or outside the support."""

    code = "degenerate-stability"


class NotAdjacent(ToricWallError):
    """Two chambers do not share a codimension-one face."""

    code = "not-adjacent"


class NotCrepant(ToricWallError):
    """The character sum does not lie on the wall."""

    code = "not-crepant"


class InvalidFan(ToricWallError):
    """Fan data violates the simpliciality or ray-matching requirements."""

    code = "invalid-fan"


class NonSmoothStar(ToricWallError):
    """Star subdivision requested along a cone with a non-smooth star."""

    code = "non-smooth-star"


class SingularRestriction(ToricWallError):
    """A fixed-point character submatrix is singular."""

    code = "singular-restriction"


class ConvergenceRadius(ToricWallError):
    """A series argument lies outside the radius of convergence."""

    code = "convergence-radius"


class TruncationOverflow(ToricWallError):
    """A requested truncation window exceeds what was computed."""

    code = "truncation-overflow"


class OutsideConvergence(ToricWallError):
    """Full summation requested outside the convergence region."""

    code = "outside-convergence"


class SlowConvergence(ToricWallError):
    """Summation too close to the boundary of the convergence region."""

    code = "slow-convergence"


class NonGenericParameters(ToricWallError):
    """Equivariant parameters produce colliding poles; redraw needed."""

    code = "non-generic-parameters"


class QuadratureFailure(ToricWallError):
    """Contour quadrature could not reach the requested error target."""

    code = "quadrature-failure"


class NotPaired(ToricWallError):
    """The two fixed data are not paired across the wall."""

    code = "not-paired"


class IndexMismatch(ToricWallError):
    """Push-pull data indexed against an incompatible anticone."""

    code = "index-mismatch"


class UnresolvedRoot(ToricWallError):
    """A formal root symbol was evaluated without a pairing rule."""

    code = "unresolved-root"


class ParseError(ToricWallError):
    """A problem file could not be parsed."""

    code = "parse-error"


class ValidationError(ToricWallError):
    """A problem file parsed but failed validation."""

    code = "validation-error"


class UnknownCommand(ToricWallError):
    """An unrecognized CLI command."""

    code = "unknown-command"

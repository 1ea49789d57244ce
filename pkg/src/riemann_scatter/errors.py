"""Exception hierarchy shared by all numerical modules."""


class RiemannScatterError(Exception):
    """Base class for all library-specific errors."""


class InvalidConfig(RiemannScatterError):
    """Configuration fails a validity certificate (univalence, radii, ranges)."""


class SeriesOverflow(RiemannScatterError):
    """Intermediate series coefficients exceed the magnitude bound."""


class NonConvergent(RiemannScatterError):
    """A quadrature refinement check failed to stabilise."""


class IllConditioned(RiemannScatterError):
    """A Gram or fit matrix exceeds the allowed condition number."""


class ResidualTooLarge(RiemannScatterError):
    """A least-squares fit left a residual above tolerance."""


class SingularPoint(RiemannScatterError):
    """Kernel evaluated on its diagonal singularity."""


class TailTooLarge(RiemannScatterError):
    """Lattice-sum tail bound exceeds the requested accuracy."""


class ThresholdAmbiguous(RiemannScatterError):
    """A singular value sits too close to the rank threshold to decide."""


class NotSemiExact(RiemannScatterError):
    """A one-form has a nonzero period where an exact form is required."""


class DimensionMismatch(RiemannScatterError):
    """Operator blocks or coefficient vectors have incompatible shapes."""


class SampleNearCurve(RiemannScatterError):
    """An evaluation point lies too close to the separating curve."""


class MethodDisagreement(RiemannScatterError):
    """Series and quadrature assemblies differ beyond cross-validation tolerance."""

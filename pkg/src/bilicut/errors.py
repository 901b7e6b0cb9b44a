"""Exception types shared across the package."""


class BilicutError(Exception):
    """Base class for all package-specific errors."""


class NonFinite(BilicutError):
    """An array that must be finite contains NaN or infinity."""


class DimensionMismatch(BilicutError):
    """Array shapes are inconsistent with each other."""


class NonSymmetric(BilicutError):
    """A matrix required to be symmetric is not."""


class BadDensity(BilicutError):
    """Density outside (0, 1]."""


class BadRank(BilicutError):
    """Rank fraction outside (0, 1]."""


class BoxInverted(BilicutError):
    """A box has a lower bound strictly above its upper bound."""


class AsymmetricQ(BilicutError):
    """A quadratic-term matrix (Q or R) is not symmetric."""


class ParseError(BilicutError):
    """Instance JSON is malformed; message carries field context."""


class NumericalFailure(BilicutError):
    """A solver factorization or iteration broke down irrecoverably."""


class NotConvex(BilicutError):
    """Q or R has an eigenvalue below the convexity tolerance."""


class EmptyModel(BilicutError):
    """A model with zero variables was supplied."""


class RankDeficient(BilicutError):
    """No usable singular pair exists where one is required."""


class DegenerateInterval(BilicutError):
    """An interval to be split has width below 1e-9."""


class CglpNumericalFailure(BilicutError):
    """The cut-generating LP failed numerically."""


class SolverFailure(BilicutError):
    """A relaxation solve inside the driver loop failed."""


class PsdViolated(BilicutError):
    """A matrix that must dominate an outer product does not."""


class MissingColumns(BilicutError):
    """A results CSV lacks required columns."""

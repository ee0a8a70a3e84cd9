"""Exception types shared across the package."""


class OneBitPrError(Exception):
    """Base class for all package errors."""


class NonHermitianInput(OneBitPrError):
    """Matrix handed to the real embedding is not Hermitian within tolerance."""


class DimensionMismatch(OneBitPrError):
    pass


class NegativeThreshold(OneBitPrError):
    """Noiseless sign data requires nonnegative comparison thresholds."""


class EmptySystem(OneBitPrError):
    pass


class ZeroNormRow(OneBitPrError):
    """A constraint row has zero norm; norm-weighted sampling is undefined."""


class InsufficientSamples(OneBitPrError):
    """Fewer rows than the minimum needed for a finite-volume feasible set."""


class NonPositiveLeadEigenvalue(OneBitPrError):
    """Signal extraction needs a strictly positive dominant eigenvalue."""


class ZeroReference(OneBitPrError):
    """Normalized error is undefined for a zero reference matrix."""


class TailNotDecaying(OneBitPrError):
    """Error curve has no decaying exponential tail to fit."""


class InfeasibleTarget(OneBitPrError):
    """Requested error level is below the iteration-limited floor."""


class UnknownPreset(OneBitPrError):
    pass


class ClampingDominates(UserWarning):
    """More than half of the squared-threshold updates hit the zero clamp."""

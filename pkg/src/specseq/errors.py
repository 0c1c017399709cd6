"""Exception types raised across the package."""


class SpecseqError(Exception):
    """Base class for all errors raised by this package."""


class OverlapError(SpecseqError):
    """Message and interferer bands share a frequency bin."""


class EmptyMessageError(SpecseqError):
    """The message band is empty."""


class EmptyInterfererError(SpecseqError):
    """The interferer band is empty where a nonempty one is required."""


class LengthMismatchError(SpecseqError):
    """A sequence does not have the length the problem expects."""


class NonConvergenceError(SpecseqError):
    """An iterative solver hit its iteration limit before reaching tolerance."""


class InfeasibleRelaxationError(SpecseqError):
    """The relaxed program has no solution under the halved interferer bound."""


class RankZeroError(SpecseqError):
    """A relaxation solution has no positive eigenvalue to quantize."""


class DegenerateObjectiveError(SpecseqError):
    """The relaxation objective is too close to zero to normalize by."""


class ZeroScaleError(SpecseqError):
    """The fitted scale factor is zero, so the spectrum update is undefined."""


class ZeroSpectrumError(SpecseqError):
    """The auxiliary spectrum is identically zero, so the scale fit is undefined."""


class DivergenceError(SpecseqError):
    """Neuron dynamics left the stable region (step size too large)."""


class SizeLimitError(SpecseqError):
    """The sequence length exceeds the exhaustive-search limit."""


class NoFeasibleError(SpecseqError):
    """No binary sequence satisfies the interferer power bound."""

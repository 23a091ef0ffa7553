"""Exception types shared across the package."""


class CPNormError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(CPNormError):
    """Malformed, non-finite, or out-of-contract input data."""


class DimMismatch(CPNormError):
    """Operands have incompatible dimensions."""


class NotPsd(CPNormError):
    """A positive semidefinite matrix was required."""


class InvalidExponent(CPNormError):
    """Schatten exponent outside the supported range."""


class ZeroInput(CPNormError):
    """The zero matrix is not a valid argument here."""


class DegenerateMap(CPNormError):
    """The map annihilates the supplied starting point."""


class NotApplicable(CPNormError):
    """A specialised routine does not apply to this map."""


class DeskScaleExceeded(CPNormError):
    """Problem size exceeds the brute-force oracle's guard."""


class KrausRedundancyWarning(UserWarning):
    """Kraus list longer than input_dim * output_dim; harmless but redundant."""

"""Exception types shared across the library."""


class YbeForgeError(Exception):
    """Base class for all library errors."""


class DivergentBase(YbeForgeError):
    """An infinite product/series was requested with a base of modulus >= 1."""


class CapExceeded(YbeForgeError):
    """Truncation hit the hard cap before meeting the tail tolerance."""


class PoleHit(YbeForgeError):
    """Evaluation landed on (or numerically too close to) a pole or zero divisor."""


class ZeroArgument(YbeForgeError):
    """Argument must be nonzero."""


class BadLegs(YbeForgeError):
    """Invalid tensor-leg specification."""


class BadIndex(YbeForgeError):
    """Index out of the valid range for the given rank."""


class BadLabel(YbeForgeError):
    """Root-vector label outside the tabulated families."""


class NotCoprime(YbeForgeError):
    """Rotation step must be coprime to r+1."""


class InadmissibleHeights(YbeForgeError):
    """Face weights are defined only for height quadruples with unit steps."""


class ConfigError(YbeForgeError):
    """Invalid CLI/suite configuration."""

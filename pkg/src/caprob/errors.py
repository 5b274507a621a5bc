"""Exception hierarchy shared across the package.

Everything derives from CaprobError so callers (and the CLI) can catch
library failures in one clause and map them to the usage exit code.
"""


class CaprobError(Exception):
    """Base class for all caprob errors."""


# --- linear algebra / Gaussian oracle ---------------------------------------


class NotPositiveDefinite(CaprobError):
    """Covariance factorization failed; signals a degenerate configuration."""


class UnknownBlock(CaprobError):
    """A block name does not exist in the joint Gaussian."""


# --- proxy world -------------------------------------------------------------


class AdaptiveAttackNoClosedForm(CaprobError):
    """Closed-form joint covariance exists only for input-independent noise."""


class InvalidCount(CaprobError):
    """A sample or step count outside its valid range."""


# --- estimators --------------------------------------------------------------


class LengthMismatch(CaprobError):
    """Paired samples have different lengths or shapes."""


class TooFewSamples(CaprobError):
    """Not enough samples for the requested estimator configuration."""


class NonFinite(CaprobError):
    """Training diverged or produced a non-finite estimate."""


# --- bounds ------------------------------------------------------------------


class ZeroNoise(CaprobError):
    """Channel bounds are undefined at zero noise variance."""


class ShapeMismatch(CaprobError):
    """Two feature matrices disagree in shape."""


class DegenerateFeatures(CaprobError):
    """Perturbed features equal clean features; realized noise is zero."""


class DimMismatch(CaprobError):
    """Two encoder audits have different feature dimensions."""


# --- statistics ---------------------------------------------------------------


class DegenerateVariance(CaprobError):
    """All samples equal; the t statistic is undefined."""


class QuadratureFailure(CaprobError):
    """Numerical quadrature for a reference MI did not converge."""


# --- configuration / file formats ---------------------------------------------


class ConfigError(CaprobError):
    """Base class for configuration-file problems (usage exit code)."""


class ParseError(ConfigError):
    """Config file is not valid JSON; carries line and column."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class UnknownKey(ConfigError):
    """Config key not in the schema; message names the nearest valid key."""


class TypeMismatch(ConfigError):
    """Config value has the wrong type for its key."""


class MalformedHeader(CaprobError):
    """Feature-dump header line does not parse as ``n,d,label``."""


class RowLengthMismatch(CaprobError):
    """A feature-dump row has the wrong number of values."""

    def __init__(self, message, row):
        super().__init__(message)
        self.row = row


class NonFiniteValue(CaprobError):
    """A feature-dump entry is NaN or infinite."""

    def __init__(self, message, row, col):
        super().__init__(message)
        self.row = row
        self.col = col

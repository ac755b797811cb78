"""Exception vocabulary shared by all modules.

Three families, matching the CLI exit codes: bad requests (exit 2),
verification failures (exit 1), and internal contradictions (exit 3).
A verification failure means an identity that was supposed to hold did
not; an internal contradiction means the engine disagrees with itself
and nothing it printed should be trusted.
"""


class Error(Exception):
    """Base class for every error raised by this package."""


class ConfigError(Error):
    """The request itself is bad: unsupported case, out-of-range input."""


class CheckFailed(Error):
    """A verification that should have passed did not."""


class InternalError(Error):
    """Self-contradiction inside the engine; results are not trustworthy."""


# -- arithmetic ---------------------------------------------------------

class DivisionByZero(Error, ZeroDivisionError):
    pass


class ShapeError(ConfigError):
    pass


class PoleAtSample(ConfigError):
    """Denominator vanishes (or cannot be certified nonzero) at the sample."""


# -- root data / representations ---------------------------------------

class UnsupportedType(ConfigError):
    pass


class MultiplicityUnsupported(ConfigError):
    """A weight space of dimension > 1 appeared; the engine only handles
    multiplicity-free modules."""


class DegreeLimit(ConfigError):
    pass


class UsageError(ConfigError):
    pass


# -- braiding -----------------------------------------------------------

class NormalizationInsufficient(InternalError):
    """The prescribed top-to-bottom image did not pin a unique intertwiner."""


class InternalConsistency(InternalError):
    pass


# -- verification failures ----------------------------------------------

class DualityCheckFailed(CheckFailed):
    pass


class IdentityFailed(CheckFailed):
    pass


class StarMismatch(CheckFailed):
    pass


class CentralityFailed(CheckFailed):
    pass


class ProjectionFailed(CheckFailed):
    pass


class BimoduleIdentityFailed(CheckFailed):
    pass


class DimensionMismatch(CheckFailed):
    pass


class ProlongationIncomplete(CheckFailed):
    """The quadratic constraint space extracted from the calculus is too
    small to give binomial graded dimensions; the certificate is withheld."""


class RealityFailed(CheckFailed):
    pass

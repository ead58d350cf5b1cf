"""Exception types shared across the package.

Each class names a *behavioral* failure mode; modules raise these instead of
bare ValueError so callers (and the CLI) can distinguish configuration
mistakes from genuine numerical breakdowns.
"""


class ConfigurationError(ValueError):
    """Invalid static configuration: bad node count, unknown shape, c on the spectrum, ..."""


class SingularityError(ValueError):
    """Evaluation exactly on a kernel singularity (r = 0, w = 0)."""


class ArgumentRangeError(ValueError):
    """Argument outside the guaranteed accuracy/overflow range of a routine."""


class EvaluationError(RuntimeError):
    """A user-supplied field produced non-finite values at requested points."""


class AccuracyRegionError(ValueError):
    """Off-boundary evaluation requested closer to the curve than the quadrature
    accuracy regime permits; refine the grid or pass enforce_accuracy_region=False."""


class SpectralPoleError(ValueError):
    """Spectral parameter sits on (or numerically too close to) a pole/spectrum that
    the requested formula excludes."""


class AnsatzResonanceError(RuntimeError):
    """The single-layer boundary matrix is numerically singular at this spectral
    parameter; perturb z slightly or refine the grid."""


class BracketingError(RuntimeError):
    """Root bracketing failed; the reported interval did not isolate a sign change."""

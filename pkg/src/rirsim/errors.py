"""Exception hierarchy for the simulator.

Everything raised on purpose derives from :class:`RirsimError`, so callers
can distinguish our failures from genuine bugs.  The CLI maps configuration
errors to exit code 1 and solver/runtime errors to exit code 2.
"""


class RirsimError(Exception):
    """Base class for all errors raised by rirsim."""


# --- construction / validation -------------------------------------------

class ShapeMismatch(RirsimError):
    """State arrays do not conform to the momentum grid."""


class EdgePopulationTooLarge(RirsimError):
    """Thermal weight at the grid edge exceeds the truncation tolerance."""


class ZeroDetuning(RirsimError):
    """Pump detuning of zero passed where a detuning-power law is evaluated."""


class NonPositiveUnit(RirsimError):
    """A physical unit constant that must be strictly positive is not."""


class NonPositiveInput(RirsimError):
    """A strictly positive physical input (power, wavelength, waist) is not."""


class ZeroProbeInput(RirsimError):
    """Probe input amplitude of zero where a gain ratio is required."""


# --- integration ----------------------------------------------------------

class SolverError(RirsimError):
    """Base class for time-integration failures."""


class StepLimitExceeded(SolverError):
    """The integrator hit max_steps before reaching the end of the schedule."""


class StepUnderflow(SolverError):
    """Adaptive step size collapsed below the machine-reasonable floor."""


class NonFiniteState(SolverError):
    """NaN or infinity appeared in the integrated state."""


class SteadyStateNotReached(SolverError):
    """A fixed-detuning run failed to converge within the window budget."""


# --- fitting / analysis ---------------------------------------------------

class FitDegenerate(RirsimError):
    """Fit input has no usable transient (flat data) or the fit diverged."""


class NonPositiveData(RirsimError):
    """Log-log fitting requires strictly positive samples."""


class DegenerateAbscissa(RirsimError):
    """All abscissa values coincide; a slope cannot be estimated."""


class GridMismatch(RirsimError):
    """Two spectra that must share a detuning grid do not."""


# --- configuration --------------------------------------------------------

class ConfigError(RirsimError):
    """Base class for configuration-file problems (CLI exit code 1)."""


class ParseError(ConfigError):
    """Config file is not parseable; message carries line information."""


class ValidationError(ConfigError):
    """A config value violates an invariant; message names the field."""


class UnknownKey(ConfigError):
    """Config contains a key not in the schema (likely a typo)."""

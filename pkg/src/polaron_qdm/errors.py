"""Exception hierarchy for the simulator."""


class SimulationError(Exception):
    """Base class for every error raised by polaron_qdm."""


class ConfigError(SimulationError, ValueError):
    """Invalid parameter value or unknown configuration key."""


class DecoupledDotError(SimulationError, ZeroDivisionError):
    """A dot has both lead couplings equal to zero."""


class SidebandConvergenceError(SimulationError):
    """Phonon sideband series did not reach tolerance below the order cap."""


class BesselOverflowError(SimulationError, OverflowError):
    """Argument too large for an unscaled modified Bessel value."""


class DegenerateSteadyState(SimulationError):
    """The Liouvillian has more than one stationary state."""


class NoStationaryState(SimulationError):
    """No vector meets the stationary residual tolerance."""


class StepTooLarge(SimulationError):
    """Halving the integration step changed the result beyond tolerance."""


class PositivityLoss(SimulationError):
    """Density matrix acquired a significantly negative eigenvalue."""


class TraceDrift(SimulationError):
    """Trace of the propagated density matrix drifted away from one."""


class InvalidStateError(SimulationError, ValueError):
    """Matrix is not a valid two-dot density matrix."""


class EigenFailure(SimulationError):
    """Eigenvalue solver failed to converge."""

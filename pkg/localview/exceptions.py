"""Errors and warnings raised by localview."""


class NetworkFormatError(ValueError):
    """Raised when a topology document or a Network is malformed."""


class ScheduleFormatError(ValueError):
    """Raised when a schedule document or object is malformed."""


class SizeCapError(ValueError):
    """Raised when an exhaustive routine is asked to run above its cap.

    Set ``allow_approx=True`` (see :func:`localview.set_config`) to get a
    degraded answer instead.
    """


class InfeasibleScheduleError(ValueError):
    """Raised when some receiver cannot decode a coded schedule.

    Attributes
    ----------
    receiver : int
        The first failing receiver (1-based).
    """

    def __init__(self, message, receiver):
        super(InfeasibleScheduleError, self).__init__(message)
        self.receiver = receiver


class CaseSelectionError(RuntimeError):
    """Raised when no single Z-chain strategy case applies."""


class BoundsInconsistencyError(RuntimeError):
    """Raised when a lower bound on alpha exceeds an upper bound."""


class NonExhaustiveWarning(UserWarning):
    """The result comes from a greedy or budget-limited search."""


class SufficientOnlyWarning(UserWarning):
    """The verdict relies on a test that is sufficient but not necessary."""


class UnverifiedConstructionWarning(UserWarning):
    """A reported construction was not checked by simulation."""


class PrintedFormulaWarning(UserWarning):
    """A printed Z-chain formula leaves the rate region or the gap."""

"""Exception types shared across the package."""


class ConvergenceError(RuntimeError):
    """A numerical procedure did not reach its accuracy target.

    Attributes
    ----------
    estimate : float
        The error estimate actually achieved.
    target : float
        The requested accuracy.
    """

    def __init__(self, message, estimate=float("nan"), target=float("nan")):
        super().__init__(f"{message} (achieved error {estimate:.3e}, target {target:.3e})")
        self.estimate = estimate
        self.target = target


class ChainDivergenceError(FloatingPointError):
    """A Markov chain produced a non-finite energy."""


class InvariantError(AssertionError):
    """A checked invariant failed."""

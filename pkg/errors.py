"""
Error hierarchy shared by every package.

ConfigError maps to exit status 2 and NumericalError to exit status 3
(see run.py). Caller precondition violations raise ValueError instead.
"""


class DynamicsError(Exception):
    pass


class ConfigError(DynamicsError):
    pass


class NumericalError(DynamicsError):
    pass


########################################################################
# algebra
########################################################################
class PoleAt(NumericalError):
    def __init__(self, z):
        super().__init__(f"denominator vanishes at {z}")
        self.z = z


class NoConvergence(NumericalError):
    def __init__(self, what, iterations):
        super().__init__(f"{what}: no convergence after {iterations} iterations")
        self.iterations = iterations


class Diverged(NumericalError):
    pass


class DegenerateCondition(NumericalError):
    pass


class UnsupportedInput(NumericalError):
    pass


########################################################################
# dynamics / planes
########################################################################
class CollapsedToLowerPeriod(NumericalError):
    def __init__(self, period, divisor):
        super().__init__(f"seed converged to a cycle of exact period {divisor}, not {period}")
        self.period = period
        self.divisor = divisor


class CriticalValueHit(NumericalError):
    pass


class BudgetExceeded(NumericalError):
    pass


class NeedsRays(NumericalError):
    pass


class RayBlocked(NumericalError):
    pass


class NotConnected(NumericalError):
    pass


########################################################################
# thurston_interval
########################################################################
class InfeasibleTargets(NumericalError):
    pass


class RangeMismatch(NumericalError):
    pass


########################################################################
# siegel
########################################################################
class RationalInput(NumericalError):
    pass


class SmallDivisorOverflow(NumericalError):
    def __init__(self, n, divisor):
        super().__init__(f"|lambda^{n} - lambda| = {divisor:.3e} below the small-divisor floor")
        self.n = n
        self.divisor = divisor


class CotPole(NumericalError):
    def __init__(self, nu):
        super().__init__(f"(nu+1)*theta within the pole guard of an integer at nu={nu}")
        self.nu = nu


class InsufficientOrder(NumericalError):
    pass


########################################################################
# newton_lab
########################################################################
class NearSingularity(NumericalError):
    def __init__(self, z):
        super().__init__(f"f'(z) vanishes at a non-root z={z}")
        self.z = z


class StepFailure(NumericalError):
    def __init__(self, message, last_sample=None):
        super().__init__(message)
        self.last_sample = last_sample

"""Exception types shared across modules."""


class LchsError(Exception):
    pass


class InvalidSpec(LchsError, ValueError):
    pass


class PoleError(LchsError, ValueError):
    pass


class PoleOnLine(LchsError, ValueError):
    pass


class NonIntegrable(LchsError, ValueError):
    pass


class PreconditionError(LchsError, ValueError):
    pass


class RangeError(LchsError, ValueError):
    pass


class ConvergenceError(LchsError, RuntimeError):
    pass


class QuadratureError(LchsError, RuntimeError):
    pass


class Infeasible(LchsError, RuntimeError):
    pass


class PlanMismatch(LchsError, ValueError):
    pass


class CapExceeded(LchsError, ValueError):
    pass


class DilationError(LchsError, ValueError):
    pass


class DegenerateState(LchsError, ValueError):
    pass


class LpInfeasible(LchsError, RuntimeError):
    pass


class LpCycling(LchsError, RuntimeError):
    pass


class NoConvergence(LchsError, RuntimeError):
    def __init__(self, msg, diagnostics=None):
        super().__init__(msg)
        self.diagnostics = diagnostics or {}


class IllConditioned(LchsError, ValueError):
    pass


class AliasingDetected(LchsError, RuntimeError):
    pass

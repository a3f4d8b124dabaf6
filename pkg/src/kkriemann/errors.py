"""Exception hierarchy shared by every module of the package."""


class RiemannError(Exception):
    """Base class for all errors raised by kkriemann."""


class VacuumSingularity(RiemannError):
    """Density at or below the vacuum floor where the mobility blows up."""


class CriticalDensity(RiemannError):
    """A formula with a pole at the critical density was evaluated there."""


class DegenerateJump(RiemannError):
    """Left and right densities coincide, so a jump speed is undefined."""


class NoJump(RiemannError):
    """Left and right states are identical."""


class NoRealRoot(RiemannError):
    """The initial-speed quadratic has a negative discriminant."""


class Inadmissible(RiemannError):
    """No candidate delta speed satisfies the overcompressive inequalities."""


class StrengthNegative(RiemannError):
    """The delta strength became negative during integration."""


class MomentumJumpZero(RiemannError):
    """The momentum jump vanishes, so the positive-exponent delta ODE is singular."""


class FullDegeneracy(RiemannError):
    """Physical velocity of the left state is zero; both speeds vanish."""


class NoIntersection(RiemannError):
    """Two wave curves do not meet on the admissible side."""


class Unclassifiable(RiemannError):
    """No construction in the catalog connects the two states.

    The ``diagnostics`` attribute records what was tried.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ZeroWaveSpeed(RiemannError):
    """All characteristic speeds on the grid are zero."""


class ParseError(RiemannError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(RiemannError):
    pass

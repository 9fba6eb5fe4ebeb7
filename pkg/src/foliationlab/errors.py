"""Exception hierarchy shared by all subsystems."""


class FoliationLabError(Exception):
    """Base class for all errors raised by this package."""


class MultipleRoot(FoliationLabError):
    """A characteristic number is undefined at a non-simple root of h."""


class DegenerateSystem(FoliationLabError):
    """P and Q share a nontrivial common factor."""


class NotSymmetric(FoliationLabError):
    """Operation requires the (x, y) -> (x, -y) symmetry."""


class NotSingularPoint(FoliationLabError):
    """The given point is not a zero of the vector field."""


class GeometryInfeasible(FoliationLabError):
    """Roots at infinity are too clustered for the requested loop radii."""


class LeftDomain(FoliationLabError):
    """The lifted leaf escaped the tube around the infinite line."""


class SingularDenominator(FoliationLabError):
    """The path passed too close to a singularity of the direction field."""


class ToleranceNotMet(FoliationLabError):
    """The integrator could not reach the requested accuracy."""


class DomainEscape(FoliationLabError):
    """A germ was evaluated outside the disc where it is defined."""


class NonHyperbolicMultiplier(FoliationLabError):
    """Linearization requires a multiplier off the unit circle."""


class SlowConvergence(FoliationLabError):
    """An iterative construction failed to converge within its budget."""


class NoConvergence(FoliationLabError):
    """Newton iteration did not converge."""


class NonIsolated(FoliationLabError):
    """The fixed-point equation is degenerate at the candidate."""


class ResonanceDetected(FoliationLabError):
    """The two multipliers satisfy a rational relation; the semigroup is not dense."""

    def __init__(self, message, relation=None):
        super().__init__(message)
        self.relation = relation


class BoundsExhausted(FoliationLabError):
    """No exponent combination within the configured bounds reaches the target."""


class CommutingPair(FoliationLabError):
    """The two germs commute, so the fixed-point construction degenerates."""


class ConditionUnsatisfiable(FoliationLabError):
    """A required inequality on the candidate fixed point failed everywhere searched."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class NoHyperbolicPoint(FoliationLabError):
    """No hyperbolic fixed point was found in the search region."""


class NoRootInDisc(FoliationLabError):
    """The parameter solve found no zero of the residual in the search disc."""


class DerivativeDegenerate(FoliationLabError):
    """The residual does not depend on the parameter to working precision."""


class BudgetExhausted(FoliationLabError):
    """Tracking budget ran out; partial results are attached."""

    def __init__(self, message, points=None):
        super().__init__(message)
        self.points = points if points is not None else []


class HitSingularity(FoliationLabError):
    """The tracked trajectory ran into a singular point."""


class GenericityFailure(FoliationLabError):
    """A map required to be non-identical linear is (numerically) the identity."""

    def __init__(self, message, word=None):
        super().__init__(message)
        self.word = word

"""Exception types shared across the package."""


class AlgpoisError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(AlgpoisError):
    pass


class DependentBasis(AlgpoisError):
    pass


class NotClosed(AlgpoisError):
    """Commutator of basis elements leaves the span of the basis."""


class NotInSpan(AlgpoisError):
    """A matrix could not be expressed in the algebra basis."""


class OutOfDomain(AlgpoisError):
    """Evaluation point violates an action's domain guard."""


class SingularJacobian(AlgpoisError):
    pass


class UnknownAction(AlgpoisError):
    pass


class UnknownAlgebra(AlgpoisError):
    pass


class UnsupportedShape(AlgpoisError):
    pass


class AlgebraMismatch(AlgpoisError):
    pass


class DomainExit(AlgpoisError):
    """Trajectory left the domain guard during integration."""


class NonFinite(AlgpoisError):
    pass


class NotInvariant(AlgpoisError):
    """Hamiltonian failed the joint-action invariance pre-check."""


class NotFreeRegular(AlgpoisError):
    """Normalization equations are singular: no frame near this point."""


class NotInvertible(AlgpoisError):
    """Star-inverse iteration failed to converge."""


class GridMismatch(AlgpoisError):
    pass


class DegeneratePairing(AlgpoisError):
    """Trace form of the algebra representation is singular."""


class ConfigError(AlgpoisError):
    pass

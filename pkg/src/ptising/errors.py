"""Exception hierarchy. Every numerical domain failure derives from DomainError."""


class DomainError(ValueError):
    """A computation was asked for outside its domain of validity."""

    code = "domain"


class DegenerateDenominatorError(DomainError):
    """A resonance denominator of the composite-operator construction vanished."""

    code = "degenerate"


class GaplessPointError(DomainError):
    """The quasiparticle gap closes, so field derivatives of the energy diverge."""

    code = "gapless"


class CriticalPointError(DomainError):
    """Second derivatives diverge logarithmically at this field point."""

    code = "critical"


class SingularInputError(DomainError):
    code = "singular"


class NonConvergenceError(RuntimeError):
    """Shifted QR iteration hit its iteration cap.

    ``unconverged`` lists the indices (in the working Hessenberg matrix) whose
    eigenvalues could not be certified.
    """

    code = "nonconvergence"

    def __init__(self, message, unconverged=()):
        super().__init__(message)
        self.unconverged = tuple(unconverged)

"""Exception types shared across the package."""


class QbosError(Exception):
    """Base class for all qbos errors."""


class NonUnitaryInput(QbosError):
    """A matrix that must be unitary failed the unitarity check."""


class WrongSpace(QbosError):
    """Strategy parameters belong to a space the operation does not accept."""


class InvalidOrdering(QbosError):
    """Battle-of-Sexes payoffs must satisfy alpha > beta > gamma strictly."""


class InvalidMass(QbosError):
    """Probability masses exceed 1."""


class TrivialGame(QbosError):
    """Game fails the strict-cell condition required by the no-equilibrium certificate."""

"""Exception hierarchy.

Errors deriving from :class:`NotDenseSignal` indicate that the input group is
(very likely) not Zariski dense; the CLI maps them to exit status 2.
"""


class StrongApproxError(Exception):
    """Base class for all library errors."""


class NotDenseSignal(StrongApproxError):
    """Raised when a witness required by density cannot be produced."""


# exact / modular linear algebra
class NotUnimodular(StrongApproxError):
    pass


class DimensionMismatch(StrongApproxError):
    pass


class NotInvertibleMod(StrongApproxError):
    pass


class CompositeModulus(StrongApproxError):
    pass


# group input
class SchemaError(StrongApproxError):
    pass


class NotDeterminantOne(StrongApproxError):
    def __init__(self, index, det=None):
        self.index = index
        self.det = det
        super().__init__(f"generator {index} has determinant {det}, expected 1")


class IndexOutOfRange(StrongApproxError):
    pass


class UnknownName(StrongApproxError):
    pass


class ParityError(StrongApproxError):
    pass


# algebra / sieves
class NotTransvection(StrongApproxError):
    pass


class NotAbsolutelyIrreducible(NotDenseSignal):
    pass


class NoInfiniteOrderElement(NotDenseSignal):
    pass


class WitnessNotFound(NotDenseSignal):
    pass


class SolvableWitnessNotFound(NotDenseSignal):
    pass


class NoSurjectivePrimeFound(NotDenseSignal):
    pass


class NotDense(NotDenseSignal):
    pass


class DegreeSkip(StrongApproxError):
    """The sieve is redundant in this degree and was not run."""


class DegreeNotPrime(StrongApproxError):
    pass


# recognition
class OrbitTooLarge(StrongApproxError):
    pass


class OrderOracleUnavailable(StrongApproxError):
    pass


class EnumerationTooLarge(StrongApproxError):
    pass


# congruence images
class DegreeTwoComposite(StrongApproxError):
    pass

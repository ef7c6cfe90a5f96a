"""Exception types shared across the package."""


class RigidlabError(Exception):
    """Base class for all package errors."""


# field construction / arithmetic

class NonPrime(RigidlabError):
    pass


class DegreeZero(RigidlabError):
    pass


class FieldTooLarge(RigidlabError):
    pass


class NotPrimePower(RigidlabError):
    pass


class DivisionByZero(RigidlabError, ZeroDivisionError):
    pass


class LogOfZero(RigidlabError):
    pass


# coset unions and characters

class IndexNotDividing(RigidlabError):
    pass


class EmptyExponentSet(RigidlabError):
    pass


class ExponentOutOfRange(RigidlabError):
    pass


# direction sets and point sets

class TooFewPoints(RigidlabError):
    pass


class ZeroInD(RigidlabError):
    pass


# searches

class ParamOutOfRange(RigidlabError):
    pass


class SearchSpaceTooLarge(RigidlabError):
    pass


# character-sum audits

class DegenerateInput(RigidlabError):
    pass


class PreconditionViolated(RigidlabError):
    pass


class GeneratorNotFound(RigidlabError):
    """Raised when a subspace scan finds no subfield-avoiding element.

    This cannot happen for valid inputs; seeing it means an implementation bug.
    """


# clique pipeline

class NotAGraph(RigidlabError):
    pass


class VInS(RigidlabError):
    pass


# CLI / reports

class UnknownCommand(RigidlabError):
    pass


class InvalidValue(RigidlabError):
    pass


class IoFailure(RigidlabError):
    pass

"""Exception hierarchy shared by all modules.

Every domain error carries a ``details`` mapping so the CLI can emit it as
a structured JSON object.
"""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for every domain error raised by :mod:`mixang`."""

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "message": str(self), **self.details}


# qp
class QPError(WorkbenchError):
    pass


class LoopArrow(QPError):
    pass


class TwoCycleArrows(QPError):
    pass


class NonComposableCycle(QPError):
    pass


class UnknownArrowInPotential(QPError):
    pass


class DuplicateArrowId(QPError):
    pass


class UnknownVertex(QPError):
    pass


class UnsupportedReduction(QPError):
    pass


class BadSubset(QPError):
    pass


# surface
class SurfaceError(WorkbenchError):
    pass


class Incompatible(SurfaceError):
    pass


class HasPunctures(SurfaceError):
    pass


class NoBoundary(SurfaceError):
    pass


class EnhancementViolated(SurfaceError):
    pass


class KappaTooSmall(SurfaceError):
    pass


class NotSimpleWeights(SurfaceError):
    pass


class InvalidDissection(SurfaceError):
    pass


class InfeasibleWeights(SurfaceError):
    pass


class NotADiagonal(SurfaceError):
    pass


class DegenerateFlip(SurfaceError):
    pass


class NotARefinement(SurfaceError):
    pass


class NoWitness(SurfaceError):
    pass


# torus
class TorusError(WorkbenchError):
    pass


class NonUnimodular(TorusError):
    pass


class NonNormalForm(TorusError):
    pass


# exchange
class ExchangeError(WorkbenchError):
    pass


class OperatorFailure(ExchangeError):
    pass


class Truncated(ExchangeError):
    pass


# seeds / quotient
class SeedError(WorkbenchError):
    pass


class SupportViolation(SeedError):
    pass


class NoAdmissibleRefinement(SeedError):
    pass


class KeyCollision(SeedError):
    pass


class UsageError(WorkbenchError):
    pass

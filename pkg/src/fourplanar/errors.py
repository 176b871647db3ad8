"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class FourPlanarError(Exception):
    """Base class; ``code`` is the short rule name used in reports."""

    code = "Error"


class DisconnectedMapError(FourPlanarError):
    code = "DisconnectedMap"


class NonSphereError(FourPlanarError):
    code = "NonSphere"


class DanglingReferenceError(FourPlanarError):
    code = "DanglingReference"


class SelfCrossingError(FourPlanarError):
    code = "SelfCrossing"


class ParseError(FourPlanarError):
    code = "ParseError"


class ChainTooLongError(FourPlanarError):
    code = "ChainTooLong"


class TotalMismatchError(FourPlanarError):
    code = "TotalMismatch"


class StageOrderError(FourPlanarError):
    code = "StageOrder"


class NoEligiblePairError(FourPlanarError):
    code = "NoEligiblePair"


class HomotopyCreatedError(FourPlanarError):
    code = "HomotopyCreated"


class PreconditionFailedError(FourPlanarError):
    code = "PreconditionFailed"


class NotA0TriangleError(FourPlanarError):
    code = "NotA0Triangle"


class AlreadyInBlockError(FourPlanarError):
    code = "AlreadyInBlock"


class IterationCapExceededError(FourPlanarError):
    code = "IterationCapExceeded"


class BadParameterError(FourPlanarError):
    code = "BadParameter"

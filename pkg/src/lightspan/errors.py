"""Exception hierarchy shared by every lightspan module."""

from __future__ import annotations


class LightspanError(Exception):
    """Base class for all library errors."""


class InvalidInput(LightspanError, ValueError):
    pass


class DisconnectedGraph(InvalidInput):
    pass


class InvalidVertex(InvalidInput):
    pass


class NegativeWeight(InvalidInput):
    pass


class EmptySourceSet(InvalidInput):
    pass


class IdenticalPoints(InvalidInput):
    pass


class AlphaOutOfRange(InvalidInput):
    pass


class DeltaOutOfRange(InvalidInput):
    pass


class NotTheMst(InvalidInput):
    pass


class NotSpanning(InvalidInput):
    pass


class NotATree(InvalidInput):
    pass


class DegenerateMetric(InvalidInput):
    pass


class RankingMismatch(InvalidInput):
    pass


class InvalidParams(InvalidInput):
    pass


class NotApplicable(LightspanError):
    """Raised when a certificate's hypothesis does not hold for the input."""


class CertificationError(LightspanError, AssertionError):
    """A guarantee that must hold by construction was violated.

    ``invariant`` names the violated property and ``witness`` carries the
    offending pair (or other data) so the failure can be reproduced.
    """

    def __init__(self, invariant: str, message: str, witness: object = None):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant
        self.witness = witness

    def to_dict(self) -> dict:
        witness = self.witness
        if isinstance(witness, tuple):
            witness = list(witness)
        return {"invariant": self.invariant, "message": str(self), "witness": witness}


class ContractiveEmbedding(CertificationError):
    def __init__(self, message: str, witness: object = None):
        super().__init__("non-contraction", message, witness)

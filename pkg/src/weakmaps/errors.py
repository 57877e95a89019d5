"""Exception types.

Every validation failure carries a ``witness``: the first offending element,
pair or triple found by the (deterministic) scan, so that callers and the CLI
can report *where* an axiom breaks.
"""

from __future__ import annotations


class WeakMapsError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str = "", witness=None):
        super().__init__(message)
        self.witness = witness


class ValidationError(WeakMapsError):
    """Input data violates a structural axiom."""


class SizeLimit(WeakMapsError):
    pass


# groups and maps
class MalformedTable(ValidationError):
    pass


class NoIdentity(ValidationError):
    pass


class NoInverse(ValidationError):
    pass


class NotAssociative(ValidationError):
    pass


class NotAGroup(ValidationError):
    pass


class NotHomomorphism(ValidationError):
    pass


class NotAnAction(ValidationError):
    pass


class NotSubgroup(ValidationError):
    pass


class NotNormal(ValidationError):
    pass


class NotAbelian(ValidationError):
    pass


class IncompatibleData(ValidationError):
    pass


class NotCrossedHom(ValidationError):
    pass


class TriangleFails(ValidationError):
    pass


# crossed modules
class BoundaryNotHom(ValidationError):
    pass


class CM1Fails(ValidationError):
    pass


class CM2Fails(ValidationError):
    pass


class NotAMorphism(ValidationError):
    pass


class T1Fails(ValidationError):
    pass


class T2Fails(ValidationError):
    pass


class HypothesesFail(ValidationError):
    pass


class SectionInvalid(ValidationError):
    pass


# butterflies
class TypeMismatch(ValidationError):
    pass


class NotCommutative(ValidationError):
    pass


class NotComplex(ValidationError):
    pass


class NESWNotExact(ValidationError):
    pass


class EquivarianceFails(ValidationError):
    pass


class NotASection(ValidationError):
    pass


class NotAnEquivalence(ValidationError):
    pass


class PrecondFails(ValidationError):
    pass


class BraidingConventionFails(ValidationError):
    pass


class NotBraided(ValidationError):
    pass


class ButterflyAxiomFails(ValidationError):
    pass


# cohomology and extensions
class NotACocycle(ValidationError):
    pass


class NotAnExtension(ValidationError):
    pass


class NotSemiExact(ValidationError):
    pass


class PsiMismatch(ValidationError):
    pass


class ActionMismatch(ValidationError):
    pass


class ChiMismatch(ValidationError):
    pass


class NotALift(ValidationError):
    pass


class ExactnessFails(WeakMapsError):
    """A long exact sequence failed its own check; always an internal bug."""

    def __init__(self, message: str = "", position: int | None = None):
        super().__init__(message, witness=position)
        self.position = position


class PostconditionFails(WeakMapsError):
    """A constructed object failed its own post-condition; always a bug."""

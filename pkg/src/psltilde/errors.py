"""Exception types shared across the package."""


class PslTildeError(Exception):
    """Base class for all errors raised by this package."""


class NonUnitDeterminant(PslTildeError):
    """Matrix cannot be normalized: determinant nonpositive or far from 1."""


class NotHyperbolic(PslTildeError):
    pass


class NotConjugate(PslTildeError):
    pass


class IndexRoundingUnstable(PslTildeError):
    """Deck-index rounding residual exceeded its guard; input is numerically
    degenerate. Perturb the input or raise precision."""


class DegenerateRange(PslTildeError):
    """A displacement extremum sits on a multiple of pi while the base is not
    parabolic within tolerance."""


class EllipticHasNoHyp0Lift(PslTildeError):
    pass


class UnknownGenerator(PslTildeError):
    pass


class NotHP(PslTildeError):
    """A peripheral image is elliptic (or central), so the representation is
    outside the hyperbolic-or-parabolic boundary class."""


class RelatorNotCentral(PslTildeError):
    pass


class BoundaryElliptic(PslTildeError):
    pass


class UnsupportedCurve(PslTildeError):
    pass


class UnreachableTarget(PslTildeError):
    """The requested factor kinds cannot produce the target's component."""


class TargetOutsideImage(PslTildeError):
    """The target component is outside the image of the commutator map."""


class SolveFailed(PslTildeError):
    """A bracketed search did not find a solution; message carries the scan."""


class InfeasibleRequest(PslTildeError):
    pass


class NotSupported(PslTildeError):
    """Feasible request outside the construction families this release covers."""


class NotTypePreserving(PslTildeError):
    pass


class SelfVerificationError(PslTildeError):
    """A constructor's post-condition failed. This is a bug in the library,
    not a user error; the message carries diagnostics."""

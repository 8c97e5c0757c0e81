"""Exception hierarchy shared by all surflink modules."""


class SurflinkError(Exception):
    """Base class for all errors raised by surflink."""


class MalformedMap(SurflinkError):
    """The dart/rotation/opposite data does not describe a combinatorial map."""


class InternalParity(SurflinkError):
    """Euler characteristic came out odd; indicates an internal bug."""


class InvalidCorridor(SurflinkError):
    """The requested two-cut curve is not realizable through the named faces."""


class NonAlternatingTwistRegion(SurflinkError):
    """A bigon chain mixes crossing signs; the diagram is not reduced."""


class ZeroCoefficient(SurflinkError):
    """A Dehn-filling coefficient of zero was supplied."""


class NotACrossingCircle(SurflinkError):
    """The named vertex is not a crossing-circle site."""


class NotCheckerboard(SurflinkError):
    """The diagram's faces admit no checkerboard two-coloring."""


class UnfilledCircle(SurflinkError):
    """An operation requiring a fully filled diagram met a crossing circle."""


class NotCellular(SurflinkError):
    """The diagram is not cellular on its declared surface."""


class DegenerateFace(SurflinkError):
    """A white face of degree < 3 appeared; upstream invariant broken."""


class WrongManifoldKind(SurflinkError):
    """Operation only defined for a different ambient-manifold kind."""


class GenusTooSmall(SurflinkError):
    """Surface genus below 2; the constructions need hyperbolic ambient pieces."""


class LengthMismatch(SurflinkError):
    """Homology vectors of different genus were combined."""


class ZeroClass(SurflinkError):
    """The zero homology class was supplied where a curve class is required."""


class BadAlpha(SurflinkError):
    """Auxiliary curve has zero pairing with the primary curve."""


class NotNontrivial(SurflinkError):
    """Mapping class lacks the required nontriviality certificate."""


class LengthBudgetExceeded(SurflinkError):
    """Word-level computation exceeded its configured length budget."""


class NoIntersectionCertificate(SurflinkError):
    """No certificate that the two layer curves intersect essentially."""


class CurveMeetsCrossingCircle(SurflinkError):
    """Layer curve could not be recorded as disjoint from crossing circles."""


class GenusMismatch(SurflinkError):
    """The two base diagrams live on surfaces of different genus."""


class MonodromyActsTrivially(SurflinkError):
    """No certificate that the monodromy moves the layer curves."""


class CoefficientCountMismatch(SurflinkError):
    """Filling coefficient list has the wrong length."""


class NonPositiveCoefficient(SurflinkError):
    """Annular filling coefficients must be >= 1."""


class ParseError(SurflinkError):
    """Input file could not be parsed into the expected structure."""


class GenerationFailed(SurflinkError):
    """Random diagram generation exhausted its retry budget."""

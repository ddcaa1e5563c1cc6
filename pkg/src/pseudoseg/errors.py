"""Exception types raised by the package.

Every error that a caller is expected to catch is a named subclass of
PseudosegError so that `except PseudosegError` is a safe catch-all for
library-level failures, while programming errors still surface as the
usual builtins.
"""


class PseudosegError(Exception):
    """Base class for all library errors."""


class InvalidSize(PseudosegError):
    """A size parameter (n, m, k, ...) is outside its documented range."""


class DegenerateFamily(PseudosegError):
    """A curve family contains a contact that defeats exact counting."""


class DegeneratePair(DegenerateFamily):
    """Two curves touch without crossing, overlap, or meet at a vertex."""


class DegenerateRay(PseudosegError):
    """A parity probe ray hits a vertex or runs along an edge."""


class MalformedWiring(PseudosegError):
    """A swap sequence is not a simple wiring diagram."""


class MalformedFile(PseudosegError):
    """A flat file is not valid JSON of the documented shape."""


class NotAnArrangement(PseudosegError):
    """Curves violate the pairwise-exactly-once crossing discipline."""


class BadCandidate(PseudosegError):
    """A candidate small segment fails the 3-segment conditions."""


class DuplicateTriple(PseudosegError):
    """Two small segments use the same unordered triple of curves."""


class OverlappingSmallSegments(PseudosegError):
    """Two small segments on a common curve share more than endpoints."""


class MissingDiskData(PseudosegError):
    """A family lacks the disk records needed for a disk-level check."""


class UnresolvableDegeneracy(PseudosegError):
    """perturb cannot legally separate a multiple point."""


class NotAStarFamily(PseudosegError):
    """Input to box_form is not a star-shaped representation."""


class InvalidTree(PseudosegError):
    """Input edges do not form a tree with at least one edge."""


class KOutOfRange(PseudosegError):
    """k is outside 1..n for the requested arrangement operation."""


class UnknownLine(PseudosegError):
    """A referenced line id is not present in the arrangement."""


class UnknownId(PseudosegError):
    """A referenced curve or disk id is not present in the family."""


class BoundViolated(PseudosegError):
    """A certified counting bound failed on concrete data."""


class EmbeddingInconsistent(PseudosegError):
    """A rotation system does not describe a planar embedding."""


class MissingSegment(PseudosegError):
    """A requested curve is absent from the family."""

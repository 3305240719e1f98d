"""Exception hierarchy shared by all eac modules."""


class EacError(Exception):
    """Base class for every error raised by this package."""


class MalformedManifest(EacError):
    """Concept manifest failed to parse or violates the schema."""


class RleLengthMismatch(MalformedManifest):
    """Run lengths do not sum to height * width."""


class NegativeRun(MalformedManifest):
    """A run length is negative."""


class EmptyConceptSet(EacError):
    """Manifest declares zero concepts."""


class DimensionMismatch(EacError):
    """Mask or image dimensions disagree with the declared size."""


class MissingArtifact(EacError):
    """A required file is absent from a model bundle directory."""


class ShapeMismatch(EacError):
    """Classifier head parameters disagree with the backbone output size."""


class ProbeFailure(EacError):
    """Loaded bundle failed its consistency check on a probe image."""


class BackendFailure(EacError):
    """Feature backbone could not run on the given input."""


class CoalitionSizeMismatch(EacError):
    """Coalition bit length does not match the concept set."""


class ConceptAlreadyInCoalition(EacError):
    """Marginal contribution requested for a concept already present."""


class TooManyConcepts(EacError):
    """Exact enumeration requested above the concept-count cutoff."""


class NonFiniteLoss(EacError):
    """Surrogate training produced a NaN or infinite loss."""


class IoFailure(EacError):
    """Report or image output could not be written."""

"""Exception hierarchy.

Every domain failure derives from :class:`FermatMirrorError`; the CLI maps it to
exit status 1, except :class:`TheoremViolation` which maps to 3.
"""


class FermatMirrorError(Exception):
    """Base class for domain errors."""

    code = "domain-error"


class InvalidParameter(FermatMirrorError, ValueError):
    code = "invalid-parameter"


class ResourceLimit(FermatMirrorError):
    code = "resource-limit"


class NotFound(FermatMirrorError, KeyError):
    code = "not-found"

    def __str__(self):
        return Exception.__str__(self)


class NotAdjacent(FermatMirrorError):
    code = "not-adjacent"


class MalformedRepresentation(FermatMirrorError):
    code = "malformed-representation"


class ZeroPoint(FermatMirrorError):
    code = "zero-point"


class UnsupportedDimension(FermatMirrorError):
    code = "unsupported-dimension"


class Incompatible(FermatMirrorError):
    code = "incompatible"


class InvalidStabilityFunction(FermatMirrorError):
    code = "invalid-stability-function"


class MirrorUndefined(FermatMirrorError):
    code = "mirror-undefined"


class ZeroObject(FermatMirrorError):
    code = "zero-object"


class MalformedFraming(FermatMirrorError):
    code = "malformed-framing"


class UnsupportedSupport(FermatMirrorError):
    code = "unsupported-support"


class NotStable(FermatMirrorError):
    code = "not-stable"


class InternalInconsistency(FermatMirrorError):
    code = "internal-inconsistency"


class FieldError(FermatMirrorError):
    code = "field-error"


class SearchExhausted(FermatMirrorError):
    code = "search-exhausted"


class TheoremViolation(FermatMirrorError):
    """A computed object contradicts the moduli/mirror statement being checked."""

    code = "theorem-violation"

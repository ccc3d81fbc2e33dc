"""Exception hierarchy.

Every domain error carries a stable ``code`` string; the CLI emits it in the
``error`` block of its output document and exits with status 1.
"""


class HNChambersError(Exception):
    code = "Error"


class DimensionMismatch(HNChambersError):
    code = "DimensionMismatch"


class ZeroVector(HNChambersError):
    code = "ZeroVector"


class NotAmple(HNChambersError):
    code = "NotAmple"


class NotNef(HNChambersError):
    code = "NotNef"


class RankUnsupported(HNChambersError):
    code = "RankUnsupported"


class MissingGenerators(HNChambersError):
    code = "MissingGenerators"


class AmbiguousWall(HNChambersError):
    code = "AmbiguousWall"

    def __init__(self, labels, message=None):
        self.labels = tuple(labels)
        super().__init__(
            message or "candidates tie for maximal slope: " + ", ".join(self.labels)
        )


class UnsaturatedQuotient(HNChambersError):
    code = "UnsaturatedQuotient"


class NoDestabilizer(HNChambersError):
    code = "NoDestabilizer"


class UnknownAutomorphism(HNChambersError):
    code = "UnknownAutomorphism"


class NotFound(HNChambersError):
    code = "NotFound"


class EmptyInterval(HNChambersError):
    code = "EmptyInterval"


class ChamberNotConstant(HNChambersError):
    code = "ChamberNotConstant"


class MissingInput(HNChambersError):
    code = "MissingInput"


class NotUniruled(HNChambersError):
    code = "NotUniruled"


class InvalidGenus(HNChambersError):
    code = "InvalidGenus"


class ParseError(HNChambersError):
    code = "ParseError"


class ValidationError(HNChambersError):
    code = "ValidationError"

    def __init__(self, path, reason):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")

"""Exception hierarchy.

Everything raised for bad input derives from :class:`InputError` so the CLI
can map it to exit code 1; anything else is treated as an internal failure.
"""


class FogReduceError(Exception):
    """Base class for all package errors."""


class InputError(FogReduceError, ValueError):
    """Invalid data or parameters supplied by the caller."""


# series / core types
class NonMonotoneTimestamps(InputError):
    pass


class NonFiniteValue(InputError):
    pass


class InvalidConfig(InputError):
    pass


class SeriesTooShort(InputError):
    pass


# shape / size problems shared by several modules
class EmptyInput(InputError):
    pass


class ShapeMismatch(InputError):
    pass


# PAA / SAX
class FrameCountOutOfRange(InputError):
    pass


class AlphabetTooSmall(InputError):
    pass


class DegenerateData(InputError):
    pass


class BreakpointShapeMismatch(InputError):
    pass


# interpolation
class TooFewKnots(InputError):
    pass


class OutOfRangeQuery(InputError):
    pass


class DuplicateAbscissa(InputError):
    pass


class UnsortedKnots(InputError):
    pass


class DegreeTooHigh(InputError):
    pass


class IllConditioned(InputError):
    pass


class EmptyCoefficients(InputError):
    pass


# metrics
class DegenerateVariance(InputError):
    pass


class ZeroSamples(InputError):
    pass


class InvalidCounts(InputError):
    pass


class NoOverlap(InputError):
    pass


# pipeline I/O
class ParseError(InputError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DuplicateTimestamp(InputError):
    def __init__(self, variable: str, timestamp: int):
        super().__init__(f"duplicate timestamp {timestamp} for variable {variable!r}")
        self.variable = variable
        self.timestamp = timestamp


class EmptyFile(InputError):
    pass


class InvalidParameters(InputError):
    pass

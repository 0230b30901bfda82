"""Exception hierarchy shared across the package."""

from __future__ import annotations


class VelogenError(Exception):
    """Base class for all package errors."""


class SchemaError(VelogenError):
    """Schema file is malformed or violates a schema invariant.

    Carries the offending parameter name and source line when known.
    """

    def __init__(self, message: str, *, parameter: str | None = None,
                 line: int | None = None):
        self.parameter = parameter
        self.line = line
        loc = []
        if parameter is not None:
            loc.append(f"parameter {parameter!r}")
        if line is not None:
            loc.append(f"line {line}")
        super().__init__(f"{message}" + (f" ({', '.join(loc)})" if loc else ""))


class SchemaVersionMismatch(VelogenError):
    """A design vector was built against a different schema version."""


class InvalidDesignError(VelogenError):
    """A design failed schema validation where a valid one is required."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid design: " + "; ".join(str(v) for v in self.violations))


class DataFormatError(VelogenError):
    """A serialized artifact (XML, PNG, f32 matrix, CSV) cannot be parsed.

    ``offset`` is the byte offset of the first error when it is known.
    """

    def __init__(self, message: str, *, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)


class GeometryError(VelogenError):
    """Internal inconsistency: geometry that constraints should have rejected."""


class SampleCapError(VelogenError):
    """sample_feasible exhausted its attempt cap; carries the stats so far."""

    def __init__(self, message: str, stats):
        self.stats = stats
        super().__init__(message)


class TrainingDivergedError(VelogenError):
    """Training loss became non-finite; carries the partial report."""

    def __init__(self, message: str, report):
        self.report = report
        super().__init__(message)


class BridgeError(VelogenError):
    """The external embedding bridge is unreachable or spoke bad protocol."""


class DatasetError(VelogenError):
    """Dataset directory is missing pieces or inconsistent with its manifest."""

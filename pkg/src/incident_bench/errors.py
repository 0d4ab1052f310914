"""Exception types shared across the package."""


class IncidentBenchError(Exception):
    """Base class for all errors raised by incident_bench."""


class SchemaError(IncidentBenchError, ValueError):
    """Schema is malformed, or data/model does not match a schema."""


class DataParseError(IncidentBenchError, ValueError):
    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class UnknownLevelError(IncidentBenchError, ValueError):
    """A categorical or binary value is not one of the declared levels."""


class DegenerateClassError(IncidentBenchError, ValueError):
    """An operation needs both classes (or a minimum class count) and did not get them."""


class UndefinedMetricError(IncidentBenchError, ValueError):
    """A metric's denominator is zero."""


class ConvergenceError(IncidentBenchError, RuntimeError):
    def __init__(self, message, grad_norm):
        self.grad_norm = grad_norm
        super().__init__(f"{message} (final gradient norm {grad_norm:.3e})")

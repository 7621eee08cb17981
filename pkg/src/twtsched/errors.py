"""Exception types shared across the package."""


class TwtSchedError(Exception):
    """Base class for all twtsched errors."""


class ScheduleError(TwtSchedError):
    """A schedule is degenerate or violates a precondition."""


class QuantizationError(ScheduleError):
    """A requested schedule cannot be expressed within the standard's fields."""


class TableError(TwtSchedError):
    """Base class for throughput-table problems."""


class TableParseError(TableError):
    """A table file is malformed."""


class SparseTableError(TableError):
    """A table is missing cells from its declared grid."""


class DuplicateKeyError(TableError):
    """A table file defines the same (mcs, aa, mf) cell twice."""


class TableLookupError(TableError):
    """A lookup key is not on the table grid."""


class ConfigurationError(TwtSchedError):
    """Problem spec and table disagree (missing MCS, unquantizable grid, ...)."""

"""Deterministic Wi-Fi 6 TWT schedule synthesis and validation.

Quantizes <AA, MF> schedule tuples to standard-compliant wake patterns,
selects per-client tuples by exact proportionally fair optimization with
controlled schedule overlap, and cross-checks the analytical overlap
accounting against microsecond-level replays plus a CSMA/CA baseline.
"""

from .errors import (
    ConfigurationError,
    DuplicateKeyError,
    QuantizationError,
    ScheduleError,
    SparseTableError,
    TableError,
    TableLookupError,
    TableParseError,
    TwtSchedError,
)
from .overlap import (
    HORIZON_US,
    OverlapLossReport,
    WakeInterval,
    effective_throughputs,
    expand_intervals,
    overlap_loss,
)
from .optimizer import (
    ClientAssignment,
    ClientSpec,
    ProblemSpec,
    Solution,
    SweepPoint,
    Violation,
    assign_offsets,
    check_constraints,
    objective,
    oth_sweep,
    solve,
    system_throughput_mbps,
)
from .schedule import (
    AA_TOLERANCE_PP,
    MANTISSA_MAX,
    EXPONENT_MAX,
    ScheduleTuple,
    TwtSchedule,
    WakeIntervalEncoding,
    WT_MAX_US,
    WT_QUANTUM_US,
    aa_of,
    encode_wake_interval,
    is_encodable_sleeptime,
    schedule_from_tuple,
    validate_schedule,
    wt_from_mf,
)
from .simulator import (
    ComparisonReport,
    ComparisonRow,
    DcfParams,
    SimResult,
    compare,
    simulate_csma,
    simulate_twt,
)
from .throughput import (
    DEFAULT_AA_SET,
    DEFAULT_MCS_SET,
    DEFAULT_MF_SET,
    DEFAULT_PHY_RATE_MBPS,
    SyntheticModelParams,
    ThroughputTable,
    generate_synthetic_table,
    load_table,
    save_table,
)

__version__ = "0.1.0"

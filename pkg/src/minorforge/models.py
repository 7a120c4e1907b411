"""
Shared enums, defaults and the experiment record.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Optional


class Mode(Enum):
    """Builder mode."""

    FAITHFUL = "faithful"
    PRACTICAL = "practical"


class TrialStatus(Enum):
    """Outcome of a single trial."""

    OK = "ok"
    INFEASIBLE = "infeasible"
    DEGENERATE = "degenerate"
    EXHAUSTED = "exhausted"
    VERIFY_FAILED = "verify_failed"
    ERROR = "error"


class GraphModel(Enum):
    """Random graph models exposed by the ``sample`` command."""

    GSTAR = "gstar"
    GPRIME = "gprime"
    GSIMPLE = "gsimple"
    HM = "hm"
    GNM = "gnm"
    GNP = "gnp"


class Defaults:
    """Package-wide default knobs."""

    EPSILON = 0.3
    RESAMPLE_CAP = 10**6
    EXACT_CAP = 9
    GREEDY_RESTARTS = 32
    D_CAP = 10**6
    # |lambda| / n^(1/3) above which a run is flagged as outside the window
    WINDOW_RATIO = 0.1
    ORACLE_SAMPLES = 500
    SEED = 0
    SEED_ENV = "MINORFORGE_SEED"
    LOG_LEVEL_ENV = "MINORFORGE_LOG_LEVEL"


CSV_COLUMNS = (
    "command",
    "seed",
    "trial",
    "n",
    "param",
    "epsilon",
    "mode",
    "status",
    "order",
    "order_over_sqrt_n",
    "upper_bound",
    "l1_excess",
    "kernel_order",
    "verify",
    "elapsed_ms",
)


@dataclass
class ExperimentRecord:  # pylint: disable=too-many-instance-attributes
    """One row of experiment output.

    Every field except ``elapsed_ms`` is a function of (command, seed,
    trial, parameters).
    """

    command: str
    seed: int
    trial: int
    n: int
    param: str
    status: TrialStatus
    epsilon: Optional[float] = None
    mode: Optional[Mode] = None
    order: Optional[int] = None
    upper_bound: Optional[int] = None
    l1_excess: Optional[int] = None
    kernel_order: Optional[int] = None
    verify: Optional[bool] = None
    elapsed_ms: float = 0.0
    stage_ratios: list[float] = field(default_factory=list)
    message: str = ""
    software_version: str = ""
    certificate: Optional[dict[str, Any]] = None

    @property
    def order_over_sqrt_n(self) -> Optional[float]:
        """Certificate order normalised by sqrt(n)."""
        if self.order is None or self.n <= 0:
            return None
        return self.order / self.n**0.5

    def to_row(self) -> dict[str, str]:
        """Render the fixed CSV columns as strings."""

        def fmt(value: Any) -> str:
            if value is None:
                return ""
            if isinstance(value, bool):
                return "true" if value else "false"
            if isinstance(value, float):
                return f"{value:.6g}"
            if isinstance(value, Enum):
                return str(value.value)
            return str(value)

        values: dict[str, Any] = {
            "command": self.command,
            "seed": self.seed,
            "trial": self.trial,
            "n": self.n,
            "param": self.param,
            "epsilon": self.epsilon,
            "mode": self.mode,
            "status": self.status,
            "order": self.order,
            "order_over_sqrt_n": self.order_over_sqrt_n,
            "upper_bound": self.upper_bound,
            "l1_excess": self.l1_excess,
            "kernel_order": self.kernel_order,
            "verify": self.verify,
        }
        row = {column: fmt(values[column]) for column in CSV_COLUMNS[:-1]}
        row["elapsed_ms"] = f"{self.elapsed_ms:.1f}"
        return row

    def to_json(self) -> dict[str, Any]:
        """Convert record to JSON-serializable dictionary."""
        data = asdict(self)
        data["status"] = self.status.value
        data["mode"] = self.mode.value if self.mode else None
        return data

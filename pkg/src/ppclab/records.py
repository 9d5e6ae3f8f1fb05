"""Shared result containers: enclosures and verification records."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any

__all__ = ["BoundedValue", "VerificationRecord", "Status", "Kind", "to_jsonable", "dumps"]


class Status:
    PASS = "pass"
    FAIL = "fail"
    VACUOUS = "vacuous"
    NOT_APPLICABLE = "not-applicable"
    INCONCLUSIVE = "inconclusive"


class Kind:
    # only INEQUALITY / IDENTITY records can fail a verification run
    INEQUALITY = "inequality"
    IDENTITY = "identity"
    HYPOTHESIS = "hypothesis"
    DIAGNOSTIC = "diagnostic"


@dataclass(frozen=True)
class BoundedValue:
    """A truncated-series value with a rigorous enclosure.

    The exact quantity lies in ``[estimate - tail_low, estimate + tail_high]``.
    """

    estimate: float
    tail_low: float = 0.0
    tail_high: float = 0.0

    def __post_init__(self):
        for name in ("tail_low", "tail_high"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")

    @property
    def lower(self) -> float:
        return self.estimate - self.tail_low

    @property
    def upper(self) -> float:
        return self.estimate + self.tail_high

    @property
    def width(self) -> float:
        return self.tail_low + self.tail_high

    def contains(self, value: float, atol: float = 0.0) -> bool:
        return self.lower - atol <= value <= self.upper + atol

    def map_monotone(self, fn) -> "BoundedValue":
        """Push the enclosure through a nondecreasing function."""
        mid = fn(self.estimate)
        return BoundedValue(mid, max(0.0, mid - fn(self.lower)), max(0.0, fn(self.upper) - mid))


@dataclass
class VerificationRecord:
    name: str
    lhs: float
    rhs: float
    slack: float
    status: str
    params: dict = field(default_factory=dict)
    kind: str = Kind.INEQUALITY
    details: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.status == Status.FAIL and self.kind in (Kind.INEQUALITY, Kind.IDENTITY)

    def to_dict(self) -> dict:
        return to_jsonable(asdict(self))


def to_jsonable(obj: Any) -> Any:
    """Recursively convert to JSON-safe values; non-finite floats become ``None``."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        obj = obj.item()
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, BoundedValue):
        return to_jsonable(asdict(obj))
    return str(obj)


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, ensure_ascii=False)

"""Exceptions and the global work-budget guard."""

import os

DEFAULT_MAX_WORK = 500_000_000
MAX_WORK_ENV = "PPCLAB_MAX_WORK"


class InsufficientProfileError(ValueError):
    """A spectral profile was truncated below the frequency a caller needs."""


class WorkBudgetExceeded(ValueError):
    pass


class NumericalFailure(RuntimeError):
    """Quadrature or series evaluation did not reach its tolerance."""


def max_work() -> int:
    raw = os.environ.get(MAX_WORK_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_WORK
    value = int(float(raw))
    if value <= 0:
        raise ValueError(f"{MAX_WORK_ENV} must be positive, got {raw!r}")
    return value


def check_work(amount: float, what: str) -> None:
    limit = max_work()
    if amount > limit:
        raise WorkBudgetExceeded(
            f"{what} needs ~{amount:.3g} operations, over the budget of {limit:.3g} "
            f"(raise it with {MAX_WORK_ENV})"
        )

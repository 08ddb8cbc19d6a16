"""Global caps and the error types raised when a construction outgrows them."""

import os

DEFAULT_MONOID_CAP = 5000
DEFAULT_STATE_CAP = 100_000
DEFAULT_ENUMERATION_BOUND = 10


class CapExceeded(RuntimeError):
    """A construction grew past its configured size limit."""

    def __init__(self, what, cap, detail=""):
        self.what = what
        self.cap = cap
        self.detail = detail
        msg = f"{what} exceeded cap {cap}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


def state_cap() -> int:
    raw = os.environ.get("MPJ_STATE_CAP")
    if raw:
        try:
            val = int(raw)
        except ValueError:
            raise ValueError(f"MPJ_STATE_CAP must be an integer, got {raw!r}") from None
        if val <= 0:
            raise ValueError("MPJ_STATE_CAP must be positive")
        return val
    return DEFAULT_STATE_CAP

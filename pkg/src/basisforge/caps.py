"""Enumeration caps shared by every exhaustive computation in the package.

All desk-scale routines refuse to enumerate more than ``resolve_cap()``
elements.  The default of 2**20 can be overridden per call or globally via
the ``BASISFORGE_CAP`` environment variable.
"""

import os

DEFAULT_ENUMERATION_CAP = 2**20

ENV_CAP_VAR = "BASISFORGE_CAP"


class CapExceededError(RuntimeError):
    """Raised when a computation would enumerate past the configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds enumeration cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


def resolve_cap(cap: int | None = None) -> int:
    """Return the effective enumeration cap.

    Explicit argument wins, then the BASISFORGE_CAP environment variable,
    then the built-in default.
    """
    if cap is not None:
        return int(cap)
    env = os.environ.get(ENV_CAP_VAR)
    if env is not None:
        value = int(env)
        if value < 1:
            raise ValueError(f"{ENV_CAP_VAR} must be positive, got {value}")
        return value
    return DEFAULT_ENUMERATION_CAP


def check_cap(what: str, size: int, cap: int | None = None) -> int:
    """Raise CapExceededError if ``size`` exceeds the effective cap."""
    effective = resolve_cap(cap)
    if size > effective:
        raise CapExceededError(what, size, effective)
    return effective

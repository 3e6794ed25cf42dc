"""Run-time resource limits.

Library functions take explicit ``cap`` arguments; the values here can
lower them for a whole computation (the CLI sets them from its flags).
A deadline turns long completions into :class:`ResourceExceeded`.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from contextvars import ContextVar

from .errors import ResourceExceeded

_gb_cap: ContextVar[int | None] = ContextVar("gb_cap", default=None)
_hilbert_cap: ContextVar[int | None] = ContextVar("hilbert_cap", default=None)
_deadline: ContextVar[float | None] = ContextVar("deadline", default=None)


def gb_cap(cap: int) -> int:
    o = _gb_cap.get()
    return cap if o is None else min(cap, o)


def hilbert_cap(cap: int) -> int:
    o = _hilbert_cap.get()
    return cap if o is None else min(cap, o)


def check_deadline() -> None:
    d = _deadline.get()
    if d is not None and time.monotonic() > d:
        raise ResourceExceeded("deadline exceeded")


@contextmanager
def limited(max_gb: int | None = None, max_hilbert: int | None = None, deadline_ms: int | None = None):
    tokens = [
        (_gb_cap, _gb_cap.set(max_gb)),
        (_hilbert_cap, _hilbert_cap.set(max_hilbert)),
        (_deadline, _deadline.set(None if deadline_ms is None else time.monotonic() + deadline_ms / 1000)),
    ]
    try:
        yield
    finally:
        for var, tok in reversed(tokens):
            var.reset(tok)

"""Kernel backend selection.

The compiled extension (mobcover._kernels) is preferred when importable;
otherwise the numpy fallback is used. MOB_BACKEND=python|compiled|auto
overrides the choice at import time, and use_backend() swaps it temporarily
(tests and the backend benchmark rely on this).
"""

from __future__ import annotations

import os
from contextlib import contextmanager

from . import _kernels_py

try:
    from . import _kernels
except ImportError:  # extension not built; fall back silently
    _kernels = None

_BY_NAME = {"python": _kernels_py}
if _kernels is not None:
    _BY_NAME["compiled"] = _kernels


def _initial():
    choice = os.environ.get("MOB_BACKEND", "auto")
    if choice == "auto":
        return _kernels if _kernels is not None else _kernels_py
    if choice not in _BY_NAME:
        raise ImportError(
            f"MOB_BACKEND={choice!r} unavailable; built backends: {sorted(_BY_NAME)}"
        )
    return _BY_NAME[choice]


_active = _initial()


def kernels():
    """The active kernel module."""
    return _active


def backend_name() -> str:
    return _active.NAME


def available_backends() -> list:
    return sorted(_BY_NAME)


@contextmanager
def use_backend(name: str):
    """Temporarily switch the active kernel backend."""
    global _active
    if name not in _BY_NAME:
        raise ValueError(f"unknown backend {name!r}; have {sorted(_BY_NAME)}")
    prev = _active
    _active = _BY_NAME[name]
    try:
        yield
    finally:
        _active = prev

"""Ascent kernel selection: compiled extension when available, numpy otherwise.

Set MARGINDISC_KERNEL=python in the environment to force the fallback (used
by the benchmark and the backend-parity tests).
"""

from __future__ import annotations

import os

from . import fallback

try:
    from . import _core
except ImportError:  # extension not built; the numpy twin covers everything
    _core = None

HAVE_COMPILED = _core is not None

_forced = os.environ.get("MARGINDISC_KERNEL", "").strip().lower()
if _forced == "python" or _core is None:
    BACKEND = "python"
    ascent_margin = fallback.ascent_margin
else:
    BACKEND = "compiled"
    ascent_margin = _core.ascent_margin


def get_kernel(name: str | None = None):
    """Kernel by name ('compiled' | 'python'); default is the active one."""
    if name is None:
        return ascent_margin
    if name == "python":
        return fallback.ascent_margin
    if name == "compiled":
        if _core is None:
            raise ImportError("compiled kernel is not available")
        return _core.ascent_margin
    raise ValueError(f"unknown kernel {name!r}")

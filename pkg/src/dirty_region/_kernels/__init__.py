"""Hot-kernel backend selection.

The compiled Cython extension (``fastkern``) is preferred when present; the
NumPy module (``pure``) is the always-available fallback.  Set the
environment variable ``DIRTY_REGION_BACKEND`` to ``fast`` or ``pure`` to
force one (``fast`` raises if the extension was not built).

Both backends expose: ``fg_grid``, ``c_margin_grid``, ``helper_rate_grid``.
"""

from __future__ import annotations

import os

from . import pure

_FORCED = os.environ.get("DIRTY_REGION_BACKEND", "auto").lower()

try:
    from . import fastkern as _fast
except ImportError:  # extension not compiled
    _fast = None

if _FORCED == "pure":
    _impl = pure
elif _FORCED == "fast":
    if _fast is None:
        raise ImportError(
            "DIRTY_REGION_BACKEND=fast but the compiled kernels are unavailable"
        )
    _impl = _fast
else:
    _impl = _fast if _fast is not None else pure

fg_grid = _impl.fg_grid
c_margin_grid = _impl.c_margin_grid
helper_rate_grid = _impl.helper_rate_grid


def backend_name() -> str:
    """Name of the active kernel backend ('fast' or 'pure')."""
    return "fast" if _impl is not pure else "pure"


def available_backends() -> dict[str, object]:
    """Importable backends keyed by name (for benchmarks and tests)."""
    out: dict[str, object] = {"pure": pure}
    if _fast is not None:
        out["fast"] = _fast
    return out

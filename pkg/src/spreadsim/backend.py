"""Selection of the hot-kernel backend.

Two interchangeable kernel sets exist: a compiled one (numba ``@njit`` scalar
loops) and a vectorized pure-numpy fallback. Both consume the same keyed-draw
protocol, so a simulation produces the identical trajectory under either.
The env flag ``SPREADSIM_BACKEND`` (``numba`` | ``numpy``) pins the choice;
unset, the compiled backend is used when numba imports, else the fallback.
"""

from __future__ import annotations

import os

ENV_FLAG = "SPREADSIM_BACKEND"
_VALID = ("numba", "numpy")

_active_name: str | None = None
_active_module = None
_jit_cache: dict = {}


def _resolve_default() -> str:
    env = os.environ.get(ENV_FLAG, "").strip().lower()
    if env:
        if env not in _VALID:
            raise ValueError(
                f"{ENV_FLAG} must be one of {_VALID}, got {env!r}"
            )
        return env
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


def set_backend(name: str) -> None:
    """Force a backend (used by the benchmark and cross-backend tests)."""
    global _active_name, _active_module
    if name == "numba":
        from . import _kernels_numba as mod
    elif name == "numpy":
        from . import _kernels_numpy as mod
    else:
        raise ValueError(f"unknown backend {name!r}; expected one of {_VALID}")
    _active_name = name
    _active_module = mod


def active_name() -> str:
    if _active_name is None:
        set_backend(_resolve_default())
    return _active_name  # type: ignore[return-value]


def kernels():
    """The active kernel module (resolved lazily on first use)."""
    if _active_module is None:
        set_backend(_resolve_default())
    return _active_module


def jitted(func):
    """Compile ``func`` under the numba backend, return it unchanged otherwise.

    For sequential helper loops (e.g. the preferential-attachment fill) that
    run the same source either way, so results cannot differ by backend.
    """
    if active_name() != "numba":
        return func
    key = (id(func), "numba")
    hit = _jit_cache.get(key)
    if hit is None:
        import numba

        hit = numba.njit(cache=True, nogil=True)(func)
        _jit_cache[key] = hit
    return hit

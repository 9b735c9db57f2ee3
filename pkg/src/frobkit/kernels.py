"""Selects the compiled reduction kernels when available, else the pure-Python ones.

Set FROBKIT_PURE_PYTHON=1 to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
reduce_full = _kernels_py.reduce_full
reduce_ideal = _kernels_py.reduce_ideal
rref_mod_p = _kernels_py.rref_mod_p

if not os.environ.get("FROBKIT_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None
    if _compiled is not None:
        BACKEND = "cython"
        reduce_full = _compiled.reduce_full
        reduce_ideal = _compiled.reduce_ideal
        rref_mod_p = _compiled.rref_mod_p


def use_backend(name: str):
    """Switch backends at runtime (used by the benchmark and the parity tests)."""
    global BACKEND, reduce_full, reduce_ideal, rref_mod_p
    if name == "python":
        mod = _kernels_py
    elif name == "cython":
        from . import _kernels as mod
    else:
        raise ValueError(name)
    BACKEND = name
    reduce_full = mod.reduce_full
    reduce_ideal = mod.reduce_ideal
    rref_mod_p = mod.rref_mod_p

"""Kernel selection: the compiled extension if importable, numpy otherwise.

Set QUATHYP_PURE=1 in the environment to force the numpy versions.
"""
from __future__ import annotations

import os

from . import _fallback

BACKEND = "numpy"
_impl = _fallback

if not os.environ.get("QUATHYP_PURE"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        _impl = _compiled
        BACKEND = "cython"


def ball_norm(*args):
    return _impl.ball_norm(*args)


def key_lemma(*args):
    return _impl.key_lemma(*args)


def backends() -> dict:
    """Available implementations keyed by name (for benchmarks and tests)."""
    out = {"numpy": _fallback}
    try:
        from . import _kernels

        out["cython"] = _kernels
    except ImportError:
        pass
    return out

"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise the numpy
fallback.  ``SUMSET_LAB_BACKEND=python`` forces the fallback.
"""

import os

from . import _pykernels

BACKENDS = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels

if os.environ.get("SUMSET_LAB_BACKEND", "").lower() == "python" or _ckernels is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

_impl = BACKENDS[BACKEND]


def use_backend(name):
    """Switch the active backend ("cython" or "python"); returns the previous one."""
    global BACKEND, _impl
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    prev, BACKEND, _impl = BACKEND, name, BACKENDS[name]
    return prev


def sumset_codes(a, b, moduli, lo, stride, space):
    return _impl.sumset_codes(a, b, moduli, lo, stride, space)


def first_hits(a, b, jmin, moduli, lo, stride, space):
    return _impl.first_hits(a, b, jmin, moduli, lo, stride, space)


def min_union(masks, size):
    return _impl.min_union(masks, size)


def window_scan(reps, starts, n, kmin, kmax):
    return _impl.window_scan(reps, starts, n, kmin, kmax)

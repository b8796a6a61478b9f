"""Dispatch for the hot scanning loops.

The compiled extension ``bandknot._kernels`` is used when it imports and the
moduli fit comfortably in 64-bit arithmetic; otherwise the pure-Python
implementations run. Set ``BANDKNOT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

_FAST_LIMIT = 2**31

if os.environ.get("BANDKNOT_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def _pick(*moduli: int):
    if _compiled is not None and all(0 < m < _FAST_LIMIT for m in moduli):
        return _compiled
    return _kernels_py


def jacobi(a: int, n: int) -> int:
    return _pick(n).jacobi(a % n, n)


def sqrt_scan(x: int, n: int) -> int:
    return _pick(n).sqrt_scan(x % n, n)


def pm_square_scan(c: int, n: int):
    return _pick(n).pm_square_scan(c % n, n)


def first_isotropic(factors, A, N: int):
    return _pick(N, *factors).first_isotropic(tuple(factors), A, N)


def isotropic_elements(factors, A, N: int):
    return _pick(N, *factors).isotropic_elements(tuple(factors), A, N)


def backends():
    """Available implementations, keyed by name (used by tests and benchmarks)."""
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out

"""Hot loops of the protocol search, with a compiled and a numpy backend.

The compiled extension is used when it imports; otherwise the numpy
versions in :mod:`._pykernels` are used. :func:`use_backend` switches at
runtime (benchmarks and cross-backend tests rely on it). Setting
``CATALYTIC_OTTO_BACKEND=python`` forces the fallback at import.

Kernels
-------
partition_size(n, first)
    Number of partial matchings on ``n`` points whose lowest swap starts at
    ``first``.
matching_images(n, a, b)
    Those matchings as an ``(N, n)`` array of involution images.
linear_data(images, weights, d, omega_h, omega_c)
    Cycle maps and linear heat coefficients, one per image row.
fixed_point_vertices(M)
    Vertices of the fixed-point polytope of each column-stochastic map.
"""
import os

from . import _pykernels

try:
    if os.environ.get("CATALYTIC_OTTO_BACKEND", "") == "python":
        raise ImportError("python backend requested")
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels

_active = _ckernels if _ckernels is not None else _pykernels


def available_backends():
    return sorted(_BACKENDS)


def backend_name():
    return "compiled" if _active is _ckernels and _ckernels is not None else "python"


def use_backend(name):
    """Select ``"compiled"`` or ``"python"``; returns the previous name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    previous = backend_name()
    _active = _BACKENDS[name]
    return previous


def partition_size(n, first):
    return _active.partition_size(n, first)


def matching_images(n, a, b):
    return _active.matching_images(n, a, b)


def linear_data(images, weights, d, omega_h, omega_c):
    import numpy as np

    images = np.ascontiguousarray(images, dtype=np.intp)
    weights = np.ascontiguousarray(weights, dtype=float)
    return _active.linear_data(images, weights, int(d), float(omega_h), float(omega_c))


def fixed_point_vertices(M):
    import numpy as np

    return _active.fixed_point_vertices(np.ascontiguousarray(M, dtype=float))

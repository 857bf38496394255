"""Cyclicity constraint on the catalyst.

For a product input ``tau_h (x) tau_c (x) p`` the catalyst marginal after a
permutation is linear in ``p``: ``p -> M p`` with ``M`` column stochastic.
Admissible catalysts are the fixed points of ``M`` in the simplex. Their
extreme points are the stationary distributions of the closed communicating
classes of ``M``, one vertex per class, computed by GTH elimination.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._kernels._pykernels import _gth
from .protocol import SwapProtocol, require_valid, apply_protocol
from .state import (
    EXTENDED,
    Catalyst,
    DomainError,
    ThermalQubit,
    catalyst_marginal,
    composite_initial,
    pair_weights,
)

FEASIBILITY_TOL = 1e-9
IDENTITY_TOL = 1e-13


class CyclicityError(ValueError):
    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True, eq=False)
class CycleMap:
    """Linear data of one work stroke on product inputs.

    ``matrix[l, k]`` is the catalyst mass sent from column k to level l per
    unit of ``p_k``. ``hot_heat`` and ``cold_heat`` give the heats as
    ``Q_h = hot_heat @ p`` and ``Q_c = cold_heat @ p``.
    """

    d: int
    matrix: np.ndarray
    hot_heat: np.ndarray
    cold_heat: np.ndarray


@dataclass(frozen=True, eq=False)
class FixedPointSet:
    vertices: np.ndarray  # (n_vertices, d)

    @property
    def degenerate(self) -> bool:
        return len(self.vertices) > 1

    @property
    def nullity(self) -> int:
        return len(self.vertices)

    @property
    def unique(self) -> np.ndarray | None:
        return self.vertices[0] if len(self.vertices) == 1 else None


def cycle_map(proto: SwapProtocol, hot: ThermalQubit, cold: ThermalQubit) -> CycleMap:
    require_valid(proto)
    M, qh, qc = _kernels.linear_data(
        proto.image_array()[None, :], pair_weights(hot, cold), proto.d, hot.omega, cold.omega
    )
    return CycleMap(proto.d, M[0], qh[0], qc[0])


def is_column_stochastic(matrix, tol=1e-12) -> bool:
    m = np.asarray(matrix, dtype=float)
    return (m.ndim == 2 and m.shape[0] == m.shape[1] and bool(np.all(m >= 0))
            and bool(np.all(np.abs(m.sum(axis=0) - 1.0) <= tol)))


def fixed_points(cmap: CycleMap | np.ndarray) -> FixedPointSet:
    matrix = cmap.matrix if isinstance(cmap, CycleMap) else np.asarray(cmap, dtype=float)
    if not is_column_stochastic(matrix):
        raise DomainError("fixed points need a column-stochastic matrix")
    counts, V = _kernels.fixed_point_vertices(matrix[None])
    return FixedPointSet(V[0, : counts[0]].copy())


def refine_vertex(proto: SwapProtocol, hot: ThermalQubit, cold: ThermalQubit,
                  vertex) -> np.ndarray:
    """Recompute a fixed-point vertex in extended precision.

    The vertex support is its closed class; GTH is rerun on that class with
    ``np.longdouble`` weights. Heat differences at a fixed point cancel by up
    to ``exp((d-1) beta_h omega_h)``, which float64 cannot absorb.
    """
    vertex = np.asarray(vertex)
    support = np.flatnonzero(vertex > 0)
    d = proto.d
    w = pair_weights(hot, cold, EXTENDED)
    M = np.zeros((d, d), dtype=EXTENDED)
    for ell, m in enumerate(proto.image_array()):
        M[m % d, ell % d] += w[ell // d]
    p = np.zeros(d, dtype=EXTENDED)
    p[support] = _gth(M[np.ix_(support, support)].T)
    return p


@dataclass
class CyclicityCheck:
    ok: bool
    residual: float
    # per-level swap-sum form minus marginal-difference form (transpositions only)
    form_gap: float | None = None


def check_cyclicity(proto: SwapProtocol, hot: ThermalQubit, cold: ThermalQubit,
                    cat: Catalyst, tol: float = FEASIBILITY_TOL) -> CyclicityCheck:
    before = composite_initial(hot, cold, cat)
    after = apply_protocol(before, proto)
    change = catalyst_marginal(before) - catalyst_marginal(after)
    residual = float(np.max(np.abs(change)))
    gap = None
    if proto.image is None:
        swap_sum = np.zeros(proto.d)
        for t in proto.swaps:
            u, dn = t.oriented(proto.d, hot.omega, cold.omega)
            flow = before.probs[u] - before.probs[dn]
            swap_sum[u % proto.d] += flow
            swap_sum[dn % proto.d] -= flow
        gap = float(np.max(np.abs(swap_sum - change)))
        if gap > IDENTITY_TOL:
            raise RuntimeError(f"swap-sum and marginal forms of cyclicity disagree by {gap:.3e}")
    return CyclicityCheck(residual <= tol, residual, gap)

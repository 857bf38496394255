"""Exhaustive search over swap protocols and their catalyst fixed points.

Work and heat are linear in the catalyst, so for each protocol only the
vertices of its fixed-point polytope need to be evaluated. The protocol space
is scanned partition by partition (see ``protocol.partitions``); partitions
are independent and may be processed in worker processes, and results are
merged in partition order so the output never depends on ``jobs``.
"""
from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .protocol import (
    PERMUTATIONS,
    SEARCH_CAP,
    TRANSPOSITIONS,
    SwapProtocol,
    check_cap,
    partition_images,
    partitions,
)
from .state import ThermalQubit, pair_weights
from .catalysis import refine_vertex
from .thermo import MIN_WORK, CycleResult, LawsReport, evaluate, laws_check

EFFICIENCY = "efficiency"
WORK = "work"
OBJECTIVES = (EFFICIENCY, WORK)


@dataclass
class SearchTask:
    d: int
    hot: ThermalQubit
    cold: ThermalQubit
    mode: str = TRANSPOSITIONS
    objective: str = EFFICIENCY
    min_work: float = MIN_WORK
    external_swaps: int | None = None
    external_only: bool = False
    top: int | None = None
    force: bool = False
    jobs: int = 1


@dataclass
class Engine:
    protocol: SwapProtocol
    result: CycleResult
    laws: LawsReport
    vertex: int
    external_swaps: int


@dataclass
class SearchResult:
    task: SearchTask
    engines: list[Engine]
    scanned: int
    engines_found: int

    @property
    def best(self) -> Engine | None:
        return self.engines[0] if self.engines else None


@dataclass
class PartitionTable:
    """Every (protocol, fixed-point vertex) evaluation of one partition.

    Vertex slots beyond ``counts[r]`` are padding; their heats are NaN.
    """

    images: np.ndarray     # (P, 4d)
    counts: np.ndarray     # (P,)
    vertices: np.ndarray   # (P, d, d)
    Q_h: np.ndarray        # (P, d)
    Q_c: np.ndarray        # (P, d)
    external: np.ndarray   # (P,) external swaps
    internal: np.ndarray   # (P,) internal swaps

    @property
    def W(self) -> np.ndarray:
        return self.Q_h + self.Q_c

    def select(self, mask) -> "PartitionTable":
        return PartitionTable(self.images[mask], self.counts[mask], self.vertices[mask],
                              self.Q_h[mask], self.Q_c[mask], self.external[mask],
                              self.internal[mask])


def scan_partition(d: int, mode: str, key, hot: ThermalQubit, cold: ThermalQubit) -> PartitionTable:
    images = partition_images(d, mode, key)
    M, qh, qc = _kernels.linear_data(images, pair_weights(hot, cold), d, hot.omega, cold.omega)
    counts, V = _kernels.fixed_point_vertices(M)
    Q_h = (V * qh[:, None, :]).sum(axis=-1)
    Q_c = (V * qc[:, None, :]).sum(axis=-1)
    pad = np.arange(d)[None, :] >= counts[:, None]
    Q_h[pad] = np.nan
    Q_c[pad] = np.nan
    levels = np.arange(4 * d)[None, :]
    crossing = ((images % d) != levels % d).sum(axis=1)
    moved = (images != levels).sum(axis=1)
    # for permutations these count levels leaving/keeping their column, halved
    return PartitionTable(images, counts, V, Q_h, Q_c, crossing // 2, (moved - crossing) // 2)


def _scan_worker(args):
    backend, d, mode, key, hot, cold = args
    _kernels.use_backend(backend)
    return scan_partition(d, mode, key, hot, cold)


def scan(d: int, mode: str, hot: ThermalQubit, cold: ThermalQubit, jobs: int = 1,
         force: bool = False, caps=SEARCH_CAP):
    """Yield a ``PartitionTable`` per partition, in partition order."""
    check_cap(d, mode, force, caps)
    keys = partitions(d, mode)
    if jobs <= 1:
        for key in keys:
            yield scan_partition(d, mode, key, hot, cold)
        return
    backend = _kernels.backend_name()
    args = [(backend, d, mode, key, hot, cold) for key in keys]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_scan_worker, args, chunksize=max(1, len(args) // (4 * jobs)))


def _best_vertices(table: PartitionTable, objective: str, min_work: float):
    """Per protocol: index of the best qualifying vertex, or -1."""
    W = table.W
    with np.errstate(invalid="ignore", divide="ignore"):
        eta = 1.0 + table.Q_c / table.Q_h
    ok = W > min_work  # NaN padding compares False
    if objective == EFFICIENCY:
        primary, secondary = eta, W
    elif objective == WORK:
        primary, secondary = W, eta
    else:
        raise ValueError(f"unknown objective {objective!r}")
    best = np.full(len(W), -1)
    for r in np.flatnonzero(ok.any(axis=1)):
        cands = [(primary[r, v], secondary[r, v], -v) for v in np.flatnonzero(ok[r])]
        best[r] = -max(cands)[2]
    return best, primary, secondary


def optimize(task: SearchTask) -> SearchResult:
    if task.mode not in (TRANSPOSITIONS, PERMUTATIONS):
        raise ValueError(f"unknown mode {task.mode!r}")
    if task.objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {task.objective!r}")
    d = task.d
    candidates = []
    scanned = 0
    for table in scan(d, task.mode, task.hot, task.cold, task.jobs, task.force):
        keep = np.ones(len(table.images), dtype=bool)
        if task.external_swaps is not None:
            keep &= table.external == task.external_swaps
        if task.external_only:
            keep &= table.internal == 0
        scanned += int(keep.sum())
        best, primary, secondary = _best_vertices(table, task.objective, task.min_work)
        for r in np.flatnonzero(keep & (best >= 0)):
            v = best[r]
            proto = SwapProtocol.from_images_row(d, table.images[r], task.mode)
            candidates.append((-primary[r, v], -secondary[r, v], proto.sort_key(), proto,
                               table.vertices[r, v].copy(), int(v), int(table.external[r])))
    candidates.sort(key=lambda c: c[:3])
    found = len(candidates)
    if task.top is not None:
        candidates = candidates[: task.top]
    engines = []
    for *_, proto, p, v, ext in candidates:
        result = evaluate(proto, task.hot, task.cold, refine_vertex(proto, task.hot, task.cold, p))
        engines.append(Engine(proto, result, laws_check(result, task.hot, task.cold), v, ext))
    return SearchResult(task, engines, scanned, found)


@dataclass
class CensusRow:
    external_swaps: int
    protocols: int
    engines: int
    max_work: float
    best_eta: float | None
    best_eta_work: float | None


def external_swap_census(d: int, hot: ThermalQubit, cold: ThermalQubit,
                         min_work: float = MIN_WORK, external_only: bool = False,
                         jobs: int = 1, force: bool = False) -> dict[int, CensusRow]:
    """Best work and efficiency per number of external swaps.

    ``max_work`` is taken over every fixed-point vertex of every protocol in
    the class, engines or not. With ``external_only`` protocols containing
    internal swaps are left out.
    """
    rows: dict[int, CensusRow] = {}
    for table in scan(d, TRANSPOSITIONS, hot, cold, jobs, force):
        if external_only:
            table = table.select(table.internal == 0)
        W = table.W
        with np.errstate(invalid="ignore", divide="ignore"):
            eta = 1.0 + table.Q_c / table.Q_h
        for ext in np.unique(table.external):
            sel = table.external == ext
            row = rows.setdefault(int(ext), CensusRow(int(ext), 0, 0, -np.inf, None, None))
            row.protocols += int(sel.sum())
            w_sel = W[sel]
            row.max_work = max(row.max_work, float(np.nanmax(w_sel)))
            engine = w_sel > min_work
            row.engines += int(engine.any(axis=1).sum())
            if engine.any():
                e_sel = eta[sel][engine]
                i = int(np.argmax(e_sel))
                if row.best_eta is None or e_sel[i] > row.best_eta:
                    row.best_eta = float(e_sel[i])
                    row.best_eta_work = float(w_sel[engine][i])
    return dict(sorted(rows.items()))

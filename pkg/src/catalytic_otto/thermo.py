"""Heat, work and efficiency of one engine cycle, plus the closed forms.

Sign convention: ``Q_k = Tr[H_k (rho - U rho U^dag)]`` is the energy bath k
must resupply after the stroke, so ``W = Q_h + Q_c > 0`` is extracted work.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .catalysis import (
    CyclicityError,
    check_cyclicity,
    cycle_map,
    fixed_points,
    refine_vertex,
)
from .protocol import SwapProtocol, apply_protocol
from .state import EXTENDED, Catalyst, CompositeState, DomainError, ThermalQubit, composite_initial

MAX_WORK = "max-work"
MAX_EFFICIENCY = "max-efficiency"
FIXED_POINT_CHOICES = (MAX_WORK, MAX_EFFICIENCY)

FIRST_LAW_TOL = 1e-12
CLAUSIUS_TOL = 1e-9
MIN_WORK = 1e-12
SERIES_THRESHOLD = 1e-6


@dataclass(frozen=True, eq=False)
class CycleResult:
    Q_h: float
    Q_c: float
    W: float
    eta: float | None
    eta_carnot: float | None
    delta_p: float | None
    catalyst: np.ndarray = field(repr=False)

    def as_dict(self) -> dict:
        return {
            "Q_h": self.Q_h,
            "Q_c": self.Q_c,
            "W": self.W,
            "eta": self.eta,
            "eta_carnot": self.eta_carnot,
            "delta_p": self.delta_p,
            "catalyst": [float(x) for x in self.catalyst],
        }


def carnot_efficiency(hot: ThermalQubit, cold: ThermalQubit) -> float | None:
    if cold.beta <= 0:
        return None
    return 1.0 - hot.beta / cold.beta


def heats(before: CompositeState, after: CompositeState) -> tuple[float, float]:
    if before.d != after.d or (before.omega_h, before.omega_c) != (after.omega_h, after.omega_c):
        raise DomainError("heats need two states of the same system")
    diff = before.probs - after.probs
    return float(before.hot_energies @ diff), float(before.cold_energies @ diff)


def swap_flows(state: CompositeState, proto: SwapProtocol) -> list[float]:
    """``p_up - p_down`` for every swap of a transposition protocol."""
    flows = []
    for t in proto.swaps:
        u, dn = t.oriented(state.d, state.omega_h, state.omega_c)
        flows.append(float(state.probs[u] - state.probs[dn]))
    return flows


def swap_sum_heats(state: CompositeState, proto: SwapProtocol) -> tuple[float, float]:
    """Heats as ``sum_i omega_i^k (p_up - p_down)`` over the swaps."""
    if proto.image is not None:
        raise DomainError("the swap-sum form needs a transposition protocol")
    eh, ec = state.hot_energies, state.cold_energies
    qh = qc = 0.0
    for t, flow in zip(proto.swaps, swap_flows(state, proto)):
        u, dn = t.oriented(state.d, state.omega_h, state.omega_c)
        qh += (eh[u] - eh[dn]) * flow
        qc += (ec[u] - ec[dn]) * flow
    return qh, qc


def hot_flows(state: CompositeState, proto: SwapProtocol) -> list[float]:
    """Per-swap flows measured in the direction that de-excites the hot qubit.

    Swaps that leave the hot qubit alone keep the ``swap_flows`` direction.
    """
    flows = []
    for t in proto.swaps:
        a, b = t.a, t.b
        ha, hb = (a // state.d) >> 1, (b // state.d) >> 1
        if ha == hb:
            a, b = t.oriented(state.d, state.omega_h, state.omega_c)
        elif hb > ha:
            a, b = b, a
        flows.append(state.probs[a] - state.probs[b])
    return flows


def _common_flow(flows: list[float], tol: float = 1e-12) -> float | None:
    if not flows:
        return None
    if max(abs(f - flows[0]) for f in flows) > tol:
        return None
    return float(flows[0])


def select_vertex(vertices: np.ndarray, hot_heat: np.ndarray, cold_heat: np.ndarray,
                  choice: str) -> int:
    """Index of the fixed-point vertex picked by ``choice``."""
    qh = vertices @ hot_heat
    qc = vertices @ cold_heat
    w = qh + qc
    if choice == MAX_EFFICIENCY:
        best = None
        for i in range(len(vertices)):
            if qh[i] <= 0:
                continue
            key = (1.0 + qc[i] / qh[i], w[i])
            if best is None or key > best[0]:
                best = (key, i)
        if best is not None:
            return best[1]
    elif choice != MAX_WORK:
        raise ValueError(f"unknown fixed-point choice {choice!r}")
    return int(np.argmax(w))


def evaluate(proto: SwapProtocol, hot: ThermalQubit, cold: ThermalQubit,
             catalyst_probs) -> CycleResult:
    """Simulate one cycle with the given catalyst, no cyclicity check.

    The composite state is built in extended precision; results are floats.
    """
    p = np.asarray(catalyst_probs)
    if p.dtype != EXTENDED:
        p = p.astype(EXTENDED)
    before = composite_initial(hot, cold, Catalyst(p))
    after = apply_protocol(before, proto)
    diff = before.probs - after.probs
    q_h = before.hot_energies @ diff
    q_c = before.cold_energies @ diff
    # work as the drop of total energy, independent of the heat split
    w = (before.hot_energies + before.cold_energies) @ diff
    eta = float(1 + q_c / q_h) if q_h > 0 else None
    delta_p = _common_flow(hot_flows(before, proto)) if proto.image is None else None
    return CycleResult(float(q_h), float(q_c), float(w), eta, carnot_efficiency(hot, cold),
                       delta_p, before.blocks().sum(axis=0).astype(float))


def run_cycle(proto: SwapProtocol, hot: ThermalQubit, cold: ThermalQubit,
              fixed_point=MAX_WORK) -> CycleResult:
    if isinstance(fixed_point, str):
        cmap = cycle_map(proto, hot, cold)
        vertices = fixed_points(cmap).vertices
        vertex = vertices[select_vertex(vertices, cmap.hot_heat, cmap.cold_heat, fixed_point)]
        p = refine_vertex(proto, hot, cold, vertex)
    else:
        p = np.asarray(fixed_point, dtype=float)
        if p.shape != (proto.d,):
            raise DomainError(f"catalyst vector must have length {proto.d}")
        check = check_cyclicity(proto, hot, cold, Catalyst(p))
        if not check.ok:
            raise CyclicityError(
                f"catalyst is not restored by the protocol (residual {check.residual:.3e})",
                check.residual,
            )
    return evaluate(proto, hot, cold, p)


# closed forms

@dataclass(frozen=True)
class ClosedFormBreakdown:
    d: int
    eta_d: float
    W_d: float
    f_d: float
    delta_p: float
    in_engine_regime: bool


def f_d_printed(d: int, hot: ThermalQubit, cold: ThermalQubit) -> float:
    q, c = hot.boltzmann, cold.boltzmann
    den = (1.0 - q) ** 2
    return ((q ** d - 1.0) * (c - 1.0) + d * (q ** d - c) * (q - 1.0)) / den


def f_d_series(d: int, hot: ThermalQubit, cold: ThermalQubit) -> float:
    """Cancellation-free polynomial form of ``f_d``, finite at ``beta_h omega_h = 0``.

    ``f_d = sum_{m<d} [ q^m (1 + q + ... + q^{d-m-1}) + c (1 + q + ... + q^{m-1}) ]``
    with ``q = exp(-beta_h omega_h)``, ``c = exp(-beta_c omega_c)``.
    """
    q, c = hot.boltzmann, cold.boltzmann
    geo = [0.0]
    for m in range(d):
        geo.append(geo[-1] + q ** m)  # geo[m] = 1 + q + ... + q^{m-1}
    return sum(q ** m * geo[d - m] + c * geo[m] for m in range(d))


def f_d(d: int, hot: ThermalQubit, cold: ThermalQubit) -> float:
    if hot.beta * hot.omega < SERIES_THRESHOLD:
        return f_d_series(d, hot, cold)
    return f_d_printed(d, hot, cold)


def otto_work(hot: ThermalQubit, cold: ThermalQubit) -> float:
    """Work of the catalyst-free Otto swap."""
    q, c = hot.boltzmann, cold.boltzmann
    return (hot.omega - cold.omega) * (q - c) / ((1.0 + q) * (1.0 + c))


def two_otto_work(hot: ThermalQubit, cold: ThermalQubit) -> float:
    """Work with a qubit catalyst, using ``f_2 = 1 + c + 2q``."""
    q, c = hot.boltzmann, cold.boltzmann
    f2 = 1.0 + c + 2.0 * q
    return (2.0 * hot.omega - cold.omega) * (q * q - c) / ((1.0 + q) * (1.0 + c) * f2)


def _check_d(d):
    if int(d) != d or d < 1:
        raise DomainError(f"catalyst dimension must be a positive integer, got {d!r}")
    return int(d)


def closed_form(d: int, hot: ThermalQubit, cold: ThermalQubit) -> ClosedFormBreakdown:
    d = _check_d(d)
    if hot.omega <= 0:
        raise DomainError("closed forms need omega_h > 0")
    q, c = hot.boltzmann, cold.boltzmann
    fd = f_d(d, hot, cold)
    delta_p = (q ** d - c) / ((1.0 + q) * (1.0 + c) * fd)
    return ClosedFormBreakdown(
        d=d,
        eta_d=1.0 - cold.omega / (d * hot.omega),
        W_d=(d * hot.omega - cold.omega) * delta_p,
        f_d=fd,
        delta_p=delta_p,
        in_engine_regime=engine_regime(d, hot, cold),
    )


def engine_regime(d: int, hot: ThermalQubit, cold: ThermalQubit) -> bool:
    """``beta_h/beta_c < omega_c/(d omega_h) < 1``, tested without division."""
    d = _check_d(d)
    if cold.beta <= 0 or hot.omega <= 0:
        raise DomainError("engine regime needs beta_c > 0 and omega_h > 0")
    return hot.beta * d * hot.omega < cold.beta * cold.omega and cold.omega < d * hot.omega


def dimension_range(hot: ThermalQubit, cold: ThermalQubit) -> range:
    """Catalyst dimensions in the open interval ``(w_c/w_h, b_c w_c / (b_h w_h))``."""
    if hot.beta <= 0 or hot.omega <= 0:
        raise DomainError("dimension range needs beta_h > 0 and omega_h > 0")
    if cold.beta <= 0:
        return range(1, 1)
    lo = cold.omega / hot.omega
    hi = cold.beta * cold.omega / (hot.beta * hot.omega)
    start = max(1, math.floor(lo))
    stop = max(start, math.ceil(hi) + 1)
    # float bounds only seed the search; membership follows engine_regime
    while start < stop and not engine_regime(start, hot, cold):
        start += 1
    while stop > start and not engine_regime(stop - 1, hot, cold):
        stop -= 1
    return range(start, stop)


@dataclass
class LawsReport:
    first_law: float
    clausius: float
    carnot_margin: float | None
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {"first_law": self.first_law, "clausius": self.clausius,
                "carnot_margin": self.carnot_margin}


def laws_check(result: CycleResult, hot: ThermalQubit, cold: ThermalQubit,
               first_law_tol=FIRST_LAW_TOL, clausius_tol=CLAUSIUS_TOL,
               min_work=MIN_WORK) -> LawsReport:
    first = abs(result.W - result.Q_h - result.Q_c)
    clausius = hot.beta * result.Q_h + cold.beta * result.Q_c
    eta_c = carnot_efficiency(hot, cold)
    margin = None
    if result.eta is not None and eta_c is not None:
        margin = eta_c - result.eta
    violations = []
    if first > first_law_tol:
        violations.append(f"first law residual {first:.3e}")
    if clausius > clausius_tol:
        violations.append(f"Clausius sum {clausius:.3e} > 0")
    if margin is not None and result.W > min_work and margin <= 0:
        violations.append(f"engine efficiency {result.eta!r} reaches Carnot {eta_c!r}")
    return LawsReport(first, clausius, margin, violations)


def tradeoff_scan(beta_h_omega_h: float, omega_ratios, beta_ratios, dims=(1, 2)) -> list[dict]:
    """Closed-form work and efficiency of the d-Otto engines on a ratio grid.

    Energies are in units of ``omega_h``; each row holds the point and, per
    d, ``W{d}`` and ``eta{d}``.
    """
    rows = []
    hot = ThermalQubit(beta_h_omega_h, 1.0)
    for r_omega in omega_ratios:
        for r_beta in beta_ratios:
            cold = ThermalQubit(r_beta * beta_h_omega_h, r_omega)
            row = {"omega_ratio": float(r_omega), "beta_ratio": float(r_beta)}
            for d in dims:
                cf = closed_form(d, hot, cold)
                row[f"W{d}"] = cf.W_d
                row[f"eta{d}"] = cf.eta_d
            rows.append(row)
    return rows

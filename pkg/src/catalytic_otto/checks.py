"""Invariant suite behind ``catalytic-otto check``.

Each family returns a ``FamilyResult``; the suite passes iff all do.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from .catalysis import cycle_map, fixed_points
from .protocol import TRANSPOSITIONS, apply_protocol, d_otto_protocol, enumerate_protocols
from .state import Catalyst, ThermalQubit, composite_initial
from .thermo import (
    CLAUSIUS_TOL,
    FIRST_LAW_TOL,
    MIN_WORK,
    carnot_efficiency,
    closed_form,
    engine_regime,
    evaluate,
    heats,
    otto_work,
    run_cycle,
    two_otto_work,
)

GRIDS = ("small", "default")


@dataclass
class FamilyResult:
    name: str
    passed: bool
    checked: int
    worst: float
    detail: str = ""
    seconds: float = 0.0


def law_parameter_sets(grid: str = "default") -> list[tuple[ThermalQubit, ThermalQubit]]:
    """Bath settings (omega_h = 1) for the exhaustive law checks.

    36 by default; the small grid keeps four of them, each of which admits an
    engine for d=1 or d=2 so the Carnot family is not vacuous.
    """
    sets = []
    for beta_h, ratio, omega_c in itertools.product((0.1, 0.5, 1.0, 2.0), (1.5, 4.0, 10.0),
                                                    (0.3, 0.8, 1.5)):
        sets.append((ThermalQubit(beta_h, 1.0), ThermalQubit(beta_h * ratio, omega_c)))
    return sets[4::8] if grid == "small" else sets


def regime_grid(d: int, n: int):
    """``n**3`` points strictly inside the d-Otto engine regime (omega_h = 1).

    ``beta_h omega_h`` spans [0.01, 2], ``beta_c/beta_h`` spans [1.5, 20] and
    ``omega_c`` sits at fractions 0.05..0.95 of the open interval
    ``(d beta_h/beta_c, d)``.
    """
    for x, ratio, t in itertools.product(np.geomspace(0.01, 2.0, n), np.geomspace(1.5, 20.0, n),
                                         np.linspace(0.05, 0.95, n)):
        lo = d / ratio
        omega_c = lo + t * (d - lo)
        yield ThermalQubit(float(x), 1.0), ThermalQubit(float(x * ratio), float(omega_c))


def check_laws(grid: str = "default", dims=(1, 2)) -> list[FamilyResult]:
    """First law, Clausius and Carnot over every protocol and fixed-point vertex."""
    t0 = time.perf_counter()
    first = clausius = 0.0
    worst_margin = np.inf
    count = 0
    for d in dims:
        protocols = list(enumerate_protocols(d, TRANSPOSITIONS))
        for hot, cold in law_parameter_sets(grid):
            eta_c = carnot_efficiency(hot, cold)
            for proto in protocols:
                cmap = cycle_map(proto, hot, cold)
                for p in fixed_points(cmap).vertices:
                    before = composite_initial(hot, cold, Catalyst(p))
                    after = apply_protocol(before, proto)
                    q_h, q_c = heats(before, after)
                    w = float((before.hot_energies + before.cold_energies)
                              @ (before.probs - after.probs))
                    first = max(first, abs(w - q_h - q_c))
                    clausius = max(clausius, hot.beta * q_h + cold.beta * q_c)
                    if w > MIN_WORK and q_h > 0:
                        worst_margin = min(worst_margin, eta_c - (1.0 + q_c / q_h))
                    count += 1
    dt = time.perf_counter() - t0
    return [
        FamilyResult("first-law", first <= FIRST_LAW_TOL, count, first,
                     f"max |W - Q_h - Q_c| = {first:.3e}", dt),
        FamilyResult("clausius", clausius <= CLAUSIUS_TOL, count, clausius,
                     f"max beta_h Q_h + beta_c Q_c = {clausius:.3e}", 0.0),
        FamilyResult("carnot", worst_margin > 0, count, worst_margin,
                     f"min eta_C - eta over engines = {worst_margin:.3e}", 0.0),
    ]


def check_formula_vs_simulation(grid: str = "default", dims=range(1, 9)) -> FamilyResult:
    t0 = time.perf_counter()
    n = 3 if grid == "small" else 8
    worst_eta = worst_w = 0.0
    count = 0
    for d in dims:
        proto = d_otto_protocol(d)
        for hot, cold in regime_grid(d, n):
            res = run_cycle(proto, hot, cold)
            cf = closed_form(d, hot, cold)
            worst_eta = max(worst_eta, abs(res.eta - cf.eta_d))
            worst_w = max(worst_w, abs(res.W - cf.W_d) / abs(cf.W_d))
            count += 1
    ok = worst_eta <= 1e-12 and worst_w <= 1e-10
    return FamilyResult("formula-vs-simulation", ok, count, max(worst_eta, worst_w),
                        f"max |eta - eta_d| = {worst_eta:.3e}, max rel |W - W_d| = {worst_w:.3e}",
                        time.perf_counter() - t0)


def check_regime_sign(grid: str = "default", margin: float = 1e-9) -> FamilyResult:
    t0 = time.perf_counter()
    n = 6 if grid == "small" else 20
    mismatches = count = 0
    for d in range(1, 9):
        for x, ratio, r_omega in itertools.product(np.geomspace(0.01, 3.0, n),
                                                   np.geomspace(1.0, 30.0, n),
                                                   np.linspace(0.05, 9.0, n)):
            hot, cold = ThermalQubit(float(x), 1.0), ThermalQubit(float(x * ratio), float(r_omega))
            if (abs(cold.omega - d * hot.omega) <= margin
                    or abs(cold.beta * cold.omega - d * hot.beta * hot.omega) <= margin):
                continue
            w = closed_form(d, hot, cold).W_d
            mismatches += (w > 0) != engine_regime(d, hot, cold)
            count += 1
    return FamilyResult("regime-sign", mismatches == 0, count, float(mismatches),
                        f"{mismatches} sign disagreements", time.perf_counter() - t0)


def check_specializations(grid: str = "default") -> FamilyResult:
    t0 = time.perf_counter()
    n = 4 if grid == "small" else 12
    worst = 0.0
    count = 0
    for x, ratio, r_omega in itertools.product(np.geomspace(0.01, 3.0, n), np.geomspace(1.5, 20.0, n),
                                               np.linspace(0.1, 3.0, n)):
        hot, cold = ThermalQubit(float(x), 1.0), ThermalQubit(float(x * ratio), float(r_omega))
        for d, reference in ((1, otto_work(hot, cold)), (2, two_otto_work(hot, cold))):
            w = closed_form(d, hot, cold).W_d
            if reference != 0:
                worst = max(worst, abs(w - reference) / abs(reference))
            count += 1
    return FamilyResult("fd2-identity", worst <= 1e-12, count, worst,
                        f"max rel |W_d - W_1/W_2| = {worst:.3e}", time.perf_counter() - t0)


def run_checks(grid: str = "default") -> list[FamilyResult]:
    if grid not in GRIDS:
        raise ValueError(f"unknown grid {grid!r}; choose from {GRIDS}")
    results = check_laws(grid)
    results.append(check_formula_vs_simulation(grid))
    results.append(check_regime_sign(grid))
    results.append(check_specializations(grid))
    return results

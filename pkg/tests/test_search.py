import numpy as np
import pytest

from catalytic_otto.catalysis import cycle_map, fixed_points
from catalytic_otto.protocol import (
    PERMUTATIONS,
    EnumerationCapError,
    enumerate_protocols,
)
from catalytic_otto.search import (
    EFFICIENCY,
    WORK,
    SearchTask,
    external_swap_census,
    optimize,
    scan,
)
from catalytic_otto.state import ThermalQubit
from catalytic_otto.thermo import closed_form, evaluate, otto_work

HOT, COLD = ThermalQubit(0.3, 1.0), ThermalQubit(3.0, 0.5)


def brute_force(d, hot, cold, objective):
    """Best (eta, W) over every protocol and vertex, one cycle at a time."""
    best = None
    for proto in enumerate_protocols(d):
        for p in fixed_points(cycle_map(proto, hot, cold)).vertices:
            res = evaluate(proto, hot, cold, p)
            if res.W <= 1e-12:
                continue
            key = (res.eta, res.W) if objective == EFFICIENCY else (res.W, res.eta)
            best = key if best is None or key > best else best
    return best


@pytest.mark.parametrize("objective", [EFFICIENCY, WORK])
def test_optimize_matches_brute_force(objective):
    res = optimize(SearchTask(2, HOT, COLD, objective=objective, top=3))
    top = res.best.result
    key = (top.eta, top.W) if objective == EFFICIENCY else (top.W, top.eta)
    assert np.allclose(key, brute_force(2, HOT, COLD, objective), rtol=1e-12)
    assert res.scanned == 763
    assert all(e.laws.ok for e in res.engines)


def test_ranking_is_sorted():
    res = optimize(SearchTask(2, HOT, COLD, objective=WORK, top=None))
    ws = [e.result.W for e in res.engines]
    assert all(a >= b - 1e-15 for a, b in zip(ws, ws[1:]))
    assert len(res.engines) == res.engines_found


def test_d3_best_efficiency_is_eta3():
    res = optimize(SearchTask(3, HOT, COLD, top=1))
    assert res.best.result.eta == pytest.approx(closed_form(3, HOT, COLD).eta_d, abs=1e-12)
    assert res.scanned == 140151


def test_outside_d2_regime_only_otto_like_engines():
    # d=1 regime holds (0.3 < 3*0.95), d=2 fails (beta_c w_c < 2 beta_h w_h)
    hot, cold = ThermalQubit(1.0, 1.0), ThermalQubit(1.9, 0.95)
    cf2 = closed_form(2, hot, cold)
    assert cf2.W_d < 0 and closed_form(1, hot, cold).W_d > 0
    res = optimize(SearchTask(2, hot, cold, objective=WORK, top=None))
    best = res.best
    assert best.result.W == pytest.approx(otto_work(hot, cold), rel=1e-9)
    assert best.result.eta == pytest.approx(1 - 0.95, abs=1e-12)
    assert max(e.result.eta for e in res.engines) == pytest.approx(0.05, abs=1e-12)


def test_external_swap_filter():
    res = optimize(SearchTask(2, HOT, COLD, external_swaps=2, external_only=True, top=None))
    assert res.scanned == 72
    assert all(e.external_swaps == 2 and e.protocol.external_count() == 2 for e in res.engines)


def test_census_totals():
    inclusive = external_swap_census(2, HOT, COLD)
    assert sum(r.protocols for r in inclusive.values()) == 763
    assert inclusive[0].max_work == pytest.approx(otto_work(HOT, COLD), rel=1e-12)
    pure = external_swap_census(2, HOT, COLD, external_only=True)
    assert {k: r.protocols for k, r in pure.items()} == {1: 16, 2: 72, 3: 96, 4: 24}
    assert abs(pure[1].max_work) <= 1e-12


def test_cap_and_parallel_scan():
    with pytest.raises(EnumerationCapError):
        optimize(SearchTask(4, HOT, COLD))
    with pytest.raises(EnumerationCapError):
        optimize(SearchTask(3, HOT, COLD, mode=PERMUTATIONS))
    serial = list(scan(2, "transpositions", HOT, COLD))
    parallel = list(scan(2, "transpositions", HOT, COLD, jobs=2))
    assert len(serial) == len(parallel)
    for a, b in zip(serial, parallel):
        assert np.array_equal(a.images, b.images)
        assert np.array_equal(a.vertices, b.vertices)


def test_bad_task():
    with pytest.raises(ValueError):
        optimize(SearchTask(1, HOT, COLD, objective="speed"))
    with pytest.raises(ValueError):
        optimize(SearchTask(1, HOT, COLD, mode="rotations"))

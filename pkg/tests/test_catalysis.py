import itertools

import numpy as np
import pytest

from catalytic_otto.catalysis import (
    check_cyclicity,
    cycle_map,
    fixed_points,
    is_column_stochastic,
)
from catalytic_otto.protocol import (
    TRANSPOSITIONS,
    SwapProtocol,
    apply_protocol,
    d_otto_protocol,
    enumerate_protocols,
    partition_images,
)
from catalytic_otto.state import Catalyst, DomainError, ThermalQubit, catalyst_marginal, composite_initial

HOT, COLD = ThermalQubit(0.3, 1.0), ThermalQubit(3.0, 0.5)
rng = np.random.default_rng(7)


def simulate(proto, p, hot=HOT, cold=COLD):
    state = composite_initial(hot, cold, Catalyst(p))
    return catalyst_marginal(apply_protocol(state, proto))


def support_oracle(M, tol=1e-9):
    """Fixed-point vertices by brute force: one lstsq solve per support."""
    d = len(M)
    found = []
    for size in range(1, d + 1):
        for support in itertools.combinations(range(d), size):
            idx = list(support)
            A = np.vstack([(M - np.eye(d))[:, idx], np.ones(size)])
            b = np.zeros(d + 1)
            b[-1] = 1.0
            x, *_ = np.linalg.lstsq(A, b, rcond=None)
            if np.all(x > tol) and np.linalg.norm(A @ x - b) < 1e-10:
                p = np.zeros(d)
                p[idx] = x
                # keep only supports that are minimal (vertices)
                if not any(set(np.flatnonzero(v > tol)) < set(idx) for v in found):
                    found.append(p)
    return found


def test_cycle_map_matches_simulation():
    protos = list(enumerate_protocols(2))[::11] + [d_otto_protocol(3), d_otto_protocol(4)]
    for proto in protos:
        cmap = cycle_map(proto, HOT, COLD)
        assert is_column_stochastic(cmap.matrix)
        for _ in range(3):
            p = rng.dirichlet(np.ones(proto.d))
            assert np.max(np.abs(cmap.matrix @ p - simulate(proto, p))) <= 1e-13


def test_d2_otto_columns_by_hand():
    cmap = cycle_map(d_otto_protocol(2), HOT, COLD)
    for k in range(2):
        e = np.eye(2)[k]
        assert np.allclose(cmap.matrix[:, k], simulate(d_otto_protocol(2), e), atol=1e-15)


def test_identity_and_internal_maps():
    assert np.array_equal(cycle_map(SwapProtocol(3), HOT, COLD).matrix, np.eye(3))
    internal = [p for p in enumerate_protocols(2) if all(not t.is_external(2) for t in p.swaps)]
    assert internal
    for proto in internal:
        assert np.array_equal(cycle_map(proto, HOT, COLD).matrix, np.eye(2))


def test_fixed_points_examples():
    fp = fixed_points(np.eye(2))
    assert fp.degenerate and fp.nullity == 2
    assert sorted(map(tuple, fp.vertices)) == [(0.0, 1.0), (1.0, 0.0)]
    fp = fixed_points(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert fp.unique.tolist() == [0.5, 0.5]
    with pytest.raises(DomainError):
        fixed_points(np.array([[0.5, 0.2], [0.2, 0.5]]))


@pytest.mark.parametrize("d", [2, 3])
def test_fixed_points_against_support_oracle(d):
    if d == 2:
        protos = list(enumerate_protocols(2))
    else:
        rows = partition_images(3, TRANSPOSITIONS, (0, 5))[::97]
        protos = [SwapProtocol.from_images_row(3, row, TRANSPOSITIONS) for row in rows]
    for proto in protos:
        M = cycle_map(proto, HOT, COLD).matrix
        V = fixed_points(M).vertices
        assert len(V) >= 1
        for v in V:
            assert np.all(v >= 0) and abs(v.sum() - 1) <= 1e-12
            assert np.max(np.abs(M @ v - v)) <= 1e-9
        oracle = support_oracle(M)
        assert len(oracle) == len(V)
        for v in V:
            assert min(np.max(np.abs(v - o)) for o in oracle) <= 1e-9


def test_random_stochastic_matrices():
    for _ in range(50):
        d = rng.integers(1, 6)
        M = rng.dirichlet(np.ones(d), size=d).T
        M[rng.random((d, d)) < 0.5] = 0.0
        M += np.eye(d) * (M.sum(axis=0) == 0)
        M /= M.sum(axis=0)
        V = fixed_points(M).vertices
        oracle = support_oracle(M)
        assert len(V) == len(oracle)
        for v in V:
            assert np.max(np.abs(M @ v - v)) <= 1e-12


def test_d_otto_fixed_point_unique_in_regime():
    for d in range(1, 7):
        fp = fixed_points(cycle_map(d_otto_protocol(d), HOT, ThermalQubit(3.0, 0.5)))
        assert fp.unique is not None


def test_check_cyclicity():
    res = check_cyclicity(SwapProtocol(2), HOT, COLD, Catalyst([0.3, 0.7]))
    assert res.ok and res.residual == 0.0
    proto = d_otto_protocol(3)
    p = fixed_points(cycle_map(proto, HOT, COLD)).unique
    res = check_cyclicity(proto, HOT, COLD, Catalyst(p))
    assert res.ok and res.residual <= 1e-10 and res.form_gap <= 1e-13
    res = check_cyclicity(proto, HOT, COLD, Catalyst.pure(3, 0))
    assert not res.ok and res.residual > 1e-3


def test_swap_sum_form_agrees_everywhere():
    for proto in list(enumerate_protocols(2))[::5]:
        p = rng.dirichlet(np.ones(2))
        res = check_cyclicity(proto, HOT, COLD, Catalyst(p))
        assert res.form_gap <= 1e-13

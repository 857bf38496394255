"""Thermal qubits, diagonal catalysts and the composite product state.

Levels of the composite system ``hot (x) cold (x) catalyst`` are addressed by
a flat index ``l = (2*i + j)*d + k`` with ``i`` the hot qubit, ``j`` the cold
qubit and ``k = 0..d-1`` the catalyst level.

Probability vectors are float64 unless built from ``np.longdouble`` input, in
which case the extended precision is kept (used for cycle evaluation).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class DomainError(ValueError):
    """Raised for inputs outside an operation's domain."""


EXTENDED = np.longdouble


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=EXTENDED if np.asarray(a).dtype == EXTENDED else float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class ThermalQubit:
    """Gibbs state of a two-level system with Hamiltonian ``omega |1><1|``."""

    beta: float
    omega: float

    def __post_init__(self):
        for name in ("beta", "omega"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise DomainError(f"{name} must be a real number, got {value!r}") from None
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def boltzmann(self) -> float:
        return math.exp(-self.beta * self.omega)

    @property
    def partition_function(self) -> float:
        return 1.0 + self.boltzmann

    @property
    def populations(self) -> tuple[float, float]:
        z = self.partition_function
        return 1.0 / z, self.boltzmann / z


def thermal_qubit(beta: float, omega: float) -> ThermalQubit:
    return ThermalQubit(float(beta), float(omega))


@dataclass(frozen=True, eq=False)
class Catalyst:
    probs: np.ndarray

    def __post_init__(self):
        p = _frozen(self.probs)
        if p.ndim != 1 or p.size < 1:
            raise DomainError("catalyst needs a non-empty 1-d probability vector")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise DomainError("catalyst probabilities must be finite and >= 0")
        if abs(p.sum() - 1.0) > 1e-12:
            raise DomainError(f"catalyst probabilities sum to {p.sum()!r}, not 1")
        object.__setattr__(self, "probs", p)

    @property
    def dim(self) -> int:
        return self.probs.size

    @classmethod
    def uniform(cls, d: int) -> "Catalyst":
        return cls(np.full(d, 1.0 / d))

    @classmethod
    def pure(cls, d: int, k: int = 0) -> "Catalyst":
        p = np.zeros(d)
        p[k] = 1.0
        return cls(p)


def catalyst(probs: Sequence[float]) -> Catalyst:
    return Catalyst(np.asarray(probs, dtype=float))


def flat_index(i: int, j: int, k: int, d: int) -> int:
    if i not in (0, 1) or j not in (0, 1) or not 0 <= k < d:
        raise DomainError(f"level ({i}, {j}, {k}) out of range for d={d}")
    return (2 * i + j) * d + k


def split_index(ell: int, d: int) -> tuple[int, int, int]:
    if not 0 <= ell < 4 * d:
        raise DomainError(f"flat index {ell} out of range for d={d}")
    ij, k = divmod(ell, d)
    return ij >> 1, ij & 1, k


def pair_weights(hot: ThermalQubit, cold: ThermalQubit, dtype=np.float64) -> np.ndarray:
    """Populations of ``tau_h (x) tau_c`` in the order 00, 01, 10, 11."""
    if dtype == np.float64:
        return np.outer(hot.populations, cold.populations).ravel()
    pops = []
    for q in (hot, cold):
        b = np.exp(-dtype(q.beta) * dtype(q.omega))
        pops.append(np.array([1, b], dtype=dtype) / (1 + b))
    return np.outer(*pops).ravel()


@dataclass(frozen=True, eq=False)
class CompositeState:
    d: int
    probs: np.ndarray
    omega_h: float
    omega_c: float

    def __post_init__(self):
        p = _frozen(self.probs)
        if p.shape != (4 * self.d,):
            raise DomainError(f"expected {4 * self.d} probabilities, got shape {p.shape}")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
            raise DomainError("composite probabilities must be >= 0 and sum to 1")
        object.__setattr__(self, "probs", p)

    @property
    def hot_energies(self) -> np.ndarray:
        return np.repeat(np.array([0.0, 0.0, self.omega_h, self.omega_h], dtype=self.probs.dtype), self.d)

    @property
    def cold_energies(self) -> np.ndarray:
        return np.repeat(np.array([0.0, self.omega_c, 0.0, self.omega_c], dtype=self.probs.dtype), self.d)

    def blocks(self) -> np.ndarray:
        """Probabilities reshaped to ``(4, d)``: rows 00, 01, 10, 11."""
        return self.probs.reshape(4, self.d)

    def with_probs(self, probs) -> "CompositeState":
        return CompositeState(self.d, probs, self.omega_h, self.omega_c)


def composite_initial(hot: ThermalQubit, cold: ThermalQubit, cat: Catalyst) -> CompositeState:
    probs = np.outer(pair_weights(hot, cold, cat.probs.dtype.type), cat.probs).ravel()
    return CompositeState(cat.dim, probs, hot.omega, cold.omega)


def catalyst_marginal(state: CompositeState) -> np.ndarray:
    return state.blocks().sum(axis=0)

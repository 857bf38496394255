"""Swap protocols: construction, validation, application and enumeration.

A protocol is either a set of disjoint transpositions of composite levels or,
in permutation mode, an explicit image array ``U|l> = |image[l]>``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from . import _kernels
from .state import CompositeState, DomainError, flat_index, split_index

TRANSPOSITIONS = "transpositions"
PERMUTATIONS = "permutations"

# caps on the number of composite levels 4d: enumeration, exhaustive search
ENUMERATION_CAP = {TRANSPOSITIONS: 16, PERMUTATIONS: 8}
SEARCH_CAP = {TRANSPOSITIONS: 12, PERMUTATIONS: 8}


class ProtocolError(ValueError):
    pass


class EnumerationCapError(ProtocolError):
    pass


@dataclass(frozen=True, order=True)
class Transposition:
    a: int
    b: int

    def __post_init__(self):
        if self.a > self.b:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    def oriented(self, d: int, omega_h: float, omega_c: float) -> tuple[int, int]:
        """Return ``(up, down)``.

        ``up`` has the larger total energy, then the larger hot energy; a
        remaining tie leaves the smaller index up.
        """
        (ia, ja, _), (ib, jb, _) = split_index(self.a, d), split_index(self.b, d)
        ka = (ia * omega_h + ja * omega_c, ia * omega_h)
        kb = (ib * omega_h + jb * omega_c, ib * omega_h)
        return (self.b, self.a) if kb > ka else (self.a, self.b)

    def is_external(self, d: int) -> bool:
        return self.a % d != self.b % d


@dataclass(frozen=True)
class SwapProtocol:
    d: int
    swaps: tuple[Transposition, ...] = ()
    image: tuple[int, ...] | None = field(default=None)

    @classmethod
    def from_pairs(cls, d: int, pairs: Iterable[tuple[int, int]]) -> "SwapProtocol":
        swaps = sorted(Transposition(int(a), int(b)) for a, b in pairs)
        return cls(d, tuple(swaps))

    @classmethod
    def from_levels(cls, d: int, pairs) -> "SwapProtocol":
        """Build from ``((i, j, k), (i', j', k'))`` level pairs."""
        return cls.from_pairs(d, ((flat_index(*u, d), flat_index(*v, d)) for u, v in pairs))

    @classmethod
    def from_image(cls, d: int, image: Iterable[int]) -> "SwapProtocol":
        return cls(d, (), tuple(int(x) for x in image))

    @classmethod
    def from_images_row(cls, d: int, row, mode: str) -> "SwapProtocol":
        if mode == PERMUTATIONS:
            return cls.from_image(d, row)
        return cls.from_pairs(d, ((a, int(b)) for a, b in enumerate(row) if a < b))

    @property
    def mode(self) -> str:
        return PERMUTATIONS if self.image is not None else TRANSPOSITIONS

    @property
    def levels(self) -> int:
        return 4 * self.d

    def image_array(self) -> np.ndarray:
        if self.image is not None:
            return np.array(self.image, dtype=np.intp)
        img = np.arange(self.levels, dtype=np.intp)
        for t in self.swaps:
            img[t.a], img[t.b] = t.b, t.a
        return img

    def external_count(self) -> int:
        if self.image is not None:
            return int(sum(ell % self.d != m % self.d for ell, m in enumerate(self.image)))
        return sum(t.is_external(self.d) for t in self.swaps)

    def sort_key(self) -> tuple:
        if self.image is not None:
            return tuple(self.image)
        return tuple((t.a, t.b) for t in self.swaps)


@dataclass
class ProtocolReport:
    violations: list[str]
    internal: int = 0
    external: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_protocol(proto: SwapProtocol) -> ProtocolReport:
    n = proto.levels
    violations = []
    if proto.d < 1:
        return ProtocolReport([f"catalyst dimension must be >= 1, got {proto.d}"])
    if proto.image is not None:
        if len(proto.image) != n:
            violations.append(f"image has length {len(proto.image)}, expected {n}")
        bad = [x for x in proto.image if not 0 <= x < n]
        if bad:
            violations.append(f"image entries out of range: {bad}")
        if len(set(proto.image)) != len(proto.image):
            violations.append("image is not a bijection")
        if violations:
            return ProtocolReport(violations)
        moved = sum(1 for ell, m in enumerate(proto.image) if ell != m)
        external = proto.external_count()
        return ProtocolReport([], internal=moved - external, external=external)

    seen: dict[int, int] = {}
    internal = external = 0
    for t in proto.swaps:
        if t.a == t.b:
            violations.append(f"swap ({t.a}, {t.b}) is not a transposition")
        for x in (t.a, t.b):
            if not 0 <= x < n:
                violations.append(f"index {x} out of range [0, {n})")
            seen[x] = seen.get(x, 0) + 1
        if t.is_external(proto.d):
            external += 1
        else:
            internal += 1
    for x, count in sorted(seen.items()):
        if count > 1:
            violations.append(f"index {x} repeated")
    return ProtocolReport(violations, internal, external)


def require_valid(proto: SwapProtocol, d: int | None = None):
    report = validate_protocol(proto)
    if not report.ok:
        raise ProtocolError("; ".join(report.violations))
    if d is not None and proto.d != d:
        raise ProtocolError(f"protocol is for d={proto.d}, state has d={d}")


def apply_protocol(state: CompositeState, proto: SwapProtocol) -> CompositeState:
    require_valid(proto, state.d)
    after = np.empty_like(state.probs)
    after[proto.image_array()] = state.probs
    return state.with_probs(after)


def d_otto_protocol(d: int) -> SwapProtocol:
    """The d-swap protocol reaching efficiency ``1 - omega_c / (d omega_h)``.

    Up levels are ``|1 0 k>`` for every catalyst column k. Down levels are
    ``|0 0 k>`` for k < d-1 and ``|0 1 d-1>`` in the last column. Up level k
    is swapped with the down level of column ``(k+1) mod d``, so the columns
    form one cycle and cyclicity forces a single common flow through all
    swaps. d=1 gives the Otto swap ``|10> <-> |01>``.
    """
    if int(d) != d or d < 1:
        raise DomainError(f"catalyst dimension must be a positive integer, got {d!r}")
    d = int(d)
    downs = [(0, 0, k) for k in range(d - 1)] + [(0, 1, d - 1)]
    pairs = [((1, 0, k), downs[(k + 1) % d]) for k in range(d)]
    return SwapProtocol.from_levels(d, pairs)


def count_matchings(n: int) -> int:
    """Number of non-empty partial matchings on ``n`` points."""
    return sum(math.comb(n, 2 * k) * math.prod(range(1, 2 * k, 2)) for k in range(n // 2 + 1)) - 1


def check_cap(d: int, mode: str, force: bool, caps=ENUMERATION_CAP):
    if mode not in caps:
        raise ProtocolError(f"unknown enumeration mode {mode!r}")
    if d < 1:
        raise DomainError(f"catalyst dimension must be >= 1, got {d}")
    cap = caps[mode]
    if 4 * d > cap and not force:
        raise EnumerationCapError(
            f"{mode} enumeration at d={d} covers {4 * d} levels; the default cap is "
            f"{cap} levels (d <= {cap // 4}). Pass force=True (--force) to run it anyway."
        )


def partitions(d: int, mode: str = TRANSPOSITIONS) -> list[tuple[int, int]]:
    """Partition keys of the protocol space.

    Transposition protocols are split by their lowest swap ``(a, b)``;
    permutations by the image of level 0.
    """
    n = 4 * d
    if mode == PERMUTATIONS:
        return [(0, m) for m in range(n)]
    return [(a, b) for a in range(n - 1) for b in range(a + 1, n)]


def partition_images(d: int, mode: str, key: tuple[int, int]) -> np.ndarray:
    """Image arrays of every protocol in one partition, in canonical order."""
    n = 4 * d
    if mode == PERMUTATIONS:
        first = key[1]
        rest = [x for x in range(n) if x != first]
        rows = [(first,) + p for p in itertools.permutations(rest)]
        if first == 0:
            rows = rows[1:]  # identity
        return np.array(rows, dtype=np.intp).reshape(len(rows), n)
    return _kernels.matching_images(n, *key)


def enumerate_protocols(d: int, mode: str = TRANSPOSITIONS, force: bool = False,
                        partition: tuple[int, int] | None = None) -> Iterator[SwapProtocol]:
    """Stream every non-identity protocol exactly once, canonical and in order."""
    check_cap(d, mode, force)
    keys = [partition] if partition is not None else partitions(d, mode)
    for key in keys:
        for row in partition_images(d, mode, key):
            yield SwapProtocol.from_images_row(d, row, mode)


# text format: one transposition per line as "i j k i' j' k'", or "perm: ..."

def format_protocol(proto: SwapProtocol) -> str:
    if proto.image is not None:
        return "perm: " + " ".join(str(x) for x in proto.image) + "\n"
    lines = []
    for t in proto.swaps:
        lines.append(" ".join(str(x) for x in split_index(t.a, proto.d) + split_index(t.b, proto.d)))
    return "".join(line + "\n" for line in lines)


def protocol_lines(proto: SwapProtocol) -> list[str]:
    return format_protocol(proto).splitlines()


def parse_protocol(text: str, d: int) -> SwapProtocol:
    pairs = []
    image = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("perm:"):
            try:
                image = [int(x) for x in line[len("perm:"):].split()]
            except ValueError as exc:
                raise ProtocolError(f"line {lineno}: {exc}") from None
            continue
        fields = line.split()
        if len(fields) != 6:
            raise ProtocolError(f"line {lineno}: expected 6 integers, got {len(fields)}")
        try:
            i, j, k, i2, j2, k2 = (int(x) for x in fields)
            pairs.append((flat_index(i, j, k, d), flat_index(i2, j2, k2, d)))
        except (ValueError, DomainError) as exc:
            raise ProtocolError(f"line {lineno}: {exc}") from None
    if image is not None:
        if pairs:
            raise ProtocolError("a protocol file holds either transpositions or one perm: line")
        return SwapProtocol.from_image(d, image)
    return SwapProtocol.from_pairs(d, pairs)


def read_protocol(path, d: int) -> SwapProtocol:
    return parse_protocol(Path(path).read_text(), d)

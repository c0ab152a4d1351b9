"""Finite-resolution model of a bounded Vilenkin group.

A group spec fixes radices m_0, ..., m_{N-1} (all >= 2) together with the
place values M_0 = 1, M_{k+1} = m_k * M_k.  A point of the group is a digit
vector (x_0, ..., x_{N-1}) with x_j in Z_{m_j}, added coordinatewise mod m_j.
The grid index sum(x_j * M_j) enumerates cells so that the rank-n interval
around a point (all points sharing its first n digits) is exactly the set of
indices congruent to it mod M_n, i.e. an arithmetic progression of stride M_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

# Grid indices are manipulated as int64 arrays; keep M_N comfortably inside.
MAX_SIZE = 2**62


@dataclass(frozen=True)
class GroupSpec:
    """Radices of one group resolution plus the derived place values."""

    m: tuple[int, ...]
    M: tuple[int, ...]

    @property
    def levels(self) -> int:
        """Number of coordinates N."""
        return len(self.m)

    @property
    def size(self) -> int:
        """Total number of grid cells M_N."""
        return self.M[-1]

    def digits(self, n: int) -> tuple[int, ...]:
        """Digit vector of grid index n in the mixed-radix system."""
        if not 0 <= n < self.size:
            raise ValueError(f"index {n} outside [0, {self.size})")
        return tuple((n // self.M[j]) % self.m[j] for j in range(self.levels))

    def index_of(self, digits: Sequence[int]) -> int:
        """Grid index of a digit vector (inverse of digits())."""
        if len(digits) != self.levels:
            raise ValueError(f"expected {self.levels} digits, got {len(digits)}")
        total = 0
        for j, (d, r) in enumerate(zip(digits, self.m)):
            if not 0 <= d < r:
                raise ValueError(f"digit {d} at position {j} outside [0, {r})")
            total += d * self.M[j]
        return total

    def __str__(self) -> str:
        return format_group(self)


def make_group(m: Sequence[int], levels: int | None = None) -> GroupSpec:
    """Build a GroupSpec from a radix pattern.

    When ``levels`` exceeds the pattern length the pattern is cycled, so
    ``make_group([2, 3], 4)`` gives radices (2, 3, 2, 3).  Every radix must
    be an integer >= 2 and the total size M_N must stay below 2**62.
    """
    pattern = [int(r) for r in m]
    if not pattern:
        raise ValueError("radix pattern must be non-empty")
    for r in pattern:
        if r < 2:
            raise ValueError(f"radix {r} invalid: every m_k must be >= 2")
    if levels is None:
        levels = len(pattern)
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    radices = tuple(pattern[k % len(pattern)] for k in range(levels))
    places = [1]
    for r in radices:
        nxt = places[-1] * r
        if nxt > MAX_SIZE:
            raise ValueError(f"resolution overflow: M_N exceeds {MAX_SIZE}")
        places.append(nxt)
    return GroupSpec(m=radices, M=tuple(places))


@dataclass(frozen=True)
class Element:
    """A group point: an immutable digit vector tied to its GroupSpec."""

    spec: GroupSpec
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.digits) != self.spec.levels:
            raise ValueError(
                f"expected {self.spec.levels} digits, got {len(self.digits)}"
            )
        for j, (d, r) in enumerate(zip(self.digits, self.spec.m)):
            if not 0 <= d < r:
                raise ValueError(f"digit {d} at position {j} outside [0, {r})")

    @classmethod
    def from_index(cls, spec: GroupSpec, n: int) -> "Element":
        return cls(spec, spec.digits(n))

    @classmethod
    def zero(cls, spec: GroupSpec) -> "Element":
        return cls(spec, (0,) * spec.levels)

    @property
    def index(self) -> int:
        return self.spec.index_of(self.digits)

    def __add__(self, other: "Element") -> "Element":
        return add(self, other)

    def __sub__(self, other: "Element") -> "Element":
        return subtract(self, other)

    def __str__(self) -> str:
        return format_element(self)


def digits(n: int, spec: GroupSpec) -> tuple[int, ...]:
    """Digit vector of grid index n."""
    return spec.digits(n)


def index_of(digit_vector: Sequence[int], spec: GroupSpec) -> int:
    """Grid index of a digit vector."""
    return spec.index_of(digit_vector)


def _check_same_spec(x: Element, y: Element) -> None:
    if x.spec != y.spec:
        raise ValueError("elements belong to different groups")


def add(x: Element, y: Element) -> Element:
    """Coordinatewise sum mod the radices."""
    _check_same_spec(x, y)
    d = tuple((a + b) % r for a, b, r in zip(x.digits, y.digits, x.spec.m))
    return Element(x.spec, d)


def subtract(x: Element, y: Element) -> Element:
    """Coordinatewise difference mod the radices."""
    _check_same_spec(x, y)
    d = tuple((a - b) % r for a, b, r in zip(x.digits, y.digits, x.spec.m))
    return Element(x.spec, d)


def generator(s: int, spec: GroupSpec) -> Element:
    """Unit digit vector e_s (digit 1 in coordinate s, zero elsewhere)."""
    if not 0 <= s < spec.levels:
        raise ValueError(f"coordinate {s} outside [0, {spec.levels})")
    d = tuple(1 if j == s else 0 for j in range(spec.levels))
    return Element(spec, d)


def interval_members(x: Element, rank: int) -> np.ndarray:
    """Grid indices of the rank-n interval I_n(x).

    I_n(x) collects every point sharing the first ``rank`` digits of x, i.e.
    all indices congruent to x mod M_rank; rank 0 is the whole group and
    rank N the singleton {x}.
    """
    spec = x.spec
    if not 0 <= rank <= spec.levels:
        raise ValueError(f"rank {rank} outside [0, {spec.levels}]")
    stride = spec.M[rank]
    return np.arange(x.index % stride, spec.size, stride, dtype=np.int64)


def elements(spec: GroupSpec) -> Iterator[Element]:
    """Iterate the whole grid in index order."""
    for n in range(spec.size):
        yield Element.from_index(spec, n)


@lru_cache(maxsize=32)
def digit_table(spec: GroupSpec) -> np.ndarray:
    """(M_N, N) int64 array: row n holds the digit vector of index n."""
    idx = np.arange(spec.size, dtype=np.int64)
    table = np.empty((spec.size, spec.levels), dtype=np.int64)
    for j in range(spec.levels):
        table[:, j] = (idx // spec.M[j]) % spec.m[j]
    table.setflags(write=False)
    return table


# --- plain-text round trips used by the CLI ---------------------------------


def format_group(spec: GroupSpec) -> str:
    return ",".join(str(r) for r in spec.m)


def parse_group(text: str, levels: int | None = None) -> GroupSpec:
    try:
        pattern = [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise ValueError(f"bad group spec {text!r}: {exc}") from None
    return make_group(pattern, levels)


def format_element(x: Element) -> str:
    return ",".join(str(d) for d in x.digits)


def parse_element(text: str, spec: GroupSpec) -> Element:
    try:
        parts = [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise ValueError(f"bad element {text!r}: {exc}") from None
    if len(parts) > spec.levels:
        raise ValueError(f"element {text!r} has more digits than levels={spec.levels}")
    parts = parts + [0] * (spec.levels - len(parts))
    return Element(spec, tuple(parts))

"""Dense permutations of {0, ..., n-1} stored as image tables.

Products are read left to right, as exponents are: ``compose(p, q)`` applies
``p`` first and then ``q``, so the result sends ``i`` to ``q[p[i]]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_DEGREE = 1 << 16
DTYPE = np.int32


class Permutation:
    """An immutable bijection of ``{0, ..., degree-1}``.

    ``images[i]`` is the image of point ``i``. The array is read-only; every
    operation returns a fresh permutation.
    """

    __slots__ = ("_images", "_hash")

    def __init__(self, images: Iterable[int] | np.ndarray, *, check: bool = True):
        arr = np.array(images, dtype=DTYPE)
        if check:
            _validate(arr)
        arr.flags.writeable = False
        self._images = arr
        self._hash = None

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> Permutation:
        # Trusted fast path: arr must be a fresh bijection table we own.
        obj = cls.__new__(cls)
        if arr.dtype != DTYPE:
            arr = arr.astype(DTYPE)
        arr.flags.writeable = False
        obj._images = arr
        obj._hash = None
        return obj

    @property
    def images(self) -> np.ndarray:
        return self._images

    @property
    def degree(self) -> int:
        return int(self._images.shape[0])

    def __call__(self, point: int) -> int:
        return int(self._images[point])

    def __len__(self) -> int:
        return self.degree

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.degree == other.degree and bool(np.array_equal(self._images, other._images))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._images.tobytes())
        return self._hash

    def key(self) -> bytes:
        """Raw bytes of the image table, usable as a dict/set key."""
        return self._images.tobytes()

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __pow__(self, k: int) -> Permutation:
        return power(self, k)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._images, np.arange(self.degree, dtype=DTYPE)))

    def tolist(self) -> list[int]:
        return self._images.tolist()

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)}, degree={self.degree})"


def _validate(arr: np.ndarray) -> None:
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise ValueError("a permutation needs a one-dimensional image table of length >= 1")
    n = arr.shape[0]
    if n > MAX_DEGREE:
        raise ValueError(f"degree {n} exceeds the supported maximum {MAX_DEGREE}")
    if arr.min() < 0 or arr.max() >= n:
        raise ValueError("image out of range")
    if np.bincount(arr, minlength=n).max() != 1:
        raise ValueError("image table is not a bijection")


def _check_same_degree(p: Permutation, q: Permutation) -> None:
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} != {q.degree}")


@dataclass(frozen=True)
class CycleDecomposition:
    """Canonical disjoint-cycle form.

    Each cycle starts at its smallest point; cycles are ordered by that
    point. ``fixed`` lists the fixed points in increasing order.
    """

    cycles: tuple[tuple[int, ...], ...]
    fixed: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.fixed) + sum(len(c) for c in self.cycles)

    def cycle_type(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for c in self.cycles:
            counts[len(c)] = counts.get(len(c), 0) + 1
        return counts

    def to_permutation(self, degree: int | None = None) -> Permutation:
        n = self.degree if degree is None else degree
        return from_cycles(n, self.cycles)


def identity(n: int) -> Permutation:
    return Permutation._wrap(np.arange(n, dtype=DTYPE))


def transposition(n: int, i: int, j: int) -> Permutation:
    if i == j:
        raise ValueError("a transposition needs two distinct points")
    arr = np.arange(n, dtype=DTYPE)
    arr[i], arr[j] = j, i
    return Permutation._wrap(arr)


def from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> Permutation:
    """Build a permutation of degree ``n`` from disjoint cycles."""
    arr = np.arange(n, dtype=DTYPE)
    seen: set[int] = set()
    for cycle in cycles:
        for a in cycle:
            if a in seen:
                raise ValueError("cycles are not disjoint")
            seen.add(a)
        for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
            arr[a] = b
    return Permutation(arr)


def compose(p: Permutation, q: Permutation, *rest: Permutation) -> Permutation:
    """Left-to-right product: apply ``p``, then ``q``, then each of ``rest``."""
    _check_same_degree(p, q)
    arr = q._images[p._images]
    for r in rest:
        _check_same_degree(p, r)
        arr = r._images[arr]
    return Permutation._wrap(arr)


def inverse(p: Permutation) -> Permutation:
    arr = np.empty_like(p._images)
    arr[p._images] = np.arange(p.degree, dtype=DTYPE)
    return Permutation._wrap(arr)


def power(p: Permutation, k: int) -> Permutation:
    if k < 0:
        raise ValueError("exponent must be non-negative")
    result = np.arange(p.degree, dtype=DTYPE)
    base = p._images
    while k:
        if k & 1:
            result = base[result]
        base = base[base]
        k >>= 1
    return Permutation._wrap(result)


def _cycles(images: np.ndarray) -> list[list[int]]:
    # Scanning points in increasing order yields each cycle starting at its
    # smallest point, already sorted by that point.
    table = images.tolist()
    seen = bytearray(len(table))
    out = []
    for start in range(len(table)):
        if seen[start]:
            continue
        cycle = [start]
        seen[start] = 1
        j = table[start]
        while j != start:
            cycle.append(j)
            seen[j] = 1
            j = table[j]
        out.append(cycle)
    return out


def cycle_decomposition(p: Permutation) -> CycleDecomposition:
    cycles = []
    fixed = []
    for c in _cycles(p._images):
        if len(c) == 1:
            fixed.append(c[0])
        else:
            cycles.append(tuple(c))
    return CycleDecomposition(tuple(cycles), tuple(fixed))


def cycle_lengths(p: Permutation) -> list[int]:
    """Lengths of all cycles, fixed points included as 1-cycles."""
    return [len(c) for c in _cycles(p._images)]


def parity(p: Permutation) -> str:
    """``"even"`` or ``"odd"``."""
    ncycles = len(_cycles(p._images))
    return "even" if (p.degree - ncycles) % 2 == 0 else "odd"


def is_even(p: Permutation) -> bool:
    return parity(p) == "even"


def order(p: Permutation) -> int:
    return math.lcm(*cycle_lengths(p))


def fixed_points(p: Permutation) -> list[int]:
    return np.flatnonzero(p._images == np.arange(p.degree)).tolist()


def format_cycles(p: Permutation) -> str:
    cycles = cycle_decomposition(p).cycles
    if not cycles:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

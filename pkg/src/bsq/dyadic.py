"""Haar analysis on the dyadic grid of [0, 1).

Functions are piecewise constant on the 2**depth cells of the unit
interval, so every average below is a finite sum and the Haar transform
is exact up to float rounding.  Haar coefficients use the normalization
a_I = (1/|I|) * integral(f * h_I), where h_I is +1 on the left half of I
and -1 on the right half; with this convention

    integral(S(f)**2) == integral(f**2)

holds exactly (Parseval), which the tests pin at 1e-12 relative.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DyadicInterval",
    "GridFunction",
    "HaarCoefficients",
    "haar_analyze",
    "haar_synthesize",
    "project",
    "square_function",
    "truncated_square_function",
    "integral",
    "weighted_norm_sq",
]


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """The interval [index * 2**-level, (index+1) * 2**-level)."""

    level: int
    index: int

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be nonnegative")
        if not 0 <= self.index < 2 ** self.level:
            raise ValueError("index out of range for level")

    @property
    def left(self) -> float:
        return self.index * 2.0 ** -self.level

    @property
    def right(self) -> float:
        return (self.index + 1) * 2.0 ** -self.level

    @property
    def measure(self) -> float:
        return 2.0 ** -self.level

    def parent(self) -> "DyadicInterval":
        if self.level == 0:
            raise ValueError("root interval has no parent")
        return DyadicInterval(self.level - 1, self.index // 2)

    def children(self) -> tuple["DyadicInterval", "DyadicInterval"]:
        return (
            DyadicInterval(self.level + 1, 2 * self.index),
            DyadicInterval(self.level + 1, 2 * self.index + 1),
        )

    def contains(self, x: float) -> bool:
        return self.left <= x < self.right

    def flat_haar_index(self) -> int:
        """Position of h_I in the flat enumeration h_1, h_2, ... (h_0 is
        the indicator).  Level-major, left to right within a level."""
        return 2 ** self.level + self.index


class GridFunction:
    """Piecewise-constant real function on the depth-N dyadic grid."""

    __slots__ = ("depth", "values")

    MAX_DEPTH = 20  # every integral is an exact sum over at most 2**20 cells

    def __init__(self, values):
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("values must be a nonempty 1-d array")
        depth = int(values.size).bit_length() - 1
        if 2 ** depth != values.size:
            raise ValueError("number of values must be a power of two")
        if depth > self.MAX_DEPTH:
            raise ValueError(f"depth {depth} exceeds the supported {self.MAX_DEPTH}")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("GridFunction is immutable")

    def __repr__(self):
        return f"GridFunction(depth={self.depth})"

    def __eq__(self, other):
        return (
            isinstance(other, GridFunction)
            and self.depth == other.depth
            and np.array_equal(self.values, other.values)
        )

    @classmethod
    def constant(cls, c: float, depth: int) -> "GridFunction":
        return cls(np.full(2 ** depth, float(c)))

    def cell_value(self, x: float) -> float:
        if not 0.0 <= x < 1.0:
            raise ValueError("x outside [0, 1)")
        return float(self.values[int(x * 2 ** self.depth)])

    # -- serialization ---------------------------------------------------

    def to_csv_line(self) -> str:
        vals = ",".join(format(v, ".17g") for v in self.values)
        return f"{self.depth},{vals}"

    @classmethod
    def from_csv_line(cls, line: str) -> "GridFunction":
        parts = line.strip().split(",")
        depth = int(parts[0])
        values = np.array([float(p) for p in parts[1:]])
        if values.size != 2 ** depth:
            raise ValueError("value count does not match declared depth")
        return cls(values)

    def to_json_obj(self) -> dict:
        return {"depth": self.depth, "values": [float(v) for v in self.values]}

    def to_json(self) -> str:
        vals = ",".join(format(v, ".17g") for v in self.values)
        return '{"depth": %d, "values": [%s]}' % (self.depth, vals)

    @classmethod
    def from_json(cls, text: str) -> "GridFunction":
        obj = json.loads(text)
        f = cls(np.asarray(obj["values"], dtype=float))
        if f.depth != obj["depth"]:
            raise ValueError("value count does not match declared depth")
        return f


@dataclass(frozen=True)
class HaarCoefficients:
    """Mean (coefficient of the indicator h_0) plus per-level details.

    details[k] holds the coefficients a_I for the 2**k Haar functions
    whose supports are the level-k dyadic intervals, left to right.
    """

    mean: float
    details: tuple = field(default_factory=tuple)

    @property
    def depth(self) -> int:
        return len(self.details)

    def parseval_sum(self) -> float:
        """mean^2 + sum over I of a_I^2 |I|; equals the L2 norm squared."""
        total = self.mean ** 2
        for k, d in enumerate(self.details):
            total += np.sum(d ** 2) * 2.0 ** -k
        return float(total)

    def coefficient(self, interval: DyadicInterval) -> float:
        return float(self.details[interval.level][interval.index])


def _level_averages(values: np.ndarray) -> list[np.ndarray]:
    """avgs[k] = cell averages of the function at depth k, k = 0..N."""
    avgs = [values]
    while avgs[-1].size > 1:
        a = avgs[-1]
        avgs.append(0.5 * (a[::2] + a[1::2]))
    avgs.reverse()
    return avgs


def haar_analyze(f: GridFunction) -> HaarCoefficients:
    """Haar coefficients a_I = (1/|I|) integral(f h_I) for all levels < depth."""
    avgs = _level_averages(f.values)
    details = tuple(
        0.5 * (avgs[k + 1][::2] - avgs[k + 1][1::2]) for k in range(f.depth)
    )
    return HaarCoefficients(mean=float(avgs[0][0]), details=details)


def haar_synthesize(c: HaarCoefficients, depth: int | None = None) -> GridFunction:
    """Inverse of haar_analyze.  If depth is given it must match c.depth."""
    if depth is not None and depth != c.depth:
        raise ValueError(f"depth mismatch: coefficients carry {c.depth}, got {depth}")
    a = np.array([c.mean])
    for d in c.details:
        if d.shape != a.shape:
            raise ValueError("inconsistent detail level sizes")
        nxt = np.empty(2 * a.size)
        nxt[::2] = a + d
        nxt[1::2] = a - d
        a = nxt
    return GridFunction(a)


def project(f: GridFunction, n: int) -> GridFunction:
    """Conditional expectation onto the depth-n dyadic cells."""
    if not 0 <= n <= f.depth:
        raise ValueError(f"projection level {n} outside [0, {f.depth}]")
    block = 2 ** (f.depth - n)
    means = f.values.reshape(2 ** n, block).mean(axis=1)
    return GridFunction(np.repeat(means, block))


def _square_sum(mean: float, details) -> np.ndarray:
    s2 = np.array([mean ** 2])
    for d in details:
        s2 = np.repeat(s2 + d ** 2, 2)
    return s2


def square_function(f: GridFunction) -> GridFunction:
    """S(f)(x) = sqrt(sum of a_I^2 over Haar supports containing x, h_0 included)."""
    c = haar_analyze(f)
    return GridFunction(np.sqrt(_square_sum(c.mean, c.details)))


def truncated_square_function(f: GridFunction, n: int) -> GridFunction:
    """S_n(f) = S(f_n): only the mean and levels < n contribute."""
    if not 0 <= n <= f.depth:
        raise ValueError(f"truncation level {n} outside [0, {f.depth}]")
    c = haar_analyze(f)
    s2 = _square_sum(c.mean, c.details[:n])
    return GridFunction(np.sqrt(np.repeat(s2, 2 ** (f.depth - n))))


def integral(f: GridFunction) -> float:
    """Integral over [0, 1)."""
    return float(f.values.mean())


def weighted_norm_sq(f: GridFunction, w: GridFunction) -> float:
    """integral(f^2 w) over [0, 1); depths must agree."""
    if f.depth != w.depth:
        raise ValueError("depth mismatch")
    return float(np.mean(f.values ** 2 * w.values))

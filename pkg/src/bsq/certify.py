"""Dyadic induction engine for the weighted square-function estimates.

Builds the four per-level sequences (averages of f, truncated square
function squared, averages of w, averages of the companion power of w),
verifies that the integral of the special function decreases level by
level, and checks the resulting end-to-end inequalities:

    lower160   integral(f^2 w)    <= 160 [w]_{A2}   integral(S(f)^2 w)
    upper128   integral(S(f)^2 w) <= 128 [w]_{A2}^2 integral(f^2 w)
    upper_ar   integral(S(f)^2 w) <= (2r/(2-r)) [w]_{A_r} integral(f^2 w)

At finite dyadic depth these hold exactly with the dyadic characteristic,
since the level-N sequences reproduce f, S(f) and w themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bellman import ArKind, BellmanKind, bellman_value
from .dyadic import GridFunction, haar_analyze, square_function, weighted_norm_sq
from .rng import stream
from .weights import WeightFunction, dyadic_ap_characteristic

__all__ = [
    "LevelSequences",
    "InductionTrace",
    "VerificationOutcome",
    "build_sequences",
    "verify_monotonicity",
    "verify_inequality",
    "extremizer_search",
    "random_grid_function",
    "random_weight",
]

INEQ_NAMES = ("lower160", "upper128", "upper_ar")


@dataclass(frozen=True)
class LevelSequences:
    """Per-level cell values; row n has 2**n entries on the depth-n atoms."""

    phi: tuple
    s2: tuple
    w: tuple
    v: tuple
    r: float

    @property
    def depth(self) -> int:
        return len(self.phi) - 1


def _halving(values: np.ndarray) -> list[np.ndarray]:
    out = [values]
    while out[-1].size > 1:
        a = out[-1]
        out.append(0.5 * (a[::2] + a[1::2]))
    out.reverse()
    return out


def build_sequences(f: GridFunction, w: WeightFunction, r: float) -> LevelSequences:
    """Levels 0..N of (f_n, S_n(f)^2, w_n, v_n) with v_n the averages of
    w**(-1/(r-1)); every pair (w_n, v_n) lies in the band of index
    [w]_{A_r} by the definition of the characteristic."""
    if f.depth != w.depth:
        raise ValueError("depth mismatch between f and w")
    if not 1.0 < r <= 2.0:
        raise ValueError("need r in (1, 2]")
    phis = _halving(f.values)
    ws = _halving(w.values)
    vs = _halving(w.companion(r).values)
    coeffs = haar_analyze(f)
    s2 = [np.array([coeffs.mean ** 2])]
    for k in range(f.depth):
        s2.append(np.repeat(s2[k] + coeffs.details[k] ** 2, 2))
    return LevelSequences(tuple(phis), tuple(s2), tuple(ws), tuple(vs), float(r))


@dataclass
class InductionTrace:
    kind_name: str
    params: dict
    integrals: np.ndarray  # integral of B at levels 0..N
    passed: bool
    first_violation: Optional[tuple] = None  # (level, atom index, gap)

    def to_json_obj(self) -> dict:
        return {
            "kind": self.kind_name,
            "params": self.params,
            "trace": [float(t) for t in self.integrals],
            "pass": self.passed,
            "first_violation": self.first_violation,
        }


def verify_monotonicity(
    kind: BellmanKind, f: GridFunction, w: WeightFunction, tol: float = 1e-10
) -> InductionTrace:
    """Trace of integral(B) per level plus the per-atom refinement.

    Requires the kind's index c to be at least twice the dyadic
    characteristic of w at the kind's exponent: the midpoint-segment
    doubling is exactly what makes the two children admissible.
    """
    char = dyadic_ap_characteristic(w, kind.r).characteristic
    if kind.c < 2.0 * char * (1.0 - 1e-12):
        raise ValueError(
            f"kind index {kind.c} below twice the characteristic {char}"
        )
    seq = build_sequences(f, w, kind.r)
    n_levels = seq.depth + 1
    integrals = np.empty(n_levels)
    b_rows = []
    for n in range(n_levels):
        b = bellman_value(kind, seq.phi[n], seq.s2[n], seq.w[n], seq.v[n])
        b_rows.append(b)
        integrals[n] = b.mean()
    passed = True
    first_violation = None
    for n in range(n_levels - 1):
        parent = b_rows[n]
        child = 0.5 * (b_rows[n + 1][::2] + b_rows[n + 1][1::2])
        scale = 1.0 + np.abs(parent) + np.abs(child)
        gap = (child - parent) / scale
        i = int(np.argmax(gap))
        if gap[i] > tol and first_violation is None:
            passed = False
            first_violation = (n, i, float(gap[i]))
    params = {"c": kind.c}
    if isinstance(kind, ArKind):
        params["r"] = kind.r
    return InductionTrace(kind.name, params, integrals, passed, first_violation)


@dataclass
class VerificationOutcome:
    which: str
    lhs: float
    rhs: float
    constant_used: float
    characteristic: float
    passed: bool

    def to_json_obj(self) -> dict:
        return {
            "which": self.which,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "constant": self.constant_used,
            "characteristic": self.characteristic,
            "pass": self.passed,
        }


def verify_inequality(
    f: GridFunction, w: WeightFunction, which: str, r: float = 1.5
) -> VerificationOutcome:
    """Evaluate one of the three weighted estimates in squared form."""
    if which not in INEQ_NAMES:
        raise ValueError(f"unknown inequality {which!r}; pick from {INEQ_NAMES}")
    s = square_function(f)
    f2 = weighted_norm_sq(f, w.base)
    s2 = weighted_norm_sq(s, w.base)
    if which == "lower160":
        char = dyadic_ap_characteristic(w, 2.0).characteristic
        const = 160.0
        lhs, rhs = f2, const * char * s2
    elif which == "upper128":
        char = dyadic_ap_characteristic(w, 2.0).characteristic
        const = 128.0
        lhs, rhs = s2, const * char ** 2 * f2
    else:
        if not 1.0 < r < 2.0:
            raise ValueError("upper_ar needs r in (1, 2)")
        char = dyadic_ap_characteristic(w, r).characteristic
        const = 2.0 * r / (2.0 - r)
        lhs, rhs = s2, const * char * f2
    return VerificationOutcome(
        which=which,
        lhs=lhs,
        rhs=rhs,
        constant_used=const,
        characteristic=char,
        passed=lhs <= rhs * (1.0 + 1e-12),
    )


def observed_ratio(
    f: GridFunction, w: WeightFunction, which: str, r: float = 1.5
) -> float:
    """lhs over (characteristic factor times counterpart norm): the
    constant the pair (f, w) actually exhibits.  Never exceeds the
    inequality's proven constant."""
    out = verify_inequality(f, w, which, r)
    if out.rhs == 0.0:
        return 0.0
    return out.lhs / (out.rhs / out.constant_used)


# -- randomized instances and extremizer search -----------------------------


def random_grid_function(depth: int, seed: int, index: int = 0) -> GridFunction:
    rng = stream(seed, index)
    return GridFunction(rng.standard_normal(2 ** depth))


def random_weight(
    depth: int, seed: int, index: int = 0, char_cap: float = 100.0
) -> WeightFunction:
    """Lognormal-style weight tempered until its dyadic A2 characteristic
    sits below the cap (powers of a positive weight shrink the product)."""
    rng = stream(seed, index)
    logw = rng.standard_normal(2 ** depth) * rng.uniform(0.3, 2.0)
    w = WeightFunction(GridFunction(np.exp(logw)))
    while dyadic_ap_characteristic(w, 2.0).characteristic > char_cap:
        logw *= 0.8
        w = WeightFunction(GridFunction(np.exp(logw)))
    return w


@dataclass
class SearchResult:
    which: str
    best_ratio: float
    f: GridFunction
    w: WeightFunction
    evaluations: int


def extremizer_search(
    which: str, depth: int, budget: int, seed: int, r: float = 1.5
) -> SearchResult:
    """Randomized hill climb over Haar coefficients of f and log cell
    values of w, maximizing the observed constant.  Deterministic for a
    given seed; the observed constant is a lower witness for sharpness
    and must stay below the proven constant."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    rng = stream(seed, 0)
    n = 2 ** depth
    coeffs = rng.standard_normal(n)
    logw = rng.standard_normal(n) * 0.5

    def assemble(cs, lw):
        f = _from_flat_coeffs(cs, depth)
        w = WeightFunction(GridFunction(np.exp(lw)))
        return f, w

    f, w = assemble(coeffs, logw)
    best = observed_ratio(f, w, which, r)
    best_state = (coeffs.copy(), logw.copy())
    for _ in range(budget - 1):
        cs, lw = best_state[0].copy(), best_state[1].copy()
        target = rng.random()
        scale = 10.0 ** rng.uniform(-2.0, 0.5)
        i = rng.integers(0, n)
        if target < 0.5:
            cs[i] += scale * rng.standard_normal()
        else:
            lw[i] = np.clip(lw[i] + scale * rng.standard_normal(), -12.0, 12.0)
        f, w = assemble(cs, lw)
        ratio = observed_ratio(f, w, which, r)
        if ratio > best:
            best = ratio
            best_state = (cs, lw)
    f, w = assemble(*best_state)
    return SearchResult(which, best, f, w, budget)


def _from_flat_coeffs(flat: np.ndarray, depth: int) -> GridFunction:
    """flat = [mean, level-0 details, level-1 details, ...] -> grid function."""
    a = np.array([flat[0]])
    pos = 1
    for k in range(depth):
        d = flat[pos:pos + 2 ** k]
        pos += 2 ** k
        nxt = np.empty(2 * a.size)
        nxt[::2] = a + d
        nxt[1::2] = a - d
        a = nxt
    return GridFunction(a)

"""Muckenhoupt A_p machinery over dyadic intervals.

The canonical characteristic here is the supremum over *dyadic*
intervals of [0,1) only.  It is dominated by the all-interval supremum,
so any inequality verified with it is implied by the textbook statement;
the induction engine never needs more than dyadic averages.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .dyadic import DyadicInterval, GridFunction
from .rng import stream

__all__ = [
    "WeightFunction",
    "HyperbolicDomain",
    "DomainPoint",
    "ApReport",
    "GeomCounterexample",
    "dyadic_ap_characteristic",
    "domain_contains",
    "segment_in_domain",
    "segment_range",
    "verify_geom_lemma",
    "cf_epsilon_probe",
    "make_power_weight",
    "make_step_weight",
]


class WeightFunction:
    """Strictly positive grid function with cached negative-power companions."""

    def __init__(self, base: GridFunction):
        if np.any(base.values <= 0.0):
            raise ValueError("weight values must be strictly positive")
        self.base = base
        self._companions: dict[float, GridFunction] = {}

    @property
    def depth(self) -> int:
        return self.base.depth

    @property
    def values(self) -> np.ndarray:
        return self.base.values

    def companion(self, r: float) -> GridFunction:
        """The grid function w**(-1/(r-1)), cached per exponent."""
        if r <= 1.0:
            raise ValueError("companion exponent needs r > 1")
        key = float(r)
        if key not in self._companions:
            self._companions[key] = GridFunction(self.values ** (-1.0 / (r - 1.0)))
        return self._companions[key]


class DomainPoint(NamedTuple):
    w: float
    v: float


@dataclass(frozen=True)
class HyperbolicDomain:
    """The band 1 <= w * v**(r-1) <= c in the positive quadrant."""

    c: float
    r: float

    def __post_init__(self):
        if self.c <= 1.0:
            raise ValueError("need c > 1")
        if not 1.0 < self.r <= 2.0:
            raise ValueError("need r in (1, 2]")

    def product(self, w, v):
        return w * v ** (self.r - 1.0)

    def contains(self, w, v) -> bool:
        if np.any(np.asarray(w) <= 0) or np.any(np.asarray(v) <= 0):
            return False
        t = self.product(w, v)
        return bool(np.all((t >= 1.0) & (t <= self.c)))


@dataclass(frozen=True)
class ApReport:
    p: float
    characteristic: float
    witness: DyadicInterval

    def to_json_obj(self) -> dict:
        return {
            "p": self.p,
            "characteristic": self.characteristic,
            "witness_level": self.witness.level,
            "witness_index": self.witness.index,
        }


def _level_means(values: np.ndarray) -> list[np.ndarray]:
    out = [values]
    while out[-1].size > 1:
        a = out[-1]
        out.append(0.5 * (a[::2] + a[1::2]))
    out.reverse()
    return out


def dyadic_ap_characteristic(w: WeightFunction, p: float) -> ApReport:
    """max over dyadic I of <w>_I <w^{-1/(p-1)}>_I^(p-1), with its witness.

    Evaluated by successive pairwise averaging, O(2**depth) total work.
    """
    if p <= 1.0:
        raise ValueError("need p > 1")
    wa = _level_means(w.values)
    va = _level_means(w.companion(p).values)
    best = -np.inf
    witness = DyadicInterval(0, 0)
    for level in range(len(wa)):
        prod = wa[level] * va[level] ** (p - 1.0)
        i = int(np.argmax(prod))
        if prod[i] > best:
            best = float(prod[i])
            witness = DyadicInterval(level, i)
    return ApReport(p=float(p), characteristic=best, witness=witness)


def domain_contains(dom: HyperbolicDomain, pt: DomainPoint) -> bool:
    """Closed-bound membership, no tolerance."""
    return pt.w > 0 and pt.v > 0 and 1.0 <= dom.product(pt.w, pt.v) <= dom.c


_INVGOLD = (np.sqrt(5.0) - 1.0) / 2.0


def _golden_min(fun, n: int, tol: float = 1e-12) -> np.ndarray:
    """Vectorized golden-section minimum of fun over [0, 1].

    fun maps an array of parameters t in [0,1] to an array of values;
    each component must be unimodal or monotone, which holds for the
    hyperbola product along a segment (its log-derivative is linear).
    """
    a = np.zeros(n)
    b = np.ones(n)
    # interval shrinks by the golden ratio each pass; ~60 passes reach 1e-12
    while np.max(b - a) > tol:
        x1 = b - _INVGOLD * (b - a)
        x2 = a + _INVGOLD * (b - a)
        shrink_right = fun(x1) < fun(x2)
        b = np.where(shrink_right, x2, b)
        a = np.where(shrink_right, a, x1)
    return fun(0.5 * (a + b))


def _segment_range_batch(wp, vp, wq, vq, r: float) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise (min, max) of t -> w_t v_t^(r-1) over the segment P->Q."""
    wp, vp, wq, vq = map(np.atleast_1d, (wp, vp, wq, vq))
    dw, dv = wq - wp, vq - vp
    g0 = wp * vp ** (r - 1.0)
    g1 = wq * vq ** (r - 1.0)
    lo = np.minimum(g0, g1)
    hi = np.maximum(g0, g1)
    if r == 2.0:
        # g(t) = (wp + t dw)(vp + t dv): quadratic, closed-form vertex
        a = dw * dv
        b = wp * dv + vp * dw
        with np.errstate(divide="ignore", invalid="ignore"):
            ts = np.where(a != 0.0, -b / (2.0 * a), -1.0)
        inside = (ts > 0.0) & (ts < 1.0)
        gs = (wp + ts * dw) * (vp + ts * dv)
        lo = np.where(inside, np.minimum(lo, gs), lo)
        hi = np.where(inside, np.maximum(hi, gs), hi)
    else:
        def g(t):
            return (wp + t * dw) * (vp + t * dv) ** (r - 1.0)

        lo = np.minimum(lo, _golden_min(g, wp.size))
        hi = np.maximum(hi, -_golden_min(lambda t: -g(t), wp.size))
    return lo, hi


def segment_range(P: DomainPoint, Q: DomainPoint, r: float) -> tuple[float, float]:
    lo, hi = _segment_range_batch(P.w, P.v, Q.w, Q.v, r)
    return float(lo[0]), float(hi[0])


def segment_in_domain(dom: HyperbolicDomain, P: DomainPoint, Q: DomainPoint) -> bool:
    """True iff the whole segment PQ stays inside the band."""
    if min(P.w, P.v, Q.w, Q.v) <= 0:
        return False
    lo, hi = segment_range(P, Q, dom.r)
    return lo >= 1.0 and hi <= dom.c


@dataclass(frozen=True)
class GeomCounterexample:
    P: DomainPoint
    Q: DomainPoint
    R: DomainPoint
    product_min: float
    product_max: float


def _sample_domain_points(rng, n: int, c: float, r: float):
    """w log-uniform in [1e-3, 1e3], product uniform in [1, c]."""
    w = np.exp(rng.uniform(np.log(1e-3), np.log(1e3), size=n))
    t = rng.uniform(1.0, c, size=n)
    v = (t / w) ** (1.0 / (r - 1.0))
    return w, v


def verify_geom_lemma(
    c: float, r: float, trials: int, seed: int
) -> Optional[GeomCounterexample]:
    """Sampling certificate for the segment-doubling fact.

    Draws pairs (P, Q) whose midpoint R also lies in the band of index c,
    and returns the first pair whose segment leaves the band of index 2c
    (no such pair should exist).
    """
    if c <= 1.0 or not 1.0 < r <= 2.0:
        raise ValueError("need c > 1 and r in (1, 2]")
    found = 0
    batch = 0
    chunk = 65536
    while found < trials:
        rng = stream(seed, batch)
        batch += 1
        wp, vp = _sample_domain_points(rng, chunk, c, r)
        wq, vq = _sample_domain_points(rng, chunk, c, r)
        wm, vm = 0.5 * (wp + wq), 0.5 * (vp + vq)
        tm = wm * vm ** (r - 1.0)
        ok = (tm >= 1.0) & (tm <= c)
        if not np.any(ok):
            continue
        wp, vp, wq, vq = wp[ok], vp[ok], wq[ok], vq[ok]
        keep = min(wp.size, trials - found)
        wp, vp, wq, vq = wp[:keep], vp[:keep], wq[:keep], vq[:keep]
        lo, hi = _segment_range_batch(wp, vp, wq, vq, r)
        bad = (lo < 1.0 - 1e-13) | (hi > 2.0 * c * (1.0 + 1e-13))
        if np.any(bad):
            i = int(np.argmax(bad))
            return GeomCounterexample(
                P=DomainPoint(float(wp[i]), float(vp[i])),
                Q=DomainPoint(float(wq[i]), float(vq[i])),
                R=DomainPoint(0.5 * float(wp[i] + wq[i]), 0.5 * float(vp[i] + vq[i])),
                product_min=float(lo[i]),
                product_max=float(hi[i]),
            )
        found += keep
    return None


def cf_epsilon_probe(w: WeightFunction, p: float, r_grid) -> list[tuple[float, float]]:
    """Characteristic curve r -> [w]_{A_r} on a grid of exponents in (1, p].

    The curve is non-increasing in r (power-mean inequality), which the
    self-improvement arguments exploit; no explicit epsilon constant is
    computed here.
    """
    out = []
    for r in r_grid:
        if not 1.0 < r <= p:
            raise ValueError("every probe exponent must lie in (1, p]")
        out.append((float(r), dyadic_ap_characteristic(w, r).characteristic))
    return out


def make_power_weight(alpha: float, depth: int) -> WeightFunction:
    """Cell averages of x**alpha, exact via the antiderivative."""
    if alpha <= -1.0:
        raise ValueError("need alpha > -1 for integrability")
    n = 2 ** depth
    edges = np.arange(n + 1) / n
    avgs = (edges[1:] ** (alpha + 1.0) - edges[:-1] ** (alpha + 1.0)) * n / (alpha + 1.0)
    return WeightFunction(GridFunction(avgs))


def make_step_weight(levels) -> WeightFunction:
    """Weight with the given positive cell values (length a power of two)."""
    return WeightFunction(GridFunction(np.asarray(levels, dtype=float)))

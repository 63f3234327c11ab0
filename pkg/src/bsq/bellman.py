"""The three Bellman-type special functions and their certificates.

Each kind pairs an explicit function B(x, y, w, v) on R x [0,oo) x Omega
with a symmetric 3x3 matrix built from the Hessian of its x-w-v part plus
a diagonal correction; nonpositive-definiteness of that matrix is what
turns the pointwise concavity into the integral estimates.  Certification
is by seeded sampling: closed-form max eigenvalues over the domain, the
two majorizations, and the midpoint concavity inequality itself.

Hessian entries are hand derivatives of the defining formulas; the test
suite referees them against central finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

from .rng import stream
from .weights import _segment_range_batch

__all__ = [
    "MainKind",
    "ArKind",
    "AltKind",
    "BellmanKind",
    "StatePoint",
    "CertReport",
    "phi",
    "phi_d1",
    "phi_d2",
    "bellman_value",
    "lower_bound",
    "matrix_A",
    "max_eig_symm3",
    "certify_nsd",
    "check_sylvester",
    "check_majorization_initial",
    "check_majorization_lower",
    "check_concavity",
]

_DOMAIN_RTOL = 1e-9  # slack for float drift on the band boundaries


class StatePoint(NamedTuple):
    x: float
    y: float
    w: float
    v: float


@dataclass(frozen=True)
class MainKind:
    """x^2 w phi(wv) - 40 c y w on the band 1 <= wv <= c."""

    c: float
    name = "main"

    def __post_init__(self):
        if self.c <= 1.0:
            raise ValueError("need c > 1")

    @property
    def r(self) -> float:
        return 2.0


@dataclass(frozen=True)
class ArKind:
    """y w - (r c/(2-r)) x^2 / v^(r-1) on the band 1 <= w v^(r-1) <= c."""

    c: float
    r: float
    name = "ar"

    def __post_init__(self):
        if self.c <= 1.0:
            raise ValueError("need c > 1")
        if not 1.0 < self.r < 2.0:
            raise ValueError("need r in (1, 2)")


@dataclass(frozen=True)
class AltKind:
    """y w - 16 c^2 x^2 w/(wv - 1/2)^alpha with alpha = 1 - 1/(4c)."""

    c: float
    name = "alt"

    def __post_init__(self):
        if self.c <= 1.0:
            raise ValueError("need c > 1")

    @property
    def r(self) -> float:
        return 2.0

    @property
    def alpha(self) -> float:
        return 1.0 - 1.0 / (4.0 * self.c)


BellmanKind = Union[MainKind, ArKind, AltKind]


@dataclass
class CertReport:
    """Outcome of a sampling certificate.

    max_eigenvalue carries the extremal statistic of the check: the
    largest matrix eigenvalue for the definiteness sweep, and the largest
    (scaled) inequality violation for the majorization and concavity
    sweeps.  An empty sweep reports -inf and passes vacuously.
    """

    kind: str
    params: dict
    samples: int
    max_eigenvalue: float
    worst_point: StatePoint | None
    violations: list = field(default_factory=list)
    passed: bool = True

    def to_json_obj(self) -> dict:
        wp = list(self.worst_point) if self.worst_point is not None else None
        return {
            "kind": self.kind,
            "params": self.params,
            "samples": self.samples,
            "max_eigenvalue": self.max_eigenvalue,
            "worst_point": wp,
            "pass": self.passed,
        }


# -- the phi profile of the main kind -------------------------------------


def _check_t(t, c):
    t = np.asarray(t, dtype=float)
    if np.any(t < 1.0 - _DOMAIN_RTOL) or np.any(t > c * (1.0 + _DOMAIN_RTOL)):
        raise ValueError(f"argument outside [1, {c}]")
    return t


def phi(t, c: float):
    """2 - 1/t - ln(t)/(2c); increasing and concave, values in [1/2, 2]."""
    t = _check_t(t, c)
    return 2.0 - 1.0 / t - np.log(t) / (2.0 * c)


def phi_d1(t, c: float):
    """(2c - t) / (2 c t^2), nonnegative for t <= c."""
    t = _check_t(t, c)
    return (2.0 * c - t) / (2.0 * c * t ** 2)


def phi_d2(t, c: float):
    """-(4c - t) / (2 c t^3), nonpositive for t <= c."""
    t = _check_t(t, c)
    return -(4.0 * c - t) / (2.0 * c * t ** 3)


# -- evaluation ------------------------------------------------------------


def _validate_state(kind: BellmanKind, x, y, w, v):
    x, y, w, v = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (x, y, w, v))
    )
    if np.any(y < -_DOMAIN_RTOL):
        raise ValueError("y must be nonnegative")
    if np.any(w <= 0.0) or np.any(v <= 0.0):
        raise ValueError("w, v must be positive")
    t = w * v ** (kind.r - 1.0)
    if np.any(t < 1.0 - _DOMAIN_RTOL) or np.any(t > kind.c * (1.0 + _DOMAIN_RTOL)):
        raise ValueError(f"(w, v) outside the band of index {kind.c}")
    return x, y, w, v, t


def bellman_value(kind: BellmanKind, x, y, w, v):
    """B(x, y, w, v) for the given kind; broadcasts over arrays."""
    x, y, w, v, t = _validate_state(kind, x, y, w, v)
    c = kind.c
    if isinstance(kind, MainKind):
        tc = np.clip(t, 1.0, c)
        return x ** 2 * w * phi(tc, c) - 40.0 * c * y * w
    if isinstance(kind, ArKind):
        return y * w - (kind.r * c / (2.0 - kind.r)) * x ** 2 / v ** (kind.r - 1.0)
    s = np.maximum(t - 0.5, 0.5)  # t >= 1 on the band
    return y * w - 16.0 * c ** 2 * x ** 2 * w / s ** kind.alpha


def lower_bound(kind: BellmanKind, x, y, w, v):
    """The kind's lower majorization at the point (the source of the
    final inequality in the induction)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    c = kind.c
    if isinstance(kind, MainKind):
        return 0.5 * w * (x ** 2 - 80.0 * c * y)
    if isinstance(kind, ArKind):
        return y * w - (kind.r * c / (2.0 - kind.r)) * x ** 2 * w
    return y * w - 32.0 * c ** 2 * x ** 2 * w


# -- the corrected Hessian matrices ----------------------------------------


def _matrix_batch(kind: BellmanKind, x, y, w, v) -> np.ndarray:
    x, y, w, v, t = _validate_state(kind, x, y, w, v)
    n = x.shape
    A = np.zeros(n + (3, 3))
    c = kind.c
    if isinstance(kind, MainKind):
        tc = np.clip(t, 1.0, c)
        p, p1, p2 = phi(tc, c), phi_d1(tc, c), phi_d2(tc, c)
        A[..., 0, 0] = 2.0 * w * p - 80.0 * c * w
        A[..., 0, 1] = A[..., 1, 0] = 2.0 * x * (p + t * p1)
        A[..., 0, 2] = A[..., 2, 0] = 2.0 * x * w ** 2 * p1
        A[..., 1, 1] = x ** 2 * v * (2.0 * p1 + t * p2)
        A[..., 1, 2] = A[..., 2, 1] = x ** 2 * w * (2.0 * p1 + t * p2)
        A[..., 2, 2] = x ** 2 * w ** 3 * p2
    elif isinstance(kind, ArKind):
        r = kind.r
        kap = r * c / (2.0 - r)
        A[..., 0, 0] = 2.0 * w - 2.0 * kap * v ** (1.0 - r)
        A[..., 0, 2] = A[..., 2, 0] = 2.0 * kap * (r - 1.0) * x * v ** (-r)
        A[..., 2, 2] = -kap * r * (r - 1.0) * x ** 2 * v ** (-r - 1.0)
    else:
        al = kind.alpha
        s = np.maximum(t - 0.5, 0.5)
        A[..., 0, 0] = w / (8.0 * c ** 2) - 2.0 * w * s ** (-al)
        A[..., 0, 1] = A[..., 1, 0] = (
            -2.0 * x * ((1.0 - al) * t - 0.5) * s ** (-al - 1.0)
        )
        A[..., 0, 2] = A[..., 2, 0] = 2.0 * al * x * w ** 2 * s ** (-al - 1.0)
        A[..., 1, 1] = al * x ** 2 * v * ((1.0 - al) * t - 1.0) * s ** (-al - 2.0)
        A[..., 1, 2] = A[..., 2, 1] = (
            al * x ** 2 * w * ((1.0 - al) * t - 1.0) * s ** (-al - 2.0)
        )
        A[..., 2, 2] = -al * (al + 1.0) * x ** 2 * w ** 3 * s ** (-al - 2.0)
    return A


def matrix_A(kind: BellmanKind, s: StatePoint) -> np.ndarray:
    """Corrected Hessian in the variables (x, w, v) at the state point."""
    return _matrix_batch(kind, s.x, s.y, s.w, s.v)


def max_eig_symm3(A: np.ndarray) -> np.ndarray:
    """Largest eigenvalue of batched symmetric 3x3 matrices (Cardano).

    Each matrix is normalized by its largest entry first (eigenvalues
    scale linearly), so the closed form never overflows however extreme
    the certified states are.
    """
    A = np.asarray(A, dtype=float)
    mag = np.max(np.abs(A), axis=(-2, -1))
    ms = np.where(mag > 0.0, mag, 1.0)
    B = A / ms[..., None, None]
    a00, a01, a02 = B[..., 0, 0], B[..., 0, 1], B[..., 0, 2]
    a11, a12, a22 = B[..., 1, 1], B[..., 1, 2], B[..., 2, 2]
    q = (a00 + a11 + a22) / 3.0
    p1 = a01 ** 2 + a02 ** 2 + a12 ** 2
    p2 = (a00 - q) ** 2 + (a11 - q) ** 2 + (a22 - q) ** 2 + 2.0 * p1
    p = np.sqrt(np.maximum(p2, 0.0) / 6.0)
    safe = p > 0.0
    ps = np.where(safe, p, 1.0)
    b00, b11, b22 = (a00 - q) / ps, (a11 - q) / ps, (a22 - q) / ps
    b01, b02, b12 = a01 / ps, a02 / ps, a12 / ps
    detb = (
        b00 * (b11 * b22 - b12 ** 2)
        - b01 * (b01 * b22 - b12 * b02)
        + b02 * (b01 * b12 - b11 * b02)
    )
    rr = np.clip(detb / 2.0, -1.0, 1.0)
    ang = np.arccos(rr) / 3.0
    out = np.where(safe, q + 2.0 * p * np.cos(ang), q)
    # Cardano loses sqrt(eps) accuracy at (near-)double roots, and the
    # certified matrices are routinely singular; polish the ambiguous
    # near-zero cases with the orthogonally-similar LAPACK solve
    close = np.abs(out) * ms <= 1e-6 * (1.0 + ms)
    if np.any(close):
        if B.ndim > 2:
            exact = np.linalg.eigvalsh(B[close, ...])
            out = out.copy()
            out[close] = exact[..., -1]
        else:
            out = np.linalg.eigvalsh(B)[..., -1]
    return out * ms


# -- domain sampling --------------------------------------------------------


def _sample_states(kind: BellmanKind, n: int, rng, boundary_frac: float = 0.1):
    """StatePoints covering the band: x sign-symmetric log-uniform in
    [1e-3, 10], w log-uniform in [1e-3, 1e3], t uniform in [1, c] with a
    boundary_frac share pinned to each sheet t = 1 and t = c.

    For exponents very close to 1 the w range narrows around t so that
    v = (t/w)^(1/(r-1)) and every derived matrix entry stay finite (the
    rail caps log v at 200); for the working ranges (r >= 1.05 with the
    standard w span) it never binds.
    """
    c, r = kind.c, kind.r
    x = np.exp(rng.uniform(np.log(1e-3), np.log(10.0), size=n))
    x *= rng.choice([-1.0, 1.0], size=n)
    y = np.exp(rng.uniform(np.log(1e-3), np.log(10.0), size=n))
    y[rng.random(n) < 0.1] = 0.0
    t = rng.uniform(1.0, c, size=n)
    nb = int(boundary_frac * n)
    t[:nb] = 1.0
    t[nb:2 * nb] = c
    rail = 200.0 * (r - 1.0)
    lo = np.maximum(np.log(1e-3), np.log(t) - rail)
    hi = np.minimum(np.log(1e3), np.log(t) + rail)
    w = np.exp(lo + (hi - lo) * rng.random(n))
    v = np.exp(np.log(t / w) / (r - 1.0))
    return x, y, w, v


def certify_nsd(
    kind: BellmanKind, samples: int, seed: int, tol: float = 1e-9
) -> CertReport:
    """Sample the band and bound the largest eigenvalue of the corrected
    Hessian; PASS iff max eig <= tol * (1 + largest matrix entry)."""
    params = _params(kind)
    if samples <= 0:
        return CertReport(kind.name, params, 0, -np.inf, None, [], True)
    worst = -np.inf
    worst_pt = None
    violations = []
    done = 0
    chunk_i = 0
    while done < samples:
        m = min(1 << 16, samples - done)
        rng = stream(seed, chunk_i)
        chunk_i += 1
        x, y, w, v = _sample_states(kind, m, rng)
        A = _matrix_batch(kind, x, y, w, v)
        scale = 1.0 + np.max(np.abs(A), axis=(-2, -1))
        rel = max_eig_symm3(A) / scale
        i = int(np.argmax(rel))
        if rel[i] > worst:
            worst = float(rel[i])
            worst_pt = StatePoint(float(x[i]), float(y[i]), float(w[i]), float(v[i]))
        bad = np.nonzero(rel > tol)[0]
        for j in bad[:4]:
            violations.append(
                (StatePoint(float(x[j]), float(y[j]), float(w[j]), float(v[j])),
                 float(rel[j]))
            )
        done += m
    return CertReport(
        kind.name, params, samples, worst, worst_pt, violations, worst <= tol
    )


def _params(kind: BellmanKind) -> dict:
    out = {"c": kind.c}
    if isinstance(kind, ArKind):
        out["r"] = kind.r
    return out


def check_sylvester(kind: MainKind, s: StatePoint) -> tuple[float, float, float]:
    """The three sign quantities of the main kind's definiteness argument:
    the (v,v) entry x^2 w^3 phi''(t), the reduced 2x2 quantity
    2 phi'(t) (2 phi'(t) + t phi''(t)), and det A.  All must be <= 0."""
    if not isinstance(kind, MainKind):
        raise TypeError("sylvester quantities are specific to the main kind")
    t = s.w * s.v
    c = kind.c
    q1 = s.x ** 2 * s.w ** 3 * float(phi_d2(t, c))
    q2 = 2.0 * float(phi_d1(t, c)) * (
        2.0 * float(phi_d1(t, c)) + t * float(phi_d2(t, c))
    )
    q3 = float(np.linalg.det(matrix_A(kind, s)))
    return q1, q2, q3


def reduced_det_sign_quantity(kind: MainKind, s: StatePoint) -> float:
    """4 w [ (2 phi'^2 - phi phi'')(phi + t phi') + 40 c phi'(2 phi' + t phi'') ],
    which has the sign of det A after the row/column reductions (x != 0)."""
    t = s.w * s.v
    c = kind.c
    p, p1, p2 = (float(f(t, c)) for f in (phi, phi_d1, phi_d2))
    return 4.0 * s.w * (
        (2.0 * p1 ** 2 - p * p2) * (p + t * p1) + 40.0 * c * p1 * (2.0 * p1 + t * p2)
    )


def _sweep(kind, samples, seed, tol, stat_fn) -> CertReport:
    """Shared driver: stat_fn maps sampled states to a scaled violation
    statistic (positive = violation); PASS iff max stays <= tol."""
    params = _params(kind)
    if samples <= 0:
        return CertReport(kind.name, params, 0, -np.inf, None, [], True)
    worst = -np.inf
    worst_pt = None
    violations = []
    done = 0
    chunk_i = 0
    while done < samples:
        m = min(1 << 16, samples - done)
        rng = stream(seed, chunk_i)
        chunk_i += 1
        x, y, w, v = _sample_states(kind, m, rng)
        rel = stat_fn(x, y, w, v, rng)
        i = int(np.argmax(rel))
        if rel[i] > worst:
            worst = float(rel[i])
            worst_pt = StatePoint(float(x[i]), float(y[i]), float(w[i]), float(v[i]))
        bad = np.nonzero(rel > tol)[0]
        for j in bad[:4]:
            violations.append(
                (StatePoint(float(x[j]), float(y[j]), float(w[j]), float(v[j])),
                 float(rel[j]))
            )
        done += m
    return CertReport(
        kind.name, params, samples, worst, worst_pt, violations, worst <= tol
    )


def check_majorization_initial(
    kind: BellmanKind, samples: int, seed: int, tol: float = 1e-12
) -> CertReport:
    """B(x, x^2, w, v) <= 0 over the band (the induction's starting bound)."""

    def stat(x, y, w, v, rng):
        val = bellman_value(kind, x, x ** 2, w, v)
        scale = 1.0 + np.abs(x ** 2 * w)
        return val / scale

    return _sweep(kind, samples, seed, tol, stat)


def check_majorization_lower(
    kind: BellmanKind, samples: int, seed: int, tol: float = 1e-12
) -> CertReport:
    """B >= its kind's lower bound over the whole domain."""

    def stat(x, y, w, v, rng):
        gap = lower_bound(kind, x, y, w, v) - bellman_value(kind, x, y, w, v)
        scale = 1.0 + np.abs(bellman_value(kind, x, y, w, v))
        return gap / scale

    return _sweep(kind, samples, seed, tol, stat)


def check_concavity(
    kind: BellmanKind, samples: int, seed: int, tol: float = 1e-9
) -> CertReport:
    """Midpoint concavity: 2 B(x,y,w,v) >= B(x-d, y+d^2, w-e, v-f)
    + B(x+d, y+d^2, w+e, v+f) whenever the segment (w -+ e, v -+ f)
    stays inside the band.  Admissible (d, e, f) found by rejection."""
    params = _params(kind)
    if samples <= 0:
        return CertReport(kind.name, params, 0, -np.inf, None, [], True)
    c, r = kind.c, kind.r
    worst = -np.inf
    worst_pt = None
    violations = []
    done = 0
    chunk_i = 0
    while done < samples:
        m = min(1 << 16, 4 * (samples - done))
        rng = stream(seed, chunk_i)
        chunk_i += 1
        x, y, w, v = _sample_states(kind, m, rng)
        d = rng.uniform(-1.0, 1.0, size=m) * (np.abs(x) + 1.0)
        e = w * rng.uniform(-0.5, 0.5, size=m) * rng.random(m)
        f = v * rng.uniform(-0.5, 0.5, size=m) * rng.random(m)
        lo, hi = _segment_range_batch(w - e, v - f, w + e, v + f, r)
        ok = (
            (w - np.abs(e) > 0.0)
            & (v - np.abs(f) > 0.0)
            & (lo >= 1.0)
            & (hi <= c)
        )
        if not np.any(ok):
            continue
        x, y, w, v, d, e, f = (a[ok] for a in (x, y, w, v, d, e, f))
        keep = min(x.size, samples - done)
        x, y, w, v, d, e, f = (a[:keep] for a in (x, y, w, v, d, e, f))
        lhs = 2.0 * bellman_value(kind, x, y, w, v)
        rhs = bellman_value(kind, x - d, y + d ** 2, w - e, v - f) + bellman_value(
            kind, x + d, y + d ** 2, w + e, v + f
        )
        rel = (rhs - lhs) / (1.0 + np.abs(lhs) + np.abs(rhs))
        i = int(np.argmax(rel))
        if rel[i] > worst:
            worst = float(rel[i])
            worst_pt = StatePoint(float(x[i]), float(y[i]), float(w[i]), float(v[i]))
        bad = np.nonzero(rel > tol)[0]
        for j in bad[:4]:
            violations.append(
                (StatePoint(float(x[j]), float(y[j]), float(w[j]), float(v[j])),
                 float(d[j]), float(e[j]), float(f[j]), float(rel[j]))
            )
        done += keep
    return CertReport(
        kind.name, params, samples, worst, worst_pt, violations, worst <= tol
    )

"""Littlewood-Paley operators on the unit disc.

Boundary data are real trigonometric polynomials, so harmonic extensions
and their gradients are finite series evaluated exactly; only the area
integral behind the kernel-weighted square function is quadrature.  The
radial direction uses the Gauss rule for the log(1/|z|) weight, the
angular direction a uniform grid, where the circular convolution against
the Poisson kernel is done by FFT.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .quadrule import gauss_legendre01, gauss_log_rule

__all__ = [
    "TrigPoly",
    "CircleWeight",
    "DiscGrid",
    "poisson_grad_sq",
    "gstar_sq_disc",
    "gstar_disc",
    "g_sq_disc",
    "lusin_area_sq_disc",
    "poisson_a2_disc",
    "poisson_ar_disc",
    "verify_thm_disc",
]


class TrigPoly:
    """Real trigonometric polynomial sum_{|k|<=K} c_k e^{ik theta}.

    Stored as the spectrum for k >= 0; negative frequencies are the
    conjugates, which keeps the function real-valued by construction.
    """

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=complex).copy()
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a nonempty 1-d array (k = 0..K)")
        if abs(c[0].imag) > 1e-15 * (1.0 + abs(c[0])):
            raise ValueError("c_0 must be real for a real-valued polynomial")
        c[0] = c[0].real
        c.setflags(write=False)
        self.coeffs = c

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def eval(self, theta):
        theta = np.asarray(theta, dtype=float)
        ks = np.arange(1, self.coeffs.size)
        phases = np.exp(1j * np.multiply.outer(theta, ks))
        return self.coeffs[0].real + 2.0 * np.real(phases @ self.coeffs[1:])

    @property
    def mean(self) -> float:
        """u_f(0), the value of the harmonic extension at the origin."""
        return float(self.coeffs[0].real)

    @property
    def norm_sq(self) -> float:
        """L2 norm squared under the normalized measure d theta / 2 pi."""
        return float(self.coeffs[0].real ** 2 + 2.0 * np.sum(np.abs(self.coeffs[1:]) ** 2))

    def grad_sq(self, r, theta):
        """|grad u_f|^2 at z = r e^{i theta}: |du/dr|^2 + |du/d theta|^2/r^2,
        with the r -> 0 limit built in (series in r^( |k| - 1 ))."""
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        if np.any(r < 0.0) or np.any(r >= 1.0):
            raise ValueError("need 0 <= r < 1")
        K = self.degree
        if K == 0:
            return np.zeros(np.broadcast(r, theta).shape)
        ks = np.arange(1, K + 1)
        rad = np.power(r[..., None], ks - 1)  # r^(k-1), exact at r = 0
        ph = np.exp(1j * theta[..., None] * ks)
        # A = du/dr, D = (1/r) du/d theta; only k >= 1 contributes and the
        # positive/negative frequency halves are conjugate
        terms = self.coeffs[1:] * ks * rad * ph
        A = 2.0 * np.real(np.sum(terms, axis=-1))
        D = -2.0 * np.imag(np.sum(terms, axis=-1))
        return A ** 2 + D ** 2

    def to_json(self) -> str:
        return json.dumps(
            {
                "K": self.degree,
                "re": [float(v) for v in self.coeffs.real],
                "im": [float(v) for v in self.coeffs.imag],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "TrigPoly":
        obj = json.loads(text)
        c = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
        if c.size != obj["K"] + 1:
            raise ValueError("coefficient count does not match declared degree")
        return cls(c)

    @classmethod
    def from_cos_sin(cls, a0=0.0, cos_amps=(), sin_amps=()) -> "TrigPoly":
        """a0 + sum a_k cos(k theta) + sum b_k sin(k theta)."""
        K = max(len(cos_amps), len(sin_amps))
        c = np.zeros(K + 1, dtype=complex)
        c[0] = a0
        for k in range(1, K + 1):
            a = cos_amps[k - 1] if k <= len(cos_amps) else 0.0
            b = sin_amps[k - 1] if k <= len(sin_amps) else 0.0
            c[k] = 0.5 * (a - 1j * b)
        return cls(c)


def poisson_grad_sq(f: TrigPoly, z: complex) -> float:
    """|grad u_f|^2 at the point z of the open disc."""
    z = complex(z)
    if abs(z) >= 1.0:
        raise ValueError("z must lie in the open unit disc")
    return float(f.grad_sq(abs(z), np.angle(z)))


class CircleWeight:
    """Positive function on the uniform angular grid of the circle."""

    def __init__(self, values):
        v = np.asarray(values, dtype=float).copy()
        if v.ndim != 1 or v.size < 4:
            raise ValueError("need a 1-d grid of at least 4 angular values")
        if np.any(v <= 0.0):
            raise ValueError("weight values must be strictly positive")
        v.setflags(write=False)
        self.values = v

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def mean(self) -> float:
        return float(self.values.mean())

    @cached_property
    def spectrum(self) -> np.ndarray:
        """Fourier coefficients for k = 0..M/2 (trig interpolation),
        truncated past the last coefficient above rounding noise."""
        spec = np.fft.rfft(self.values) / self.size
        mags = np.abs(spec)
        keep = np.nonzero(mags > 1e-15 * mags.max())[0]
        return spec[: keep[-1] + 1] if keep.size else spec[:1]

    def power(self, expo: float) -> "CircleWeight":
        return CircleWeight(self.values ** expo)

    def poisson_eval(self, r, theta) -> np.ndarray:
        """Harmonic extension at r e^{i theta}, broadcasting over grids."""
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        spec = self.spectrum
        ks = np.arange(1, spec.size)
        rad = np.power(r[..., None], ks)
        ph = np.exp(1j * theta[..., None] * ks)
        out = spec[0].real + 2.0 * np.real((rad * ph) @ spec[1:])
        return out

    @classmethod
    def from_function(cls, fn, m: int = 1024) -> "CircleWeight":
        theta = 2.0 * np.pi * np.arange(m) / m
        return cls(fn(theta))

    def to_csv_line(self) -> str:
        return ",".join(format(v, ".17g") for v in self.values)

    @classmethod
    def from_csv_line(cls, line: str) -> "CircleWeight":
        return cls(np.array([float(p) for p in line.strip().split(",")]))


@dataclass(frozen=True)
class DiscGrid:
    """Tensor quadrature grid: Gauss-log radial nodes x uniform angles.

    Radial nodes and weights integrate q(r) log(1/r) exactly for
    polynomial q up to degree 2 n_radial - 1 (the recorded exactness
    degree); the angular trapezoid is exact for trigonometric
    polynomials of degree below n_angular.
    """

    n_radial: int = 64
    n_angular: int = 1024

    @property
    def exactness_degree(self) -> int:
        return 2 * self.n_radial - 1

    @cached_property
    def radial(self) -> tuple[np.ndarray, np.ndarray]:
        return gauss_log_rule(self.n_radial)

    @property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_angular) / self.n_angular

    def log_area_integral(self) -> float:
        """Quadrature of integral over the disc of log(1/|z|) dA; the
        exact value is pi/2."""
        r, w = self.radial
        return float(2.0 * np.pi * np.sum(w * r))


def gstar_sq_disc(f: TrigPoly, grid: DiscGrid, w: CircleWeight | None = None):
    """Quadrature of the kernel-weighted square function, squared:

        gstar^2(theta) = (1/pi) * integral over the disc of
                         P_z(theta) log(1/|z|) |grad u_f(z)|^2 dA(z).

    The angular integral against the Poisson kernel is applied as the
    Fourier multiplier r^|m| on the sampled energy (the kernel's exact
    coefficients), so for band-limited data the only approximation left
    is the radial rule, which is itself exact for polynomial integrands
    up to the grid's exactness degree.

    Returns the values on the angular grid; with a weight also returns
    the weighted boundary integral (1/2pi) integral gstar^2 w d theta.
    """
    rnodes, rweights = grid.radial
    theta = grid.theta
    energy = f.grad_sq(rnodes[:, None], theta[None, :])  # (n_radial, M)
    fe = np.fft.rfft(energy, axis=1)
    profile = rnodes[:, None] ** np.arange(fe.shape[1])[None, :]
    # each row: sum_m E_hat(m) r^|m| e^(i m theta) = (1/2pi) int P_r E
    conv = np.fft.irfft(fe * profile, n=grid.n_angular, axis=1)
    gs = 2.0 * np.sum((rweights * rnodes)[:, None] * conv, axis=0)
    # kernel positivity makes negative values impossible in exact
    # arithmetic; clip the float noise
    gs = np.maximum(gs, 0.0)
    if w is None:
        return gs
    if w.size != grid.n_angular:
        raise ValueError("weight grid does not match the angular grid")
    return gs, float(np.mean(gs * w.values))


def gstar_disc(f: TrigPoly, grid: DiscGrid) -> np.ndarray:
    return np.sqrt(gstar_sq_disc(f, grid))


def g_sq_disc(f: TrigPoly, theta, n_radial: int = 64):
    """g(f)^2 at boundary angle(s): integral_0^1 (1-r) |grad u(r e^{i theta})|^2 dr.

    The integrand is polynomial in r, so Gauss-Legendre is exact here.
    """
    r, wts = gauss_legendre01(n_radial)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    vals = f.grad_sq(r[:, None], theta[None, :])
    out = np.sum(wts[:, None] * (1.0 - r[:, None]) * vals, axis=0)
    return out if out.size > 1 else float(out[0])


def _stoltz_mask(r, alpha_grid, aperture: float, theta0: float):
    """Membership in the convex hull of the disc |z| < aperture and the
    boundary point e^{i theta0}: there must be s in [0, 1] with
    |z - (1-s) p| <= s * aperture, a quadratic condition in s."""
    a2 = aperture * aperture
    cosd = np.cos(alpha_grid - theta0)
    # q(u) = u^2 (1 - a^2) + 2u (a^2 - r cos d) + r^2 - a^2 with u = 1 - s
    qa = 1.0 - a2
    qb = a2 - r * cosd
    qc = r * r - a2
    ustar = np.clip(-qb / qa, 0.0, 1.0)
    qmin = qa * ustar ** 2 + 2.0 * qb * ustar + qc
    return qmin <= 0.0


def lusin_area_sq_disc(
    f: TrigPoly,
    alpha: float,
    theta: float,
    n_radial: int = 128,
    n_angular: int = 512,
) -> float:
    """Area integral squared over the Stoltz domain of aperture alpha:
    quadrature of |grad u|^2 over the masked polar grid."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("need aperture in (0, 1)")
    r, wts = gauss_legendre01(n_radial)
    ang = 2.0 * np.pi * np.arange(n_angular) / n_angular
    dang = 2.0 * np.pi / n_angular
    mask = _stoltz_mask(r[:, None], ang[None, :], alpha, theta)
    vals = f.grad_sq(r[:, None], ang[None, :])
    return float(np.sum(wts[:, None] * r[:, None] * vals * mask) * dang)


def _ar_product_grid(w: CircleWeight, r: float, rr, theta):
    v = w.power(-1.0 / (r - 1.0))
    uw = w.poisson_eval(rr[:, None], theta[None, :])
    uv = v.poisson_eval(rr[:, None], theta[None, :])
    return uw * uv ** (r - 1.0)


def poisson_ar_disc(w: CircleWeight, r: float, grid: DiscGrid) -> float:
    """Grid supremum (with local refinement) of
    u_w(z) * (u_{w^{-1/(r-1)}}(z))^(r-1); at r = 2 this is the disc A_2
    characteristic.  Always >= 1 by Cauchy-Schwarz."""
    if not 1.0 < r <= 2.0:
        raise ValueError("need r in (1, 2]")
    rnodes, _ = grid.radial
    rr = np.concatenate(([0.0], rnodes, [1.0 - 1e-3, 1.0 - 1e-4]))
    theta = grid.theta
    prod = _ar_product_grid(w, r, rr, theta)
    i, j = np.unravel_index(np.argmax(prod), prod.shape)
    best = float(prod[i, j])
    r0, t0 = rr[i], theta[j]
    dr = 0.05
    dt = 2.0 * np.pi / grid.n_angular
    for _ in range(8):
        rloc = np.clip(np.linspace(r0 - dr, r0 + dr, 9), 0.0, 1.0 - 1e-9)
        tloc = np.linspace(t0 - dt, t0 + dt, 9)
        loc = _ar_product_grid(w, r, rloc, tloc)
        i, j = np.unravel_index(np.argmax(loc), loc.shape)
        if loc[i, j] > best:
            best = float(loc[i, j])
        r0, t0 = rloc[i], tloc[j]
        dr *= 0.35
        dt *= 0.35
    return max(best, 1.0)


def poisson_a2_disc(w: CircleWeight, grid: DiscGrid) -> float:
    return poisson_ar_disc(w, 2.0, grid)


def verify_thm_disc(
    f: TrigPoly,
    w: CircleWeight,
    grid: DiscGrid,
    r_grid=(1.2, 1.5, 1.8),
    slack: float = 0.01,
) -> list[dict]:
    """The three boundary inequalities with the disc characteristics,
    each accepted with the given relative quadrature slack:

      |f - u_f(0)|^2_w <= 80  c2      gstar^2_w
      gstar^2_w        <= min_r (r/(2-r)) c_r  |f|^2_w
      gstar^2_w        <= 2^(7/2) c2^2        |f|^2_w
    """
    if w.size != grid.n_angular:
        raise ValueError("weight grid does not match the angular grid")
    theta = grid.theta
    fv = f.eval(theta)
    wv = w.values
    gs_sq, gs_w = gstar_sq_disc(f, grid, w)
    lhs_low = float(np.mean((fv - f.mean) ** 2 * wv))
    f_w = float(np.mean(fv ** 2 * wv))
    c2 = poisson_a2_disc(w, grid)

    checks = []
    rhs = 80.0 * c2 * gs_w
    checks.append(
        {
            "name": "boundary_vs_80c_gstar",
            "lhs": lhs_low,
            "rhs": rhs,
            "pass": lhs_low <= rhs * (1.0 + slack) + 1e-15,
        }
    )
    best_rhs = np.inf
    for r in r_grid:
        cr = poisson_ar_disc(w, r, grid)
        best_rhs = min(best_rhs, (r / (2.0 - r)) * cr * f_w)
    checks.append(
        {
            "name": "gstar_vs_ar_family",
            "lhs": gs_w,
            "rhs": best_rhs,
            "pass": gs_w <= best_rhs * (1.0 + slack) + 1e-15,
        }
    )
    rhs = 2.0 ** 3.5 * c2 ** 2 * f_w
    checks.append(
        {
            "name": "gstar_vs_2_72_c2",
            "lhs": gs_w,
            "rhs": rhs,
            "pass": gs_w <= rhs * (1.0 + slack) + 1e-15,
        }
    )
    return checks

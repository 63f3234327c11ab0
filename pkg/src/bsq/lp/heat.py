"""Parabolic Littlewood-Paley operators for the 1-d heat semigroup.

Kernel convention: p_t(x) = exp(-x^2/(2t)) / sqrt(2 pi t), variance t.
Extensions are discrete Gaussian convolutions with the sampled kernel's
mass renormalized to one, and the time direction is a midpoint rule on a
log-spaced grid whose spacing divides an octave evenly.  That alignment
matters: the square function G is integrated over [2 t_min, T_max] while
the kernel-averaged G_* runs over [t_min, T_max], with t/2 mapping grid
nodes onto grid nodes, so the pointwise domination G <= sqrt(2) G_*
survives truncation exactly instead of up to an edge term.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "HeatGrid",
    "heat_extension",
    "heat_grad",
    "G_heat",
    "Gstar_heat",
    "PA_alpha_heat",
    "heat_a2",
    "classical_a2_grid",
    "grad_fields",
    "compare_a2_classical_heat",
    "verify_thm_heat",
    "gaussian_bump",
    "norm_sq",
    "truncation_tail",
]


@dataclass(frozen=True)
class HeatGrid:
    """Spatial grid on [-L, L] with spacing h; log-spaced midpoint time
    nodes covering [t_min, t_max] with nodes_per_octave per doubling."""

    L: float = 16.0
    h: float = 1.0 / 64.0
    t_min: float = 2.0 ** -10
    t_max: float = 64.0
    nodes_per_octave: int = 12

    def __post_init__(self):
        octaves = np.log2(self.t_max / self.t_min)
        if abs(octaves - round(octaves)) > 1e-12:
            raise ValueError("t_max / t_min must be a power of two")

    @cached_property
    def x(self) -> np.ndarray:
        n = int(round(2 * self.L / self.h))
        return -self.L + self.h * np.arange(n + 1)

    @cached_property
    def t_nodes(self) -> np.ndarray:
        m = self.nodes_per_octave
        octaves = int(round(np.log2(self.t_max / self.t_min)))
        k = np.arange(octaves * m)
        return self.t_min * 2.0 ** ((k + 0.5) / m)

    @cached_property
    def t_weights(self) -> np.ndarray:
        # midpoint rule in log t: dt = ln 2 / m * t, uniform per node
        return self.t_nodes * (np.log(2.0) / self.nodes_per_octave)

    def kernel(self, t: float) -> np.ndarray:
        """Sampled heat kernel (odd length), mass renormalized to 1."""
        if t <= 0:
            raise ValueError("need t > 0")
        reach = max(1, int(np.ceil(8.0 * np.sqrt(t) / self.h)))
        off = self.h * np.arange(-reach, reach + 1)
        vals = np.exp(-off ** 2 / (2.0 * t))
        return vals / (vals.sum() * self.h)

    def kernel_dx(self, t: float) -> np.ndarray:
        """Exact x-derivative of the kernel, sharing its normalization."""
        reach = max(1, int(np.ceil(8.0 * np.sqrt(t) / self.h)))
        off = self.h * np.arange(-reach, reach + 1)
        vals = np.exp(-off ** 2 / (2.0 * t))
        return (-off / t) * vals / (vals.sum() * self.h)


def _conv_centered(signal: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Linear convolution, centered slice of the signal's length.
    Kernel length must be odd.  FFT-based; zero padding outside."""
    n, m = signal.size, kernel.size
    size = 1 << int(np.ceil(np.log2(n + m - 1)))
    full = np.fft.irfft(np.fft.rfft(signal, size) * np.fft.rfft(kernel, size), size)
    half = (m - 1) // 2
    return full[half:half + n]


def heat_extension(f_vals: np.ndarray, t: float, grid: HeatGrid) -> np.ndarray:
    """P_t f on the grid (f zero outside the grid)."""
    return _conv_centered(np.asarray(f_vals, dtype=float), grid.kernel(t)) * grid.h


def heat_grad(f_vals: np.ndarray, t: float, grid: HeatGrid) -> np.ndarray:
    """d/dx P_t f on the grid, by differentiating the kernel."""
    return _conv_centered(np.asarray(f_vals, dtype=float), grid.kernel_dx(t)) * grid.h


def grad_fields(f_vals, grid: HeatGrid):
    """(t, weight, grad field) for every time node, computed once so the
    square functions can share one pass."""
    return [
        (t, wt, heat_grad(f_vals, t, grid))
        for t, wt in zip(grid.t_nodes, grid.t_weights)
    ]


def G_heat(f_vals, grid: HeatGrid, fields=None) -> np.ndarray:
    """G(f) on the grid: sqrt of integral over [2 t_min, t_max] of
    |d/dx P_t f(x)|^2 dt (first octave dropped; see module docstring)."""
    fields = fields if fields is not None else grad_fields(f_vals, grid)
    acc = np.zeros(grid.x.size)
    for t, wt, g in fields[grid.nodes_per_octave:]:
        acc += wt * g ** 2
    return np.sqrt(acc)


def Gstar_heat(f_vals, grid: HeatGrid, fields=None) -> np.ndarray:
    """G_*(f) on the grid: kernel-averaged squared gradients over
    [t_min, t_max]."""
    fields = fields if fields is not None else grad_fields(f_vals, grid)
    acc = np.zeros(grid.x.size)
    for t, wt, g in fields:
        acc += wt * _conv_centered(g ** 2, grid.kernel(t)) * grid.h
    return np.sqrt(np.maximum(acc, 0.0))


def PA_alpha_heat(f_vals, alpha: float, grid: HeatGrid, fields=None) -> np.ndarray:
    """Parabolic area function of aperture alpha: for each x, the
    gradient square integrated over the cone |z - x| < alpha sqrt(t)
    against t^(-1/2) dz dt (the n = 1 scaling)."""
    if alpha <= 0:
        raise ValueError("need a positive aperture")
    fields = fields if fields is not None else grad_fields(f_vals, grid)
    acc = np.zeros(grid.x.size)
    for t, wt, g in fields:
        halfwidth = alpha * np.sqrt(t) / grid.h
        jmax = int(np.ceil(halfwidth)) - 1  # strict inequality in the cone
        if jmax < 0:
            continue
        box = np.ones(2 * jmax + 1)
        acc += wt * t ** -0.5 * _conv_centered(g ** 2, box) * grid.h
    return np.sqrt(acc)


def gaussian_bump(grid: HeatGrid, variance: float = 0.25, center: float = 0.0):
    """Unit-mass Gaussian sampled on the grid (supported well inside)."""
    x = grid.x
    return np.exp(-(x - center) ** 2 / (2.0 * variance)) / np.sqrt(
        2.0 * np.pi * variance
    )


def norm_sq(vals, grid: HeatGrid, weight=None) -> float:
    w = 1.0 if weight is None else weight
    return float(np.sum(vals ** 2 * w) * grid.h)


def truncation_tail(f_vals, grid: HeatGrid) -> float:
    """integral_{t_max}^inf |d/dx P_t f|^2_{L2} dt = |P_{t_max} f|^2_{L2},
    the exact tail missing from the truncated square functions."""
    return norm_sq(heat_extension(f_vals, grid.t_max, grid), grid)


def heat_a2(w_vals, grid: HeatGrid, r: float = 2.0, t_subsample: int = 2) -> float:
    """sup over the (x, t) grid of P_t w (P_t w^{-1/(r-1)})^(r-1).

    The weight is extended beyond the grid by its edge values before
    convolving, so the sup is over genuine heat averages of the extended
    weight."""
    w_vals = np.asarray(w_vals, dtype=float)
    if np.any(w_vals <= 0.0):
        raise ValueError("weight must be strictly positive")
    v_vals = w_vals ** (-1.0 / (r - 1.0))
    max_reach = int(np.ceil(8.0 * np.sqrt(grid.t_max) / grid.h))
    wp = np.pad(w_vals, max_reach, mode="edge")
    vp = np.pad(v_vals, max_reach, mode="edge")
    best = float(np.max(w_vals * v_vals ** (r - 1.0)))  # t -> 0 limit
    for t in grid.t_nodes[::t_subsample]:
        ker = grid.kernel(t)
        pw = _conv_centered(wp, ker)[max_reach:-max_reach] * grid.h
        pv = _conv_centered(vp, ker)[max_reach:-max_reach] * grid.h
        best = max(best, float(np.max(pw * pv ** (r - 1.0))))
    return max(best, 1.0)


def classical_a2_grid(w_vals, grid: HeatGrid, p: float = 2.0) -> float:
    """Muckenhoupt characteristic over all grid subintervals (prefix sums)."""
    w_vals = np.asarray(w_vals, dtype=float)
    v_vals = w_vals ** (-1.0 / (p - 1.0))
    cw = np.concatenate(([0.0], np.cumsum(w_vals)))
    cv = np.concatenate(([0.0], np.cumsum(v_vals)))
    n = w_vals.size
    best = 1.0
    for length in range(1, n + 1):
        aw = (cw[length:] - cw[:-length]) / length
        av = (cv[length:] - cv[:-length]) / length
        best = max(best, float(np.max(aw * av ** (p - 1.0))))
    return best


def compare_a2_classical_heat(w_vals, grid: HeatGrid) -> dict:
    heat = heat_a2(w_vals, grid)
    classical = classical_a2_grid(w_vals, grid)
    return {"heat": heat, "classical": classical, "ratio": heat / classical}


def verify_thm_heat(
    f_vals,
    w_vals,
    grid: HeatGrid,
    r_grid=(1.2, 1.5, 1.8),
    slack: float = 0.02,
) -> list[dict]:
    """The three heat-weight inequalities with 2% quadrature slack:

      |f|^2_w      <= 160 c2      |G_* f|^2_w   (tail bound subtracted
                                                 from the right side)
      |G_* f|^2_w  <= min_r (r/(2-r)) c_r |f|^2_w
      |G_* f|^2_w  <= 2^(7/2) c2^2       |f|^2_w

    The truncated G_* underestimates the true one, so the missing tail
    (bounded by sup w times the exact unweighted tail) is added to the
    left side of the upper estimates to keep them conservative too.
    """
    f_vals = np.asarray(f_vals, dtype=float)
    w_vals = np.asarray(w_vals, dtype=float)
    fields = grad_fields(f_vals, grid)
    gstar = Gstar_heat(f_vals, grid, fields)
    f_w = norm_sq(f_vals, grid, w_vals)
    gs_w = norm_sq(gstar, grid, w_vals)
    tail_w = float(np.max(w_vals)) * truncation_tail(f_vals, grid)
    c2 = heat_a2(w_vals, grid)

    checks = []
    rhs = 160.0 * c2 * max(gs_w - tail_w, 0.0)
    checks.append(
        {
            "name": "f_vs_160c_Gstar",
            "lhs": f_w,
            "rhs": rhs,
            "pass": f_w <= rhs * (1.0 + slack) + 1e-15,
        }
    )
    lhs_up = gs_w + tail_w
    best_rhs = np.inf
    for r in r_grid:
        cr = heat_a2(w_vals, grid, r=r)
        best_rhs = min(best_rhs, (r / (2.0 - r)) * cr * f_w)
    checks.append(
        {
            "name": "Gstar_vs_ar_family",
            "lhs": lhs_up,
            "rhs": best_rhs,
            "pass": lhs_up <= best_rhs * (1.0 + slack) + 1e-15,
        }
    )
    rhs = 2.0 ** 3.5 * c2 ** 2 * f_w
    checks.append(
        {
            "name": "Gstar_vs_2_72_c2",
            "lhs": lhs_up,
            "rhs": rhs,
            "pass": lhs_up <= rhs * (1.0 + slack) + 1e-15,
        }
    )
    return checks

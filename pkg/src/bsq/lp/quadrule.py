"""Quadrature rules on [0, 1].

gauss_log_rule builds the Gauss rule for the weight log(1/x), the
natural weight of the disc area integrals.  Recurrence coefficients come
from the modified Chebyshev (Wheeler) algorithm fed with the shifted
Legendre modified moments of log(1/x), which are known in closed form:

    integral_0^1 log(1/x) P*_k(x) dx = 1            (k = 0)
                                     = (-1)^k/(k(k+1))  (k >= 1)

with P*_k the shifted Legendre polynomial.  This pairing is the textbook
example where modified moments stay well conditioned while raw moments
fail.  Nodes and weights then follow from Golub-Welsch.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["gauss_log_rule", "gauss_legendre01"]


@lru_cache(maxsize=None)
def gauss_log_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights with sum(w * f(x)) = integral_0^1 f(x) log(1/x) dx,
    exact for polynomials f up to degree 2n - 1."""
    if n < 1:
        raise ValueError("need at least one node")
    N = 2 * n
    # modified moments against MONIC shifted Legendre: multiply the
    # standard moments by the leading-coefficient ratio (k!)^2/(2k)!
    m = np.zeros(N)
    m[0] = 1.0
    ratio = 1.0
    for k in range(1, N):
        ratio *= k / (2.0 * (2 * k - 1))
        m[k] = ratio * ((-1.0) ** k) / (k * (k + 1))
    # monic shifted Legendre recurrence: a_k = 1/2, b_k = k^2/(4(4k^2-1))
    a = np.full(N, 0.5)
    b = np.zeros(N)
    ks = np.arange(1, N)
    b[1:] = ks ** 2 / (4.0 * (4.0 * ks ** 2 - 1.0))

    alpha = np.zeros(n)
    beta = np.zeros(n)
    sig_prev = np.zeros(N)
    sig = m.copy()
    alpha[0] = a[0] + m[1] / m[0]
    beta[0] = m[0]
    for k in range(1, n):
        sig_next = np.zeros(N)
        for l in range(k, N - k):
            sig_next[l] = (
                sig[l + 1]
                - (alpha[k - 1] - a[l]) * sig[l]
                - beta[k - 1] * sig_prev[l]
                + b[l] * sig[l - 1]
            )
        alpha[k] = a[k] + sig_next[k + 1] / sig_next[k] - sig[k] / sig[k - 1]
        beta[k] = sig_next[k] / sig[k - 1]
        sig_prev, sig = sig, sig_next

    J = np.diag(alpha) + np.diag(np.sqrt(beta[1:]), 1) + np.diag(np.sqrt(beta[1:]), -1)
    nodes, vecs = np.linalg.eigh(J)
    weights = beta[0] * vecs[0, :] ** 2
    return nodes, weights


@lru_cache(maxsize=None)
def gauss_legendre01(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Standard Gauss-Legendre rule mapped to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w

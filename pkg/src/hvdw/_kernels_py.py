"""NumPy reference implementations of the spectral-sum kernels.

These are the fallback used when the compiled ``_kernels`` extension is not
available, and the baseline the benchmark compares against.
"""

import numpy as np


def imag_axis_sum(gaps, weights, u):
    """out[a, m] = sum_k weights[k, m] * 2 g_k / (g_k^2 + u_a^2)."""
    gaps = np.asarray(gaps, dtype=float)
    u = np.asarray(u, dtype=float)
    kernel = 2.0 * gaps[None, :] / (gaps[None, :] ** 2 + u[:, None] ** 2)
    return kernel @ np.asarray(weights, dtype=float)


def real_axis_sum(gaps, weights, omega):
    """out[a, m] = sum_k weights[k, m] * (1/(g_k - w_a) + 1/(g_k + w_a))."""
    gaps = np.asarray(gaps, dtype=float)
    w = np.asarray(omega, dtype=float)
    kernel = 1.0 / (gaps[None, :] - w[:, None]) + 1.0 / (gaps[None, :] + w[:, None])
    return kernel @ np.asarray(weights, dtype=float)


def pair_sum(gaps_a, weights_a, gaps_b, weights_b):
    """out[p, q] = sum_{i,j} weights_a[i, p] weights_b[j, q] / (ga_i + gb_j)."""
    ga = np.asarray(gaps_a, dtype=float)
    gb = np.asarray(gaps_b, dtype=float)
    inv = 1.0 / (ga[:, None] + gb[None, :])
    return np.asarray(weights_a, dtype=float).T @ inv @ np.asarray(weights_b, dtype=float)

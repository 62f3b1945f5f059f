"""Composite Gauss-Legendre rules on finite and semi-infinite ranges."""

from functools import lru_cache

import numpy as np


class QuadratureError(RuntimeError):
    """Raised when a quadrature fails to reach its tolerance."""


@lru_cache(maxsize=None)
def _legendre(order):
    x, w = np.polynomial.legendre.leggauss(order)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def panel_rule(edges, order=24):
    """Nodes and weights of a composite Gauss-Legendre rule.

    Parameters
    ----------
    edges : array_like
        Monotone panel boundaries.
    order : int
        Points per panel.

    Returns
    -------
    nodes, weights : ndarray
    """
    edges = np.asarray(edges, dtype=float)
    x, w = _legendre(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def radial_grid(r_max, order=32, core=1.0, width=2.0):
    """Composite rule on [0, r_max], geometric near the origin.

    Panels double in size from ``core/64`` up to ``width`` and are then uniform,
    which resolves both the r**(l+1) onset and the slow oscillations of diffuse
    Rydberg functions.
    """
    edges = [0.0]
    h = core / 64.0
    while edges[-1] < r_max:
        edges.append(edges[-1] + h)
        h = min(2.0 * h, width)
    return panel_rule(edges, order)


def integrate_adaptive(func, a, b, rtol=1e-13, order=32, max_level=12):
    """Integrate ``func`` on [a, b] by panel doubling until successive estimates agree.

    ``func`` must accept a 1-D array of nodes.
    """
    npanel = 4
    previous = None
    for _ in range(max_level):
        nodes, weights = panel_rule(np.linspace(a, b, npanel + 1), order)
        value = float(np.dot(weights, func(nodes)))
        if previous is not None and abs(value - previous) <= rtol * max(abs(value), 1e-300):
            return value
        previous = value
        npanel *= 2
    raise QuadratureError(
        f"no convergence on [{a}, {b}] after {npanel // 2} panels: last={value!r}, previous={previous!r}"
    )


def log_rule(u_lo, u_hi, panel_width, order=20):
    """Rule for int_{u_lo}^{u_hi} g(u) du with nodes uniform in ln u.

    The returned weights already include the Jacobian ``du = u d(ln u)``.
    """
    t0, t1 = np.log(u_lo), np.log(u_hi)
    npanel = max(1, int(np.ceil((t1 - t0) / panel_width)))
    t, w = panel_rule(np.linspace(t0, t1, npanel + 1), order)
    u = np.exp(t)
    return u, w * u


def semi_infinite(func, u_lo, u_hi, rtol=1e-10, panel_width=1.0, order=20, max_level=8):
    """Adaptive integral of ``func`` over (0, infinity).

    The integrand is sampled on a logarithmic grid spanning [u_lo, u_hi], with
    the sliver (0, u_lo) added as a rectangle. Panel widths are halved until the
    relative change drops below ``rtol``. ``func`` maps an array of u to an array
    of values; the caller picks u_lo far below and u_hi far above every scale
    present in the integrand.

    Returns
    -------
    value : float
    nodes : int
        Node count of the accepted rule.
    """
    head = u_lo * float(func(np.array([u_lo]))[0])
    previous = None
    width = panel_width
    history = []
    for _ in range(max_level):
        u, w = log_rule(u_lo, u_hi, width, order)
        value = head + float(np.dot(w, func(u)))
        history.append((u.size, value))
        if previous is not None and abs(value - previous) <= rtol * abs(value):
            return value, u.size
        if previous is not None and value == 0.0 and previous == 0.0:
            return value, u.size
        previous = value
        width *= 0.5
    detail = ", ".join(f"{n} nodes: {v:.16e}" for n, v in history)
    raise QuadratureError(f"semi-infinite quadrature did not converge ({detail})")

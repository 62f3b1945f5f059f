"""Retarded two-atom interaction energy, split into Wick and pole parts.

All quantities are in atomic units (Hartree, Bohr radius, c = 1/alpha). Atom A
is the excited reference, atom B the ground-state partner. The energy at
separation R is

    Delta E = W + Q,   Q = P - (i/2) Gamma,

with W the imaginary-frequency integral (smooth in R) and Q the residues
from virtual states below the reference (oscillatory in R). For identical
atoms an exchange (mixing) channel is added with the sign of the two-atom
symmetry.
"""

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from . import atomic, quadrature
from .atomic import AveragingScheme, BoundState
from .response import (
    DEFAULT_SETTINGS,
    ResonanceError,
    Settings,
    SpectralPolarizability,
    direct_spectrum,
    mixed_spectrum,
)

Z_AXIS = (0.0, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class GeometryTensors:
    unit: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray


def geometry_tensors(r_vector=Z_AXIS):
    """Transverse projector alpha_ij and near-field tensor beta_ij for a separation vector."""
    v = np.asarray(r_vector, dtype=float)
    norm = np.linalg.norm(v)
    if not norm > 0:
        raise ValueError("separation vector must be nonzero")
    n = v / norm
    P = np.outer(n, n)
    eye = np.eye(3)
    return GeometryTensors(n, eye - P, eye - 3.0 * P)


def propagator_scalar_f(omega, R, alpha=DEFAULT_SETTINGS.fine_structure):
    """f(w, R) = i c/(k R) - c^2/(w^2 R^2) with k = sqrt(w^2 + i0).

    On the real axis k = |w|; on the positive imaginary axis w = iu gives
    k = iu and the real value f = c/(uR) + c^2/(u^2 R^2).
    """
    omega = complex(omega)
    if omega == 0:
        raise ValueError("f(w, R) is singular at w = 0")
    if not R > 0:
        raise ValueError("R must be positive")
    c = 1.0 / alpha
    k = np.sqrt(omega * omega)
    if k.imag < 0 or (k.imag == 0 and k.real < 0):
        k = -k
    return 1j * c / (k * R) - c * c / (omega * omega * R * R)


def pole_tensor_f(r):
    """Coefficients of (beta beta, alpha beta, alpha alpha) in f_ijkl(r).

    f_ijkl(r) = -exp(-2ir) [bb (1 + 2ir) - (2 ab + bb) r^2 - 2i ab r^3 + aa r^4],
    where ``bb`` stands for beta_ij beta_kl, ``ab`` for alpha_ij beta_kl and
    ``aa`` for alpha_ij alpha_kl. Accepts scalars or arrays; returns a complex
    array whose last axis holds (c_bb, c_ab, c_aa).
    """
    r = np.asarray(r, dtype=float)
    phase = -np.exp(-2j * r)
    c_bb = phase * (1.0 + 2j * r - r * r)
    c_ab = phase * (-2.0 * r * r - 2j * r**3)
    c_aa = phase * r**4
    return np.stack([c_bb, c_ab, c_aa], axis=-1)


def pole_tensor_f_parts(r):
    """Real part and width kernel of :func:`pole_tensor_f`.

    Returns ``(re, curly)`` with ``re = Re f`` and ``curly`` the braced
    expression for which ``Im f = -curly/2``; both in the (bb, ab, aa) layout.
    """
    r = np.asarray(r, dtype=float)
    cos2, sin2 = np.cos(2 * r), np.sin(2 * r)
    # A: even bracket bb - (2ab + bb) r^2 + aa r^4;  B: odd bracket bb - ab r^2
    A = np.stack([1.0 - r * r, -2.0 * r * r, r**4], axis=-1)
    B = np.stack([np.ones_like(r), -r * r, np.zeros_like(r)], axis=-1)
    re = -cos2[..., None] * A - 2 * r[..., None] * sin2[..., None] * B
    curly = -2 * sin2[..., None] * A + 4 * r[..., None] * cos2[..., None] * B
    return re, curly


def contract(X, Y, left, right):
    """sum_ijkl left_ij right_kl X_ik Y_jl for stacked tensors (..., 3, 3)."""
    return np.einsum("...ik,...ik->...", X, left @ Y @ np.swapaxes(right, -1, -2))


def monomial_contractions(X, Y, geo):
    """Contractions of X_ik Y_jl with beta beta, alpha beta and alpha alpha."""
    a, b = geo.alpha, geo.beta
    return np.stack([contract(X, Y, b, b), contract(X, Y, a, b), contract(X, Y, a, a)], axis=-1)


@dataclass(frozen=True)
class PairSpec:
    """An excited atom A interacting with a ground-state atom B.

    ``symmetry`` (+1 gerade, -1 ungerade) only matters for identical atoms.
    ``averaging`` applies to the projections of A; ``m`` selects one
    projection when averaging is single-projection.
    """

    state_a: BoundState
    state_b: BoundState = BoundState(1, 0)
    identical: bool = True
    symmetry: int = 1
    averaging: AveragingScheme = AveragingScheme.PROJECTION
    m: int = 0
    settings: Settings = DEFAULT_SETTINGS

    def __post_init__(self):
        if self.symmetry not in (1, -1):
            raise ValueError("symmetry must be +1 or -1")
        if self.state_b.n != 1:
            raise ValueError("atom B must be in its ground state")
        if self.state_b.energy > self.state_a.energy:
            raise ValueError("atom B must not lie above atom A")
        object.__setattr__(self, "averaging", AveragingScheme(self.averaging))

    @property
    def sign(self):
        return self.symmetry if self.identical else 0

    @property
    def weights(self):
        return atomic.averaging_weights(self.averaging, self.state_a.l, self.m)

    @property
    def label(self):
        return f"{self.state_a.label}-{self.state_b.label}"


@dataclass(frozen=True)
class InteractionBreakdown:
    R: float
    W_dir: float
    W_mix: float
    P_dir: float
    P_mix: float
    Gamma_dir: float
    Gamma_mix: float
    total: float

    FIELDS = ("R", "W_dir", "W_mix", "P_dir", "P_mix", "Gamma_dir", "Gamma_mix", "total")

    def row(self):
        return tuple(getattr(self, f) for f in self.FIELDS)


class PairModel:
    """Spectral data for one pair, shared by every R evaluation.

    Immutable after construction; safe to share between threads.
    """

    def __init__(self, pair):
        self.pair = pair
        s = pair.settings
        a, b = pair.state_a, pair.state_b
        self.alpha_a = direct_spectrum(a, s, pair.weights)
        self.alpha_b = direct_spectrum(b, s, [(b.m, 1.0)])
        # exchange loop: one (A-side, B-side) spectrum pair per projection of A
        self.mixing = []
        if pair.sign:
            for m, w in pair.weights:
                xa = mixed_spectrum(a, b, "A", s, ma=m)
                yb = mixed_spectrum(a, b, "B", s, ma=m)
                if xa.gaps.size and np.any(xa.numerators):
                    self.mixing.append((w, xa, yb))
        self._check_pole_partner()

    def _check_pole_partner(self):
        # alpha_B and the B-side mixed tensors must be regular at every pole frequency
        down = self.alpha_a.downward().gaps
        if down.size:
            self.alpha_b.real_axis(down)
            for _, _, yb in self.mixing:
                yb.real_axis(down)

    @cached_property
    def scales(self):
        gaps = [np.abs(self.alpha_a.pole_gaps), np.abs(self.alpha_b.pole_gaps)]
        for _, xa, yb in self.mixing:
            gaps += [np.abs(xa.pole_gaps), np.abs(yb.pole_gaps)]
        g = np.concatenate(gaps)
        g = g[g > 0]
        return float(g.min()), float(g.max())

    # -- Wick-rotated term ---------------------------------------------------

    def _wick_integral(self, R, geo, pairs, rtol=None):
        c = self.pair.settings.c
        lo, _ = self.scales
        u_lo = 1e-12 * min(lo, c / R)
        u_hi = max(min(40.0 * c / R, 1e6), 1e3 * u_lo)
        a, b = geo.alpha, geo.beta

        def integrand(u):
            y = u * R / c
            # u^2 T / c^2 with T = alpha + beta f(iu) and f = 1/y + 1/y^2, times R^2
            S = (y * y)[:, None, None] * a + (y + 1.0)[:, None, None] * b
            total = np.zeros(u.size)
            for w, X, Y in pairs:
                Xu = X.imaginary_axis(u)
                Yu = Y.imaginary_axis(u)
                total += w * contract(Xu, Yu, S, S).real
            return np.exp(-2.0 * y) * total

        value, _ = quadrature.semi_infinite(integrand, u_lo, u_hi, rtol=rtol or self.pair.settings.wick_rtol)
        return -value / (2.0 * np.pi * R**6)

    def wick(self, R, geo, include_degenerate=True):
        alpha_a = self.alpha_a if include_degenerate else self.alpha_a.regular()
        w_dir = self._wick_integral(R, geo, [(1.0, alpha_a, self.alpha_b)])
        w_mix = 0.0
        if self.mixing:
            pairs = [(w, xa if include_degenerate else xa.regular(), yb) for w, xa, yb in self.mixing]
            w_mix = self._wick_integral(R, geo, pairs)
        return w_dir, w_mix

    # -- pole term -----------------------------------------------------------

    def pole_residues(self, geo):
        """Downward poles with their (bb, ab, aa) contractions.

        Returns ``(gaps_dir, direct, gaps_mix, mixing)``; the mixing rows are
        already weighted by the projection average.
        """
        down = self.alpha_a.downward()
        direct = np.zeros((0, 3))
        if down.gaps.size:
            B = self.alpha_b.real_axis(down.gaps)
            direct = monomial_contractions(down.numerators, B, geo).real
        gaps_mix, mixing = [], []
        for w, xa, yb in self.mixing:
            xd = xa.downward()
            if xd.gaps.size == 0:
                continue
            Y = yb.real_axis(xd.gaps)
            gaps_mix.append(xd.gaps)
            mixing.append(w * monomial_contractions(xd.numerators, Y, geo).real)
        if gaps_mix:
            gaps_mix, mixing = np.concatenate(gaps_mix), np.concatenate(mixing)
        else:
            gaps_mix, mixing = np.zeros(0), np.zeros((0, 3))
        return down.gaps, direct, gaps_mix, mixing

    def pole(self, R, geo):
        gaps_dir, direct, gaps_mix, mixing = self.pole_residues(geo)
        c = self.pair.settings.c
        scale = 1.0 / R**6
        re_d, curly_d = pole_tensor_f_parts(gaps_dir * R / c)
        re_m, curly_m = pole_tensor_f_parts(gaps_mix * R / c)
        P_dir = scale * float(np.sum(re_d * direct))
        P_mix = scale * float(np.sum(re_m * mixing))
        G_dir = scale * float(np.sum(curly_d * direct))
        G_mix = scale * float(np.sum(curly_m * mixing))
        return P_dir, P_mix, G_dir, G_mix


@lru_cache(maxsize=32)
def model_for(pair):
    return PairModel(pair)


def _geometry(r_vector):
    return geometry_tensors(Z_AXIS if r_vector is None else r_vector)


def wick_term(pair, R, r_vector=None, include_degenerate=True):
    """(W_dir, W_mix) in Hartree; W_mix is zero for distinguishable atoms."""
    if not R > 0:
        raise ValueError("R must be positive")
    return model_for(pair).wick(R, _geometry(r_vector), include_degenerate)


def pole_term(pair, R, r_vector=None):
    """(P_dir, P_mix, Gamma_dir, Gamma_mix) in Hartree."""
    if not R > 0:
        raise ValueError("R must be positive")
    return model_for(pair).pole(R, _geometry(r_vector))


def width_gamma(pair, R, r_vector=None):
    """Distance-dependent width correction Gamma = -2 Im Q (direct + signed mixing)."""
    _, _, g_dir, g_mix = pole_term(pair, R, r_vector)
    return g_dir + pair.sign * g_mix


def total_energy(pair, R, r_vector=None):
    """Full breakdown at one separation; ``total`` is the real energy shift."""
    w_dir, w_mix = wick_term(pair, R, r_vector)
    p_dir, p_mix, g_dir, g_mix = pole_term(pair, R, r_vector)
    s = pair.sign
    total = w_dir + s * w_mix + p_dir + s * p_mix
    return InteractionBreakdown(float(R), w_dir, w_mix, p_dir, p_mix, g_dir, g_mix, total)


__all__ = [
    "GeometryTensors",
    "InteractionBreakdown",
    "PairModel",
    "PairSpec",
    "ResonanceError",
    "SpectralPolarizability",
    "contract",
    "geometry_tensors",
    "model_for",
    "pole_tensor_f",
    "pole_tensor_f_parts",
    "pole_term",
    "propagator_scalar_f",
    "total_energy",
    "wick_term",
    "width_gamma",
]

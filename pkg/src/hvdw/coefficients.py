"""Van der Waals coefficients, long-range tails and the Wick/pole crossover.

Coefficients are defined by spectral double sums, not by fits to W(R):

    D6 = sum_{v,q} beta_ij beta_kl N^A_v,ik N^B_q,jl / (E_{v,A} + E_{q,B})

and the analogous exchange sum for M6. Intra-manifold virtual states of A
(same n, degenerate at the nonrelativistic level) are kept at zero gap in D6
and M6; on their own they make up the intermediate-range coefficients
Dbar6 and Mbar6.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import kernels
from .atomic import BoundState
from .interaction import (
    Z_AXIS,
    PairSpec,
    contract,
    geometry_tensors,
    model_for,
    monomial_contractions,
    pole_tensor_f,
    wick_term,
)

ENVELOPE_KINDS = {
    # name: (power of alpha, power of rho)
    "pole_cos_r2": (4, -2),
    "pole_cos_r4": (2, -4),
    "pole_cos_r6": (0, -6),
    "pole_sin_r3": (3, -3),
    "pole_sin_r5": (1, -5),
    "vdw_r6": (0, -6),
    "wick_r7": (-1, -7),
}


@dataclass(frozen=True)
class CoefficientSet:
    d6_p: float
    d6_f: float
    d6_total: float
    m6: float
    dbar6: float
    mbar6: float
    cp_amplitude_dir: float
    cp_amplitude_mix: float
    pole_tail_terms: tuple = field(default=())


def _flat(tensors):
    k = tensors.shape[0]
    return np.ascontiguousarray(np.asarray(tensors, dtype=complex).reshape(k, 9)).view(float)


def _pair_sum_complex(gaps_a, nums_a, gaps_b, nums_b):
    """S_ab = sum_{v,q} nA_v,a nB_q,b / (ga_v + gb_q) for flattened complex tensors."""
    raw = kernels.pair_sum(gaps_a, _flat(nums_a), gaps_b, _flat(nums_b))
    rr, ii = raw[0::2, 0::2], raw[1::2, 1::2]
    ri, ir = raw[0::2, 1::2], raw[1::2, 0::2]
    return (rr - ii) + 1j * (ri + ir)


def _bb_kernel(geo):
    b = geo.beta
    # K[(i,k), (j,l)] = beta_ij beta_kl
    return np.einsum("ij,kl->ikjl", b, b).reshape(9, 9)


def _double_sum(spec_a, spec_b, geo):
    if spec_a.gaps.size == 0 or spec_b.gaps.size == 0:
        return 0.0
    S = _pair_sum_complex(spec_a.gaps, spec_a.numerators, spec_b.gaps, spec_b.numerators)
    return float(np.sum(_bb_kernel(geo) * S).real)


def d6_by_channel(pair, r_vector=None):
    """Direct coefficient split by the virtual orbital angular momentum of atom A.

    Returns a dict ``{l_virtual: contribution}`` in Hartree * a0^6.
    """
    model = model_for(pair)
    geo = geometry_tensors(r_vector or Z_AXIS)
    spec = model.alpha_a
    out = {}
    for lp in sorted(_channels(spec)):
        mask = np.array([_virtual_l(v) == lp for v in spec.virtual])
        out[lp] = _double_sum(spec.select(mask), model.alpha_b, geo)
    return out


def d6_direct(pair, r_vector=None):
    """(d6_p, d6_f, d6_total) in Hartree * a0^6.

    For a D-state reference the two entries are the virtual-P and virtual-F
    channels; for other references the lower and upper dipole channels.
    """
    by_channel = d6_by_channel(pair, r_vector)
    parts = [by_channel[l] for l in sorted(by_channel)] + [0.0]
    lower, upper = (parts[0], parts[1]) if len(by_channel) == 2 else (parts[0], 0.0)
    total = sum(by_channel.values())
    for v in (lower, upper, total):
        if not np.isfinite(v):
            raise ArithmeticError(f"{pair.label}: non-finite D6 contribution")
    return lower, upper, total


def _exchange(pair):
    # the exchange spectra are only built for identical atoms
    return pair if pair.identical else replace(pair, identical=True)


def _virtual_l(label):
    from .atomic import L_LETTERS

    return L_LETTERS.index(label.split()[0])


def _channels(spec):
    return {_virtual_l(v) for v in spec.virtual}


def d6_regular(pair, r_vector=None):
    """D6 without the intra-manifold states of A."""
    model = model_for(pair)
    return _double_sum(model.alpha_a.regular(), model.alpha_b, geometry_tensors(r_vector or Z_AXIS))


def m6_mixing(pair, r_vector=None, include_degenerate=True):
    """Exchange coefficient M6 (Hartree * a0^6); zero if the selection rule fails."""
    model = model_for(_exchange(pair))
    geo = geometry_tensors(r_vector or Z_AXIS)
    total = 0.0
    for w, xa, yb in model.mixing:
        xs = xa if include_degenerate else xa.regular()
        total += w * _double_sum(xs, yb, geo)
    return total


def dbar6_closed_form(n):
    """Projection-averaged intermediate-range coefficient 81/8 n^2 (n^2 - 7) for nD-1S."""
    if n < 3:
        raise ValueError(f"no D state for n={n}")
    return float(Fraction(81, 8) * n * n * (n * n - 7))


def dbar6_numeric(pair, lamb_shift=None, r_vector=None):
    """Intra-manifold coefficient from the degenerate dipole elements of A.

    With the manifold split by the Lamb shift L, these states stay nonretarded
    for R << c/L and give -Dbar6/R^6 with

        Dbar6 = (1/2) beta_ij beta_kl N^deg_ik alpha_B,jl(0),

    the leading order in L/E_{q,B}, hence independent of L. ``pair`` may
    also be a bare principal quantum number n, meaning the averaged nD-1S pair.
    """
    if isinstance(pair, int):
        pair = PairSpec(BoundState(pair, 2))
    if lamb_shift is not None:
        if not lamb_shift > 0:
            raise ValueError("lamb_shift must be positive")
        pair = replace(pair, settings=replace(pair.settings, lamb_shift=lamb_shift))
    model = model_for(pair)
    geo = geometry_tensors(r_vector or Z_AXIS)
    deg = model.alpha_a.quasi_degenerate()
    if deg.gaps.size == 0:
        return 0.0
    B0 = model.alpha_b.static()
    N = deg.numerators.sum(axis=0)
    return 0.5 * float(contract(N, B0, geo.beta, geo.beta).real)


def mbar6_numeric(pair, r_vector=None):
    """Exchange analogue of Dbar6 from the degenerate states of the A-side mixed tensor."""
    model = model_for(_exchange(pair))
    geo = geometry_tensors(r_vector or Z_AXIS)
    total = 0.0
    for w, xa, yb in model.mixing:
        deg = xa.quasi_degenerate()
        if deg.gaps.size:
            total += w * 0.5 * float(contract(deg.numerators.sum(axis=0), yb.static(), geo.beta, geo.beta).real)
    return total


# -- long-range tails ---------------------------------------------------------


def cp_amplitude_direct(pair, r_vector=None):
    """A with W_dir -> -A / R^7: (c/8pi) alpha_A,ij(0) alpha_B(0) (13 delta_ij + 7 Rhat_i Rhat_j)."""
    model = model_for(pair)
    geo = geometry_tensors(r_vector or Z_AXIS)
    A0 = model.alpha_a.static().real
    b0 = float(np.trace(model.alpha_b.static()).real) / 3.0
    n = geo.unit
    return float(pair.settings.c / (8.0 * np.pi) * b0 * (13.0 * np.trace(A0) + 7.0 * n @ A0 @ n))


def cp_tail_direct(pair, R, r_vector=None):
    """Casimir-Polder 1/R^7 limit of W_dir (Hartree)."""
    return -cp_amplitude_direct(pair, r_vector) / R**7


def cp_amplitude_mixing(pair, r_vector=None):
    """(c/8pi) [3 aa + 5 ab + 5 bb] contracted with the static mixed tensors, projection-averaged."""
    model = model_for(_exchange(pair))
    geo = geometry_tensors(r_vector or Z_AXIS)
    total = 0.0
    for w, xa, yb in model.mixing:
        C = monomial_contractions(xa.static(), yb.static(), geo).real
        total += w * (5.0 * C[0] + 5.0 * C[1] + 3.0 * C[2])
    return float(pair.settings.c / (8.0 * np.pi) * total)


def cp_tail_mixing(pair, R, r_vector=None):
    return -cp_amplitude_mixing(pair, r_vector) / R**7


def pole_tail_terms(pair, r_vector=None):
    """Per downward state: (gap, alpha_ij N_ij alpha_B(gap) contraction, 2 gap / c)."""
    model = model_for(pair)
    geo = geometry_tensors(r_vector or Z_AXIS)
    gaps, direct, _, _ = model.pole_residues(geo)
    c = pair.settings.c
    return tuple((float(g), float(d[2]), 2.0 * float(g) / c) for g, d in zip(gaps, direct))


def pole_tail_direct(pair, R, r_vector=None):
    """Leading 1/R^2 oscillatory limit of P_dir (Hartree)."""
    model = model_for(pair)
    gaps, direct, _, _ = model.pole_residues(geometry_tensors(r_vector or Z_AXIS))
    return _pole_tail(gaps, direct, R, pair.settings.c)


def pole_tail_mixing(pair, R, r_vector=None):
    """Leading 1/R^2 oscillatory limit of P_mix (Hartree)."""
    model = model_for(_exchange(pair))
    _, _, gaps, mixing = model.pole_residues(geometry_tensors(r_vector or Z_AXIS))
    return _pole_tail(gaps, mixing, R, pair.settings.c)


def _pole_tail(gaps, contractions, R, c):
    if gaps.size == 0:
        return 0.0
    k = gaps / c
    return float(np.sum(-(k**4) * np.cos(2.0 * k * R) * contractions[:, 2]) / R**2)


def coefficient_set(pair):
    d6_p, d6_f, total = d6_direct(pair)
    return CoefficientSet(
        d6_p=d6_p,
        d6_f=d6_f,
        d6_total=total,
        m6=m6_mixing(pair),
        dbar6=dbar6_numeric(pair),
        mbar6=mbar6_numeric(pair),
        cp_amplitude_dir=cp_amplitude_direct(pair),
        cp_amplitude_mix=cp_amplitude_mixing(pair),
        pole_tail_terms=pole_tail_terms(pair),
    )


# -- envelopes and crossover --------------------------------------------------


def parametric_envelope(kind, rho, alpha=None):
    """Order-of-magnitude envelope (Hartree) of one parametric monomial at rho = R/a0.

    Kinds: ``pole_cos_r2`` alpha^4/rho^2, ``pole_cos_r4`` alpha^2/rho^4,
    ``pole_cos_r6`` 1/rho^6, ``pole_sin_r3`` alpha^3/rho^3,
    ``pole_sin_r5`` alpha/rho^5, ``vdw_r6`` 1/rho^6, ``wick_r7`` 1/(alpha rho^7).
    """
    from .constants import FINE_STRUCTURE

    if not rho > 0:
        raise ValueError("rho must be positive")
    alpha = FINE_STRUCTURE if alpha is None else alpha
    try:
        pa, pr = ENVELOPE_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown envelope kind {kind!r}; choose from {sorted(ENVELOPE_KINDS)}") from None
    return alpha**pa * rho**pr


def pole_envelope(pair, R, r_vector=None):
    """Upper envelope of |P_dir +- P_mix| with every oscillating phase set to its worst case."""
    model = model_for(pair)
    geo = geometry_tensors(r_vector or Z_AXIS)
    gaps_d, direct, gaps_m, mixing = model.pole_residues(geo)
    c = pair.settings.c
    total = 0.0
    for gaps, C, weight in ((gaps_d, direct, 1.0), (gaps_m, mixing, abs(pair.sign))):
        if gaps.size == 0 or weight == 0:
            continue
        f = pole_tensor_f(gaps * R / c)
        total += weight * float(np.sum(np.abs(np.sum(f * C, axis=-1))))
    return total / R**6


def wick_magnitude(pair, R, r_vector=None):
    w_dir, w_mix = wick_term(pair, R, r_vector)
    return abs(w_dir + pair.sign * w_mix)


@dataclass(frozen=True)
class Crossover:
    status: str  # "found", "none" (no pole term at all) or "not-found"
    R: float | None = None
    pole_envelope: float | None = None
    wick: float | None = None


def crossover_radius(pair, bracket, points=80, rtol=1e-6):
    """Radius beyond which the pole envelope permanently exceeds |W|.

    The bracket is scanned on a log grid; the last upward crossing of
    envelope - |W| is refined by bisection in log R.
    """
    lo, hi = map(float, bracket)
    if not 0 < lo < hi:
        raise ValueError("bracket must satisfy 0 < lo < hi")
    model = model_for(pair)
    if model.alpha_a.downward().gaps.size == 0:
        return Crossover("none")

    def excess(R):
        return np.log(pole_envelope(pair, R)) - np.log(wick_magnitude(pair, R))

    grid = np.geomspace(lo, hi, points)
    values = np.array([excess(R) for R in grid])
    above = values > 0
    if not above[-1] or above.all():
        return Crossover("not-found")
    k = int(np.nonzero(~above)[0][-1])
    a, b = np.log(grid[k]), np.log(grid[k + 1])
    while b - a > rtol:
        mid = 0.5 * (a + b)
        if excess(np.exp(mid)) > 0:
            b = mid
        else:
            a = mid
    R = float(np.exp(b))
    return Crossover("found", R, pole_envelope(pair, R), wick_magnitude(pair, R))

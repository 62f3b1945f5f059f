"""Hydrogen bound states, energies and dipole matrix elements.

Radial wavefunctions are the closed-form nonrelativistic hydrogen functions
for infinite nuclear mass, with the sign fixed so that R_nl(r) > 0 as r -> 0.
Angular factors use complex spherical harmonics with the Condon-Shortley phase.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import factorial, sqrt

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from . import quadrature

L_LETTERS = "SPDFGHIKLMNOQRTUV"
CARTESIAN = "xyz"


class SelectionRuleError(ValueError):
    """Dipole matrix element requested between channels with |l - l'| != 1."""


@dataclass(frozen=True, order=True)
class BoundState:
    n: int
    l: int
    m: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"principal quantum number must be >= 1, got {self.n}")
        if not 0 <= self.l < self.n:
            raise ValueError(f"need 0 <= l < n, got n={self.n}, l={self.l}")
        if abs(self.m) > self.l:
            raise ValueError(f"need |m| <= l, got l={self.l}, m={self.m}")

    @property
    def energy(self):
        return bound_energy(self.n)

    @property
    def label(self):
        return f"{self.n}{L_LETTERS[self.l]}"

    def __str__(self):
        return self.label if self.m == 0 else f"{self.label}(m={self.m})"


class AveragingScheme(Enum):
    PROJECTION = "projection-average"
    SINGLE = "single-projection"
    FINE_STRUCTURE = "fine-structure-average"


def bound_energy(n):
    """Nonrelativistic hydrogen level -1/(2 n^2) in Hartree."""
    if n < 1:
        raise ValueError(f"principal quantum number must be >= 1, got {n}")
    return -0.5 / (n * n)


def transition_gap(virtual, reference):
    """E_virtual - E_reference in Hartree (negative for lower virtual states)."""
    return bound_energy(virtual.n) - bound_energy(reference.n)


def radial_function(n, l, r):
    """R_nl(r) for hydrogen, normalised to int R^2 r^2 dr = 1."""
    r = np.asarray(r, dtype=float)
    x = 2.0 * r / n
    log_norm = 0.5 * (3.0 * np.log(2.0 / n) + gammaln(n - l) - np.log(2.0 * n) - gammaln(n + l + 1))
    return np.exp(log_norm - r / n) * x**l * eval_genlaguerre(n - l - 1, 2 * l + 1, x)


def radial_extent(n, tol=1e-40):
    """Radius beyond which r^3 R_nl(r)^2-type integrands are below ``tol``."""
    # e^{-2r/n} (2r/n)^{2n+2} < tol, solved crudely by stepping outward
    r = 10.0 * n
    while (2 * n + 2) * np.log(2 * r / n) - 2 * r / n > np.log(tol):
        r *= 1.25
    return r


def radial_dipole(n1, l1, n2, l2, rtol=1e-14):
    """<n1 l1| r |n2 l2> = int R_{n1 l1} R_{n2 l2} r^3 dr in Bohr radii."""
    if abs(l1 - l2) != 1:
        raise SelectionRuleError(f"radial dipole needs |l1 - l2| = 1, got l1={l1}, l2={l2}")
    BoundState(n1, l1)
    BoundState(n2, l2)
    r_max = max(radial_extent(n1), radial_extent(n2))

    def integrand(r):
        return radial_function(n1, l1, r) * radial_function(n2, l2, r) * r**3

    return quadrature.integrate_adaptive(integrand, 0.0, r_max, rtol=rtol)


@lru_cache(maxsize=None)
def clebsch_gordan(j1, m1, j2, m2, j, m):
    """<j1 m1 j2 m2 | j m> for integer angular momenta (Racah formula)."""
    if m1 + m2 != m or not abs(j1 - j2) <= j <= j1 + j2:
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m) > j:
        return 0.0
    f = factorial
    pre = sqrt(
        (2 * j + 1)
        * f(j + j1 - j2) * f(j - j1 + j2) * f(j1 + j2 - j)
        / f(j1 + j2 + j + 1)
        * f(j + m) * f(j - m) * f(j1 - m1) * f(j1 + m1) * f(j2 - m2) * f(j2 + m2)
    )
    total = 0.0
    for k in range(0, j1 + j2 - j + 1):
        denoms = (k, j1 + j2 - j - k, j1 - m1 - k, j2 + m2 - k, j - j2 + m1 + k, j - j1 - m2 + k)
        if min(denoms) < 0:
            continue
        p = 1
        for d in denoms:
            p *= f(d)
        total += (-1) ** k / p
    return pre * total


def spherical_dipole_factor(l, m, lp, mp, q):
    """<l m| rhat_q |l' m'> for the spherical component q in {-1, 0, 1}."""
    if abs(l - lp) != 1:
        return 0.0
    return sqrt((2 * lp + 1) / (2 * l + 1)) * clebsch_gordan(lp, 0, 1, 0, l, 0) * clebsch_gordan(lp, mp, 1, q, l, m)


def angular_dipole_factor(l, m, lp, mp, component):
    """<l m| rhat_i |l' m'> for a Cartesian component i in {'x', 'y', 'z'}.

    Complex in general: the y component of the Condon-Shortley basis is imaginary.
    """
    if isinstance(component, int):
        component = CARTESIAN[component]
    sm = spherical_dipole_factor(l, m, lp, mp, -1)
    sp = spherical_dipole_factor(l, m, lp, mp, 1)
    if component == "x":
        return (sm - sp) / sqrt(2.0)
    if component == "y":
        return 1j * (sm + sp) / sqrt(2.0)
    if component == "z":
        return spherical_dipole_factor(l, m, lp, mp, 0)
    raise ValueError(f"unknown Cartesian component {component!r}")


@lru_cache(maxsize=None)
def angular_block(l, lp):
    """Array ``M[i, m + l, m' + l']`` of <l m| rhat_i |l' m'>; read-only."""
    out = np.zeros((3, 2 * l + 1, 2 * lp + 1), dtype=complex)
    for i in range(3):
        for m in range(-l, l + 1):
            for mp in range(-lp, lp + 1):
                out[i, m + l, mp + lp] = angular_dipole_factor(l, m, lp, mp, i)
    out.flags.writeable = False
    return out


def direct_angular_tensor(l, m, lp):
    """G_ik = sum_{m'} <l m|rhat_i|l' m'><l' m'|rhat_k|l m> (Hermitian 3x3)."""
    a = angular_block(l, lp)[:, m + l, :]
    return a @ a.conj().T


def mixed_angular_tensor(la, ma, lv, lb, mb):
    """X_ik = sum_{m_v} <la ma|rhat_i|lv m_v><lv m_v|rhat_k|lb mb>."""
    a = angular_block(la, lv)[:, ma + la, :]
    b = angular_block(lb, lv)[:, mb + lb, :]
    return a @ b.conj().T


def averaging_weights(scheme, l, m=0):
    """Projection weights as a list of (m, weight) pairs.

    The fine-structure average is the uniform m average: with J-independent
    energy denominators the sum over J and its projection mu of
    |<l m_l, 1/2 m_s | J mu>|^2 / (2(2l+1)) collapses to 1/(2l+1) per m_l.
    """
    scheme = AveragingScheme(scheme)
    if scheme is AveragingScheme.SINGLE:
        if abs(m) > l:
            raise ValueError(f"projection m={m} not allowed for l={l}")
        return [(m, 1.0)]
    return [(mm, 1.0 / (2 * l + 1)) for mm in range(-l, l + 1)]

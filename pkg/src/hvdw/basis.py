"""Pseudo-state discretisation of one hydrogen angular-momentum channel.

The primitive set is the Coulomb-Sturmian (Laguerre) family

    chi_k(r) = sqrt(x) phi_k(x),  x = 2 lambda r,  k = 0 .. size-1,

with phi_k the orthonormal Laguerre functions of order 2l+1. In this
normalisation the 1/r matrix is the identity and both the overlap and the
radial Hamiltonian are tridiagonal, so the generalised eigenproblem stays well
conditioned up to several hundred functions. Eigenvectors span bound states
and a discretised continuum; sums over them replace the sum over all virtual
states in second-order response.
"""

import hashlib
import os
import struct
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import eigh, LinAlgError
from scipy.special import gammaln

from . import atomic, quadrature
from .constants import FINE_STRUCTURE

CACHE_ENV = "HVDW_CACHE_DIR"
CACHE_MAGIC = b"HVDWSPEC"
CACHE_VERSION = 1


class BasisError(RuntimeError):
    """Eigensolver failure or an unusable basis specification."""


@dataclass(frozen=True, eq=False)
class RadialChannelBasis:
    """Pseudo-state spectrum of the radial Coulomb Hamiltonian for one l.

    ``transform[:, v]`` holds the coefficients of pseudo-state v over the
    primitive Sturmians; columns are orthonormal in the overlap metric.
    """

    l: int
    size: int
    scale: float
    energies: np.ndarray = field(repr=False)
    transform: np.ndarray = field(repr=False)

    @property
    def continuum_count(self):
        return int(np.count_nonzero(self.energies > 0.0))

    def overlap(self):
        return sturmian_matrices(self.l, self.size, self.scale)[0]

    def primitives(self, r):
        """Primitive Sturmians at radii ``r``; shape (size, len(r))."""
        return sturmian_values(self.l, self.size, self.scale, r)

    def functions(self, r):
        """Pseudo-state radial functions u_v(r) = r R_v(r); shape (size, len(r))."""
        return self.transform.T @ self.primitives(r)


@dataclass(frozen=True, eq=False)
class DipoleVector:
    """Radial dipole amplitudes <ref| r |v> onto every pseudo-state of a channel."""

    reference: atomic.BoundState
    channel: int
    amplitudes: np.ndarray = field(repr=False)
    gaps: np.ndarray = field(repr=False)


def sturmian_matrices(l, size, scale):
    """Overlap S and Hamiltonian H (Hartree) in the normalised Sturmian set."""
    k = np.arange(size, dtype=float)
    alpha = 2 * l + 1
    s_diag = (2 * k + alpha + 1) / (2 * scale)
    s_off = -np.sqrt((k[:-1] + 1) * (k[:-1] + 1 + alpha)) / (2 * scale)
    S = np.diag(s_diag) + np.diag(s_off, 1) + np.diag(s_off, -1)
    H = np.diag((k + l + 1) * scale - 1.0) - 0.5 * scale**2 * S
    return S, H


def sturmian_values(l, size, scale, r):
    """Values of the primitive Sturmians by the stable forward recurrence."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    x = 2.0 * scale * r
    alpha = 2 * l + 1
    out = np.empty((size, r.size))
    with np.errstate(divide="ignore", under="ignore"):
        log_phi0 = 0.5 * alpha * np.log(x) - 0.5 * x - 0.5 * gammaln(alpha + 1)
        phi_prev = np.zeros_like(x)
        phi = np.where(x > 0, np.exp(log_phi0), 0.0)
    out[0] = phi
    for kk in range(size - 1):
        a = (2 * kk + alpha + 1 - x) / np.sqrt((kk + 1) * (kk + 1 + alpha))
        b = np.sqrt(kk * (kk + alpha) / ((kk + 1) * (kk + 1 + alpha)))
        phi, phi_prev = a * phi - b * phi_prev, phi
        out[kk + 1] = phi
    return out * np.sqrt(x)


_cache = {}
_cache_lock = threading.Lock()


def build_channel_basis(l, size, scale, cache_dir=None):
    """Diagonalise the radial Hamiltonian of channel ``l`` in ``size`` Sturmians.

    Results are memoised per (l, size, scale). When ``cache_dir`` (or the
    ``HVDW_CACHE_DIR`` environment variable) is set, spectra are also persisted
    in the binary format of :func:`write_cache`.
    """
    if size < l + 2:
        raise BasisError(f"basis size {size} too small for l={l} (need >= l+2)")
    if not scale > 0:
        raise BasisError(f"scale must be positive, got {scale}")
    key = (int(l), int(size), float(scale))
    basis = _cache.get(key)
    if basis is not None:
        return basis
    with _cache_lock:
        basis = _cache.get(key)
        if basis is not None:
            return basis
        cache_dir = cache_dir or os.environ.get(CACHE_ENV)
        path = cache_path(cache_dir, *key) if cache_dir else None
        if path is not None and path.exists():
            basis = read_cache(path)
        else:
            basis = _diagonalise(*key)
            if path is not None:
                path.parent.mkdir(parents=True, exist_ok=True)
                write_cache(basis, path)
        _cache[key] = basis
        return basis


def _diagonalise(l, size, scale):
    S, H = sturmian_matrices(l, size, scale)
    try:
        energies, transform = eigh(H, S)
    except LinAlgError as exc:
        raise BasisError(f"eigensolver failed for l={l}, size={size}, scale={scale}: {exc}") from exc
    energies.flags.writeable = False
    transform.flags.writeable = False
    return RadialChannelBasis(l, size, scale, energies, transform)


def clear_cache():
    with _cache_lock:
        _cache.clear()


def reference_grid(n, order=32):
    """Radial rule adequate for integrals weighted by the state with principal number n."""
    return quadrature.radial_grid(atomic.radial_extent(n, 1e-34), order=order, width=min(2.0, 0.25 * n))


def dipole_vector(reference, basis):
    """Amplitudes int u_v(r) r u_ref(r) dr for every pseudo-state v of ``basis``."""
    if abs(reference.l - basis.l) != 1:
        raise atomic.SelectionRuleError(
            f"{reference.label} does not dipole-couple to channel l={basis.l}"
        )
    r, w = reference_grid(reference.n)
    u_ref = r * atomic.radial_function(reference.n, reference.l, r)
    projections = basis.primitives(r) @ (w * r * u_ref)
    amplitudes = basis.transform.T @ projections
    gaps = basis.energies - atomic.bound_energy(reference.n)
    return DipoleVector(reference, basis.l, amplitudes, gaps)


def convergence_scan(observable, sizes):
    """Evaluate ``observable(size)`` for each size; return rows (size, value, delta).

    ``delta`` is the change from the previous size (NaN for the first row).
    """
    sizes = list(sizes)
    if sizes != sorted(sizes):
        raise ValueError("sizes must be ascending")
    rows = []
    previous = None
    for size in sizes:
        value = float(observable(size))
        delta = float("nan") if previous is None else value - previous
        rows.append((size, value, delta))
        previous = value
    return rows


# -- on-disk spectra ---------------------------------------------------------
#
# Layout (all little-endian):
#   8 bytes   magic  b"HVDWSPEC"
#   uint32    format version (1)
#   uint32    l
#   uint32    size
#   float64   scale
#   float64   fine-structure constant in force when written
#   float64[size]          energies (Hartree, ascending)
#   float64[size * size]   transform, row-major (primitive index, pseudo-state index)

_HEADER = struct.Struct("<8sIIIdd")


def cache_path(cache_dir, l, size, scale):
    tag = hashlib.sha256(repr((l, size, float(scale))).encode()).hexdigest()[:16]
    return Path(cache_dir) / f"channel_l{l}_n{size}_{tag}.bin"


def write_cache(basis, path, alpha=FINE_STRUCTURE):
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, basis.l, basis.size, basis.scale, alpha))
        fh.write(np.ascontiguousarray(basis.energies, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(basis.transform, dtype="<f8").tobytes())


def read_cache(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    magic, version, l, size, scale, _alpha = _HEADER.unpack_from(raw)
    if magic != CACHE_MAGIC or version != CACHE_VERSION:
        raise BasisError(f"{path}: not a version-{CACHE_VERSION} spectral cache file")
    body = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
    if body.size != size + size * size:
        raise BasisError(f"{path}: truncated spectral cache ({body.size} values, expected {size + size * size})")
    energies = body[:size].astype(float)
    transform = body[size:].reshape(size, size).astype(float)
    energies.flags.writeable = False
    transform.flags.writeable = False
    return RadialChannelBasis(l, size, scale, energies, transform)

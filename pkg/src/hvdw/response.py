"""Dynamic dipole polarizabilities in spectral (pole-sum) form.

A polarizability is stored as a list of poles: the gap E_v - E_ref of each
virtual pseudo-state and its 3x3 numerator tensor. Evaluation at complex
frequency uses the Feynman-ordered denominators in the limit eps -> 0+,

    alpha_ij(w) = sum_v N_v,ij [1/(g_v - w) + 1/(g_v + w)],

which on the real axis away from a pole is just the principal value. Virtual
states inside the reference's own n manifold (|g_v| below the degeneracy
threshold) are flagged; on the imaginary axis and at zero frequency they are
placed one Lamb shift above the reference.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import atomic, basis, kernels
from .atomic import BoundState
from .constants import DEFAULT_LAMB_SHIFT_GHZ, FINE_STRUCTURE, ghz_to_hartree


class ResonanceError(ArithmeticError):
    """A real frequency coincides with a pole of the response."""


@dataclass(frozen=True)
class Settings:
    """Numerical parameters shared by every spectral object.

    ``size`` and ``scale`` apply to every channel unless ``channel_sizes`` /
    ``channel_scales`` (tuples of (l, value) pairs) override them. A scale of
    ``None`` means 1/n of the state whose response is being built.
    """

    size: int = 120
    scale: float | None = None
    channel_sizes: tuple = ()
    channel_scales: tuple = ()
    degenerate_threshold: float = 1e-9
    lamb_shift: float = ghz_to_hartree(DEFAULT_LAMB_SHIFT_GHZ)
    fine_structure: float = FINE_STRUCTURE
    wick_rtol: float = 1e-10

    def __post_init__(self):
        if self.lamb_shift <= 0:
            raise ValueError("lamb_shift must be positive")
        if self.degenerate_threshold <= 0 or self.wick_rtol <= 0:
            raise ValueError("tolerances must be positive")

    @property
    def c(self):
        return 1.0 / self.fine_structure

    def channel(self, l, n):
        size = dict(self.channel_sizes).get(l, self.size)
        scale = dict(self.channel_scales).get(l, self.scale)
        return int(size), float(scale if scale is not None else 1.0 / n)


DEFAULT_SETTINGS = Settings()


@dataclass(frozen=True, eq=False)
class SpectralPolarizability:
    """Pole-sum representation of a direct or mixed polarizability tensor."""

    kind: str
    label: str
    gaps: np.ndarray = field(repr=False)
    numerators: np.ndarray = field(repr=False)
    degenerate: np.ndarray = field(repr=False)
    virtual: tuple = field(repr=False)
    lamb_shift: float = ghz_to_hartree(DEFAULT_LAMB_SHIFT_GHZ)

    @property
    def pole_gaps(self):
        """Gaps with the quasi-degenerate states moved up by the Lamb shift."""
        return np.where(self.degenerate, self.lamb_shift, self.gaps)

    def _flat(self):
        k = self.gaps.size
        return np.ascontiguousarray(self.numerators.reshape(k, 9)).view(float)

    def _unflat(self, values):
        return np.ascontiguousarray(values).view(complex).reshape(-1, 3, 3)

    def select(self, mask):
        mask = np.asarray(mask, dtype=bool)
        return SpectralPolarizability(
            self.kind,
            self.label,
            self.gaps[mask],
            self.numerators[mask],
            self.degenerate[mask],
            tuple(v for v, keep in zip(self.virtual, mask) if keep),
            self.lamb_shift,
        )

    def regular(self):
        return self.select(~self.degenerate)

    def quasi_degenerate(self):
        return self.select(self.degenerate)

    def downward(self):
        """Regular poles below the reference (negative gaps)."""
        return self.select(~self.degenerate & (self.gaps < 0))

    def imaginary_axis(self, u):
        """Tensors alpha(i u) for an array of u >= 0; shape (len(u), 3, 3)."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        if self.gaps.size == 0:
            return np.zeros((u.size, 3, 3), dtype=complex)
        return self._unflat(kernels.imag_axis_sum(self.pole_gaps, self._flat(), u))

    def real_axis(self, omega):
        """Tensors at real frequencies; raises ResonanceError on an exact pole."""
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        if self.gaps.size == 0:
            return np.zeros((omega.size, 3, 3), dtype=complex)
        g = self.pole_gaps
        hit = np.abs(np.abs(g)[None, :] - np.abs(omega)[:, None]) <= 1e-14 * np.maximum(1.0, np.abs(g))[None, :]
        if hit.any():
            a, k = np.argwhere(hit)[0]
            raise ResonanceError(
                f"{self.label}: frequency {omega[a]!r} sits on the pole of virtual state {self.virtual[k]}"
            )
        return self._unflat(kernels.real_axis_sum(g, self._flat(), omega))

    def __call__(self, omega):
        """Tensor at one complex frequency (Feynman prescription, eps -> 0+)."""
        omega = complex(omega)
        if omega.imag == 0.0:
            return self.real_axis([omega.real])[0]
        if omega.real == 0.0 and omega.imag > 0:
            return self.imaginary_axis([omega.imag])[0]
        g = self.pole_gaps
        kern = 1.0 / (g - omega) + 1.0 / (g + omega)
        return np.einsum("k,kij->ij", kern, self.numerators)

    def static(self):
        return self.real_axis([0.0])[0]


@lru_cache(maxsize=256)
def _channel_vector(n, l, lp, size, scale):
    return basis.dipole_vector(BoundState(n, l), basis.build_channel_basis(lp, size, scale))


def channel_vector(state, lp, settings=DEFAULT_SETTINGS, n_scale=None):
    """Dipole amplitudes from ``state`` into channel ``lp``.

    ``n_scale`` picks whose 1/n sets the default Sturmian scale (defaults to
    ``state.n``).
    """
    size, scale = settings.channel(lp, n_scale or state.n)
    return _channel_vector(state.n, state.l, lp, size, scale)


def dipole_channels(l):
    return [lp for lp in (l - 1, l + 1) if lp >= 0]


def _weights(state, weights):
    return weights if weights is not None else [(state.m, 1.0)]


def direct_spectrum(state, settings=DEFAULT_SETTINGS, weights=None):
    """Spectral form of alpha_ij for ``state``.

    ``weights`` is a list of (m, weight) pairs; the numerator tensors are the
    weighted sum over projections (default: just ``state.m``).
    """
    weights = _weights(state, weights)
    gaps, nums, virtual = [], [], []
    for lp in dipole_channels(state.l):
        dv = channel_vector(state, lp, settings)
        G = sum(w * atomic.direct_angular_tensor(state.l, m, lp) for m, w in weights)
        gaps.append(dv.gaps)
        nums.append(dv.amplitudes[:, None, None] ** 2 * G[None])
        virtual.extend(f"{atomic.L_LETTERS[lp]} pseudo-state #{k}" for k in range(dv.gaps.size))
    gaps = np.concatenate(gaps)
    return SpectralPolarizability(
        "direct",
        state.label,
        gaps,
        np.concatenate(nums),
        np.abs(gaps) <= settings.degenerate_threshold,
        tuple(virtual),
        settings.lamb_shift,
    )


def mixing_allowed(state_a, state_b):
    return state_a.l == state_b.l or abs(state_a.l - state_b.l) == 2


def mixed_spectrum(state_a, state_b, side, settings=DEFAULT_SETTINGS, ma=None, mb=None):
    """Spectral form of a mixed (exchange) polarizability.

    ``side='A'`` gives sum_v <A|d_i|v><v|d_j|B> with gaps E_v - E_A;
    ``side='B'`` gives sum_v <B|d_i|v><v|d_j|A> with gaps E_v - E_B, the
    ordering that closes the exchange loop. Shared virtual states come from one
    basis whose scale follows the more excited of the two atoms. If the dipole
    selection rules leave no common channel the spectrum is empty.
    """
    if side not in ("A", "B"):
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    ma = state_a.m if ma is None else ma
    mb = state_b.m if mb is None else mb
    n_scale = max(state_a.n, state_b.n)
    ref, other = (state_a, state_b) if side == "A" else (state_b, state_a)
    m_ref, m_other = (ma, mb) if side == "A" else (mb, ma)
    gaps, nums, virtual = [], [], []
    if mixing_allowed(state_a, state_b):
        for lv in dipole_channels(ref.l):
            if abs(lv - other.l) != 1:
                continue
            dv_ref = channel_vector(ref, lv, settings, n_scale)
            dv_other = channel_vector(other, lv, settings, n_scale)
            X = atomic.mixed_angular_tensor(ref.l, m_ref, lv, other.l, m_other)
            gaps.append(dv_ref.gaps)
            nums.append((dv_ref.amplitudes * dv_other.amplitudes)[:, None, None] * X[None])
            virtual.extend(f"{atomic.L_LETTERS[lv]} pseudo-state #{k}" for k in range(dv_ref.gaps.size))
    if gaps:
        gaps = np.concatenate(gaps)
        nums = np.concatenate(nums)
    else:
        gaps = np.zeros(0)
        nums = np.zeros((0, 3, 3), dtype=complex)
    underlined = "A" if side == "A" else "B"
    return SpectralPolarizability(
        "mixed",
        f"{state_a.label}/{state_b.label} ({underlined}-side)",
        gaps,
        nums,
        np.abs(gaps) <= settings.degenerate_threshold,
        tuple(virtual),
        settings.lamb_shift,
    )


def _omega(omega):
    # accept FrequencyPoint-like objects, plain numbers, or complex numbers
    return complex(getattr(omega, "value", omega))


@dataclass(frozen=True)
class FrequencyPoint:
    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if v.real != 0.0 and v.imag != 0.0:
            raise ValueError("a FrequencyPoint lies on the real or the imaginary axis")

    @property
    def axis(self):
        return "imaginary-axis" if complex(self.value).imag != 0.0 else "real-axis"

    @classmethod
    def imaginary(cls, u):
        return cls(complex(0.0, u))

    @classmethod
    def real(cls, w):
        return cls(complex(w, 0.0))


def polarizability_tensor(state, omega, settings=DEFAULT_SETTINGS, scheme=None):
    """3x3 complex tensor alpha_ij(omega) of a state or its projection average.

    ``scheme`` is an :class:`~hvdw.atomic.AveragingScheme`; ``None`` keeps the
    single projection ``state.m``.
    """
    weights = None if scheme is None else atomic.averaging_weights(scheme, state.l, state.m)
    return direct_spectrum(state, settings, weights)(_omega(omega))


def mixed_polarizability(state_a, state_b, side, omega, settings=DEFAULT_SETTINGS):
    """Mixed tensor; the zero tensor when the selection rule forbids exchange."""
    return mixed_spectrum(state_a, state_b, side, settings)(_omega(omega))


def static_scalar_polarizability(state, settings=DEFAULT_SETTINGS, scheme="projection-average"):
    """(1/3) trace of alpha_ij(0); quasi-degenerate states enter at the Lamb shift."""
    weights = atomic.averaging_weights(scheme, state.l, state.m)
    return float(np.trace(direct_spectrum(state, settings, weights).static()).real / 3.0)

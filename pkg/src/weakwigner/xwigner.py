"""Cross-Wigner and Wigner transforms on the (x, p) grid.

Both states are band-limited-interpolated onto the twice-oversampled grid
``x_half`` so that ``x +- y/2`` falls exactly on sample points.  The
y-integral then becomes a length-2M FFT whose even bins are the grid's
momentum nodes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .conventions import sigma
from .errors import GridMismatchError
from .grid import (
    GridSpec,
    PhaseSpacePoint,
    WaveFunction,
    check_same_grid,
    gaussian_coherent,
    hbar_fourier,
)


class FieldLabel(enum.Enum):
    CROSS_WIGNER = "cross_wigner"
    WIGNER = "wigner"
    RHO = "rho"
    OBSERVABLE = "observable"
    GENERIC = "generic"


@dataclass(frozen=True, eq=False)
class PhaseSpaceField:
    """Values on the (x_j, p_k) grid; rows index x, columns index p."""

    grid: GridSpec
    values: np.ndarray
    label: FieldLabel = FieldLabel.GENERIC

    def __post_init__(self):
        v = np.array(self.values)
        m = self.grid.num_points
        if v.shape != (m, m):
            raise ValueError(f"field must be {m}x{m}, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        if self.label is FieldLabel.WIGNER and np.iscomplexobj(v):
            if np.max(np.abs(v.imag), initial=0.0) >= 1e-10:
                raise ValueError("Wigner field has a non-negligible imaginary part")
        if self.label is FieldLabel.RHO:
            total = phase_space_integral(self)
            if abs(total - 1.0) > 1e-6:
                raise ValueError(f"rho must integrate to 1, got {total}")

    def _combine(self, other, op):
        if isinstance(other, PhaseSpaceField):
            if other.grid != self.grid:
                raise GridMismatchError("fields live on different grids")
            other = other.values
        return PhaseSpaceField(self.grid, op(self.values, other))

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, c):
        return PhaseSpaceField(self.grid, self.values * c)

    __rmul__ = __mul__

    @property
    def real(self) -> "PhaseSpaceField":
        return PhaseSpaceField(self.grid, np.real(self.values))

    def conj(self) -> "PhaseSpaceField":
        return PhaseSpaceField(self.grid, np.conj(self.values), self.label)

    def relabel(self, label: FieldLabel) -> "PhaseSpaceField":
        return PhaseSpaceField(self.grid, self.values, label)


def upsample(samples: np.ndarray, axis: int = 0) -> np.ndarray:
    """Band-limited interpolation of M samples onto 2M points (spacing halved).

    Even output samples reproduce the input; the Nyquist bin is split
    symmetrically so that real input stays real.
    """
    samples = np.moveaxis(np.asarray(samples), axis, 0)
    m = samples.shape[0]
    spec = np.fft.fft(samples, axis=0)
    padded = np.zeros((2 * m,) + samples.shape[1:], dtype=complex)
    half = m // 2
    padded[:half] = spec[:half]
    padded[2 * m - half + 1 :] = spec[half + 1 :]
    padded[half] = 0.5 * spec[half]
    padded[2 * m - half] = 0.5 * spec[half]
    return np.moveaxis(2.0 * np.fft.ifft(padded, axis=0), 0, axis)


def _pair_index(m: int):
    j = np.arange(m)[:, None]
    n = np.arange(-(m - 1), m)[None, :]
    a = 2 * j + n
    b = 2 * j - n
    valid = (a >= 0) & (a < 2 * m) & (b >= 0) & (b < 2 * m)
    return np.broadcast_to(n, valid.shape), np.where(valid, a, 0), np.where(valid, b, 0), valid


def cross_wigner(phi: WaveFunction, psi: WaveFunction) -> PhaseSpaceField:
    """W(phi, psi) on the grid; conjugate-linear in ``phi``, linear in ``psi``."""
    grid = check_same_grid(phi, psi)
    if phi.rep != "position":
        raise GridMismatchError("cross_wigner expects position-space states")
    phi.require_contained("phi")
    psi.require_contained("psi")
    m = grid.num_points
    up_phi = upsample(phi.samples)
    up_psi = upsample(psi.samples)
    n, a, b, valid = _pair_index(m)
    prod = np.where(valid, np.conj(up_phi[a]) * up_psi[b], 0.0)
    buf = np.zeros((m, 2 * m), dtype=complex)
    buf[:, n[0] % (2 * m)] = prod
    # sum_n exp(2 pi i (k - M/2) n / M) f(n) = length-2M inverse DFT at bin 2k - M
    spec = np.fft.ifft(buf, axis=1) * (2 * m)
    bins = (2 * np.arange(m) - m) % (2 * m)
    h = 0.5 * grid.dx
    values = spec[:, bins] * (h / (math.pi * grid.hbar))
    return PhaseSpaceField(grid, values, FieldLabel.CROSS_WIGNER)


def wigner(psi: WaveFunction) -> PhaseSpaceField:
    w = cross_wigner(psi, psi)
    scale = max(1.0, float(np.max(np.abs(w.values))))
    imag = float(np.max(np.abs(w.values.imag)))
    if imag >= 1e-10 * scale:
        raise ArithmeticError(f"Wigner transform has imaginary part {imag:.3e}")
    return PhaseSpaceField(w.grid, w.values.real, FieldLabel.WIGNER)


def marginal_over_p(field: PhaseSpaceField) -> np.ndarray:
    """Integral over momentum, one value per position node."""
    return np.sum(field.values, axis=1) * field.grid.dp


def marginal_over_x(field: PhaseSpaceField) -> np.ndarray:
    """Integral over position, one value per momentum node."""
    return np.sum(field.values, axis=0) * field.grid.dx


def phase_space_integral(field: PhaseSpaceField) -> complex:
    g = field.grid
    return complex(np.sum(field.values) * g.dx * g.dp)


def translation_phase(alpha, beta, x, p) -> np.ndarray:
    """chi(a, b, z) = sigma(z, a - b) + sigma(a, b)/2 at points (x, p)."""
    alpha = PhaseSpacePoint.coerce(alpha)
    beta = PhaseSpacePoint.coerce(beta)
    d = alpha - beta
    return p * d.x - d.p * x + 0.5 * float(sigma(alpha.as_array(), beta.as_array()))


class Transported(NamedTuple):
    field: PhaseSpaceField
    shift: PhaseSpacePoint


def translated_cross_wigner(alpha, beta, base: PhaseSpaceField) -> Transported:
    """W(T(a) phi, T(b) psi) obtained from a precomputed W(phi, psi).

    The midpoint ``(a + b)/2`` is snapped to the nearest grid node; the
    shift actually applied is returned with the field.
    """
    alpha = PhaseSpacePoint.coerce(alpha)
    beta = PhaseSpacePoint.coerce(beta)
    g = base.grid
    mid = (alpha + beta).scaled(0.5)
    sx = round(mid.x / g.dx)
    sp = round(mid.p / g.dp)
    shifted = _shift_rows_cols(np.asarray(base.values, dtype=complex), sx, sp)
    xx, pp = np.meshgrid(g.x, g.p, indexing="ij")
    phase = np.exp(1j / g.hbar * translation_phase(alpha, beta, xx, pp))
    used = PhaseSpacePoint(sx * g.dx, sp * g.dp)
    label = base.label
    if label is FieldLabel.WIGNER and alpha != beta:
        # distinct translations turn a Wigner function into a genuine cross term
        label = FieldLabel.CROSS_WIGNER
    values = phase * shifted
    if label is FieldLabel.WIGNER:
        values = values.real
    return Transported(PhaseSpaceField(g, values, label), used)


def _shift_rows_cols(v: np.ndarray, sx: int, sp: int) -> np.ndarray:
    """out[j, k] = v[j - sx, k - sp], zero where the source is off-grid."""
    out = np.zeros_like(v)
    m0, m1 = v.shape
    if abs(sx) >= m0 or abs(sp) >= m1:
        return out
    src_r = slice(max(0, -sx), m0 - max(0, sx))
    dst_r = slice(max(0, sx), m0 - max(0, -sx))
    src_c = slice(max(0, -sp), m1 - max(0, sp))
    dst_c = slice(max(0, sp), m1 - max(0, -sp))
    out[dst_r, dst_c] = v[src_r, src_c]
    return out


def interference_term(phi: WaveFunction, psi: WaveFunction) -> PhaseSpaceField:
    """2 Re W(phi, psi): the cross term in W(phi + psi)."""
    w = cross_wigner(phi, psi)
    return PhaseSpaceField(w.grid, 2.0 * w.values.real)


@dataclass(frozen=True)
class CompassResult:
    total: PhaseSpaceField
    pair_terms: dict
    states: tuple

    @property
    def superposition(self) -> WaveFunction:
        out = self.states[0]
        for s in self.states[1:]:
            out = out + s
        return out


def compass_wigner(centers, grid: GridSpec) -> CompassResult:
    """Wigner function of sum_i T(z_i) xi0 split into diagonal and pair terms.

    ``pair_terms[(i, j)]`` (i < j) holds 2 Re W(T(z_i) xi0, T(z_j) xi0).
    """
    centers = [PhaseSpacePoint.coerce(z) for z in centers]
    if not 2 <= len(centers) <= 8:
        raise ValueError(f"compass states need 2..8 centers, got {len(centers)}")
    states = tuple(gaussian_coherent(z, grid) for z in centers)
    total = np.zeros((grid.num_points, grid.num_points))
    for s in states:
        total += wigner(s).values
    pairs = {}
    for i, j in combinations(range(len(states)), 2):
        term = interference_term(states[i], states[j])
        pairs[(i, j)] = term
        total += term.values
    return CompassResult(PhaseSpaceField(grid, total, FieldLabel.WIGNER), pairs, states)


def fourier_marginal(phi: WaveFunction, psi: WaveFunction) -> np.ndarray:
    """conj(F phi) * F psi on the momentum nodes."""
    return np.conj(hbar_fourier(phi).samples) * hbar_fourier(psi).samples


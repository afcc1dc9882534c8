"""Sampled wavefunctions on a uniform position grid and the basic operators
acting on them (inner product, hbar-Fourier transform, Heisenberg-Weyl
translations, Grossmann-Royer reflections, coherent and Hermite states).

Off-grid samples are treated as zero: states are compactly supported inside
``[-L, L)`` and never wrap around periodically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, ContainmentError, GridMismatchError

#: Fraction of all nodes, split evenly between both ends, forming the boundary tail.
TAIL_FRACTION = 0.05
#: Maximum tail mass, relative to the total squared norm, of a well-contained state.
TAIL_TOLERANCE = 1e-10


@dataclass(frozen=True)
class GridSpec:
    """Position/momentum discretisation and the value of hbar.

    Position nodes are ``x_j = -L + j dx`` with ``dx = 2L/M``; momentum
    nodes are sorted ascending, ``p_k = (k - M/2) dp`` with
    ``dp = 2 pi hbar / (M dx)``.
    """

    num_points: int
    half_width: float
    hbar: float = 1.0

    def __post_init__(self):
        m = self.num_points
        if not isinstance(m, (int, np.integer)) or isinstance(m, bool):
            raise ConfigError(f"num_points must be an integer, got {m!r}")
        if m < 8 or m & (m - 1):
            raise ConfigError(f"num_points must be a power of two >= 8, got {m}")
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise ConfigError(f"half_width must be positive, got {self.half_width}")
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise ConfigError(f"hbar must be positive, got {self.hbar}")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.num_points

    @property
    def dp(self) -> float:
        return 2.0 * math.pi * self.hbar / (self.num_points * self.dx)

    @cached_property
    def x(self) -> np.ndarray:
        x = -self.half_width + self.dx * np.arange(self.num_points)
        x.flags.writeable = False
        return x

    @cached_property
    def p(self) -> np.ndarray:
        p = self.dp * (np.arange(self.num_points) - self.num_points // 2)
        p.flags.writeable = False
        return p

    @cached_property
    def x_half(self) -> np.ndarray:
        """Twice-oversampled position nodes ``-L + m dx/2``, m = 0..2M-1."""
        x = -self.half_width + 0.5 * self.dx * np.arange(2 * self.num_points)
        x.flags.writeable = False
        return x

    @property
    def tail_nodes(self) -> int:
        return max(1, math.ceil(0.5 * TAIL_FRACTION * self.num_points))

    def snap_half(self, x0: float) -> float:
        """Nearest point of the dx/2 lattice (contains every node and midpoint)."""
        h = 0.5 * self.dx
        return round(x0 / h) * h


@dataclass(frozen=True)
class PhaseSpacePoint:
    x: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.p)):
            raise ValueError(f"non-finite phase-space point ({self.x}, {self.p})")

    def __neg__(self):
        return PhaseSpacePoint(-self.x, -self.p)

    def __add__(self, other):
        return PhaseSpacePoint(self.x + other.x, self.p + other.p)

    def __sub__(self, other):
        return PhaseSpacePoint(self.x - other.x, self.p - other.p)

    def scaled(self, c: float) -> "PhaseSpacePoint":
        return PhaseSpacePoint(c * self.x, c * self.p)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.p])

    @classmethod
    def coerce(cls, z) -> "PhaseSpacePoint":
        if isinstance(z, cls):
            return z
        x, p = z
        return cls(float(x), float(p))


ORIGIN = PhaseSpacePoint(0.0, 0.0)


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex samples of a state on the position (or momentum) nodes.

    ``rep`` is ``"position"`` for samples on ``grid.x`` and ``"momentum"`` for
    samples on ``grid.p``; it selects the quadrature weight.
    """

    grid: GridSpec
    samples: np.ndarray
    rep: str = field(default="position")

    def __post_init__(self):
        s = np.array(self.samples, dtype=complex)
        if s.shape != (self.grid.num_points,):
            raise ValueError(f"expected {self.grid.num_points} samples, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("wavefunction samples must be finite")
        if self.rep not in ("position", "momentum"):
            raise ValueError(f"unknown representation {self.rep!r}")
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    @property
    def weight(self) -> float:
        return self.grid.dx if self.rep == "position" else self.grid.dp

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.x if self.rep == "position" else self.grid.p

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) * self.weight)

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def tail_fraction(self) -> float:
        """Squared mass in the outermost nodes at both ends, relative to the total."""
        total = np.sum(np.abs(self.samples) ** 2)
        if total == 0:
            return 0.0
        k = self.grid.tail_nodes
        a = np.abs(self.samples)
        tail = np.sum(a[:k] ** 2) + np.sum(a[-k:] ** 2)
        return float(tail / total)

    @property
    def is_contained(self) -> bool:
        return self.tail_fraction() < TAIL_TOLERANCE

    def require_contained(self, what: str = "state") -> "WaveFunction":
        frac = self.tail_fraction()
        if not frac < TAIL_TOLERANCE:
            raise ContainmentError(
                f"{what} is not well-contained: boundary tail holds {frac:.3e} of its norm",
                tail_fraction=frac,
            )
        return self

    def normalized(self) -> "WaveFunction":
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero state")
        return self._new(self.samples / n)

    def _new(self, samples) -> "WaveFunction":
        return WaveFunction(self.grid, samples, self.rep)

    def _check(self, other: "WaveFunction"):
        if other.grid != self.grid or other.rep != self.rep:
            raise GridMismatchError("wavefunctions live on different grids")

    def __add__(self, other):
        self._check(other)
        return self._new(self.samples + other.samples)

    def __sub__(self, other):
        self._check(other)
        return self._new(self.samples - other.samples)

    def __mul__(self, c):
        return self._new(complex(c) * self.samples)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self._new(self.samples / complex(c))

    def __neg__(self):
        return self._new(-self.samples)


class Applied(NamedTuple):
    """Result of a displacement or reflection with the centre actually used."""

    state: WaveFunction
    center: PhaseSpacePoint


def check_same_grid(*states: WaveFunction) -> GridSpec:
    grid = states[0].grid
    for s in states[1:]:
        if s.grid != grid:
            raise GridMismatchError(
                f"grid mismatch: {s.grid} vs {grid}"
            )
        if s.rep != states[0].rep:
            raise GridMismatchError("position/momentum representation mismatch")
    return grid


def inner_product(phi: WaveFunction, psi: WaveFunction) -> complex:
    """<phi|psi> = sum conj(phi_j) psi_j dx, conjugate-linear in ``phi``."""
    check_same_grid(phi, psi)
    return complex(np.vdot(phi.samples, psi.samples) * phi.weight)


def hbar_fourier(psi: WaveFunction) -> WaveFunction:
    """Unitary hbar-Fourier transform between the position and momentum nodes.

    Applied to a position-space state it returns the momentum
    representation; applied to a momentum-space state it maps back onto the
    position nodes, so four applications give the identity exactly.
    """
    grid = psi.grid
    m = grid.num_points
    # exp(-i p_k x_j / hbar) = exp(-2 pi i (k - M/2)(j - M/2) / M): a DFT with
    # alternating signs on both sides.
    sign = (-1.0) ** np.arange(m)
    c = psi.weight / math.sqrt(2.0 * math.pi * grid.hbar)
    out = c * sign * np.fft.fft(sign * psi.samples) * (-1.0) ** (m // 2)
    rep = "momentum" if psi.rep == "position" else "position"
    return WaveFunction(grid, out, rep)


def _spectral_shift(samples: np.ndarray, shift: float, dx: float) -> np.ndarray:
    """Band-limited translation psi(x - shift) on a zero-padded buffer."""
    m = samples.size
    buf = np.zeros(4 * m, dtype=complex)
    buf[3 * m // 2 : 5 * m // 2] = samples
    k = 2.0 * math.pi * np.fft.fftfreq(4 * m, d=dx)
    buf = np.fft.ifft(np.fft.fft(buf) * np.exp(-1j * k * shift))
    return buf[3 * m // 2 : 5 * m // 2]


def heisenberg_weyl(z0, psi: WaveFunction) -> Applied:
    """Apply T(z0): (T psi)(x) = exp((i/hbar)(p0 x - p0 x0/2)) psi(x - x0).

    Integer-node shifts are exact index moves; other shifts are band-limited
    (Fourier) translations on a zero-padded buffer, so no snapping is needed.
    """
    z0 = PhaseSpacePoint.coerce(z0)
    grid = psi.grid
    if psi.rep != "position":
        raise GridMismatchError("heisenberg_weyl acts on position-space states")
    steps = z0.x / grid.dx
    n = round(steps)
    if abs(steps - n) < 1e-9:
        shifted = np.zeros_like(psi.samples)
        m = grid.num_points
        if abs(n) < m:
            if n >= 0:
                shifted[n:] = psi.samples[: m - n]
            else:
                shifted[:n] = psi.samples[-n:]
    else:
        shifted = _spectral_shift(psi.samples, z0.x, grid.dx)
    phase = np.exp(1j / grid.hbar * (z0.p * grid.x - 0.5 * z0.p * z0.x))
    out = WaveFunction(grid, phase * shifted)
    _check_mass_kept(psi, out, "Heisenberg-Weyl translation")
    return Applied(out, z0)


def grossmann_royer(z0, psi: WaveFunction) -> Applied:
    """Apply T_GR(z0): psi(x) -> exp((2i/hbar) p0 (x - x0)) psi(2 x0 - x).

    ``x0`` is snapped to the dx/2 lattice so that the reflected points land
    on grid nodes; the snapped centre is returned.
    """
    z0 = PhaseSpacePoint.coerce(z0)
    grid = psi.grid
    if psi.rep != "position":
        raise GridMismatchError("grossmann_royer acts on position-space states")
    x0 = grid.snap_half(z0.x)
    used = PhaseSpacePoint(x0, z0.p)
    m = grid.num_points
    # 2 x0 - x_i = x_{r - i} with x0 = -L + r dx/2
    r = round((x0 + grid.half_width) / (0.5 * grid.dx))
    src = r - np.arange(m)
    valid = (src >= 0) & (src < m)
    reflected = np.zeros(m, dtype=complex)
    reflected[valid] = psi.samples[src[valid]]
    phase = np.exp(2j / grid.hbar * z0.p * (grid.x - x0))
    out = WaveFunction(grid, phase * reflected)
    _check_mass_kept(psi, out, "Grossmann-Royer reflection")
    return Applied(out, used)


def _check_mass_kept(before: WaveFunction, after: WaveFunction, what: str):
    n0 = before.norm_sq()
    if n0 == 0:
        return
    lost = abs(n0 - after.norm_sq()) / n0
    frac = after.tail_fraction()
    if lost > TAIL_TOLERANCE or not frac < TAIL_TOLERANCE:
        raise ContainmentError(
            f"{what} pushes mass off the grid (lost {lost:.3e}, tail {frac:.3e})",
            tail_fraction=frac,
        )


def fiducial_samples(grid: GridSpec, x: np.ndarray | None = None) -> np.ndarray:
    """xi0(x) = (pi hbar)^(-1/4) exp(-x^2 / (2 hbar))."""
    x = grid.x if x is None else x
    h = grid.hbar
    return (math.pi * h) ** -0.25 * np.exp(-(x**2) / (2.0 * h))


def gaussian_coherent(z0, grid: GridSpec) -> WaveFunction:
    """Coherent state T(z0) xi0, evaluated in closed form at the exact centre."""
    z0 = PhaseSpacePoint.coerce(z0)
    h = grid.hbar
    x = grid.x
    env = fiducial_samples(grid, x - z0.x)
    phase = np.exp(1j / h * (z0.p * x - 0.5 * z0.p * z0.x))
    return WaveFunction(grid, phase * env).require_contained(f"coherent state at ({z0.x}, {z0.p})")


def hermite_functions(nmax: int, grid: GridSpec) -> np.ndarray:
    """Rows 0..nmax of the oscillator eigenfunctions (unit mass and frequency)."""
    u = grid.x / math.sqrt(grid.hbar)
    out = np.zeros((nmax + 1, grid.num_points))
    out[0] = fiducial_samples(grid)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * u * out[0]
    for n in range(1, nmax):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * u * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def hermite_basis(n: int, grid: GridSpec) -> WaveFunction:
    if n < 0:
        raise ValueError("Hermite index must be nonnegative")
    if n > grid.num_points // 8:
        raise ContainmentError(f"Hermite index {n} exceeds M/8 = {grid.num_points // 8}")
    h = WaveFunction(grid, hermite_functions(n, grid)[n])
    return h.require_contained(f"Hermite function h_{n}")


def position_moments(psi: WaveFunction) -> tuple[float, float]:
    """Mean and variance of the position (or momentum) density of ``psi``."""
    rho = np.abs(psi.samples) ** 2
    total = rho.sum()
    mean = float(np.sum(psi.nodes * rho) / total)
    var = float(np.sum((psi.nodes - mean) ** 2 * rho) / total)
    return mean, var


def uncertainty_product(psi: WaveFunction) -> float:
    """Delta x * Delta p computed from the position and momentum densities."""
    _, vx = position_moments(psi)
    _, vp = position_moments(hbar_fourier(psi))
    return math.sqrt(vx * vp)


def random_superposition(
    grid: GridSpec,
    rng: np.random.Generator,
    max_terms: int = 3,
    spread: float = 3.0,
) -> WaveFunction:
    """Random normalised superposition of coherent states.

    Centres are drawn uniformly in ``[-spread, spread]^2`` and coefficients
    are complex Gaussian; the result is always well-contained for grids
    with ``L`` comfortably larger than ``spread``.
    """
    n = int(rng.integers(1, max_terms + 1))
    total = np.zeros(grid.num_points, dtype=complex)
    for _ in range(n):
        x0, p0 = rng.uniform(-spread, spread, size=2)
        c = complex(rng.normal(), rng.normal())
        total += c * gaussian_coherent((x0, p0), grid).samples
    return WaveFunction(grid, total).normalized()

"""Time-symmetric evolution: the pre-selected state runs forward from t_in,
the post-selected state runs backward from t_fin, and both meet at t.

Propagation is split-step Fourier with Strang splitting (half potential
kick, full kinetic drift, half kick).  Backward propagation uses a negative
step.  The harmonic oscillator also has an exact quadratic factorisation
``exp(-i a x^2) exp(-i b p^2) exp(-i a x^2)`` usable as an oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContainmentError, OrthogonalityError
from .grid import TAIL_TOLERANCE, GridSpec, WaveFunction, check_same_grid, inner_product
from .weakval import (
    EPS_OVERLAP,
    Observable,
    WeakValueReport,
    compare_methods,
)
from .xwigner import PhaseSpaceField, cross_wigner, wigner

MAX_STEP = 1e-3


@dataclass(frozen=True)
class Free:
    mass: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.mass) and self.mass > 0):
            raise ValueError("mass must be positive")

    def potential(self, grid: GridSpec) -> np.ndarray:
        return np.zeros(grid.num_points)


@dataclass(frozen=True)
class Harmonic:
    mass: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("mass", "omega"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive")

    def potential(self, grid: GridSpec) -> np.ndarray:
        return 0.5 * self.mass * self.omega**2 * grid.x**2


@dataclass(frozen=True, eq=False)
class Potential:
    mass: float
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if np.iscomplexobj(v):
            if np.max(np.abs(v.imag)) > 0:
                raise ValueError("potential must be real")
            v = v.real
        v = np.array(v, dtype=float)
        if not np.all(np.isfinite(v)):
            raise ValueError("potential must be finite")
        if not (math.isfinite(self.mass) and self.mass > 0):
            raise ValueError("mass must be positive")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def potential(self, grid: GridSpec) -> np.ndarray:
        if self.values.shape != (grid.num_points,):
            raise ValueError("sampled potential does not match the grid")
        return self.values


HamiltonianSpec = Free | Harmonic | Potential


def _steps(t_from: float, t_to: float, dt: float | None) -> tuple[int, float]:
    span = abs(t_to - t_from)
    step = dt if dt is not None else min(MAX_STEP, span / 1000.0)
    n = max(1, math.ceil(span / step - 1e-9))
    return n, (t_to - t_from) / n


def propagate(
    psi: WaveFunction,
    t_from: float,
    t_to: float,
    H,
    method: str = "split",
    dt: float | None = None,
) -> WaveFunction:
    """Evolve ``psi`` from ``t_from`` to ``t_to`` (either direction) under ``H``.

    Containment is checked after every step; a ContainmentError carries the
    time at which mass first reached the boundary.
    """
    grid = psi.grid
    psi.require_contained("initial state")
    if t_to == t_from:
        return psi
    if method not in ("split", "exact"):
        raise ValueError(f"unknown propagation method {method!r}")
    if method == "exact" and not isinstance(H, Harmonic):
        raise ValueError("exact propagation is only available for Harmonic")
    n, h = _steps(t_from, t_to, dt)
    hb = grid.hbar
    kp = 2.0 * math.pi * hb * np.fft.fftfreq(grid.num_points, d=grid.dx)
    if method == "split":
        half_kick = np.exp(-0.5j * H.potential(grid) * h / hb)
        drift = np.exp(-0.5j * kp**2 * h / (H.mass * hb))
    else:
        m, w = H.mass, H.omega
        half_kick = np.exp(-0.5j * m * w * math.tan(0.5 * w * h) * grid.x**2 / hb)
        drift = np.exp(-0.5j * math.sin(w * h) * kp**2 / (m * w * hb))
    k = grid.tail_nodes
    s = np.array(psi.samples)
    total = float(np.sum(np.abs(s) ** 2))
    for step in range(n):
        s = half_kick * s
        s = np.fft.ifft(drift * np.fft.fft(s))
        s = half_kick * s
        a = np.abs(s)
        tail = float(np.sum(a[:k] ** 2) + np.sum(a[-k:] ** 2))
        if not tail < TAIL_TOLERANCE * total:
            t = t_from + (step + 1) * h
            raise ContainmentError(
                f"state reached the grid boundary at t = {t:.6g}", tail_fraction=tail / total, time=t
            )
    return WaveFunction(grid, s)


@dataclass(frozen=True, eq=False)
class TwoStateScenario:
    psi_in: WaveFunction
    phi_fin: WaveFunction
    hamiltonian: object
    t_in: float
    t_fin: float
    observable: Observable
    sample_times: tuple = field(default=())
    method: str = "split"

    def __post_init__(self):
        check_same_grid(self.psi_in, self.phi_fin)
        if not self.t_in < self.t_fin:
            raise ValueError("t_in must precede t_fin")
        times = tuple(float(t) for t in self.sample_times)
        if list(times) != sorted(times):
            raise ValueError("sample times must be sorted")
        if any(t < self.t_in or t > self.t_fin for t in times):
            raise ValueError("sample times must lie in [t_in, t_fin]")
        object.__setattr__(self, "sample_times", times)

    def _check_time(self, t: float):
        if not self.t_in <= t <= self.t_fin:
            raise ValueError(f"t = {t} outside [{self.t_in}, {self.t_fin}]")

    def states_at(self, t: float) -> tuple[WaveFunction, WaveFunction]:
        """(phi_t, psi_t): post-selected state run backward, pre-selected forward."""
        self._check_time(t)
        phi_t = propagate(self.phi_fin, self.t_fin, t, self.hamiltonian, self.method)
        psi_t = propagate(self.psi_in, self.t_in, t, self.hamiltonian, self.method)
        return phi_t, psi_t


def two_state_weak_value(
    s: TwoStateScenario, t: float, eps: float = EPS_OVERLAP
) -> WeakValueReport:
    """Quadrature weak value at time t with the residual to the direct route."""
    phi_t, psi_t = s.states_at(t)
    quad, _ = compare_methods(s.observable, phi_t, psi_t, eps)
    return quad


@dataclass(frozen=True)
class SweepRow:
    t: float
    report: WeakValueReport | None
    overlap: complex


def sweep(s: TwoStateScenario, eps: float = EPS_OVERLAP) -> list[SweepRow]:
    """Weak values at every sample time; vanishing overlaps leave a gap (report None)."""
    rows = []
    for t in s.sample_times:
        try:
            rep = two_state_weak_value(s, t, eps)
            rows.append(SweepRow(t, rep, rep.overlap))
        except OrthogonalityError as exc:
            rows.append(SweepRow(t, None, exc.overlap))
    return rows


@dataclass(frozen=True)
class Emergence:
    w_phi: PhaseSpaceField
    w_psi: PhaseSpaceField
    cross: PhaseSpaceField
    overlap: complex


def interference_emergence(s: TwoStateScenario, t: float) -> Emergence:
    """The three terms of W(phi_t + psi_t): W phi_t, W psi_t and 2 Re W(phi_t, psi_t)."""
    phi_t, psi_t = s.states_at(t)
    w = cross_wigner(phi_t, psi_t)
    cross = PhaseSpaceField(w.grid, 2.0 * w.values.real)
    return Emergence(wigner(phi_t), wigner(psi_t), cross, inner_product(phi_t, psi_t))

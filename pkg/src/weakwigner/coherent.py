"""Closed forms for antipodal coherent-state pairs in N degrees of freedom.

Phase-space vectors are ordered ``(x_1..x_N, p_1..p_N)``.  Exponentials are
assembled in log space so that large ``|z0|^2 / hbar`` does not underflow
before the Gaussian damping is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conventions import sigma

#: Largest exponent returned as a float; beyond it a Bound carries only the log.
OVERFLOW_EXPONENT = 700.0


@dataclass(frozen=True)
class CoherentStateLabel:
    center: tuple
    hbar: float = 1.0

    def __post_init__(self):
        c = tuple(float(v) for v in np.ravel(self.center))
        if len(c) == 0 or len(c) % 2:
            raise ValueError("center must be a 2N-vector")
        if not all(math.isfinite(v) for v in c):
            raise ValueError("center must be finite")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        object.__setattr__(self, "center", c)

    @property
    def dof(self) -> int:
        return len(self.center) // 2


def _vec(z, n: int | None = None) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.shape[-1] % 2:
        raise ValueError("phase-space vectors have even length 2N")
    if n is not None and z.shape[-1] != 2 * n:
        raise ValueError(f"expected vectors of length {2 * n}, got {z.shape[-1]}")
    return z


def _dof(z) -> int:
    return np.shape(z)[-1] // 2


def overlap_antipodal(z0, hbar: float = 1.0, n: int | None = None) -> float:
    """<T(z0) xi0 | T(-z0) xi0> = exp(-|z0|^2 / hbar)."""
    z0 = _vec(z0, n)
    return float(np.exp(-np.sum(z0**2, axis=-1) / hbar))


def _log_gauss(z, hbar):
    n = _dof(z)
    return -n * math.log(math.pi * hbar) - np.sum(z**2, axis=-1) / hbar


def fiducial_wigner(z, hbar: float = 1.0, n: int | None = None):
    """(pi hbar)^-N exp(-|z|^2 / hbar)."""
    z = _vec(z, n)
    return np.exp(_log_gauss(z, hbar))


def cross_wigner_antipodal(z, z0, hbar: float = 1.0, n: int | None = None):
    """W(T(z0) xi0, T(-z0) xi0)(z) = (pi hbar)^-N exp(2i sigma(z, z0)/hbar - |z|^2/hbar)."""
    z = _vec(z, n)
    z0 = _vec(z0, _dof(z))
    return np.exp(_log_gauss(z, hbar) + 2j * sigma(z, z0) / hbar)


def rho_antipodal(z, z0, hbar: float = 1.0, n: int | None = None):
    """cross_wigner_antipodal divided by the overlap exp(-|z0|^2/hbar)."""
    z = _vec(z, n)
    z0 = _vec(z0, _dof(z))
    log_mod = _log_gauss(z, hbar) + np.sum(z0**2, axis=-1) / hbar
    return np.exp(log_mod + 2j * sigma(z, z0) / hbar)


def chi_phase(alpha, beta, z):
    """Translation phase sigma(z, a - b) + sigma(a, b)/2.

    W(T(a) phi, T(b) psi)(z) = exp(i chi / hbar) W(phi, psi)(z - (a + b)/2).
    """
    alpha = _vec(alpha)
    beta = _vec(beta)
    return sigma(z, alpha - beta) + 0.5 * sigma(alpha, beta)


def translation_transport(alpha, beta, fn, hbar: float = 1.0):
    """Return z -> exp(i chi(a, b, z)/hbar) fn(z - (a + b)/2) for an analytic field ``fn``."""
    alpha = _vec(alpha)
    beta = _vec(beta)
    mid = 0.5 * (alpha + beta)

    def transported(z):
        z = _vec(z)
        return np.exp(1j * chi_phase(alpha, beta, z) / hbar) * fn(z - mid)

    return transported


@dataclass(frozen=True)
class Bound:
    """exp(exponent) * scale, with ``value`` None once the exponent overflows."""

    exponent: float
    scale: float
    value: float | None

    @property
    def overflow(self) -> bool:
        return self.value is None

    @property
    def log_value(self) -> float:
        return self.exponent + math.log(self.scale) if self.scale > 0 else -math.inf

    def admits(self, magnitude: float, slack: float = 1e-6) -> bool:
        if self.overflow:
            return True
        return magnitude <= self.value + slack


def amplification_bound(z0, hbar: float = 1.0, sup_abs: float = 1.0) -> Bound:
    """exp(|z0|^2 / hbar) * sup|A| for the antipodal coherent pair."""
    z0 = _vec(z0)
    exponent = float(np.sum(z0**2) / hbar)
    if exponent > OVERFLOW_EXPONENT:
        return Bound(exponent, sup_abs, None)
    return Bound(exponent, sup_abs, math.exp(exponent) * sup_abs)


def cross_wigner_l2_norm_sq(hbar: float = 1.0, n: int = 1) -> float:
    """Moyal identity for unit states: int |W(theta, psi)|^2 dz = (2 pi hbar)^-N."""
    return (2.0 * math.pi * hbar) ** -n

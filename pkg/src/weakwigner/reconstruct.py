"""Recover psi from the cross-Wigner field W(phi, psi).

    psi(x) = 2 / <phi|gamma> * int W(phi, psi)(z0) (T_GR(z0) gamma)(x) dz0

The integral is a Grossmann-Royer superposition with the (complex) field as
symbol, so it reuses the quadrature behind ``weyl_apply_gr``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError, GridMismatchError
from .grid import WaveFunction, check_same_grid, inner_product
from .weakval import EPS_OVERLAP, _weyl_apply_symbol
from .xwigner import FieldLabel, PhaseSpaceField, upsample


@dataclass(frozen=True, eq=False)
class ReconstructionInput:
    field: PhaseSpaceField
    phi: WaveFunction
    gamma: WaveFunction
    eps: float = EPS_OVERLAP

    def __post_init__(self):
        grid = check_same_grid(self.phi, self.gamma)
        if self.field.grid != grid:
            raise GridMismatchError("field and states live on different grids")
        if self.field.label not in (FieldLabel.CROSS_WIGNER, FieldLabel.GENERIC):
            raise ValueError(f"expected a cross-Wigner field, got {self.field.label}")
        ov = inner_product(self.phi, self.gamma)
        if not abs(ov) > self.eps * self.phi.norm() * self.gamma.norm():
            raise ConditioningError(
                f"|<phi|gamma>| = {abs(ov):.3e} is too small to invert", overlap=ov
            )


def reconstruct(inp: ReconstructionInput) -> WaveFunction:
    grid = inp.phi.grid
    ov = inner_product(inp.phi, inp.gamma)
    symbol = upsample(np.asarray(inp.field.values, dtype=complex), axis=0)
    # the Weyl quadrature carries a (pi hbar)^-1 prefactor that the formula lacks
    integral = _weyl_apply_symbol(symbol, inp.gamma) * (math.pi * grid.hbar)
    return WaveFunction(grid, 2.0 * integral / ov)


@dataclass(frozen=True)
class Alignment:
    phase: complex
    residual: float


def phase_align(a: WaveFunction, b: WaveFunction) -> Alignment:
    """Unimodular phase c minimising |c a - b| / |b|."""
    if a.norm() == 0 or b.norm() == 0:
        raise ValueError("cannot align the zero state")
    ov = inner_product(a, b)
    if ov == 0:
        return Alignment(1.0 + 0j, math.sqrt(2.0))
    c = ov / abs(ov)
    return Alignment(c, (c * a - b).norm() / b.norm())


def fitted_scale(reconstructed: WaveFunction, truth: WaveFunction) -> complex:
    """Complex least-squares factor s minimising |s * reconstructed - truth|."""
    return inner_product(reconstructed, truth) / reconstructed.norm_sq()

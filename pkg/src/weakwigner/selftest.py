"""Compact invariant suite run by ``weakwigner selftest``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import coherent
from .evolve import Free, propagate
from .grid import (
    GridSpec,
    gaussian_coherent,
    grossmann_royer,
    hbar_fourier,
    heisenberg_weyl,
    inner_product,
    random_superposition,
)
from .reconstruct import ReconstructionInput, phase_align, reconstruct
from .weakval import Observable, compare_methods, convex_sum_check, expectation, rho
from .xwigner import (
    compass_wigner,
    cross_wigner,
    fourier_marginal,
    marginal_over_p,
    marginal_over_x,
    phase_space_integral,
    wigner,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.value < self.tolerance


def _pairs(grid, rng, n, min_overlap=0.05):
    out = []
    while len(out) < n:
        a = random_superposition(grid, rng)
        b = random_superposition(grid, rng)
        if abs(inner_product(a, b)) > min_overlap:
            out.append((a, b))
    return out


def run(grid: GridSpec, rng: np.random.Generator, pairs: int = 5) -> list[CheckResult]:
    h = grid.hbar
    res = []
    xi = gaussian_coherent((0, 0), grid)
    res.append(CheckResult("fiducial norm", abs(inner_product(xi, xi) - 1), 1e-10))

    z0 = (1.0, 0.0)
    th, ps = gaussian_coherent(z0, grid), gaussian_coherent((-1.0, 0.0), grid)
    res.append(CheckResult(
        "antipodal overlap", abs(inner_product(th, ps) - coherent.overlap_antipodal(z0, h)), 1e-8))

    psi = random_superposition(grid, rng)
    n0 = psi.norm()
    unit = max(
        abs(hbar_fourier(psi).norm() - n0),
        abs(heisenberg_weyl((0.7, -0.4), psi).state.norm() - n0),
        abs(grossmann_royer((0.3, 0.9), psi).state.norm() - n0),
    )
    res.append(CheckResult("unitarity F, T, T_GR", unit / n0, 1e-8))

    worst = 0.0
    for zc in [(1, 0), (0, 1), (1, 1)]:
        a = gaussian_coherent(zc, grid)
        b = gaussian_coherent((-zc[0], -zc[1]), grid)
        xx, pp = np.meshgrid(grid.x, grid.p, indexing="ij")
        z = np.stack([xx, pp], axis=-1)
        worst = max(worst, float(np.max(np.abs(
            cross_wigner(a, b).values - coherent.cross_wigner_antipodal(z, zc, h)))))
        worst = max(worst, float(np.max(np.abs(
            rho(a, b).values - coherent.rho_antipodal(z, zc, h)))))
    res.append(CheckResult("closed-form W and rho", worst, 1e-6))

    marg = 0.0
    agreement = 0.0
    observables = [Observable.poly({k: 1.0}) for k in [(0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1)]]
    for a, b in _pairs(grid, rng, pairs):
        w = cross_wigner(a, b)
        marg = max(
            marg,
            float(np.max(np.abs(marginal_over_p(w) - np.conj(a.samples) * b.samples))),
            float(np.max(np.abs(marginal_over_x(w) - fourier_marginal(a, b)))),
            abs(phase_space_integral(w) - inner_product(a, b)),
        )
        for A in observables:
            agreement = max(agreement, compare_methods(A, a, b)[0].residual_vs_alternate)
    res.append(CheckResult("marginals and normalisation", marg, 1e-6))
    res.append(CheckResult("quadrature vs direct weak values", agreement, 1e-6))

    a, b = _pairs(grid, rng, 1)[0]
    dec = wigner(a + b).values - wigner(a).values - wigner(b).values - 2 * cross_wigner(a, b).values.real
    res.append(CheckResult("interference decomposition", float(np.max(np.abs(dec))), 1e-12))

    comp = compass_wigner([(2, 0), (-2, 0), (0, 2), (0, -2)], grid)
    integral = phase_space_integral(comp.total).real
    res.append(CheckResult(
        "compass pair count and integral",
        abs(len(comp.pair_terms) - 6) + abs(integral - comp.superposition.norm_sq()), 1e-6))

    target = random_superposition(grid, rng)
    rec = reconstruct(ReconstructionInput(cross_wigner(xi, target), xi, xi))
    res.append(CheckResult("reconstruction round trip", phase_align(rec, target).residual, 1e-4))

    spread = propagate(xi, 0.0, 1.0, Free(1.0))
    x2 = float(np.sum(grid.x**2 * np.abs(spread.samples) ** 2) * grid.dx)
    res.append(CheckResult("free spreading <x^2>(1)", abs(x2 - 0.5 * h * 2.0), 1e-4))

    mix = (gaussian_coherent((0.5, 0.2), grid) + gaussian_coherent((-0.3, 0.4), grid)).normalized()
    cs = convex_sum_check(Observable.poly({(1, 0): 1.0, (0, 2): 0.5}), mix, 24)
    res.append(CheckResult("convex sum of weak values", cs.residual, 1e-6))

    bump = Observable.from_function(lambda x, p: np.exp(-(x**2 + p**2)), grid)
    zc = (0.0, 1.5)
    a = gaussian_coherent(zc, grid)
    b = gaussian_coherent((0.0, -1.5), grid)
    wv = abs(compare_methods(bump, a, b)[0].value)
    bound = coherent.amplification_bound(zc, h, bump.sup_abs()).value
    violation = max(0.0, wv - bound) + max(0.0, abs(expectation(bump, a)) - 1.0)
    res.append(CheckResult("amplification bound", violation, 1e-6))
    res.append(CheckResult("anomalous weak value margin", 1.0 / max(wv, 1e-300), 1.0))
    return res


def format_table(results) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'check':<{width}}  {'value':>12}  {'tolerance':>10}  status"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name:<{width}}  {r.value:12.3e}  {r.tolerance:10.1e}  {status}")
    n = sum(r.passed for r in results)
    lines.append(f"{n}/{len(results)} checks passed")
    return "\n".join(lines)


def default_grid() -> GridSpec:
    return GridSpec(512, 10.0, 1.0)


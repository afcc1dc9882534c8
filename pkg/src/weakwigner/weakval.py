"""Weak values from the complex quasi-probability rho = W(phi, psi) / <phi|psi>.

Two independent routes are provided:

* ``weak_value_quadrature`` integrates the classical symbol against rho on
  the phase-space grid;
* ``weak_value_direct`` evaluates <phi|A psi> / <phi|psi> with the Weyl
  operator applied to psi, either through exact symbolic rules (x as a
  multiplication, p as an FFT derivative, xp symmetrised) or through the
  Grossmann-Royer superposition ``weyl_apply_gr``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import coherent
from .errors import CoverageError, GridMismatchError, OrthogonalityError
from .grid import (
    GridSpec,
    PhaseSpacePoint,
    WaveFunction,
    check_same_grid,
    gaussian_coherent,
    hermite_basis,
    inner_product,
)
from .xwigner import FieldLabel, PhaseSpaceField, cross_wigner, upsample

#: Relative overlap below which weak values are refused.
EPS_OVERLAP = 1e-12
MAX_DEGREE = 4


class Method(enum.Enum):
    QUADRATURE = "quadrature"
    DIRECT_GR = "direct_gr"
    DIRECT_SYMBOLIC = "direct_symbolic"


@dataclass(frozen=True)
class Observable:
    """Classical observable: a Weyl-ordered polynomial or a sampled field.

    Polynomials are given as ``{(a, b): c}`` meaning ``c x^a p^b`` with
    ``a + b <= 4`` and real ``c``.
    """

    terms: Mapping[tuple, float] | None = None
    field: PhaseSpaceField | None = None

    def __post_init__(self):
        if (self.terms is None) == (self.field is None):
            raise ValueError("an observable is either polynomial or sampled")
        if self.terms is not None:
            clean = {}
            for key, c in dict(self.terms).items():
                a, b = (int(k) for k in key)
                if a < 0 or b < 0 or a + b > MAX_DEGREE:
                    raise ValueError(f"monomial x^{a} p^{b} outside degree cap {MAX_DEGREE}")
                if isinstance(c, complex) and c.imag != 0:
                    raise ValueError("polynomial coefficients must be real")
                c = float(np.real(c))
                if not math.isfinite(c):
                    raise ValueError("polynomial coefficients must be finite")
                if c != 0.0:
                    clean[(a, b)] = clean.get((a, b), 0.0) + c
            object.__setattr__(self, "terms", clean)
        else:
            v = np.asarray(self.field.values)
            if np.iscomplexobj(v):
                if np.max(np.abs(v.imag)) > 1e-12:
                    raise ValueError("sampled observable must be real")
                v = v.real
            object.__setattr__(
                self, "field", PhaseSpaceField(self.field.grid, v, FieldLabel.OBSERVABLE)
            )

    @classmethod
    def poly(cls, terms) -> "Observable":
        if not isinstance(terms, Mapping):
            terms = {(a, b): c for a, b, c in terms}
        return cls(terms=terms)

    @classmethod
    def sampled(cls, values, grid: GridSpec | None = None) -> "Observable":
        if isinstance(values, PhaseSpaceField):
            return cls(field=values)
        return cls(field=PhaseSpaceField(grid, values, FieldLabel.OBSERVABLE))

    @classmethod
    def from_function(cls, fn, grid: GridSpec) -> "Observable":
        xx, pp = np.meshgrid(grid.x, grid.p, indexing="ij")
        return cls.sampled(np.asarray(fn(xx, pp), dtype=float), grid)

    @property
    def is_poly(self) -> bool:
        return self.terms is not None

    @property
    def degree(self) -> int:
        if not self.is_poly:
            raise TypeError("sampled observables have no degree")
        return max((a + b for a, b in self.terms), default=0)

    def __add__(self, other):
        if not (self.is_poly and other.is_poly):
            raise TypeError("only polynomial observables can be added")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0.0) + c
        return Observable(terms=out)

    def __mul__(self, c):
        c = float(c)
        if self.is_poly:
            return Observable(terms={k: c * v for k, v in self.terms.items()})
        return Observable.sampled(self.field.values * c, self.field.grid)

    __rmul__ = __mul__

    def symbol(self, x, p) -> np.ndarray:
        """Evaluate a polynomial symbol at arbitrary points."""
        if not self.is_poly:
            raise TypeError("sampled observables are only defined on their grid")
        x, p = np.broadcast_arrays(np.asarray(x, float), np.asarray(p, float))
        out = np.zeros(x.shape)
        for (a, b), c in self.terms.items():
            out = out + c * x**a * p**b
        return out

    def on_grid(self, grid: GridSpec) -> np.ndarray:
        if self.is_poly:
            xx, pp = np.meshgrid(grid.x, grid.p, indexing="ij")
            return self.symbol(xx, pp)
        if self.field.grid != grid:
            raise GridMismatchError("sampled observable lives on another grid")
        return np.asarray(self.field.values)

    def on_half_grid(self, grid: GridSpec) -> np.ndarray:
        """Symbol on (x_half, p); sampled fields are interpolated along x."""
        if self.is_poly:
            xx, pp = np.meshgrid(grid.x_half, grid.p, indexing="ij")
            return self.symbol(xx, pp)
        return upsample(self.on_grid(grid), axis=0).real

    def sup_abs(self, grid: GridSpec | None = None) -> float:
        if self.is_poly:
            if self.degree > 0:
                raise ValueError("non-constant polynomial symbols are unbounded")
            return abs(self.terms.get((0, 0), 0.0))
        return float(np.max(np.abs(self.field.values)))


X = Observable.poly({(1, 0): 1.0})
P = Observable.poly({(0, 1): 1.0})
ONE = Observable.poly({(0, 0): 1.0})


@dataclass(frozen=True)
class WeakValueReport:
    value: complex
    overlap: complex
    method: Method
    residual_vs_alternate: float | None = None

    def with_residual(self, other: "WeakValueReport") -> "WeakValueReport":
        return WeakValueReport(
            self.value, self.overlap, self.method, relative_residual(self.value, other.value)
        )


def relative_residual(a: complex, b: complex) -> float:
    """|a - b| scaled by max(|a|, |b|, 1); absolute for values below unity."""
    return abs(a - b) / max(abs(a), abs(b), 1.0)


def _checked_overlap(phi: WaveFunction, psi: WaveFunction, eps: float) -> complex:
    ov = inner_product(phi, psi)
    scale = phi.norm() * psi.norm()
    if not abs(ov) > eps * scale:
        raise OrthogonalityError(
            f"overlap |<phi|psi>| = {abs(ov):.3e} is below {eps:g} * |phi||psi|; "
            "the weak value is undefined (pass a smaller eps to override)",
            overlap=ov,
        )
    return ov


def rho(phi: WaveFunction, psi: WaveFunction, eps: float = EPS_OVERLAP) -> PhaseSpaceField:
    """Complex quasi-probability W(phi, psi) / <phi|psi>; integrates to one."""
    ov = _checked_overlap(phi, psi, eps)
    w = cross_wigner(phi, psi)
    return PhaseSpaceField(w.grid, w.values / ov, FieldLabel.RHO)


def weak_value_quadrature(
    A: Observable, phi: WaveFunction, psi: WaveFunction, eps: float = EPS_OVERLAP
) -> WeakValueReport:
    grid = check_same_grid(phi, psi)
    ov = _checked_overlap(phi, psi, eps)
    w = cross_wigner(phi, psi)
    value = complex(np.sum(A.on_grid(grid) * w.values) * grid.dx * grid.dp) / ov
    return WeakValueReport(value, ov, Method.QUADRATURE)


def _weyl_apply_symbol(symbol_half: np.ndarray, psi: WaveFunction, stride: int = 1) -> np.ndarray:
    """(pi hbar)^-1 sum_{z0} A(z0) (T_GR(z0) psi) dx0 dp0 over the (x_half, p) lattice.

    With x0_m = -L + m dx/2, the reflection 2 x0_m - x_i is node m - i and the
    phase 2 p_k (x_i - x0_m)/hbar = 2 pi (k - M/2)(2i - m)/M, so the p0-sum is
    one inverse FFT per x0 row.  ``stride`` keeps every stride-th momentum
    node (weight stride * dp), which aliases and degrades accuracy.
    """
    grid = psi.grid
    m = grid.num_points
    if stride < 1 or m % stride:
        raise ValueError(f"stride must divide M = {m}")
    sym = np.asarray(symbol_half)[:, ::stride]
    mk = sym.shape[1]
    # g[mm, q] = sum_k' A(x0_mm, p_k') exp(i p_k' (q dx) / hbar) dp', q mod mk
    k_signed = np.arange(0, m, stride) - m // 2
    if not np.all(k_signed // stride * stride == k_signed):
        raise ValueError("stride must keep the zero-momentum node")
    kk = k_signed // stride
    base = np.zeros((2 * m, mk), dtype=complex)
    base[:, kk % mk] = sym
    g = np.fft.ifft(base, axis=1) * mk * (stride * grid.dp)
    i = np.arange(m)[:, None]
    mm = np.arange(2 * m)[None, :]
    src = mm - i
    valid = (src >= 0) & (src < m)
    q = 2 * i - mm
    vals = g[np.broadcast_to(mm, valid.shape), q % mk]
    contrib = np.where(valid, vals * psi.samples[np.where(valid, src, 0)], 0.0)
    h = 0.5 * grid.dx
    return contrib.sum(axis=1) * h / (math.pi * grid.hbar)


def weyl_apply_gr(A: Observable, psi: WaveFunction, stride: int = 1) -> WaveFunction:
    """Weyl quantisation of ``A`` applied to ``psi`` as a Grossmann-Royer superposition."""
    if psi.rep != "position":
        raise GridMismatchError("weyl_apply_gr acts on position-space states")
    psi.require_contained("psi")
    out = _weyl_apply_symbol(A.on_half_grid(psi.grid), psi, stride)
    return WaveFunction(psi.grid, out)


def _fft_momentum(grid: GridSpec) -> np.ndarray:
    return 2.0 * math.pi * grid.hbar * np.fft.fftfreq(grid.num_points, d=grid.dx)


def apply_symbolic(terms: Mapping[tuple, float], psi: WaveFunction) -> np.ndarray:
    """Exact operator rules for x^a, p^b and the symmetrised product xp."""
    grid = psi.grid
    kp = _fft_momentum(grid)
    s = psi.samples
    out = np.zeros_like(s)

    def pb(v, b):
        return np.fft.ifft(kp**b * np.fft.fft(v))

    for (a, b), c in terms.items():
        if b == 0:
            out = out + c * grid.x**a * s
        elif a == 0:
            out = out + c * pb(s, b)
        elif (a, b) == (1, 1):
            out = out + c * 0.5 * (grid.x * pb(s, 1) + pb(grid.x * s, 1))
        else:
            raise ValueError(f"no symbolic rule for x^{a} p^{b}")
    return out


def _is_symbolic(key) -> bool:
    a, b = key
    return a == 0 or b == 0 or (a, b) == (1, 1)


def apply_observable(A: Observable, psi: WaveFunction, stride: int = 1) -> tuple[WaveFunction, Method]:
    """A_weyl psi together with the route used to build it."""
    if not A.is_poly:
        return weyl_apply_gr(A, psi, stride), Method.DIRECT_GR
    sym = {k: c for k, c in A.terms.items() if _is_symbolic(k)}
    rest = {k: c for k, c in A.terms.items() if not _is_symbolic(k)}
    out = apply_symbolic(sym, psi)
    method = Method.DIRECT_SYMBOLIC
    if rest:
        out = out + weyl_apply_gr(Observable(terms=rest), psi, stride).samples
        method = Method.DIRECT_GR
    return WaveFunction(psi.grid, out), method


def weak_value_direct(
    A: Observable,
    phi: WaveFunction,
    psi: WaveFunction,
    eps: float = EPS_OVERLAP,
    stride: int = 1,
) -> WeakValueReport:
    check_same_grid(phi, psi)
    ov = _checked_overlap(phi, psi, eps)
    a_psi, method = apply_observable(A, psi, stride)
    return WeakValueReport(inner_product(phi, a_psi) / ov, ov, method)


def compare_methods(
    A: Observable, phi: WaveFunction, psi: WaveFunction, eps: float = EPS_OVERLAP, stride: int = 1
) -> tuple[WeakValueReport, WeakValueReport]:
    """Quadrature and direct weak values, each carrying the residual to the other."""
    q = weak_value_quadrature(A, phi, psi, eps)
    d = weak_value_direct(A, phi, psi, eps, stride)
    return q.with_residual(d), d.with_residual(q)


def expectation(A: Observable, psi: WaveFunction) -> float:
    """Ordinary expectation <psi|A|psi>/<psi|psi> via the Wigner quadrature."""
    if psi.norm() == 0:
        raise ValueError("expectation of the zero state is undefined")
    v = weak_value_quadrature(A, psi, psi).value
    if abs(v.imag) > 1e-8 * max(1.0, abs(v.real)):
        raise ArithmeticError(f"expectation has imaginary part {v.imag:.3e}")
    return v.real


@dataclass(frozen=True)
class ConvexSum:
    lhs: float
    rhs: complex
    residual: float
    captured: float
    terms_used: int


def convex_sum_check(A: Observable, psi: WaveFunction, basis_size: int) -> ConvexSum:
    """Compare <A>^psi with sum_j |<h_j|psi>|^2 / |psi|^2 * weak value(h_j, psi).

    The left side uses the Wigner quadrature, each weak value on the right
    the direct operator route, so the two sides are computed independently.
    """
    norm_sq = psi.norm_sq()
    basis = [hermite_basis(n, psi.grid) for n in range(basis_size)]
    coeffs = np.array([inner_product(h, psi) for h in basis])
    captured = float(np.sum(np.abs(coeffs) ** 2) / norm_sq)
    if captured < 1.0 - 1e-8:
        raise CoverageError(
            f"Hermite basis of size {basis_size} captures only {captured:.12f} of the norm",
            captured=captured,
        )
    lhs = expectation(A, psi)
    a_psi, _ = apply_observable(A, psi)
    rhs = 0j
    used = 0
    scale = math.sqrt(norm_sq)
    for h, c in zip(basis, coeffs):
        if not abs(c) > EPS_OVERLAP * scale:
            continue
        weak = inner_product(h, a_psi) / c
        rhs += abs(c) ** 2 / norm_sq * weak
        used += 1
    return ConvexSum(lhs, rhs, abs(lhs - rhs), captured, used)


@dataclass(frozen=True)
class AmplificationReport:
    bound: coherent.Bound
    attained: complex
    sup_abs: float
    expectations: tuple = field(default=())


def coherent_amplification_bound(A: Observable, z0, grid: GridSpec) -> AmplificationReport:
    """Weak value of ``A`` for the pair T(z0) xi0, T(-z0) xi0 against exp(|z0|^2/hbar) sup|A|."""
    z0 = PhaseSpacePoint.coerce(z0)
    sup = A.sup_abs(grid)
    bound = coherent.amplification_bound(z0.as_array(), grid.hbar, sup)
    theta = gaussian_coherent(z0, grid)
    psi = gaussian_coherent(-z0, grid)
    attained = weak_value_quadrature(A, theta, psi).value
    expectations = (expectation(A, theta), expectation(A, psi))
    return AmplificationReport(bound, attained, sup, expectations)

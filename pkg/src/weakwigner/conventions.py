"""Phase and sign conventions used throughout the package.

Every phase factor in the library follows the choices below; they are
collected here so that downstream code (and the headers written by the
CLI) can refer to a single source.

Inner product
    <phi|psi> = sum conj(phi) * psi * dx, conjugate-linear in the first slot.

hbar-Fourier transform
    F psi(p) = (2 pi hbar)^(-1/2) int exp(-i p y / hbar) psi(y) dy.

Symplectic form
    sigma(z, z') = p . x' - p' . x   for z = (x, p), z' = (x', p').

Heisenberg-Weyl translation
    T(z0) psi(x) = exp((i/hbar) (p0 x - p0 x0 / 2)) psi(x - x0).

Grossmann-Royer reflection
    T_GR(z0) psi(x) = exp((2i/hbar) p0 (x - x0)) psi(2 x0 - x).

Cross-Wigner transform
    W(phi, psi)(x, p) = (2 pi hbar)^(-1) int exp(+i p y / hbar)
                        conj(phi(x + y/2)) psi(x - y/2) dy
                      = (pi hbar)^(-1) <T_GR(z) phi | psi>.

    With this kernel the p-marginal is conj(F phi) * F psi and
    int A W(phi, psi) dz = <phi|A_weyl|psi>.  The opposite kernel
    exp(-i p y / hbar) with the same argument placement mirrors the
    distribution in p and breaks both identities.

Translation covariance (checked against direct grid evaluation)
    W(T(a) phi, T(b) psi)(z) = exp((i/hbar) chi(a, b, z)) W(phi, psi)(z - (a + b)/2)
    chi(a, b, z) = sigma(z, a - b) + sigma(a, b) / 2

Antipodal coherent pair, theta = T(z0) xi0, psi = T(-z0) xi0
    W(theta, psi)(z) = (pi hbar)^(-1) exp(2i sigma(z, z0) / hbar) exp(-|z|^2 / hbar)
    <theta|psi> = exp(-|z0|^2 / hbar)

Fiducial state
    xi0(x) = (pi hbar)^(-1/4) exp(-x^2 / (2 hbar)).
"""

import numpy as np

CROSS_WIGNER_KERNEL = "exp(+i*p*y/hbar)*conj(phi(x+y/2))*psi(x-y/2)"
ANTIPODAL_PHASE = "exp(+2i*sigma(z,z0)/hbar)"
TRANSLATION_PHASE = "sigma(z,a-b)+sigma(a,b)/2"

#: Short string stamped into every file header written by the CLI.
SIGN_LEDGER = f"W={CROSS_WIGNER_KERNEL};antipodal={ANTIPODAL_PHASE};chi={TRANSLATION_PHASE}"


def sigma(z, zp):
    """Standard symplectic form for 2N-vectors ordered (x_1..x_N, p_1..p_N)."""
    z = np.asarray(z, dtype=float)
    zp = np.asarray(zp, dtype=float)
    n = z.shape[-1] // 2
    x, p = z[..., :n], z[..., n:]
    xp, pp = zp[..., :n], zp[..., n:]
    return np.sum(p * xp, axis=-1) - np.sum(pp * x, axis=-1)

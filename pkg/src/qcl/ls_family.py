"""One-parameter qutrit channel family between identity and Landau-Streater.

For 0 <= x <= 1 the channel acts as

    L_x(rho) = (1 - x) rho + (x/2) (Tr(rho) I - rho^T),

so x = 0 is the identity channel and x = 1 is the Landau-Streater channel
(equal to the Werner-Holevo channel in dimension three). The Kraus form uses
the spin-1 angular-momentum matrices

    J_x = -i [[0,0,0],[0,0,1],[0,-1,0]]
    J_y = -i [[0,0,-1],[0,0,0],[1,0,0]]
    J_z = -i [[0,1,0],[-1,0,0],[0,0,0]]

with K_0 = sqrt(1-x) I and K_a = sqrt(x/2) J_a. The zero operator K_0 at
x = 1 (and the zero J-terms at x = 0) are kept so the environment dimension
stays fixed at four across the whole family.

In this basis exp(i theta n.J) is real orthogonal, which is why the family
is covariant under SO(3) at every x while the endpoints enjoy the larger
SU(3) covariance (plain at x = 0, conjugate at x = 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channels, matcore
from .errors import CheckFailedError, DomainError

J_X = np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]], dtype=np.complex128)
J_Y = np.array([[0, 0, 1j], [0, 0, 0], [-1j, 0, 0]], dtype=np.complex128)
J_Z = np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]], dtype=np.complex128)
SPIN1 = (J_X, J_Y, J_Z)


def check_x(x: float) -> float:
    """Validate the interpolation parameter, returning it as a float."""
    xf = float(x)
    if not np.isfinite(xf) or xf < 0.0 or xf > 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    return xf


def kraus_for(x: float) -> channels.KrausChannel:
    """Kraus form of L_x with the environment dimension pinned to four."""
    xf = check_x(x)
    k0 = np.sqrt(1.0 - xf) * np.eye(3, dtype=np.complex128)
    ops = [k0] + [np.sqrt(xf / 2.0) * j for j in SPIN1]
    return channels.KrausChannel(3, 3, tuple(ops), label=f"interp(x={xf:g})")


def apply_closed(x: float, m) -> np.ndarray:
    """Closed-form action (1-x) m + (x/2)(Tr(m) I - m^T) on any 3x3 matrix."""
    xf = check_x(x)
    arr = matcore.require_square(m)
    if arr.shape[0] != 3:
        raise DomainError(f"expected a 3x3 matrix, got {arr.shape}")
    return (1.0 - xf) * arr + (xf / 2.0) * (np.trace(arr) * np.eye(3) - arr.T)


def complement_closed(x: float, m) -> np.ndarray:
    """Closed-form complementary action on the four-dimensional environment.

    Written entrywise in the input's entries (independent of the Kraus
    stacking route): with t = Tr(m) and g = sqrt(x(1-x)/2),

        out[0, 0]   = (1-x) t
        out[0, 1+a] = out[1+a, 0] = g * i * (cyclic difference of m)
        out[1+a, 1+b] = (x/2) (t I - m^T)[a, b]
    """
    xf = check_x(x)
    arr = matcore.require_square(m)
    if arr.shape[0] != 3:
        raise DomainError(f"expected a 3x3 matrix, got {arr.shape}")
    t = np.trace(arr)
    g = np.sqrt(xf * (1.0 - xf) / 2.0)
    out = np.zeros((4, 4), dtype=np.complex128)
    out[0, 0] = (1.0 - xf) * t
    d = (
        1j * (arr[1, 2] - arr[2, 1]),
        1j * (arr[2, 0] - arr[0, 2]),
        1j * (arr[0, 1] - arr[1, 0]),
    )
    for a in range(3):
        out[0, 1 + a] = g * d[a]
        out[1 + a, 0] = g * d[a]
    out[1:, 1:] = (xf / 2.0) * (t * np.eye(3) - arr.T)
    return out


@dataclass(frozen=True)
class SpectrumReport:
    """Transfer-matrix spectrum of L_x in closed form.

    families lists (eigenvalue, multiplicity) pairs: the identity fixed
    point, the three antisymmetric-combination operators at 1 - x/2, and
    the five symmetric traceless operators at 1 - 3x/2. markovian_obstruction
    flags a negative determinant (x > 2/3), which rules out membership in
    any one-parameter semigroup of channels of this form.
    """

    x: float
    families: tuple
    determinant: float
    markovian_obstruction: bool


def spectrum(x: float) -> SpectrumReport:
    xf = check_x(x)
    lam_y = 1.0 - xf / 2.0
    lam_s = 1.0 - 1.5 * xf
    det = lam_y**3 * lam_s**5
    return SpectrumReport(
        x=xf,
        families=((1.0, 1), (lam_y, 3), (lam_s, 5)),
        determinant=float(det),
        markovian_obstruction=bool(det < 0.0),
    )


def spin1_rotation(theta: float, axis) -> np.ndarray:
    """exp(i theta n.J) for a unit axis n; real orthogonal in this basis."""
    n = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(n)
    if norm == 0.0:
        raise DomainError("rotation axis must be nonzero")
    n = n / norm
    h = theta * (n[0] * J_X + n[1] * J_Y + n[2] * J_Z)
    vals, vecs = matcore.hermitian_eig(h)
    u = (vecs * np.exp(1j * vals)) @ vecs.conj().T
    # The generator is purely imaginary here, so the exponential is real.
    return np.real_if_close(u, tol=1e6)


@dataclass(frozen=True)
class EndpointReport:
    """Deviations found by endpoint_checks (all should be ~1e-15)."""

    max_dev_identity_end: float
    max_dev_self_complementary: float
    trials: int


def endpoint_checks(seed: int = 7, trials: int = 20, tol: float = 1e-12) -> EndpointReport:
    """Structural checks of the complement at the two endpoints.

    At x = 1 the family is self-complementary: the environment output has
    zero first row and column and its lower 3x3 block equals the direct
    output. At x = 0 the environment sees Tr(m) |0><0| only. Violations
    beyond tol raise CheckFailedError.
    """
    rng = np.random.default_rng(seed)
    dev1 = 0.0
    dev0 = 0.0
    for _ in range(trials):
        m = matcore.random_hermitian(3, rng)
        c1 = complement_closed(1.0, m)
        dev1 = max(dev1, float(np.max(np.abs(c1[0, :]))))
        dev1 = max(dev1, float(np.max(np.abs(c1[:, 0]))))
        dev1 = max(dev1, float(np.max(np.abs(c1[1:, 1:] - apply_closed(1.0, m)))))
        c0 = complement_closed(0.0, m)
        expected = np.zeros((4, 4), dtype=np.complex128)
        expected[0, 0] = np.trace(m)
        dev0 = max(dev0, float(np.max(np.abs(c0 - expected))))
    if dev1 > tol or dev0 > tol:
        raise CheckFailedError(
            f"endpoint structure violated: x=1 dev {dev1:.3e}, x=0 dev {dev0:.3e}"
        )
    return EndpointReport(dev1, dev0, trials)

"""Completely positive trace-preserving maps in Kraus form.

A channel with Kraus operators {K_i} acts as rho -> sum_i K_i rho K_i^dag.
Derived objects follow these conventions:

* Choi matrix: J = sum_{ij} |i><j| tensor Phi(|i><j|), so the first factor
  is the input space and Tr_B J = I_in.
* Complementary channel: environment dimension equals the number of Kraus
  operators supplied (zero operators are kept, they pin the environment
  size), and Phi^c(rho)[a, b] = Tr(K_a rho K_b^dag).
* Transfer matrix: matrix of the map on column-stacked density matrices,
  vec(rho)[k + d*l] = rho[k, l], so T = sum_i conj(K_i) tensor K_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matcore
from .errors import (
    CheckFailedError,
    DimensionMismatchError,
    NegativeEigenvalueError,
    NotHermitianError,
    NotUnitaryError,
)

TRACE_PRESERVATION_TOL = 1e-10
UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """A CPTP map given by an explicit Kraus list.

    kraus is a tuple of dim_out x dim_in complex matrices satisfying
    sum_i K_i^dag K_i = I within TRACE_PRESERVATION_TOL.
    """

    dim_in: int
    dim_out: int
    kraus: tuple
    label: str = ""

    def __post_init__(self):
        ops = tuple(matcore.as_complex(k) for k in self.kraus)
        if not ops:
            raise DimensionMismatchError("a channel needs at least one Kraus operator")
        for k in ops:
            if k.shape != (self.dim_out, self.dim_in):
                raise DimensionMismatchError(
                    f"Kraus operator shape {k.shape} != ({self.dim_out}, {self.dim_in})"
                )
        object.__setattr__(self, "kraus", ops)
        defect = trace_preservation_defect(self)
        if defect > TRACE_PRESERVATION_TOL:
            raise CheckFailedError(
                f"Kraus operators are not trace preserving: defect {defect:.3e}"
            )


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi matrix of a channel, input factor first."""

    dim_in: int
    dim_out: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        j = matcore.require_square(self.matrix)
        if j.shape[0] != self.dim_in * self.dim_out:
            raise DimensionMismatchError(
                f"Choi matrix size {j.shape[0]} != {self.dim_in}*{self.dim_out}"
            )
        if matcore.hermiticity_defect(j) > 1e-9:
            raise NotHermitianError("Choi matrix is not Hermitian")
        low = float(np.linalg.eigvalsh((j + j.conj().T) / 2.0)[0])
        if low < -1e-10:
            raise NegativeEigenvalueError(f"Choi matrix eigenvalue {low:.3e}")
        object.__setattr__(self, "matrix", j)


def kraus_channel(kraus, label: str = "") -> KrausChannel:
    """Build a KrausChannel, inferring dimensions from the first operator."""
    first = matcore.as_complex(kraus[0])
    return KrausChannel(first.shape[1], first.shape[0], tuple(kraus), label)


def trace_preservation_defect(ch) -> float:
    """Max-abs deviation of sum_i K_i^dag K_i from the identity."""
    acc = np.zeros((ch.dim_in, ch.dim_in), dtype=np.complex128)
    for k in ch.kraus:
        acc += np.asarray(k).conj().T @ np.asarray(k)
    return float(np.max(np.abs(acc - np.eye(ch.dim_in))))


def apply(ch, m) -> np.ndarray:
    """Act with the channel on a dim_in x dim_in matrix.

    The action is linear, so m need not be a density matrix; covariance
    probes feed arbitrary Hermitian basis elements through here.
    """
    arr = matcore.require_square(m)
    if arr.shape[0] != ch.dim_in:
        raise DimensionMismatchError(
            f"input dimension {arr.shape[0]} != channel dim_in {ch.dim_in}"
        )
    out = np.zeros((ch.dim_out, ch.dim_out), dtype=np.complex128)
    for k in ch.kraus:
        out += k @ arr @ k.conj().T
    return out


def choi(ch) -> ChoiMatrix:
    """Choi matrix J = sum_{ij} |i><j| tensor Phi(|i><j|)."""
    d_in, d_out = ch.dim_in, ch.dim_out
    j = np.zeros((d_in * d_out, d_in * d_out), dtype=np.complex128)
    for k in ch.kraus:
        # |i> tensor K|i> stacked over i is just K^T flattened row-major.
        w = np.asarray(k).T.reshape(-1)
        j += np.outer(w, w.conj())
    return ChoiMatrix(d_in, d_out, j)


def complement(ch) -> KrausChannel:
    """Complementary channel to the environment.

    With n Kraus operators the environment has dimension n and the
    complement has dim_out Kraus operators R_i with (R_i)[a, j] = K_a[i, j].
    """
    karr = np.stack([np.asarray(k) for k in ch.kraus])  # (n, dim_out, dim_in)
    ops = tuple(karr[:, i, :].copy() for i in range(ch.dim_out))
    return KrausChannel(ch.dim_in, karr.shape[0], ops, label=f"comp({ch.label})")


def transfer_matrix(ch) -> np.ndarray:
    """Map matrix on column-stacked inputs: T = sum_i conj(K_i) kron K_i."""
    d_in, d_out = ch.dim_in, ch.dim_out
    t = np.zeros((d_out * d_out, d_in * d_in), dtype=np.complex128)
    for k in ch.kraus:
        t += np.kron(np.asarray(k).conj(), np.asarray(k))
    return t


def unitarity_defect(u) -> float:
    arr = matcore.require_square(u)
    return float(np.max(np.abs(arr.conj().T @ arr - np.eye(arr.shape[0]))))


def _require_unitary(u, dim: int, name: str) -> np.ndarray:
    arr = matcore.require_square(u)
    if arr.shape[0] != dim:
        raise DimensionMismatchError(f"{name} has dimension {arr.shape[0]}, expected {dim}")
    defect = unitarity_defect(arr)
    if defect > UNITARITY_TOL:
        raise NotUnitaryError(f"{name} unitarity defect {defect:.3e}")
    return arr


def hermitian_basis(dim: int) -> list:
    """The dim^2 Hermitian matrix-unit combinations spanning d x d Hermitians.

    E_kk for each k, then (E_kl + E_lk) and i(E_kl - E_lk) for k < l.
    """
    basis = []
    for k in range(dim):
        e = np.zeros((dim, dim), dtype=np.complex128)
        e[k, k] = 1.0
        basis.append(e)
    for k in range(dim):
        for l in range(k + 1, dim):
            s = np.zeros((dim, dim), dtype=np.complex128)
            s[k, l] = 1.0
            s[l, k] = 1.0
            basis.append(s)
            a = np.zeros((dim, dim), dtype=np.complex128)
            a[k, l] = 1.0j
            a[l, k] = -1.0j
            basis.append(a)
    return basis


def covariance_defect(ch, u_in, u_out) -> float:
    """How far the channel is from intertwining u_in with u_out.

    Returns max over a Hermitian operator basis B of
    || Phi(u_in B u_in^dag) - u_out Phi(B) u_out^dag ||_max.
    Zero (to tolerance) means Phi(U rho U^dag) = V Phi(rho) V^dag.
    """
    uin = _require_unitary(u_in, ch.dim_in, "u_in")
    uout = _require_unitary(u_out, ch.dim_out, "u_out")
    worst = 0.0
    for b in hermitian_basis(ch.dim_in):
        lhs = apply(ch, uin @ b @ uin.conj().T)
        rhs = uout @ apply(ch, b) @ uout.conj().T
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def omega_defect(ch, u_in, u_out, omega) -> float:
    """Kraus-mixing covariance defect.

    For a covariant channel there is a matrix Omega with
    u_out^dag K_i u_in = sum_j Omega[i, j] K_j; this returns the max-abs
    deviation from that relation over all i for the supplied Omega.
    """
    uin = _require_unitary(u_in, ch.dim_in, "u_in")
    uout = _require_unitary(u_out, ch.dim_out, "u_out")
    om = matcore.as_complex(omega)
    n = len(ch.kraus)
    if om.shape != (n, n):
        raise DimensionMismatchError(f"omega shape {om.shape} != ({n}, {n})")
    karr = np.stack([np.asarray(k) for k in ch.kraus])
    worst = 0.0
    for i in range(n):
        lhs = uout.conj().T @ karr[i] @ uin
        rhs = np.tensordot(om[i], karr, axes=(0, 0))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst

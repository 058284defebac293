"""Dense linear-algebra kernel for small complex matrices.

Conventions used throughout the package:

* matrices are numpy arrays with dtype complex128 (real inputs are upcast),
* eigenvalues are returned in ascending order,
* entropies are measured in bits (logarithms base 2),
* bipartite spaces are ordered A (first tensor factor) then B (second),
  with the composite index ``i_A * dim_b + i_B``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainError,
    NegativeEigenvalueError,
    NonSquareError,
    NotHermitianError,
)

HERMITICITY_TOL = 1e-8
EIGENVALUE_SLACK = 1e-10


class HermitianEigen(NamedTuple):
    """Eigendecomposition of a Hermitian matrix.

    eigenvalues are real and ascending; eigenvectors[:, k] is the
    unit-norm eigenvector for eigenvalues[k].
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_complex(m) -> np.ndarray:
    """Return m as a 2-d complex128 array without copying when possible."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise NonSquareError(f"expected a 2-d array, got shape {arr.shape}")
    return arr


def require_square(m) -> np.ndarray:
    arr = as_complex(m)
    if arr.shape[0] != arr.shape[1]:
        raise NonSquareError(f"matrix is {arr.shape[0]}x{arr.shape[1]}, not square")
    return arr


def hermiticity_defect(m) -> float:
    """Max-abs deviation of m from its own conjugate transpose."""
    arr = require_square(m)
    return float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0


def kron(a, b) -> np.ndarray:
    """Kronecker product with the A-then-B index convention."""
    return np.kron(as_complex(a), as_complex(b))


def hermitian_eig(m, tol: float = HERMITICITY_TOL) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The input is symmetrized before factorization so that roundoff at the
    1e-12 level cannot leak into complex eigenvalues. Deviations from
    hermiticity beyond tol raise NotHermitianError.
    """
    arr = require_square(m)
    defect = hermiticity_defect(arr)
    if defect > tol:
        raise NotHermitianError(f"hermiticity defect {defect:.3e} exceeds {tol:.1e}")
    sym = (arr + arr.conj().T) / 2.0
    vals, vecs = np.linalg.eigh(sym)
    return HermitianEigen(vals, vecs)


def partial_trace(m, dim_a: int, dim_b: int, keep: str) -> np.ndarray:
    """Trace out one factor of a (dim_a*dim_b) square matrix.

    keep="a" returns the dim_a x dim_a reduction, keep="b" the dim_b x dim_b
    one. The composite basis is |i_A> tensor |i_B| at index i_A*dim_b + i_B.
    """
    arr = require_square(m)
    if dim_a <= 0 or dim_b <= 0 or arr.shape[0] != dim_a * dim_b:
        raise DimensionMismatchError(
            f"matrix of size {arr.shape[0]} does not factor as {dim_a}*{dim_b}"
        )
    which = keep.lower()
    if which not in ("a", "b"):
        raise ValueError(f"keep must be 'a' or 'b', got {keep!r}")
    t = arr.reshape(dim_a, dim_b, dim_a, dim_b)
    if which == "a":
        return np.einsum("ibjb->ij", t)
    return np.einsum("aiaj->ij", t)


def partial_transpose(m, dim_a: int, dim_b: int) -> np.ndarray:
    """Transpose the second (B) factor of a (dim_a*dim_b) square matrix."""
    arr = require_square(m)
    if dim_a <= 0 or dim_b <= 0 or arr.shape[0] != dim_a * dim_b:
        raise DimensionMismatchError(
            f"matrix of size {arr.shape[0]} does not factor as {dim_a}*{dim_b}"
        )
    t = arr.reshape(dim_a, dim_b, dim_a, dim_b)
    return np.transpose(t, (0, 3, 2, 1)).reshape(dim_a * dim_b, dim_a * dim_b)


def von_neumann_entropy(rho, tol: float = EIGENVALUE_SLACK) -> float:
    """Von Neumann entropy of a density matrix, in bits.

    Eigenvalues in [-tol, 0) are treated as numerical zeros; anything below
    -tol raises NegativeEigenvalueError. The input must be Hermitian; its
    trace is taken at face value (callers normalize states themselves).
    """
    arr = require_square(rho)
    defect = hermiticity_defect(arr)
    if defect > HERMITICITY_TOL:
        raise NotHermitianError(f"hermiticity defect {defect:.3e}")
    vals = np.linalg.eigvalsh((arr + arr.conj().T) / 2.0)
    if vals.size and vals[0] < -tol:
        raise NegativeEigenvalueError(f"eigenvalue {vals[0]:.3e} below -{tol:.1e}")
    vals = np.clip(vals, 0.0, None)
    nz = vals[vals > 0.0]
    if nz.size == 0:
        return 0.0
    return float(-np.sum(nz * np.log2(nz)))


def check_density(rho, dim: int | None = None, tol: float = 1e-9) -> np.ndarray:
    """Validate that rho is a density matrix and return it as complex128.

    Checks squareness, optional dimension, hermiticity, unit trace, and
    positive semidefiniteness (eigenvalues >= -tol).
    """
    arr = require_square(rho)
    if dim is not None and arr.shape[0] != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {arr.shape[0]}")
    defect = hermiticity_defect(arr)
    if defect > HERMITICITY_TOL:
        raise NotHermitianError(f"hermiticity defect {defect:.3e}")
    tr = complex(np.trace(arr))
    if abs(tr - 1.0) > tol:
        raise DomainError(f"trace {tr:.12g} differs from 1")
    low = float(np.linalg.eigvalsh((arr + arr.conj().T) / 2.0)[0])
    if low < -tol:
        raise NegativeEigenvalueError(f"least eigenvalue {low:.3e}")
    return arr


def sample_so3(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Rotation O_3(gamma) O_2(beta) O_1(alpha) in SO(3).

    O_1 rotates in the 12-plane, O_2 in the 13-plane, O_3 in the 23-plane:

        O_1(a) = [[ cos a, sin a, 0], [-sin a, cos a, 0], [0, 0, 1]]
        O_2(b) = [[ cos b, 0, sin b], [0, 1, 0], [-sin b, 0, cos b]]
        O_3(c) = [[1, 0, 0], [0, cos c, sin c], [0, -sin c, cos c]]
    """
    ca, sa = np.cos(alpha), np.sin(alpha)
    cb, sb = np.cos(beta), np.sin(beta)
    cc, sc = np.cos(gamma), np.sin(gamma)
    o1 = np.array([[ca, sa, 0.0], [-sa, ca, 0.0], [0.0, 0.0, 1.0]])
    o2 = np.array([[cb, 0.0, sb], [0.0, 1.0, 0.0], [-sb, 0.0, cb]])
    o3 = np.array([[1.0, 0.0, 0.0], [0.0, cc, sc], [0.0, -sc, cc]])
    return o3 @ o2 @ o1


def sample_su3(seed: int) -> np.ndarray:
    """A pseudorandom special-unitary 3x3 matrix from a fixed seed.

    Draws a Hermitian traceless H with Gaussian entries and returns
    U = exp(iH) through the eigendecomposition of H, so det U = 1 exactly
    up to roundoff.
    """
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    h = (a + a.conj().T) / 2.0
    h -= (np.trace(h) / 3.0) * np.eye(3)
    vals, vecs = hermitian_eig(h)
    return (vecs * np.exp(1j * vals)) @ vecs.conj().T


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Gaussian-entry Hermitian matrix, handy for randomized checks."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2.0


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Full-rank random density matrix G G^dag / Tr(G G^dag)."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real

"""Transpose-map SDP upper bound on quantum capacity, with a built-in solver.

The bound is  Q_Gamma = log2( max Tr(J R) )  over a density matrix rho_A and
a positive semidefinite R obeying the operator interval

    -rho_A tensor I_B  <=  R^{T_B}  <=  rho_A tensor I_B,

where J is the channel's Choi matrix and T_B the partial transpose on the
output factor. R is kept positive semidefinite exactly as published (see
README for the convention note). The companion flag bound is
q_flag(x) = (1 - x) log2(3).

Encoding: every complex Hermitian variable is expanded in a Hermitian
matrix-unit basis with real coefficients, and each PSD constraint is a real
symmetric affine pencil F_0 + sum_k y_k F_k over those coefficients, using
the standard embedding [[Re, -Im], [Im, Re]] (which exactly preserves the
PSD cone). The solver is a dense primal-dual path-following interior-point
method of the scaled-direction (Monteiro-Zhang) family with a Mehrotra
predictor-corrector; problem sizes here stay below one hundred variables
and 18x18 blocks, so dense linear algebra is the robust choice.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla

from . import channels, ls_family, matcore
from .errors import (
    DimensionMismatchError,
    NoSignChangeError,
    NotHermitianError,
    NumericalBreakdownError,
)

LOG2_3 = float(np.log2(3.0))
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BlockMap:
    """Affine map y -> f0 + sum_k y_k coeffs[k] into real symmetric matrices."""

    f0: np.ndarray = field(repr=False)
    coeffs: np.ndarray = field(repr=False)  # shape (m, n, n)

    def __post_init__(self):
        f0 = np.asarray(self.f0, dtype=float)
        coeffs = np.asarray(self.coeffs, dtype=float)
        if f0.ndim != 2 or f0.shape[0] != f0.shape[1]:
            raise DimensionMismatchError(f"block f0 has shape {f0.shape}")
        if coeffs.ndim != 3 or coeffs.shape[1:] != f0.shape:
            raise DimensionMismatchError(
                f"block coeffs shape {coeffs.shape} inconsistent with f0 {f0.shape}"
            )
        if np.max(np.abs(f0 - f0.T)) > SYMMETRY_TOL:
            raise NotHermitianError("block f0 is not symmetric")
        dev = np.max(np.abs(coeffs - np.transpose(coeffs, (0, 2, 1)))) if coeffs.size else 0.0
        if dev > SYMMETRY_TOL:
            raise NotHermitianError(f"block coefficient matrices not symmetric ({dev:.3e})")
        object.__setattr__(self, "f0", f0)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def size(self) -> int:
        return self.f0.shape[0]


@dataclass(frozen=True, eq=False)
class SdpProblem:
    """maximize objective . y  subject to  each block PSD and equalities.

    objective is a real cost vector over the realified coefficient vector y;
    equalities is a tuple of (coefficient vector, value) pairs; blocks is a
    tuple of BlockMap. initial_point, when given, must satisfy the
    equalities and make every block strictly positive definite.
    """

    objective: np.ndarray
    blocks: tuple
    equalities: tuple = ()
    initial_point: np.ndarray | None = None
    decode: object = None
    description: str = ""

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).reshape(-1)
        object.__setattr__(self, "objective", c)
        m = c.size
        for b in self.blocks:
            if b.coeffs.shape[0] != m:
                raise DimensionMismatchError(
                    f"block expects {b.coeffs.shape[0]} variables, objective has {m}"
                )
        eqs = []
        for vec, val in self.equalities:
            v = np.asarray(vec, dtype=float).reshape(-1)
            if v.size != m:
                raise DimensionMismatchError("equality vector length mismatch")
            eqs.append((v, float(val)))
        object.__setattr__(self, "equalities", tuple(eqs))
        if self.initial_point is not None:
            y0 = np.asarray(self.initial_point, dtype=float).reshape(-1)
            if y0.size != m:
                raise DimensionMismatchError("initial point length mismatch")
            object.__setattr__(self, "initial_point", y0)

    @property
    def num_variables(self) -> int:
        return self.objective.size


@dataclass(frozen=True, eq=False)
class SdpSolution:
    """Solver outcome.

    optimal_value is the objective at the returned strictly feasible point;
    certificate_value is the independent upper estimate from the dual side;
    history holds (objective, certificate, gap, residual) per iteration.
    certified means the duality gap is below 1e-6 and the certificate
    residual below 1e-8, the advertised success contract.
    """

    optimal_value: float
    certificate_value: float
    duality_gap: float
    iterations: int
    status: str
    certified: bool
    y: np.ndarray = field(repr=False)
    variables: dict | None = field(repr=False, default=None)
    residual: float = 0.0
    history: tuple = field(repr=False, default=())


def _chol_or_none(mat):
    try:
        return np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        return None


def _max_step(s, ds):
    """Largest t with s + t*ds still PSD, via the Cholesky-whitened pencil."""
    ell = np.linalg.cholesky(s)
    half = sla.solve_triangular(ell, ds, lower=True)
    w = sla.solve_triangular(ell, half.T, lower=True).T
    lam = float(np.linalg.eigvalsh((w + w.T) / 2.0)[0])
    if lam >= -1e-14:
        return np.inf
    return -1.0 / lam


def solve(
    problem: SdpProblem,
    gap_tol: float = 1e-9,
    feas_tol: float = 1e-10,
    max_iterations: int = 100,
) -> SdpSolution:
    """Run the interior-point iteration on an SdpProblem.

    Terminates when the absolute duality gap falls below gap_tol*(1+|obj|)
    and the certificate residual below feas_tol*(1+|c|_inf); both are well
    inside the 1e-6 / 1e-8 success contract. Hitting max_iterations returns
    the best iterate with certified=False rather than raising; genuine
    linear-algebra failure raises NumericalBreakdownError.
    """
    c_full = problem.objective
    m_full = c_full.size

    # Eliminate equality constraints by an affine change of variables
    # y = y_part + N z with N an orthonormal null-space basis.
    if problem.equalities:
        emat = np.stack([vec for vec, _ in problem.equalities])
        evals = np.array([val for _, val in problem.equalities])
        y_part, *_ = np.linalg.lstsq(emat, evals, rcond=None)
        if np.max(np.abs(emat @ y_part - evals)) > 1e-9:
            raise NumericalBreakdownError("equality constraints are inconsistent")
        nmat = sla.null_space(emat)
    else:
        y_part = np.zeros(m_full)
        nmat = np.eye(m_full)
    m = nmat.shape[1]
    offset = float(c_full @ y_part)
    c = nmat.T @ c_full

    f0s = []
    fmats = []
    for b in problem.blocks:
        f0s.append(b.f0 + np.tensordot(y_part, b.coeffs, axes=(0, 0)))
        fmats.append(np.tensordot(nmat, b.coeffs, axes=(0, 0)) if m else np.zeros((0,) + b.f0.shape))

    if m == 0:
        val = offset
        yfull = y_part
        variables = problem.decode(yfull) if callable(problem.decode) else None
        return SdpSolution(val, val, 0.0, 0, "optimal", True, yfull, variables)

    def z_blocks(z_of_y):
        return [f0 + np.tensordot(z_of_y, f, axes=(0, 0)) for f0, f in zip(f0s, fmats)]

    # Strictly feasible start for the variable side.
    if problem.initial_point is not None:
        y = nmat.T @ (problem.initial_point - y_part)
    else:
        y = np.zeros(m)
    zs = z_blocks(y)
    if any(_chol_or_none(z) is None for z in zs):
        raise NumericalBreakdownError("initial point is not strictly feasible")
    xs = [np.eye(b.size) for b in problem.blocks]
    ntot = sum(b.size for b in problem.blocks)
    c_scale = 1.0 + float(np.max(np.abs(c))) if c.size else 1.0

    history = []
    status = "max_iterations"
    iterations = 0
    for it in range(1, max_iterations + 1):
        iterations = it
        zinvs = []
        for z in zs:
            ell = _chol_or_none(z)
            if ell is None:
                raise NumericalBreakdownError("slack block lost positive definiteness")
            inv_half = sla.solve_triangular(ell, np.eye(z.shape[0]), lower=True)
            zi = inv_half.T @ inv_half
            zinvs.append((zi + zi.T) / 2.0)

        gap = float(sum(np.tensordot(x, z, axes=2) for x, z in zip(xs, zs)))
        mu = gap / ntot
        resid = c.copy()
        for f, x in zip(fmats, xs):
            resid += np.einsum("kij,ij->k", f, x)
        res_inf = float(np.max(np.abs(resid))) if resid.size else 0.0
        obj = offset + float(c @ y)
        cert = offset + float(sum(np.tensordot(f0, x, axes=2) for f0, x in zip(f0s, xs)))
        history.append((obj, cert, gap, res_inf))
        if not np.isfinite(gap) or not np.isfinite(obj):
            raise NumericalBreakdownError("iteration produced non-finite values")
        if gap <= gap_tol * (1.0 + abs(obj)) and res_inf <= feas_tol * c_scale:
            status = "optimal"
            break

        # Schur complement B[i, j] = sum_blocks Tr(F_i X F_j Z^{-1}).
        bmat = np.zeros((m, m))
        mids = []
        for f, x, zi in zip(fmats, xs, zinvs):
            t = np.einsum("ab,jbc,cd->jad", x, f, zi, optimize=True)
            mids.append(t)
            bmat += np.einsum("iab,jba->ij", f, t, optimize=True)
        try:
            lu = sla.lu_factor(bmat + 1e-14 * np.eye(m))
        except (ValueError, sla.LinAlgError):
            raise NumericalBreakdownError("Schur complement factorization failed")

        gvec = np.zeros(m)
        for f, zi in zip(fmats, zinvs):
            gvec += np.einsum("kij,ij->k", f, zi)

        # Predictor (affine-scaling direction).
        dy_a = sla.lu_solve(lu, c)
        dz_a = [np.tensordot(dy_a, f, axes=(0, 0)) for f in fmats]
        dx_a = []
        for x, zi, dz in zip(xs, zinvs, dz_a):
            d = -x - x @ dz @ zi
            dx_a.append((d + d.T) / 2.0)
        ap = min(1.0, 0.98 * min(_max_step(x, dx) for x, dx in zip(xs, dx_a)))
        ad = min(1.0, 0.98 * min(_max_step(z, dz) for z, dz in zip(zs, dz_a)))
        gap_aff = float(
            sum(
                np.tensordot(x + ap * dx, z + ad * dz, axes=2)
                for x, dx, z, dz in zip(xs, dx_a, zs, dz_a)
            )
        )
        sigma = float(np.clip((max(gap_aff, 0.0) / gap) ** 3, 1e-10, 0.99))

        # Corrector with second-order term E = dX_a dZ_a.
        evec = np.zeros(m)
        eblocks = []
        for f, dx, dz, zi in zip(fmats, dx_a, dz_a, zinvs):
            eb = dx @ dz @ zi
            eblocks.append(eb)
            evec += np.einsum("kij,ji->k", f, eb)
        dy = sla.lu_solve(lu, c + sigma * mu * gvec - evec)
        dzs = [np.tensordot(dy, f, axes=(0, 0)) for f in fmats]
        dxs = []
        for x, zi, dz, eb in zip(xs, zinvs, dzs, eblocks):
            d = sigma * mu * zi - eb - x - x @ dz @ zi
            dxs.append((d + d.T) / 2.0)
        ap = min(1.0, 0.98 * min(_max_step(x, dx) for x, dx in zip(xs, dxs)))
        ad = min(1.0, 0.98 * min(_max_step(z, dz) for z, dz in zip(zs, dzs)))

        y = y + ad * dy
        zs = z_blocks(y)
        xs = [x + ap * dx for x, dx in zip(xs, dxs)]

    obj, cert, gap, res_inf = history[-1]
    yfull = y_part + nmat @ y
    variables = problem.decode(yfull) if callable(problem.decode) else None
    duality_gap = abs(cert - obj)
    certified = status == "optimal" and duality_gap <= 1e-6 and res_inf <= 1e-8 * c_scale
    return SdpSolution(
        optimal_value=obj,
        certificate_value=cert,
        duality_gap=duality_gap,
        iterations=iterations,
        status=status,
        certified=certified,
        y=yfull,
        variables=variables,
        residual=res_inf,
        history=tuple(history),
    )


def _embed(h) -> np.ndarray:
    """Realify a complex Hermitian matrix: [[Re, -Im], [Im, Re]] (symmetric)."""
    arr = np.asarray(h, dtype=np.complex128)
    return np.block([[arr.real, -arr.imag], [arr.imag, arr.real]])


def build_qgamma(j: channels.ChoiMatrix) -> SdpProblem:
    """Encode the transpose-map bound SDP for a given Choi matrix.

    Variables are the coefficients of rho_A (dim d_A^2) and R (dim (d_A d_B)^2)
    in the Hermitian matrix-unit basis; blocks enforce R >= 0, rho_A >= 0 and
    the two operator-interval constraints; one equality fixes Tr rho_A = 1.
    """
    da, db = j.dim_in, j.dim_out
    dd = da * db
    jmat = j.matrix
    rho_basis = channels.hermitian_basis(da)
    r_basis = channels.hermitian_basis(dd)
    n_rho = len(rho_basis)
    n_r = len(r_basis)
    m = n_rho + n_r

    cvec = np.zeros(m)
    for k, h in enumerate(r_basis):
        val = np.trace(jmat @ h)
        cvec[n_rho + k] = float(val.real)

    eye_b = np.eye(db, dtype=np.complex128)
    rho_lift = [_embed(np.kron(g, eye_b)) for g in rho_basis]
    r_pt = [_embed(matcore.partial_transpose(h, da, db)) for h in r_basis]
    zero_small = np.zeros((2 * da, 2 * da))
    zero_big = np.zeros((2 * dd, 2 * dd))

    r_block = BlockMap(
        zero_big,
        np.stack([np.zeros_like(zero_big)] * n_rho + [_embed(h) for h in r_basis]),
    )
    rho_block = BlockMap(
        zero_small,
        np.stack([_embed(g) for g in rho_basis] + [np.zeros_like(zero_small)] * n_r),
    )
    minus_block = BlockMap(zero_big, np.stack(rho_lift + [-p for p in r_pt]))
    plus_block = BlockMap(zero_big, np.stack(rho_lift + list(r_pt)))

    trace_vec = np.zeros(m)
    for i, g in enumerate(rho_basis):
        trace_vec[i] = float(np.trace(g).real)

    eps = 1e-3
    y0 = np.zeros(m)
    y0[:da] = 1.0 / da  # diagonal units come first in hermitian_basis
    y0[n_rho : n_rho + dd] = eps

    def decode(y):
        rho = sum(y[i] * rho_basis[i] for i in range(n_rho))
        rmat = sum(y[n_rho + k] * r_basis[k] for k in range(n_r))
        return {"rho": rho, "R": rmat}

    return SdpProblem(
        objective=cvec,
        blocks=(r_block, rho_block, minus_block, plus_block),
        equalities=((trace_vec, 1.0),),
        initial_point=y0,
        decode=decode,
        description=f"transpose-map bound, dims ({da}, {db})",
    )


def q_flag(x: float) -> float:
    """Flagged-extension upper bound (1 - x) log2(3), in bits."""
    return (1.0 - ls_family.check_x(x)) * LOG2_3


def q_gamma(x: float) -> float:
    """Transpose-map SDP upper bound in bits for the interpolation family."""
    prob = build_qgamma(channels.choi(ls_family.kraus_for(x)))
    sol = solve(prob)
    val = sol.optimal_value
    if val < 1.0:
        warnings.warn(
            f"pre-log optimum {val:.6g} below 1 at x={x:g}; flooring bound at 0 bits",
            stacklevel=2,
        )
        return 0.0
    return float(np.log2(val))


def bound_crossing(lo: float = 0.5, hi: float = 1.0, tol: float = 1e-3) -> float:
    """Where the SDP bound overtakes the flag bound, by bisection.

    Seeks the sign change of q_gamma(x) - q_flag(x) on (lo, hi); below the
    crossing the SDP bound is the tighter one, above it the flag bound wins.
    """

    def g(x):
        return q_gamma(x) - q_flag(x)

    glo, ghi = g(lo), g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if np.sign(glo) == np.sign(ghi):
        raise NoSignChangeError(f"g({lo}) = {glo:.3e} and g({hi}) = {ghi:.3e}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if np.sign(gm) == np.sign(glo):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def dump_problem(problem: SdpProblem) -> str:
    """Fixed-layout text listing of a problem for external cross-checking.

    Layout (one record per line, floats as %.17g):
        sdp-dump 1
        vars <m>
        description <text>
        objective <index> <value>          (nonzeros only)
        equality <eq#> <index> <value>     (nonzeros only)
        equality-rhs <eq#> <value>
        block <b#> size <n>
        entry <b#> f0 <i> <j> <value>      (nonzeros only, upper triangle)
        entry <b#> <var#> <i> <j> <value>  (nonzeros only, upper triangle)
    """
    lines = ["sdp-dump 1", f"vars {problem.num_variables}"]
    if problem.description:
        lines.append(f"description {problem.description}")
    for k, v in enumerate(problem.objective):
        if v != 0.0:
            lines.append(f"objective {k} {v:.17g}")
    for e, (vec, val) in enumerate(problem.equalities):
        for k, v in enumerate(vec):
            if v != 0.0:
                lines.append(f"equality {e} {k} {v:.17g}")
        lines.append(f"equality-rhs {e} {val:.17g}")
    for bi, b in enumerate(problem.blocks):
        lines.append(f"block {bi} size {b.size}")
        for i in range(b.size):
            for jx in range(i, b.size):
                if b.f0[i, jx] != 0.0:
                    lines.append(f"entry {bi} f0 {i} {jx} {b.f0[i, jx]:.17g}")
        for k in range(b.coeffs.shape[0]):
            mat = b.coeffs[k]
            for i in range(b.size):
                for jx in range(i, b.size):
                    if mat[i, jx] != 0.0:
                        lines.append(f"entry {bi} {k} {i} {jx} {mat[i, jx]:.17g}")
    return "\n".join(lines) + "\n"

"""Capacity quantities of the interpolation family, all in bits.

Closed forms (base-2 logs, 0 log 0 = 0):

* Holevo capacity   chi_star(x) = log2(3) + (x/2) log2(x/2) + (1-x/2) log2(1-x/2)
* Entanglement-assisted capacity
                    c_ea(x) = 2 log2(3) + x log2(x/3) + (1-x) log2(1-x)
* Minimum output entropy = log2(3) - chi_star(x), attained on the pure
  state (i, 1, 0)/sqrt(2) (and its SO(3) orbit).

The coherent information I_c(rho) = S(L_x(rho)) - S(L_x^c(rho)) gives the
one-shot quantum-capacity lower bound q1_lower via multistart maximization
over density matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import channels, ls_family, matcore
from .errors import DomainError, NoSignChangeError, OptimizerDivergedError

LOG2_3 = float(np.log2(3.0))


def _xlog2x(p: float) -> float:
    return 0.0 if p <= 0.0 else p * np.log2(p)


def chi_star(x: float) -> float:
    """Holevo capacity of L_x in bits."""
    xf = ls_family.check_x(x)
    return LOG2_3 + _xlog2x(xf / 2.0) + _xlog2x(1.0 - xf / 2.0)


def min_output_entropy(x: float) -> float:
    """Closed-form minimum output entropy, log2(3) - chi_star(x)."""
    return LOG2_3 - chi_star(x)


def c_ea(x: float) -> float:
    """Entanglement-assisted classical capacity of L_x in bits."""
    xf = ls_family.check_x(x)
    term = 0.0 if xf <= 0.0 else xf * np.log2(xf / 3.0)
    return 2.0 * LOG2_3 + term + _xlog2x(1.0 - xf)


def c_ea_numeric(x: float) -> float:
    """C_ea evaluated entropically at rho = I/3 through the Kraus machinery.

    Independent route from c_ea: S(rho) + S(L_x(rho)) - S(L_x^c(rho)) with
    both channel actions computed from the Kraus operators.
    """
    ch = ls_family.kraus_for(x)
    rho = np.eye(3, dtype=np.complex128) / 3.0
    s_in = matcore.von_neumann_entropy(rho)
    s_out = matcore.von_neumann_entropy(channels.apply(ch, rho))
    s_env = matcore.von_neumann_entropy(channels.apply(channels.complement(ch), rho))
    return s_in + s_out - s_env


def coherent_info(x: float, rho) -> float:
    """I_c(rho) = S(L_x(rho)) - S(L_x^c(rho)) using the closed forms."""
    arr = matcore.require_square(rho)
    s_out = matcore.von_neumann_entropy(ls_family.apply_closed(x, arr))
    s_env = matcore.von_neumann_entropy(ls_family.complement_closed(x, arr))
    return s_out - s_env


def ic_ansatz(x: float, s: float) -> float:
    """Coherent information on the symmetric diagonal family diag(s, 1-2s, s)."""
    sf = float(s)
    if sf < 0.0 or sf > 0.5:
        raise DomainError(f"s must lie in [0, 1/2], got {s!r}")
    rho = np.diag([sf, 1.0 - 2.0 * sf, sf]).astype(np.complex128)
    return coherent_info(x, rho)


@dataclass(frozen=True)
class OptimizerResult:
    """Outcome of a multistart maximization over input states."""

    x: float
    best_value: float
    best_state: np.ndarray = field(repr=False)
    starts: int
    evaluations: int
    seed: int


def _state_from_params(params: np.ndarray) -> np.ndarray:
    """Density matrix A A^dag / Tr from 18 real parameters."""
    a = params[:9].reshape(3, 3) + 1j * params[9:].reshape(3, 3)
    g = a @ a.conj().T
    tr = float(np.trace(g).real)
    if tr < 1e-12:
        return np.eye(3, dtype=np.complex128) / 3.0
    return g / tr


def q1_lower(x: float, starts: int = 50, seed: int = 42) -> OptimizerResult:
    """Single-letter quantum-capacity lower bound max_rho I_c(rho).

    Multistart derivative-free simplex descent over a full-rank
    parametrization rho = A A^dag / Tr(A A^dag), with per-start seeds
    derived deterministically from (seed, start index) so results do not
    depend on evaluation order. The maximally mixed state and the three
    computational basis states are always evaluated as exact candidates;
    the basis states have I_c = 0 identically across the family, so the
    returned value is never negative.
    """
    xf = ls_family.check_x(x)
    seed_words = [int(s) for s in np.atleast_1d(seed)]

    def objective(params):
        return -coherent_info(xf, _state_from_params(params))

    candidates = []
    evaluations = 0
    fixed = [np.eye(3, dtype=np.complex128) / 3.0]
    for k in range(3):
        e = np.zeros((3, 3), dtype=np.complex128)
        e[k, k] = 1.0
        fixed.append(e)
    for rho in fixed:
        candidates.append((coherent_info(xf, rho), rho))
        evaluations += 1

    for k in range(int(starts)):
        rng = np.random.default_rng(seed_words + [k])
        p0 = rng.normal(size=18)
        res = optimize.minimize(
            objective,
            p0,
            method="Nelder-Mead",
            options={"fatol": 1e-10, "xatol": 1e-9, "maxfev": 20000},
        )
        evaluations += int(res.nfev)
        if not np.isfinite(res.fun):
            raise OptimizerDivergedError(f"non-finite objective at start {k}")
        rho = _state_from_params(res.x)
        candidates.append((coherent_info(xf, rho), rho))

    best_value, best_state = max(candidates, key=lambda c: c[0])
    return OptimizerResult(
        x=xf,
        best_value=float(best_value),
        best_state=best_state,
        starts=int(starts),
        evaluations=evaluations,
        seed=seed_words[0] if len(seed_words) == 1 else tuple(seed_words),
    )


def _pure_from_angles(angles: np.ndarray) -> np.ndarray:
    t1, t2, p1, p2 = angles
    return np.array(
        [
            np.cos(t1),
            np.sin(t1) * np.cos(t2) * np.exp(1j * p1),
            np.sin(t1) * np.sin(t2) * np.exp(1j * p2),
        ],
        dtype=np.complex128,
    )


def min_output_entropy_numeric(x: float, starts: int = 16, seed: int = 1234):
    """Minimum output entropy by multistart search over pure states.

    Returns (entropy_bits, minimizing_state_vector). The known minimizer
    (i, 1, 0)/sqrt(2) is always evaluated as an exact candidate alongside
    the random starts.
    """
    xf = ls_family.check_x(x)

    def entropy_of(psi):
        rho = np.outer(psi, psi.conj())
        return matcore.von_neumann_entropy(ls_family.apply_closed(xf, rho))

    def objective(angles):
        return entropy_of(_pure_from_angles(angles))

    known = np.array([1j, 1.0, 0.0], dtype=np.complex128) / np.sqrt(2.0)
    candidates = [(entropy_of(known), known)]
    for k in range(int(starts)):
        rng = np.random.default_rng([int(seed), k])
        a0 = rng.uniform(0.0, np.pi, size=4)
        res = optimize.minimize(
            objective,
            a0,
            method="Nelder-Mead",
            options={"fatol": 1e-12, "xatol": 1e-10, "maxfev": 20000},
        )
        psi = _pure_from_angles(res.x)
        psi = psi / np.linalg.norm(psi)
        candidates.append((entropy_of(psi), psi))
    best = min(candidates, key=lambda c: c[0])
    return float(best[0]), best[1]


def ic_zero_crossing(tol: float = 1e-9) -> float:
    """Parameter where I_c at the maximally mixed state changes sign.

    I_c(x, I/3) is positive at small x, negative approaching x = 1, and is
    exactly zero AT x = 1, so bisection runs on the interior bracket
    (1e-6, 1 - 1e-6).
    """
    mixed = np.eye(3, dtype=np.complex128) / 3.0

    def f(x):
        return coherent_info(x, mixed)

    lo, hi = 1e-6, 1.0 - 1e-6
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise NoSignChangeError(f"f({lo}) = {flo:.3e} and f({hi}) = {fhi:.3e}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class CapacityPoint:
    """All per-x quantities the sweep emits; None marks an unrequested one."""

    x: float
    chi_star: float | None = None
    c_ea: float | None = None
    q1_lower: float | None = None
    q_sdp: float | None = None
    q_flag: float | None = None

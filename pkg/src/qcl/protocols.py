"""Dense-coding protocols through the x = 1 channel.

Both protocols share a maximally entangled qutrit pair; Alice encodes a
message on her share with Weyl operators, her share passes through the
Landau-Streater channel, and Bob measures both qutrits. Each achieves
mutual information log2(3) - 1 ~ 0.585 bits, strictly positive despite the
channel's zero unassisted quantum capacity, and short of the
entanglement-assisted capacity c_ea(1) = log2(3) by exactly one bit.

Conventions: omega = exp(2 pi i / 3), X|j> = |j+1 mod 3>, Z|j> = omega^j |j>,
|Phi> = 3^{-1/2} sum_j |jj>, Alice's qutrit first. The phase-protocol
measurement projects onto correlated pairs in the conjugate (Fourier)
basis |f_l> = 3^{-1/2} sum_m omega^{lm} |m>; reading the same pair pattern
in the computational basis is insensitive to phase encodings and would
yield zero mutual information, so the conjugate basis is the operative one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ls_family
from .errors import ClosedFormMismatchError, DomainError, NotADistributionError

OMEGA = np.exp(2j * np.pi / 3.0)
LOG2_3 = float(np.log2(3.0))


@dataclass(frozen=True)
class ProtocolResult:
    """Joint distribution P(message, outcome) and its mutual information."""

    protocol_name: str
    joint_distribution: np.ndarray = field(repr=False)
    mutual_information: float


def _shift() -> np.ndarray:
    x = np.zeros((3, 3), dtype=np.complex128)
    for j in range(3):
        x[(j + 1) % 3, j] = 1.0
    return x


def _clock() -> np.ndarray:
    return np.diag([1.0, OMEGA, OMEGA**2]).astype(np.complex128)


def _max_entangled() -> np.ndarray:
    phi = np.zeros(9, dtype=np.complex128)
    for j in range(3):
        phi[j * 3 + j] = 1.0
    return phi / np.sqrt(3.0)


def _fourier_state(l: int) -> np.ndarray:
    return np.array([OMEGA ** (l * m) for m in range(3)], dtype=np.complex128) / np.sqrt(3.0)


def _send_through_x1(state_vec: np.ndarray) -> np.ndarray:
    """(L_1 tensor id) applied to a two-qutrit pure state, via Kraus."""
    proj = np.outer(state_vec, state_vec.conj())
    out = np.zeros((9, 9), dtype=np.complex128)
    for k in ls_family.kraus_for(1.0).kraus:
        big = np.kron(np.asarray(k), np.eye(3))
        out += big @ proj @ big.conj().T
    return out


def mutual_information(joint) -> float:
    """Shannon mutual information of a joint probability table, in bits."""
    p = np.asarray(joint, dtype=float)
    if p.ndim != 2:
        raise NotADistributionError(f"expected a 2-d table, got shape {p.shape}")
    if p.size and float(p.min()) < -1e-12:
        raise NotADistributionError(f"negative probability {p.min():.3e}")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-9:
        raise NotADistributionError(f"total probability {total:.12g} != 1")
    p = np.clip(p, 0.0, None)

    def entropy(q):
        nz = q[q > 0.0]
        return float(-np.sum(nz * np.log2(nz)))

    return entropy(p.sum(axis=1)) + entropy(p.sum(axis=0)) - entropy(p.reshape(-1))


def phase_protocol() -> ProtocolResult:
    """Trit encoding by powers of the clock operator Z.

    Builds rho_n = (L_1 tensor id)(Z^n tensor I |Phi><Phi| ...) both through
    the Kraus operators and through the closed form
    (1/6)(I - sum_{jk} omega^{(j-k)n} |k,j><j,k|), raising
    ClosedFormMismatchError beyond 1e-12. The measurement is the complete
    projective POVM E_p = sum_l |f_l, f_{l+p}><f_l, f_{l+p}| on correlated
    Fourier-basis pairs; the outcome table is P(p|n) = (1/2)(1 - delta_{p,n}).
    """
    z = _clock()
    phi = _max_entangled()
    basis = [_fourier_state(l) for l in range(3)]
    povm = []
    for p in range(3):
        e = np.zeros((9, 9), dtype=np.complex128)
        for l in range(3):
            pair = np.kron(basis[l], basis[(l + p) % 3])
            e += np.outer(pair, pair.conj())
        povm.append(e)
    completeness = np.max(np.abs(sum(povm) - np.eye(9)))
    if completeness > 1e-12:
        raise ClosedFormMismatchError(f"POVM completeness defect {completeness:.3e}")

    joint = np.zeros((3, 3))
    for n in range(3):
        zn = np.linalg.matrix_power(z, n)
        rho = _send_through_x1(np.kron(zn, np.eye(3)) @ phi)
        closed = np.eye(9, dtype=np.complex128)
        for j in range(3):
            for k in range(3):
                closed[k * 3 + j, j * 3 + k] -= OMEGA ** ((j - k) * n)
        closed /= 6.0
        dev = float(np.max(np.abs(rho - closed)))
        if dev > 1e-12:
            raise ClosedFormMismatchError(f"phase state n={n} mismatch {dev:.3e}")
        for p in range(3):
            joint[n, p] = float(np.trace(povm[p] @ rho).real) / 3.0
    return ProtocolResult("phase", np.clip(joint, 0.0, None), mutual_information(joint))


def bell_protocol() -> ProtocolResult:
    """Two-trit encoding by Weyl operators Z^n X^m, measured in the Bell basis.

    Bell states are |Phi_{m,n}> = 3^{-1/2} sum_j omega^{jn} |j, j-m mod 3>;
    messages (m, n) are uniform and outcomes are the nine Bell projectors.
    The outcome table is P((p,q)|(m,n)) = (1/6)(1 - delta_{p,m}): the clock
    part n is completely erased while the shift part survives as "anything
    but m".
    """
    xop = _shift()
    z = _clock()
    phi = _max_entangled()
    bell = {}
    for mm in range(3):
        for nn in range(3):
            w = np.linalg.matrix_power(z, nn) @ np.linalg.matrix_power(xop, mm)
            bell[(mm, nn)] = np.kron(w, np.eye(3)) @ phi
    projectors = {key: np.outer(v, v.conj()) for key, v in bell.items()}
    completeness = np.max(np.abs(sum(projectors.values()) - np.eye(9)))
    if completeness > 1e-12:
        raise ClosedFormMismatchError(f"Bell completeness defect {completeness:.3e}")

    joint = np.zeros((9, 9))
    for mm in range(3):
        for nn in range(3):
            rho = _send_through_x1(bell[(mm, nn)])
            closed = np.eye(9, dtype=np.complex128)
            for j in range(3):
                for k in range(3):
                    closed[((k + mm) % 3) * 3 + j, ((j + mm) % 3) * 3 + k] -= OMEGA ** (
                        (j - k) * nn
                    )
            closed /= 6.0
            dev = float(np.max(np.abs(rho - closed)))
            if dev > 1e-12:
                raise ClosedFormMismatchError(f"Bell state ({mm},{nn}) mismatch {dev:.3e}")
            for p in range(3):
                for q in range(3):
                    prob = float(np.trace(projectors[(p, q)] @ rho).real) / 9.0
                    joint[mm * 3 + nn, p * 3 + q] = prob
    return ProtocolResult("bell", np.clip(joint, 0.0, None), mutual_information(joint))


def protocol_by_name(name: str) -> ProtocolResult:
    if name == "phase":
        return phase_protocol()
    if name == "bell":
        return bell_protocol()
    raise DomainError(f"unknown protocol {name!r} (choose phase or bell)")

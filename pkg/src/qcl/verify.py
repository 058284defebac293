"""Self-check battery behind the command line's verify subcommand.

Every check is run in isolation and reduced to a CheckResult, so a broken
channel implementation produces a named failure instead of a traceback.
The quick level sticks to closed forms and structural identities and runs
in a few seconds; the full level adds the entropy optimizer, the SDP grid,
and the two bisection searches.

The channel_factory hook exists so a deliberately corrupted family (for
instance mis-normalised Kraus operators) can be pushed through the same
battery; anything shaped like KrausChannel is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import capacities, channels, ls_family, matcore, protocols, sdpbound

GRID_11 = [k / 10.0 for k in range(11)]
GRID_21 = [k / 20.0 for k in range(21)]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check_cpt(factory) -> str:
    worst = 0.0
    for x in GRID_11:
        worst = max(worst, channels.trace_preservation_defect(factory(x)))
    if worst > 1e-10:
        raise AssertionError(f"Kraus normalisation defect {worst:.3e} (must be <= 1e-10)")
    return f"max trace-preservation defect {worst:.3e}"


def _check_endpoints(factory) -> str:
    log3 = capacities.LOG2_3
    devs = [
        abs(capacities.chi_star(0.0) - log3),
        abs(capacities.c_ea(0.0) - 2.0 * log3),
        abs(capacities.chi_star(1.0) - (log3 - 1.0)),
        abs(capacities.c_ea(1.0) - log3),
    ]
    worst = max(devs)
    if worst > 1e-12:
        raise AssertionError(f"endpoint capacity deviation {worst:.3e}")
    return f"four endpoint values within {worst:.3e}"


def _check_action(factory) -> str:
    rng = np.random.default_rng(11)
    worst = 0.0
    for x in GRID_11:
        ch = factory(x)
        for _ in range(5):
            rho = matcore.random_density(3, rng)
            dev = np.max(np.abs(channels.apply(ch, rho) - ls_family.apply_closed(x, rho)))
            worst = max(worst, float(dev))
    if worst > 1e-12:
        raise AssertionError(f"Kraus action deviates from closed map by {worst:.3e}")
    return f"Kraus vs closed action within {worst:.3e}"


def _check_complement(factory) -> str:
    rng = np.random.default_rng(12)
    worst = 0.0
    for x in GRID_11:
        comp = channels.complement(factory(x))
        for _ in range(5):
            rho = matcore.random_density(3, rng)
            dev = np.max(
                np.abs(channels.apply(comp, rho) - ls_family.complement_closed(x, rho))
            )
            worst = max(worst, float(dev))
    if worst > 1e-12:
        raise AssertionError(f"complement closed form deviates by {worst:.3e}")
    return f"complement closed form within {worst:.3e}"


def _check_self_complementary(factory) -> str:
    report = ls_family.endpoint_checks(seed=13, trials=10, tol=1e-12)
    dev = max(report.max_dev_identity_end, report.max_dev_self_complementary)
    return f"endpoint structure within {dev:.3e}"


def _check_spectrum(factory) -> str:
    worst = 0.0
    for x in GRID_21:
        rep = ls_family.spectrum(x)
        closed = np.sort(
            np.concatenate([[lam] * mult for lam, mult in rep.families])
        )
        ev = np.linalg.eigvals(channels.transfer_matrix(factory(x)))
        if np.max(np.abs(ev.imag)) > 1e-9:
            raise AssertionError(f"complex transfer eigenvalue at x={x:g}")
        worst = max(worst, float(np.max(np.abs(np.sort(ev.real) - closed))))
        det = float(np.prod(ev.real))
        worst = max(worst, abs(det - rep.determinant))
        if rep.markovian_obstruction != (x > 2.0 / 3.0):
            raise AssertionError(f"obstruction flag wrong at x={x:g}")
    if worst > 1e-9:
        raise AssertionError(f"spectrum deviates from closed form by {worst:.3e}")
    return f"eigenvalue families and determinant within {worst:.3e}"


def _check_covariance(factory) -> str:
    rng = np.random.default_rng(14)
    worst = 0.0
    for x in (0.0, 0.3, 0.7, 1.0):
        ch = factory(x)
        for _ in range(5):
            theta = float(rng.uniform(0.0, 2.0 * np.pi))
            axis = rng.normal(size=3)
            u = ls_family.spin1_rotation(theta, axis)
            worst = max(worst, channels.covariance_defect(ch, u, u))
    if worst > 1e-10:
        raise AssertionError(f"rotation covariance defect {worst:.3e}")
    return f"rotation covariance defect {worst:.3e}"


def _check_protocols(factory) -> str:
    target = capacities.LOG2_3 - 1.0
    devs = []
    for result in (protocols.phase_protocol(), protocols.bell_protocol()):
        devs.append(abs(result.mutual_information - target))
    worst = max(devs)
    if worst > 1e-9:
        raise AssertionError(f"protocol mutual information off by {worst:.3e}")
    return f"both protocols reach log2(3) - 1 within {worst:.3e}"


def _check_cea_numeric(factory) -> str:
    worst = 0.0
    for x in GRID_21:
        worst = max(worst, abs(capacities.c_ea_numeric(x) - capacities.c_ea(x)))
    if worst > 1e-9:
        raise AssertionError(f"entropic c_ea route deviates by {worst:.3e}")
    return f"entropic route within {worst:.3e}"


def _check_minent_optimizer(factory) -> str:
    worst = 0.0
    for x in (0.0, 0.25, 0.5, 0.75, 1.0):
        found, _ = capacities.min_output_entropy_numeric(x, starts=8, seed=21)
        worst = max(worst, abs(found - capacities.min_output_entropy(x)))
    if worst > 1e-6:
        raise AssertionError(f"entropy optimizer off closed form by {worst:.3e}")
    return f"optimizer matches closed minimum within {worst:.3e}"


def _check_ic_crossing(factory) -> str:
    root = capacities.ic_zero_crossing(tol=1e-9)
    if not 0.37 < root < 0.39:
        raise AssertionError(f"coherent-information zero at {root:.9f}, outside (0.37, 0.39)")
    return f"zero crossing at {root:.9f}"


def _check_qgamma_identity(factory) -> str:
    prob = sdpbound.build_qgamma(channels.choi(factory(0.0)))
    sol = sdpbound.solve(prob)
    dev = abs(np.log2(sol.optimal_value) - capacities.LOG2_3)
    if not sol.certified:
        raise AssertionError(f"identity-channel solve not certified (gap {sol.duality_gap:.3e})")
    if dev > 1e-4:
        raise AssertionError(f"identity-channel bound off log2(3) by {dev:.3e}")
    return f"certified, off log2(3) by {dev:.3e}, gap {sol.duality_gap:.3e}"


def _check_bound_crossing(factory) -> str:
    root = sdpbound.bound_crossing()
    if not 0.70 < root < 0.80:
        raise AssertionError(f"bound crossing at {root:.6f}, outside (0.70, 0.80)")
    return f"bounds cross at {root:.6f}"


def _check_sandwich(factory) -> str:
    worst = -np.inf
    for x in (0.0, 0.2, 0.4, 0.6, 0.8, 1.0):
        lower = capacities.q1_lower(x, starts=4, seed=31).best_value
        upper = min(sdpbound.q_gamma(x), sdpbound.q_flag(x))
        worst = max(worst, lower - upper)
    if worst > 1e-5:
        raise AssertionError(f"lower bound exceeds upper bound by {worst:.3e}")
    return f"max lower-minus-upper {worst:.3e}"


QUICK_CHECKS = [
    ("cpt-trace-preservation", _check_cpt),
    ("endpoint-capacities", _check_endpoints),
    ("closed-form-action", _check_action),
    ("complement-closed-form", _check_complement),
    ("endpoint-structure", _check_self_complementary),
    ("transfer-spectrum", _check_spectrum),
    ("rotation-covariance", _check_covariance),
    ("dense-coding-protocols", _check_protocols),
    ("entanglement-assisted-route", _check_cea_numeric),
]

FULL_CHECKS = [
    ("min-entropy-optimizer", _check_minent_optimizer),
    ("coherent-info-crossing", _check_ic_crossing),
    ("sdp-identity-channel", _check_qgamma_identity),
    ("bound-crossing-window", _check_bound_crossing),
    ("bound-sandwich", _check_sandwich),
]


def run_checks(
    level: str = "quick",
    channel_factory: Optional[Callable] = None,
) -> list:
    """Run the named battery; returns a CheckResult per check, never raises."""
    if level not in ("quick", "full"):
        from .errors import DomainError

        raise DomainError(f"unknown level {level!r} (choose quick or full)")
    factory = channel_factory if channel_factory is not None else ls_family.kraus_for
    battery = list(QUICK_CHECKS)
    if level == "full":
        battery += FULL_CHECKS
    results = []
    for name, func in battery:
        try:
            detail = func(factory)
            results.append(CheckResult(name, True, detail))
        except Exception as exc:  # noqa: BLE001 - each check reports, not raises
            results.append(CheckResult(name, False, f"{type(exc).__name__}: {exc}"))
    return results

"""Render sweep records to PNG figures.

Works from the same records the sweep subcommand writes: a sequence of
mappings with an "x" key and whichever quantity columns were computed.
Rendering is headless (Agg backend) so it behaves inside batch jobs.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import DomainError


def _column(records, key):
    try:
        return np.array([float(rec[key]) for rec in records])
    except KeyError:
        raise DomainError(f"records lack the {key!r} column needed for this figure") from None


def render_capacities(records, path) -> str:
    """Holevo and entanglement-assisted capacity curves against x."""
    x = _column(records, "x")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(x, _column(records, "chi_star"), color="tab:blue", label="chi* (Holevo)")
    ax.plot(x, _column(records, "c_ea"), color="tab:red", label="C_ea")
    log3 = np.log2(3.0)
    for level in (2.0 * log3, log3, log3 - 1.0):
        ax.axhline(level, color="0.8", lw=0.6, zorder=0)
    ax.set_xlabel("x")
    ax.set_ylabel("bits")
    ax.set_title("Classical capacities along the family")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def render_bounds(records, path) -> str:
    """Quantum-capacity sandwich: hashed band between lower and upper bounds."""
    x = _column(records, "x")
    lower = _column(records, "q1_lower")
    sdp = _column(records, "q_sdp")
    flag = _column(records, "q_flag")
    upper = np.minimum(sdp, flag)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(x, sdp, color="tab:orange", ls="--", label="Q_Gamma (SDP)")
    ax.plot(x, flag, color="tab:green", ls=":", label="(1-x) log2 3 (flag)")
    ax.plot(x, lower, color="tab:blue", label="Q_1 lower (maximized I_c)")
    ax.fill_between(
        x,
        lower,
        np.maximum(lower, upper),
        facecolor="none",
        edgecolor="0.5",
        hatch="///",
        lw=0.0,
        label="Q lives here",
    )
    ax.set_xlabel("x")
    ax.set_ylabel("bits")
    ax.set_ylim(bottom=-0.05)
    ax.set_title("Quantum capacity bounds along the family")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def render_all(records, prefix) -> list:
    """Write <prefix>_capacities.png and <prefix>_bounds.png; returns paths."""
    paths = [render_capacities(records, f"{prefix}_capacities.png")]
    keys = set(records[0]) if records else set()
    if {"q1_lower", "q_sdp", "q_flag"} <= keys:
        paths.append(render_bounds(records, f"{prefix}_bounds.png"))
    return paths

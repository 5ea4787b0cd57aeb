"""The k+1 variable generalization: each velocity is the product of the others.

d omega_i / dt = prod_{j != i} omega_j.  All squares share one time
derivative, so the pairwise differences omega_i^2 - omega_j^2 are conserved.
The associated quadrature is hyperelliptic of genus k - 1.  Only the flow,
these integrals and the genus count are in scope; no reduced solver exists
for general k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dynamics import Trajectory
from .errors import InvalidParameterError
from .integrate import adaptive_rk
from .invariants import DriftReport, _series_drift


@dataclass(frozen=True)
class ZkSystem:
    """k + 1 coupled variables, k >= 2."""

    k: int

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 2:
            raise InvalidParameterError(f"k must be an integer >= 2, got {self.k!r}")

    @property
    def dim(self) -> int:
        return self.k + 1

    def check_state(self, x: Sequence[float]) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise InvalidParameterError(f"state must have length {self.dim}, got shape {x.shape}")
        return x


def zk_rhs(system: ZkSystem, omega: Sequence[float]) -> np.ndarray:
    """Component i is the product of all other components."""
    w = system.check_state(omega)
    out = np.empty_like(w)
    for i in range(system.dim):
        out[i] = np.prod(np.delete(w, i))
    return out


def zk_invariants(system: ZkSystem, omega: Sequence[float]) -> np.ndarray:
    """Adjacent differences of squares, omega_i^2 - omega_{i+1}^2, i = 1..k."""
    w = system.check_state(omega)
    sq = w * w
    return sq[:-1] - sq[1:]


def zk_genus(k: int) -> int:
    """Genus of the hyperelliptic quadrature: k - 1."""
    if not isinstance(k, int) or k < 2:
        raise InvalidParameterError(f"k must be an integer >= 2, got {k!r}")
    return k - 1


def zk_guarded_horizon(system: ZkSystem, omega0: Sequence[float], budget: float = 0.4) -> float:
    """Pole-free default horizon: the uniform majorant u' = u^k has its pole
    at 1 / (k - 1) / max^(k-1)."""
    w = system.check_state(omega0)
    peak = float(np.max(np.abs(w)))
    if peak == 0.0:
        return budget
    return budget / ((system.k - 1) * peak ** (system.k - 1))


def integrate_zk(
    system: ZkSystem,
    omega0: Sequence[float],
    t_end: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
    *,
    sample_interval: Optional[float] = None,
    blow_up_threshold: float = 1e9,
) -> Trajectory:
    omega0 = system.check_state(omega0)
    times, states, termination = adaptive_rk(
        lambda t, x: zk_rhs(system, x),
        omega0,
        t_end,
        rel_tol,
        abs_tol,
        sample_interval=sample_interval,
        blow_up_threshold=blow_up_threshold,
    )
    return Trajectory(kind="zk", times=times, states=states, termination=termination)


def zk_drift_report(system: ZkSystem, trajectory: Trajectory) -> DriftReport:
    """Drift of the pairwise square-difference integrals along a trajectory."""
    if trajectory.states.shape[1] != system.dim:
        raise InvalidParameterError("trajectory dimension does not match the system")
    sq = trajectory.states**2
    series = sq[:, :-1] - sq[:, 1:]
    entries = tuple(
        _series_drift(f"D_{i + 1}_{i + 2}", trajectory.times, series[:, i])
        for i in range(system.k)
    )
    return DriftReport(entries=entries, skipped_samples=0)

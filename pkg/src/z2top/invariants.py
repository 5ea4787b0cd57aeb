"""First integrals of the top flow and drift measurement along trajectories.

With T the (2^(n-1) - 1)-th root of the product of the a's, the quantities
N_ij = T (a_i - a_j) / (a_i a_j) are conserved, antisymmetric, and satisfy
N_ij = N_1j - N_1i, so the N_1j form a basis of 2^n - 2 independent
integrals.  The products of the N's over the lines through a point collapse
to the polynomial integrals gamma_i = a_i * prod (a_j - a_k), which stay
defined outside the positive orthant where T does not.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dynamics import TopSystem, Trajectory
from .errors import BranchError, InvalidParameterError

#: Initial values smaller than this are tracked by absolute drift.
ABS_DRIFT_FLOOR = 1e-12


def _positive_a(system: TopSystem, a: Sequence[float]) -> np.ndarray:
    a = system.check_state(a)
    if np.any(a <= 0.0):
        raise BranchError("all a entries must be positive for the real root branch")
    return a


def big_T(system: TopSystem, a: Sequence[float]) -> float:
    """(prod a_k)^(1 / (2^(n-1) - 1)), real branch; requires a > 0."""
    a = _positive_a(system, a)
    return float(np.prod(a) ** (1.0 / (2 ** (system.n - 1) - 1)))


def n_matrix(system: TopSystem, a: Sequence[float]) -> np.ndarray:
    """Antisymmetric matrix N_ij = T (a_i - a_j) / (a_i a_j); requires a > 0."""
    a = _positive_a(system, a)
    t = np.prod(a) ** (1.0 / (2 ** (system.n - 1) - 1))
    return t * (a[:, None] - a[None, :]) / (a[:, None] * a[None, :])


def gamma(system: TopSystem, a: Sequence[float]) -> np.ndarray:
    """Polynomial integrals gamma_i = a_i * prod over lines {i,j,k} of (a_j - a_k).

    Pairs are ordered j < k by canonical index, which fixes the overall sign.
    """
    a = system.check_state(a)
    diffs = a[system.pair_idx[:, :, 0]] - a[system.pair_idx[:, :, 1]]
    return a * diffs.prod(axis=1)


def n_first_row(system: TopSystem, a: Sequence[float]) -> np.ndarray:
    """The basis integrals N_1j for j = 2..d."""
    a = _positive_a(system, a)
    t = np.prod(a) ** (1.0 / (2 ** (system.n - 1) - 1))
    return t * (a[0] - a[1:]) / (a[0] * a[1:])


@dataclass(frozen=True)
class InvariantSet:
    """T, the antisymmetric matrix N and the polynomials gamma at one state."""

    T: float
    N: np.ndarray
    gamma: np.ndarray


def invariant_set(system: TopSystem, a: Sequence[float]) -> InvariantSet:
    """Evaluate every conserved quantity at a positive state."""
    return InvariantSet(
        T=big_T(system, a), N=n_matrix(system, a), gamma=gamma(system, a)
    )


@dataclass(frozen=True)
class DriftEntry:
    name: str
    initial: float
    max_drift: float
    t_at_max: float
    mode: str  # "relative" | "absolute"


@dataclass(frozen=True)
class DriftReport:
    entries: tuple[DriftEntry, ...]
    skipped_samples: int  # samples where positivity failed for the N row

    @property
    def max_drift(self) -> float:
        return max((e.max_drift for e in self.entries), default=0.0)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "skipped_samples": self.skipped_samples,
            "max_drift": self.max_drift,
            "invariants": [
                {
                    "name": e.name,
                    "initial": e.initial,
                    "max_drift": e.max_drift,
                    "t_at_max": e.t_at_max,
                    "mode": e.mode,
                }
                for e in self.entries
            ],
        }

    def table(self) -> str:
        lines = [f"{'invariant':<12} {'initial':>24} {'max drift':>13} {'t(max)':>10}"]
        for e in self.entries:
            lines.append(
                f"{e.name:<12} {e.initial:>24.16e} {e.max_drift:>13.3e} {e.t_at_max:>10.6f}"
            )
        return "\n".join(lines)


def _series_drift(name: str, times: np.ndarray, values: np.ndarray) -> DriftEntry:
    v0 = values[0]
    if abs(v0) < ABS_DRIFT_FLOOR:
        drift = np.abs(values - v0)
        mode = "absolute"
    else:
        drift = np.abs(values - v0) / abs(v0)
        mode = "relative"
    i = int(np.argmax(drift))
    return DriftEntry(
        name=name,
        initial=float(v0),
        max_drift=float(drift[i]),
        t_at_max=float(times[i]),
        mode=mode,
    )


def drift_report(system: TopSystem, trajectory: Trajectory) -> DriftReport:
    """Max drift of the N_1j and gamma_i along a trajectory, against t = 0.

    Accepts omega- or a-coordinate trajectories.  Samples where positivity
    fails are skipped for the N_1j series (counted, not fatal); the gamma_i
    are polynomial and always evaluated.
    """
    if trajectory.states.shape[1] != system.d:
        raise InvalidParameterError("trajectory dimension does not match the system")
    if trajectory.kind == "a":
        a_samples = trajectory.states
    elif trajectory.kind == "omega":
        a_samples = trajectory.states @ system.a_matrix.T
    else:
        raise InvalidParameterError(f"unsupported trajectory kind {trajectory.kind!r}")

    times = trajectory.times
    d = system.d
    entries: list[DriftEntry] = []

    diffs = a_samples[:, system.pair_idx[:, :, 0]] - a_samples[:, system.pair_idx[:, :, 1]]
    gammas = a_samples * diffs.prod(axis=2)
    for i in range(d):
        entries.append(_series_drift(f"gamma_{i + 1}", times, gammas[:, i]))

    positive = np.all(a_samples > 0.0, axis=1)
    skipped = int(len(times) - positive.sum())
    if positive[0]:
        ap = a_samples[positive]
        tp = times[positive]
        t_vals = np.prod(ap, axis=1) ** (1.0 / (2 ** (system.n - 1) - 1))
        n_rows = t_vals[:, None] * (ap[:, :1] - ap[:, 1:]) / (ap[:, :1] * ap[:, 1:])
        for j in range(d - 1):
            entries.append(_series_drift(f"N_1_{j + 2}", tp, n_rows[:, j]))
    return DriftReport(entries=tuple(entries), skipped_samples=skipped)


def independent_count(
    system: TopSystem,
    a: Sequence[float],
    step: float = 1e-6,
    sv_cutoff: float = 1e-8,
) -> int:
    """Numerical rank of the Jacobian of {N_1j} at a, by central differences.

    Singular values below sv_cutoff * sigma_max count as zero.
    """
    a = _positive_a(system, a)
    d = system.d
    jac = np.empty((d - 1, d))
    for col in range(d):
        h = step * max(1.0, abs(a[col]))
        ap, am = a.copy(), a.copy()
        ap[col] += h
        am[col] -= h
        jac[:, col] = (n_first_row(system, ap) - n_first_row(system, am)) / (2 * h)
    sv = np.linalg.svd(jac, compute_uv=False)
    return int(np.sum(sv > sv_cutoff * sv[0]))


def gamma_jacobian_rank(
    system: TopSystem,
    a: Sequence[float],
    step: float = 1e-6,
    sv_cutoff: float = 1e-8,
) -> int:
    """Numerical rank of the Jacobian of the gamma_i (detects the one relation)."""
    a = system.check_state(a)
    d = system.d
    jac = np.empty((d, d))
    for col in range(d):
        h = step * max(1.0, abs(a[col]))
        ap, am = a.copy(), a.copy()
        ap[col] += h
        am[col] -= h
        jac[:, col] = (gamma(system, ap) - gamma(system, am)) / (2 * h)
    sv = np.linalg.svd(jac, compute_uv=False)
    return int(np.sum(sv > sv_cutoff * sv[0]))

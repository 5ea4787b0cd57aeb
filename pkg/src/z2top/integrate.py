"""Adaptive embedded Runge-Kutta integration with PI step control.

Dormand-Prince 5(4) pair (the ode45 tableau) with the stabilized PI
controller of Hairer's DOPRI5 and the matching quartic dense-output
interpolant, so output samples land on an exact fixed grid while steps stay
purely tolerance-controlled.  The flows integrated here blow up in finite
time, so a blow-up guard and a clean termination status are part of the
contract:

  completed      reached t_end
  blow_up        max|x| crossed the blow-up threshold
  step_failure   the controller step underflowed (or the step budget ran out)
  branch_failure step underflow caused by the RHS raising BranchError
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import BranchError, InvalidParameterError

COMPLETED = "completed"
BLOW_UP = "blow_up"
STEP_FAILURE = "step_failure"
BRANCH_FAILURE = "branch_failure"

# Dormand-Prince 5(4) tableau.
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
# b - b_hat: coefficients of the embedded 4th-order error estimate.
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)
# Quartic dense-output interpolant: y(t + theta h) = y + h (K^T P) theta_powers.
_P = np.array(
    [
        [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0, 0, 0, 0],
        [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

_SAFETY = 0.9
_BETA = 0.04
_EXPO = 0.2 - _BETA * 0.75
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_MAX_STEPS = 1_000_000


def check_tolerances(rel_tol: float, abs_tol: float) -> None:
    for name, tol in (("rel_tol", rel_tol), ("abs_tol", abs_tol)):
        if not (0.0 < tol <= 1e-2) or not math.isfinite(tol):
            raise InvalidParameterError(f"{name} must lie in (0, 1e-2], got {tol!r}")


def _error_norm(err: np.ndarray, y: np.ndarray, y_new: np.ndarray,
                rel_tol: float, abs_tol: float) -> float:
    scale = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y_new))
    return float(np.sqrt(np.mean((err / scale) ** 2)))


def _initial_step(f, t0, y0, f0, t_end, rel_tol, abs_tol) -> float:
    span = t_end - t0
    scale = abs_tol + rel_tol * np.abs(y0)
    d0 = float(np.sqrt(np.mean((y0 / scale) ** 2)))
    d1 = float(np.sqrt(np.mean((f0 / scale) ** 2)))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, span)
    try:
        f1 = f(t0 + h0, y0 + h0 * f0)
    except BranchError:
        return min(1e-6, span)
    d2 = float(np.sqrt(np.mean(((f1 - f0) / scale) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, span)


def adaptive_rk(
    f: Callable[[float, np.ndarray], np.ndarray],
    x0: Sequence[float],
    t_end: float,
    rel_tol: float,
    abs_tol: float,
    *,
    t0: float = 0.0,
    sample_interval: float | None = None,
    blow_up_threshold: float | None = 1e9,
) -> tuple[np.ndarray, np.ndarray, str]:
    """Integrate dx/dt = f(t, x) from t0 to t_end, sampling on a fixed grid.

    Returns (times, states, termination).  The first sample is (t0, x0); the
    last is the final accepted state regardless of termination, so a blow_up
    trajectory ends with the state that crossed the threshold.  Grid samples
    strictly inside a step come from the dense-output interpolant.
    """
    check_tolerances(rel_tol, abs_tol)
    if not (t_end > t0) or not math.isfinite(t_end):
        raise InvalidParameterError(f"t_end must be finite and > {t0}, got {t_end!r}")
    if sample_interval is None:
        sample_interval = (t_end - t0) / 256
    if not (0 < sample_interval <= t_end - t0):
        raise InvalidParameterError("sample_interval must lie in (0, t_end - t0]")

    y = np.asarray(x0, dtype=float).copy()
    if y.ndim != 1 or not np.all(np.isfinite(y)):
        raise InvalidParameterError("x0 must be a finite 1-d vector")

    times = [t0]
    states = [y.copy()]
    t = t0
    k1 = f(t, y)

    h = _initial_step(f, t0, y, k1, t_end, rel_tol, abs_tol)
    fac_old = 1e-4
    sample_idx = 1
    branch_fail = False
    k = [k1] * 7

    for _ in range(_MAX_STEPS):
        if t >= t_end:
            return np.array(times), np.array(states), COMPLETED
        h_floor = 1e-14 * max(1.0, abs(t))
        if h < h_floor:
            return np.array(times), np.array(states), (
                BRANCH_FAILURE if branch_fail else STEP_FAILURE
            )
        at_end = h >= t_end - t
        h_step = t_end - t if at_end else h

        try:
            k[0] = k1
            for s in range(1, 7):
                ys = y + h_step * sum(a * k[j] for j, a in enumerate(_A[s]))
                k[s] = f(t + _C[s] * h_step, ys)
            y_new = y + h_step * sum(b * k[j] for j, b in enumerate(_B) if b)
            err_vec = h_step * sum(e * k[j] for j, e in enumerate(_E) if e)
        except BranchError:
            branch_fail = True
            h = h_step * 0.25
            continue

        if not np.all(np.isfinite(y_new)):
            err = math.inf
        else:
            err = _error_norm(err_vec, y, y_new, rel_tol, abs_tol)
        branch_fail = False

        if err > 1.0:
            fac = min(1 / _MIN_FACTOR, err**_EXPO / _SAFETY)
            h = h_step / fac
            continue

        t_new = t_end if at_end else t + h_step
        dense = None
        while True:
            ts = min(t0 + sample_idx * sample_interval, t_end)
            if ts > t_new or ts <= t:
                break
            if ts == t_new:
                ys = y_new
            else:
                if dense is None:
                    dense = np.stack(k).T @ _P
                theta = (ts - t) / h_step
                ys = y + h_step * (dense @ (theta ** np.arange(1, 5)))
            times.append(ts)
            states.append(np.array(ys))
            sample_idx += 1
            if ts >= t_end:
                break

        t = t_new
        y = y_new
        k1 = k[6]  # FSAL
        fac = err**_EXPO / fac_old**_BETA
        fac = max(1 / _MAX_FACTOR, min(1 / _MIN_FACTOR, fac / _SAFETY))
        # The final clamped step must not drag the controller step down.
        h = max(h, h_step / fac) if at_end else h_step / fac
        fac_old = max(err, 1e-4)

        if blow_up_threshold is not None and np.max(np.abs(y)) >= blow_up_threshold:
            if times[-1] != t:
                times.append(t)
                states.append(y.copy())
            return np.array(times), np.array(states), BLOW_UP

    return np.array(times), np.array(states), STEP_FAILURE

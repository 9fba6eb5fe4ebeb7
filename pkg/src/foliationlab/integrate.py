"""Adaptive Dormand-Prince 5(4) integrator over complex state vectors.

The right-hand side is f(t, y) with real parameter t and complex ndarray y.
Step control follows the usual embedded-pair rule with a mixed
absolute/relative error norm.  Callers can bound the step length and install
a state monitor that aborts integration (used for chart-domain checks).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ToleranceNotMet

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)


@dataclass
class OdeResult:
    t: float
    y: np.ndarray
    steps: int
    rejected: int
    est_error: float
    ts: list
    ys: list


def integrate(
    f,
    t0: float,
    t1: float,
    y0: np.ndarray,
    tol: float = 1e-10,
    max_step: float = np.inf,
    min_step: float = 1e-14,
    max_steps: int = 200_000,
    monitor=None,
    record: bool = False,
    atol_scale: float = 1.0,
) -> OdeResult:
    """Integrate dy/dt = f(t, y) from t0 to t1 (t0 < t1).

    monitor(t, y), if given, is called after every accepted step and may
    raise to abort (the exception propagates).  est_error accumulates the
    accepted per-step error estimates.

    The error norm is componentwise tol * (atol_scale + |y_i|).  Callers
    whose state decays exponentially but must keep relative accuracy (the
    holonomy lifts, where y = 0 is an exact invariant) pass a tiny
    atol_scale to get essentially pure relative control.
    """
    y = np.asarray(y0, dtype=complex).copy()
    t = t0
    span = t1 - t0
    h = min(max_step, span / 16 if span > 0 else span)
    steps = rejected = 0
    acc_err = 0.0
    ts = [t0]
    ys = [y.copy()]
    k = [None] * 7
    k[0] = np.asarray(f(t, y), dtype=complex)

    while t < t1:
        if steps + rejected > max_steps:
            raise ToleranceNotMet(f"step budget exhausted at t={t:.6g}")
        h = min(h, t1 - t)
        if h < min_step:
            raise ToleranceNotMet(f"step size underflow at t={t:.6g}")
        for i in range(1, 7):
            yi = y + h * sum(a * k[j] for j, a in enumerate(_A[i]))
            k[i] = np.asarray(f(t + _C[i] * h, yi), dtype=complex)
        y5 = y + h * sum(b * ki for b, ki in zip(_B5, k))
        y4 = y + h * sum(b * ki for b, ki in zip(_B4, k))
        scale = tol * (atol_scale + np.abs(y))
        err = float(np.max(np.abs(y5 - y4) / scale))
        if err <= 1.0:
            t += h
            y = y5
            k[0] = k[6]  # FSAL
            steps += 1
            acc_err += err * tol * (atol_scale + float(np.max(np.abs(y))))
            if record:
                ts.append(t)
                ys.append(y.copy())
            if monitor is not None:
                monitor(t, y)
        else:
            rejected += 1
        factor = 0.9 * (1.0 / max(err, 1e-10)) ** 0.2
        h = h * min(5.0, max(0.2, factor))
        h = min(h, max_step)
    if not record:
        ts.append(t)
        ys.append(y.copy())
    return OdeResult(t, y, steps, rejected, acc_err, ts, ys)

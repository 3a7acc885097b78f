"""Generic classical Runge-Kutta stepping for small dense systems."""

from __future__ import annotations

from typing import Callable

import numpy as np


def rk4(fun: Callable[[float, np.ndarray], np.ndarray], y0, times) -> np.ndarray:
    """Integrate dy/dt = fun(t, y) over ``times``; returns one row per time."""
    times = np.asarray(times, dtype=float)
    y = np.asarray(y0, dtype=float)
    out = np.empty((len(times),) + y.shape)
    out[0] = y
    for i in range(len(times) - 1):
        t, h = times[i], times[i + 1] - times[i]
        k1 = fun(t, y)
        k2 = fun(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = fun(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = fun(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = y
    return out

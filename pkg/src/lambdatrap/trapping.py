"""Dark-state algebra and the temporal windows of population trapping.

The trapping condition used for window solving is the squared ratio form

    (g2/g1)^2 = (1 - cos(Delta t)) / (1 + cos(Delta t)),

cleared of denominators into :func:`trap_residual`. Its positive roots are
Delta*t = +-2*arctan(g2/g1) + 2*k*pi. The literal effective-coupling route
(:func:`effective_couplings`, :func:`dark_coupling_element`) is kept as well;
it does not vanish at those roots, and the validation report records by how
much.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .dynamics import Trajectory
from .model import AtomFieldParams, ContractError, ParamError

RESIDUAL_TOL = 1e-10
# root pairs closer than this (in Delta*t) are one window
DEFAULT_RESOLUTION = 1e-6


@dataclass(frozen=True)
class ContinuousWindow:
    """Returned instead of a window list when Delta = 0: trapping never closes."""

    message: str = "window: continuous (resonance)"

    def __bool__(self) -> bool:
        return True


RESONANCE = ContinuousWindow()


@dataclass(frozen=True)
class DressedBasis:
    sin_theta: float
    cos_theta: float

    @property
    def minus_coeffs(self) -> tuple[float, float]:
        return (self.cos_theta, -self.sin_theta)

    @property
    def plus_coeffs(self) -> tuple[float, float]:
        return (self.sin_theta, self.cos_theta)

    def gram(self) -> np.ndarray:
        m = np.array([self.minus_coeffs, self.plus_coeffs])
        return m @ m.T


def dressed_basis(g1: float, g2: float) -> DressedBasis:
    """Fixed dark/bright pair with sin(theta) = g1/g, cos(theta) = g2/g."""
    g = math.hypot(g1, g2)
    if g == 0:
        raise ParamError("dressed basis undefined when both couplings vanish")
    return DressedBasis(g1 / g, g2 / g)


@dataclass(frozen=True)
class EffectiveCouplings:
    g1_tilde: float
    g2_tilde: float
    g_tilde: float

    @property
    def sin_Theta(self) -> float:
        return self.g1_tilde / self.g_tilde

    @property
    def cos_Theta(self) -> float:
        return self.g2_tilde / self.g_tilde

    @property
    def Theta(self) -> float:
        return math.atan2(self.g1_tilde, self.g2_tilde)


def effective_couplings(g1: float, g2: float, Delta: float, t: float) -> EffectiveCouplings:
    """Time-dependent couplings g1 + g2*cos(Dt) and g2*cos(Dt), as printed."""
    c = math.cos(Delta * t)
    g1t = g1 + g2 * c
    g2t = g2 * c
    gt = math.hypot(g1t, g2t)
    if gt == 0:
        raise ParamError(f"effective coupling vanishes at t={t!r}; mixing angle undefined")
    return EffectiveCouplings(g1t, g2t, gt)


def dark_coupling_element(g1: float, g2: float, Delta: float, t: float) -> float:
    """<3|H|-> = (g1*g2~ - g2*g1~) / g~ with the effective couplings above."""
    eff = effective_couplings(g1, g2, Delta, t)
    return (g1 * eff.g2_tilde - g2 * eff.g1_tilde) / eff.g_tilde


def trap_residual(g1: float, g2: float, Delta: float, t: float) -> float:
    """g2^2 (1 + cos Dt) - g1^2 (1 - cos Dt); zero exactly at trapping instants."""
    if not g1 > 0:
        raise ParamError("trapping condition needs a nonzero control coupling g1")
    c = math.cos(Delta * t)
    return g2 * g2 * (1.0 + c) - g1 * g1 * (1.0 - c)


@dataclass(frozen=True)
class TrapWindow:
    n: int
    t: float
    phase: float
    branch: str
    residual: float
    case_label: str = "general"


def _residual_scale(g1: float, g2: float) -> float:
    return max(1.0, g1 * g1 + g2 * g2)


def _branch_phases(ratio: float, n_max: int, resolution: float) -> list[tuple[float, str]]:
    a = 2.0 * math.atan(ratio)
    candidates = []
    for k in range(n_max + 2):
        candidates.append((a + 2.0 * k * math.pi, "plus"))
        if k >= 1:
            candidates.append((2.0 * k * math.pi - a, "minus"))
    candidates.sort()

    merged: list[tuple[float, str]] = []
    for phase, branch in candidates:
        if phase < resolution:
            continue  # continuation of the trivial t = 0 root
        if merged and phase - merged[-1][0] < resolution:
            prev = merged.pop()
            merged.append((0.5 * (prev[0] + phase), "double"))
        else:
            merged.append((phase, branch))
    return merged[:n_max]


def solve_windows(
    g1: float,
    g2: float,
    Delta: float,
    n_max: int,
    resolution: float = DEFAULT_RESOLUTION,
) -> Union[list[TrapWindow], ContinuousWindow]:
    """First ``n_max`` strictly positive trapping instants, both arctan branches.

    Roots closer together than ``resolution`` in Delta*t are reported once,
    at their midpoint, with branch ``"double"``; this is what happens to each
    pair as g2/g1 -> 0. A root within ``resolution`` of zero is dropped along
    with t = 0 itself.
    """
    if not g1 > 0:
        raise ParamError("trapping condition needs a nonzero control coupling g1")
    if g2 < 0:
        raise ParamError("g2 negative")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if Delta == 0:
        return RESONANCE

    omega = abs(Delta)
    scale = _residual_scale(g1, g2)
    windows = []
    for n, (phase, branch) in enumerate(_branch_phases(g2 / g1, n_max, resolution), start=1):
        t = phase / omega
        residual = trap_residual(g1, g2, Delta, t)
        if abs(residual) >= RESIDUAL_TOL * scale:
            raise ArithmeticError(f"window {n} at t={t!r} fails residual check ({residual!r})")
        windows.append(TrapWindow(n, t, Delta * t, branch, residual))
    return windows


def first_window(g1: float, g2: float, Delta: float) -> Union[TrapWindow, ContinuousWindow]:
    result = solve_windows(g1, g2, Delta, 1)
    return result if isinstance(result, ContinuousWindow) else result[0]


def window_times_case1(delta_nu: float, n_max: int) -> Union[list[float], ContinuousWindow]:
    """Weak-signal windows n/dnu, n = 1..n_max."""
    if delta_nu == 0:
        return RESONANCE
    return [n / abs(delta_nu) for n in range(1, n_max + 1)]


def window_times_case2(delta_nu: float, n_max: int) -> Union[list[float], ContinuousWindow]:
    """Equal-coupling windows (2n+1)/(4 dnu), n = 1..n_max (sequence starts at 3/4)."""
    if delta_nu == 0:
        return RESONANCE
    return [(2 * n + 1) / (4.0 * abs(delta_nu)) for n in range(1, n_max + 1)]


def case_windows(case: str, g1: float, g2: float, delta_nu: float, n_max: int):
    """Closed-form window tables as :class:`TrapWindow` rows.

    Residuals are evaluated with the given couplings but not enforced, since
    the closed forms are limits.
    """
    if case == "case1":
        times = window_times_case1(delta_nu, n_max)
    elif case == "case2":
        times = window_times_case2(delta_nu, n_max)
    else:
        raise ValueError(f"unknown case {case!r}")
    if isinstance(times, ContinuousWindow):
        return times
    Delta = 2.0 * math.pi * delta_nu
    rows = []
    for n, t in enumerate(times, start=1):
        if case == "case1":
            branch = "double"
        else:
            branch = "minus" if n % 2 else "plus"
        rows.append(TrapWindow(n, t, Delta * t, branch, trap_residual(g1, g2, Delta, t), case))
    return rows


def hamiltonian_dark_overlap(
    coeffs: tuple[complex, complex],
    p: AtomFieldParams,
    amplitudes: tuple[float, float],
    t: float,
) -> complex:
    """<3|H(t)|psi> for psi = c1|1> + c2|2>, straight from the interaction terms."""
    c1, c2 = coeffs
    norm = abs(c1) ** 2 + abs(c2) ** 2
    if abs(norm - 1.0) > 1e-12:
        raise ContractError(f"coefficients not normalized (|c1|^2+|c2|^2={norm!r})")
    a1, a2 = amplitudes
    return p.g1 * a1 * c1 + p.g2 * a2 * complex(math.cos(p.Delta * t), math.sin(p.Delta * t)) * c2


# -- trajectory checks ------------------------------------------------------

NEIGHBORHOOD = 0.05


@dataclass(frozen=True)
class WindowRecord:
    index: int
    time: float
    j33_window: float
    j33_mid: float
    ratio: float
    status: str  # pass | fail | uncovered


@dataclass(frozen=True)
class TrapReport:
    records: list[WindowRecord]
    tol: float
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        covered = [r for r in self.records if r.status != "uncovered"]
        return bool(covered) and all(r.status == "pass" for r in covered)

    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "uncovered": 0}
        for r in self.records:
            out[r.status] += 1
        return out


def _window_time(w) -> float:
    return float(w.t) if hasattr(w, "t") else float(w)


def verify_trapping(traj: Trajectory, windows: Sequence, tol: float) -> TrapReport:
    """Compare excited population near each window with the mid-window value.

    For each window time t_n the maximum of J33 is taken over t_n +- 5% and
    over a same-width neighborhood of the midpoint to the next window (to the
    previous one for the last window; a lone window is assumed to repeat with
    period t_n). The window passes when its J33 is at most ``tol`` times the
    mid-window J33. ``windows`` may hold :class:`TrapWindow` rows or times.
    """
    times = [_window_time(w) for w in windows]
    t_arr = traj.times
    j33 = traj.column("J33")
    lo, hi = t_arr[0], t_arr[-1]

    def peak(a: float, b: float) -> float:
        mask = (t_arr >= a) & (t_arr <= b)
        if not mask.any():
            i = int(np.argmin(np.abs(t_arr - 0.5 * (a + b))))
            return float(j33[i])
        return float(j33[mask].max())

    records = []
    for i, tn in enumerate(times):
        if i + 1 < len(times):
            spacing = times[i + 1] - tn
        elif i > 0:
            spacing = tn - times[i - 1]
        else:
            spacing = tn
        half = NEIGHBORHOOD * abs(tn)
        tm = tn + 0.5 * spacing
        if tn - half < lo or tn + half > hi or tm - half < lo or tm + half > hi:
            records.append(WindowRecord(i + 1, tn, math.nan, math.nan, math.nan, "uncovered"))
            continue
        near = peak(tn - half, tn + half)
        mid = peak(tm - half, tm + half)
        if mid > 0:
            ratio = near / mid
        else:
            ratio = 0.0 if near == 0 else math.inf
        status = "pass" if near <= tol * mid else "fail"
        records.append(WindowRecord(i + 1, tn, near, mid, ratio, status))

    echo = {name: getattr(traj.params, name) for name in traj.params.__dataclass_fields__}
    return TrapReport(records, tol, echo)

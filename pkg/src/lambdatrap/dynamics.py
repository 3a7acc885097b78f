"""Maxwell-Bloch equations of motion and a fixed-step RK4 integrator.

Three right-hand sides live here:

* :func:`mbe_rhs`: the complex equations for populations and coherences,
  the reference form.
* :func:`component_rhs` with ``variant="derived"``: the same equations
  expanded by hand into real components, Jx = Re and Jy = Im of the stored
  coherence <J_nm> = conj(c_n) c_m.
* :func:`component_rhs` with ``variant="paper-verbatim"``: the printed
  component equations, kept only for the validation report. They carry no
  control-field imaginary part, so they agree with the derived form only in
  the canonical frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .geometry import STATE_LAYOUT, RealComponentState, _reduced_vec
from .model import AtomFieldParams, CoherenceState, FieldState, check_params

MODELS = ("full", "reduced", "paper-components")
VARIANTS = ("derived", "paper-verbatim")

# dt * (fastest angular frequency) must stay below this
STEP_GUARD = 0.1


class StepSizeError(ValueError):
    """The requested step is too coarse for the fastest frequency in the problem."""


class IntegrationAbort(RuntimeError):
    """The state became non-finite; ``last_good_time`` is the last finite sample."""

    def __init__(self, message: str, last_good_time: float):
        super().__init__(message)
        self.last_good_time = last_good_time


def mbe_rhs(s: CoherenceState, f: FieldState, p: AtomFieldParams) -> CoherenceState:
    """Time derivative of every stored quantity, complex form.

    The signal phase must already be folded into ``f``.
    """
    a1, a2 = f.a1, f.a2
    g1, g2 = p.g1, p.g2
    J13, J23, J12 = s.J13, s.J23, s.J12
    J31, J32, J21 = J13.conjugate(), J23.conjugate(), J12.conjugate()

    drive1 = 1j * g1 * (a1 * J31 - a1.conjugate() * J13)
    drive2 = 1j * g2 * (a2 * J32 - a2.conjugate() * J23)

    dJ33 = -drive1 - drive2 - (p.Gamma13 + p.Gamma23) * s.J33
    dJ22 = drive2 + p.Gamma23 * s.J33
    dJ11 = drive1 + p.Gamma13 * s.J33
    dJ13 = (
        1j * p.delta1 * J13
        - 1j * g1 * a1 * s.delta13
        - 1j * g2 * a2 * J12
        - p.gamma13 * J13
    )
    dJ23 = (
        1j * (p.delta1 + p.omega21) * J23
        - 1j * g1 * a1 * J21
        - 1j * g2 * a2 * s.delta23
        - p.gamma23 * J23
    )
    dJ12 = (
        1j * p.delta2 * J12
        + 1j * g1 * a1 * J32
        - 1j * g2 * a2.conjugate() * J13
        - p.gamma12 * J12
    )
    # the population drives are real up to rounding; drop the imaginary dust
    return CoherenceState(dJ11.real, dJ22.real, dJ33.real, dJ13, dJ23, dJ12)


def _derived_vec(y, f: FieldState, p: AtomFieldParams) -> list[float]:
    J11, J22, J33, x13, y13, x23, y23, x12, y12 = y
    g1, g2 = p.g1, p.g2
    a1x, a1y, a2x, a2y = f.a1x, f.a1y, f.a2x, f.a2y
    d13 = J11 - J33
    d23 = J22 - J33
    w23 = p.delta1 + p.omega21

    pump1 = 2.0 * g1 * (a1x * y13 + a1y * x13)
    pump2 = 2.0 * g2 * (a2x * y23 + a2y * x23)

    return [
        pump1 + p.Gamma13 * J33,
        pump2 + p.Gamma23 * J33,
        -pump1 - pump2 - (p.Gamma13 + p.Gamma23) * J33,
        -p.delta1 * y13 - g1 * a1y * d13 + g2 * (a2x * y12 - a2y * x12) - p.gamma13 * x13,
        p.delta1 * x13 - g1 * a1x * d13 - g2 * (a2x * x12 + a2y * y12) - p.gamma13 * y13,
        -w23 * y23 - g1 * (a1x * y12 + a1y * x12) - g2 * a2y * d23 - p.gamma23 * x23,
        w23 * x23 - g1 * (a1x * x12 - a1y * y12) - g2 * a2x * d23 - p.gamma23 * y23,
        -p.delta2 * y12 + g1 * (a1x * y23 + a1y * x23) + g2 * (a2x * y13 + a2y * x13) - p.gamma12 * x12,
        p.delta2 * x12 + g1 * (a1x * x23 - a1y * y23) - g2 * (a2x * x13 - a2y * y13) - p.gamma12 * y12,
    ]


def printed_component_equations(y, f: FieldState, p: AtomFieldParams) -> dict[str, float]:
    """The printed component equations, term for term, keyed by component.

    Includes all three inversion equations; they are linearly dependent
    (Jz13 - Jz23 = Jz12) and the census checks each one.
    """
    J11, J22, J33, x13, y13, x23, y23, x12, y12 = y
    g1, g2 = p.g1, p.g2
    a1x, a2x, a2y = f.a1x, f.a2x, f.a2y
    d13 = J11 - J33
    d23 = J22 - J33
    w23 = p.delta1 + p.omega21
    return {
        "Jx12": g2 * (a2x * y13 + a2y * x13) + g1 * a1x * y23 - p.delta2 * y12 - p.gamma12 * x12,
        "Jy12": p.delta2 * x12 + g1 * a1x * x23 - g2 * (a2x * x13 - a2y * y13) - p.gamma12 * y12,
        "Jz12": 2 * g1 * a1x * y13 - 2 * g2 * (a2x * y23 + a2y * x23) + (p.Gamma13 - p.Gamma23) * J33,
        "Jx13": g2 * (a2x * y12 - a2y * x12) - p.delta1 * y13 - p.gamma13 * x13,
        "Jy13": p.delta1 * x13 - g1 * a1x * d13 - g2 * (a2x * x12 + a2y * y12) - p.gamma13 * y13,
        "Jz13": 4 * g1 * a1x * y13 + 2 * g2 * (a2x * y23 + a2y * x23) + (2 * p.Gamma13 + p.Gamma23) * J33,
        "Jx23": -w23 * y23 - g1 * a1x * y12 - g2 * a2y * d23 - p.gamma23 * x23,
        "Jy23": w23 * x23 - g1 * a1x * x12 - g2 * a2x * d23 - p.gamma23 * y23,
        "Jz23": 2 * g1 * a1x * y13 + 4 * g2 * (a2x * y23 + a2y * x23) + (p.Gamma13 + 2 * p.Gamma23) * J33,
    }


def _printed_vec(y, f: FieldState, p: AtomFieldParams) -> list[float]:
    eq = printed_component_equations(y, f, p)
    # populations from the two inversion equations plus trace conservation
    dJ33 = -(eq["Jz13"] + eq["Jz23"]) / 3.0
    return [
        eq["Jz13"] + dJ33,
        eq["Jz23"] + dJ33,
        dJ33,
        eq["Jx13"], eq["Jy13"], eq["Jx23"], eq["Jy23"], eq["Jx12"], eq["Jy12"],
    ]


def component_rhs(
    s: RealComponentState,
    f: FieldState,
    p: AtomFieldParams,
    variant: str = "derived",
) -> RealComponentState:
    if variant == "derived":
        return RealComponentState.from_vector(_derived_vec(s.to_vector(), f, p))
    if variant == "paper-verbatim":
        return RealComponentState.from_vector(_printed_vec(s.to_vector(), f, p))
    raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def component_derivatives(s: RealComponentState, f: FieldState, p: AtomFieldParams) -> dict[str, float]:
    """Derived-form derivatives keyed like :func:`printed_component_equations`."""
    d = component_rhs(s, f, p, "derived")
    out = {name: getattr(d, name) for name in ("Jx12", "Jy12", "Jx13", "Jy13", "Jx23", "Jy23")}
    out.update(d.z_components())
    return out


def rotating_signal_field(a2_mag: float, Delta: float, t: float) -> tuple[float, float]:
    """Signal components seen from the control frame: a2*(cos Dt, sin Dt)."""
    if a2_mag < 0:
        raise ValueError("signal amplitude must be nonnegative")
    phase = Delta * t
    return a2_mag * math.cos(phase), a2_mag * math.sin(phase)


@dataclass(frozen=True)
class Constant:
    amp: float

    def __call__(self, t: float) -> float:
        return self.amp

    def shifted(self, by: float) -> "Constant":
        return self


@dataclass(frozen=True)
class Rectangular:
    """``amp`` for |t - center| <= width/2, zero elsewhere."""

    amp: float
    center: float
    width: float

    def __call__(self, t: float) -> float:
        return self.amp if abs(t - self.center) <= 0.5 * self.width else 0.0

    def shifted(self, by: float) -> "Rectangular":
        return Rectangular(self.amp, self.center + by, self.width)


@dataclass(frozen=True)
class _Shifted:
    env: Callable[[float], float]
    by: float

    def __call__(self, t: float) -> float:
        return self.env(t - self.by)

    def shifted(self, by: float) -> "_Shifted":
        return _Shifted(self.env, self.by + by)


@dataclass(frozen=True)
class FieldSchedule:
    """Field magnitudes as functions of time.

    The signal phase is generated here from the field detuning, measured from
    ``phase_origin``; the caller never supplies it.
    """

    a1: Callable[[float], float]
    a2: Callable[[float], float]
    phase_origin: float = 0.0

    @classmethod
    def constant(cls, a1: float, a2: float) -> "FieldSchedule":
        return cls(Constant(a1), Constant(a2))

    @classmethod
    def pulse(cls, a1: float, a2: float, center: float, width: float) -> "FieldSchedule":
        """Both fields switched on together for one rectangular pulse."""
        return cls(Rectangular(a1, center, width), Rectangular(a2, center, width))

    def field_state(self, t: float, Delta: float) -> FieldState:
        a2x, a2y = rotating_signal_field(self.a2(t), Delta, t - self.phase_origin)
        return FieldState(a1x=self.a1(t), a2x=a2x, a2y=a2y)

    def shifted(self, by: float) -> "FieldSchedule":
        def shift(env):
            return env.shifted(by) if hasattr(env, "shifted") else _Shifted(env, by)

        return FieldSchedule(shift(self.a1), shift(self.a2), self.phase_origin + by)


FIELD_LAYOUT = ("a1x", "a1y", "a2x", "a2y")


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution. ``data`` rows follow ``STATE_LAYOUT``."""

    times: np.ndarray
    data: np.ndarray
    field_data: np.ndarray
    params: AtomFieldParams
    model: str
    dt: float
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.times)

    def column(self, name: str) -> np.ndarray:
        if name in STATE_LAYOUT:
            return self.data[:, STATE_LAYOUT.index(name)]
        return self.field_data[:, FIELD_LAYOUT.index(name)]

    def state(self, i: int) -> CoherenceState:
        return RealComponentState.from_vector(self.data[i]).to_coherences()

    @property
    def states(self) -> list[CoherenceState]:
        return [self.state(i) for i in range(len(self.times))]

    @property
    def fields_at(self) -> list[FieldState]:
        return [FieldState(a1x=r[0], a1y=r[1], a2x=r[2], a2y=r[3]) for r in self.field_data]

    def trace(self) -> np.ndarray:
        return self.data[:, 0] + self.data[:, 1] + self.data[:, 2]


def time_grid(t0: float, t1: float, dt: float) -> np.ndarray:
    """t0, t0+dt, ... with the last point placed exactly on t1."""
    if not t1 > t0:
        raise ValueError(f"t1 must exceed t0 (t0={t0!r}, t1={t1!r})")
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    q = (t1 - t0) / dt
    n = int(round(q)) if abs(q - round(q)) < 1e-9 * max(1.0, q) else int(math.floor(q))
    times = t0 + dt * np.arange(n + 1)
    if times[-1] < t1 and t1 - times[-1] > 1e-9 * dt:
        times = np.append(times, t1)
    else:
        times[-1] = t1
    return times


def _check_step(p: AtomFieldParams, sched: FieldSchedule, times: np.ndarray, dt: float) -> None:
    a1_peak = max(abs(sched.a1(t)) for t in times)
    a2_peak = max(abs(sched.a2(t)) for t in times)
    rates = {
        "|delta1|": abs(p.delta1),
        "|delta1+omega21|": abs(p.delta1 + p.omega21),
        "4*g1*a1": 4.0 * p.g1 * a1_peak,
        "4*g2*a2": 4.0 * p.g2 * a2_peak,
        "|Delta|": abs(p.Delta),
    }
    name, rate = max(rates.items(), key=lambda kv: kv[1])
    if dt * rate > STEP_GUARD:
        raise StepSizeError(
            f"dt={dt!r} too large for {name}={rate!r} rad/s: dt*rate={dt * rate:.4g} > {STEP_GUARD}"
        )


_RHS = {"full": _derived_vec, "reduced": _reduced_vec, "paper-components": _printed_vec}


def integrate(
    model: str,
    s0: CoherenceState,
    p: AtomFieldParams,
    sched: FieldSchedule,
    t0: float,
    t1: float,
    dt: float,
) -> Trajectory:
    """Classical RK4 on a uniform grid, last step shortened to end on ``t1``.

    ``reduced`` starts from ``s0`` with the 1<->2 coherence zeroed.
    """
    if model not in _RHS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
    check_params(p)
    if model == "reduced":
        s0 = CoherenceState(s0.J11, s0.J22, s0.J33, s0.J13, s0.J23, 0j)
    rhs = _RHS[model]
    times = time_grid(t0, t1, dt)
    _check_step(p, sched, times, dt)

    Delta = p.Delta
    out = np.empty((len(times), len(STATE_LAYOUT)))
    fields_out = np.empty((len(times), len(FIELD_LAYOUT)))
    y = RealComponentState.from_coherences(s0).to_vector().tolist()
    if not all(map(math.isfinite, y)):
        raise IntegrationAbort("initial state is not finite", t0)
    out[0] = y

    f = sched.field_state(float(times[0]), Delta)
    fields_out[0] = (f.a1x, f.a1y, f.a2x, f.a2y)
    for i in range(len(times) - 1):
        t = float(times[i])
        h = float(times[i + 1]) - t
        fm = sched.field_state(t + 0.5 * h, Delta)
        f1 = sched.field_state(float(times[i + 1]), Delta)
        # plain float lists: far cheaper than 9-element numpy arrays here
        k1 = rhs(y, f, p)
        k2 = rhs([a + 0.5 * h * b for a, b in zip(y, k1)], fm, p)
        k3 = rhs([a + 0.5 * h * b for a, b in zip(y, k2)], fm, p)
        k4 = rhs([a + h * b for a, b in zip(y, k3)], f1, p)
        y = [a + (h / 6.0) * (b1 + 2.0 * b2 + 2.0 * b3 + b4) for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)]
        if not all(map(math.isfinite, y)):
            raise IntegrationAbort(f"non-finite state after t={t!r}", float(t))
        out[i + 1] = y
        fields_out[i + 1] = (f1.a1x, f1.a1y, f1.a2x, f1.a2y)
        f = f1

    return Trajectory(times, out, fields_out, p, model, dt)

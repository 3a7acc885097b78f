"""Run configuration: a closed ``key = value`` grammar with ``#`` comments."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Optional

from .dynamics import MODELS, FieldSchedule
from .model import AtomFieldParams, CoherenceState, validate_params
from .trapping import dressed_basis

INITS = ("ground1", "dark", "custom")

PARAM_KEYS = tuple(f.name for f in fields(AtomFieldParams))
FLOAT_KEYS = PARAM_KEYS + ("delta_nu", "a1_amp", "a2_amp", "pulse_center", "pulse_width", "t0", "t1", "dt")
COMPLEX_KEYS = ("c1", "c2", "c3")
CHOICE_KEYS = {"model": MODELS, "init": INITS}
KNOWN_KEYS = FLOAT_KEYS + COMPLEX_KEYS + tuple(CHOICE_KEYS)

DEFAULTS = {
    "model": "full",
    "init": "ground1",
    "a1_amp": 1.0,
    "a2_amp": 1.0,
    "t0": 0.0,
    "t1": 1.0,
    "dt": 1e-3,
}


class ConfigError(ValueError):
    """Carries every problem found in a config, one message per entry."""

    def __init__(self, errors: list[str]):
        super().__init__("\n".join(errors))
        self.errors = errors


@dataclass(frozen=True)
class RunSpec:
    params: AtomFieldParams
    model: str = "full"
    init: str = "ground1"
    coeffs: Optional[tuple[complex, complex, complex]] = None
    a1_amp: float = 1.0
    a2_amp: float = 1.0
    pulse_center: Optional[float] = None
    pulse_width: Optional[float] = None
    t0: float = 0.0
    t1: float = 1.0
    dt: float = 1e-3

    def initial_state(self) -> CoherenceState:
        if self.init == "ground1":
            return CoherenceState.ground1()
        if self.init == "dark":
            c1, c2 = dressed_basis(self.params.g1, self.params.g2).minus_coeffs
            return CoherenceState.from_amplitudes(c1, c2)
        return CoherenceState.from_amplitudes(*self.coeffs)

    def schedule(self) -> FieldSchedule:
        if self.pulse_center is None:
            return FieldSchedule.constant(self.a1_amp, self.a2_amp)
        return FieldSchedule.pulse(self.a1_amp, self.a2_amp, self.pulse_center, self.pulse_width)


def _parse_complex(text: str) -> complex:
    return complex(text.replace(" ", ""))


def parse_config(text: str) -> RunSpec:
    """Parse a config; raises :class:`ConfigError` listing every problem."""
    errors: list[str] = []
    values: dict = {}
    where: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"expected 'key = value' at line {lineno}")
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            errors.append(f"unknown key '{key}' at line {lineno}")
            continue
        if key in values:
            errors.append(f"duplicate key '{key}' at line {lineno} (first at line {where[key]})")
            continue
        try:
            if key in FLOAT_KEYS:
                parsed = float(value)
                if not math.isfinite(parsed):
                    raise ValueError
            elif key in COMPLEX_KEYS:
                parsed = _parse_complex(value)
            else:
                if value not in CHOICE_KEYS[key]:
                    raise ValueError
                parsed = value
        except ValueError:
            errors.append(f"cannot parse value {value!r} for '{key}' at line {lineno}")
            continue
        values[key] = parsed
        where[key] = lineno

    def at(key: str) -> str:
        return f" at line {where[key]}" if key in where else ""

    if "Delta" in values and "delta_nu" in values:
        errors.append(f"'delta_nu'{at('delta_nu')} conflicts with 'Delta'{at('Delta')}")
    if errors:
        raise ConfigError(errors)

    merged = {**DEFAULTS, **values}
    param_values = {k: merged[k] for k in PARAM_KEYS if k in merged}
    if "delta_nu" in merged:
        param_values["Delta"] = 2.0 * math.pi * merged["delta_nu"]
    params = AtomFieldParams(**param_values)

    for problem in validate_params(params):
        key = problem.split()[0]
        errors.append(f"{problem}{at(key)}")
    if not merged["dt"] > 0:
        errors.append(f"dt must be positive{at('dt')}")
    if not merged["t1"] > merged["t0"]:
        errors.append(f"t1 must exceed t0{at('t1')}")
    for key in ("a1_amp", "a2_amp"):
        if merged[key] < 0:
            errors.append(f"{key} negative{at(key)}")

    has_pulse = ("pulse_center" in merged, "pulse_width" in merged)
    if any(has_pulse) and not all(has_pulse):
        errors.append("pulse_center and pulse_width must be given together")
    elif all(has_pulse) and not merged["pulse_width"] > 0:
        errors.append(f"pulse_width must be positive{at('pulse_width')}")

    coeffs = None
    given = [k for k in COMPLEX_KEYS if k in merged]
    if merged["init"] == "custom":
        coeffs = tuple(merged.get(k, 0j) for k in COMPLEX_KEYS)
        norm = sum(abs(c) ** 2 for c in coeffs)
        if abs(norm - 1.0) > 1e-9:
            errors.append(f"custom coefficients not normalized (sum |c|^2 = {norm!r})")
    elif given:
        errors.append(f"'{given[0]}'{at(given[0])} requires init = custom")
    if merged["init"] == "dark" and params.g1 == 0 and params.g2 == 0:
        errors.append(f"init = dark needs a nonzero coupling{at('init')}")

    if errors:
        raise ConfigError(errors)
    return RunSpec(
        params=params,
        model=merged["model"],
        init=merged["init"],
        coeffs=coeffs,
        a1_amp=merged["a1_amp"],
        a2_amp=merged["a2_amp"],
        pulse_center=merged.get("pulse_center"),
        pulse_width=merged.get("pulse_width"),
        t0=merged["t0"],
        t1=merged["t1"],
        dt=merged["dt"],
    )


def render_config(spec: RunSpec) -> str:
    """Canonical config text; ``parse_config(render_config(s)) == s``."""
    lines = [f"{name} = {getattr(spec.params, name)!r}" for name in PARAM_KEYS]
    lines += [f"model = {spec.model}", f"init = {spec.init}"]
    if spec.coeffs is not None:
        lines += [f"{k} = {c!r}" for k, c in zip(COMPLEX_KEYS, spec.coeffs)]
    lines += [f"a1_amp = {spec.a1_amp!r}", f"a2_amp = {spec.a2_amp!r}"]
    if spec.pulse_center is not None:
        lines += [f"pulse_center = {spec.pulse_center!r}", f"pulse_width = {spec.pulse_width!r}"]
    lines += [f"t0 = {spec.t0!r}", f"t1 = {spec.t1!r}", f"dt = {spec.dt!r}"]
    return "\n".join(lines) + "\n"

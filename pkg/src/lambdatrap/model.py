"""Domain types for a Lambda-configuration three-level atom driven by two fields.

Levels |1> and |2> are the close-lying ground states, |3> is the excited
state. Field a1 (control) drives 1<->3, field a2 (signal) drives 2<->3.

Conventions used throughout the package:

* hbar = 1, so couplings are angular frequencies (rad/s).
* All detunings and splittings are angular frequencies; the only quantity in
  Hz is ``AtomFieldParams.delta_nu()``.
* Coherences are stored lower-index-first (J13, J23, J12). The conjugate
  partners (J31, J32, J21) are never stored.
* Complex amplitudes decompose as a = ax - i*ay, polarizations as
  J_nm = Jx - i*Jy for n > m, which makes Jx = Re(J13), Jy = Im(J13) for the
  stored element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields


class ParamError(ValueError):
    """Raised when physical parameters violate a domain invariant."""


class ContractError(ValueError):
    """Raised when an operation is called outside its precondition."""


@dataclass(frozen=True)
class AtomFieldParams:
    """One physical scenario: couplings, detunings and decay constants.

    ``delta2`` is kept as omega_1 - omega_21, the definition the J12 equation
    was written with. It only enters the J12 line of the equations of motion.
    """

    g1: float = 0.0
    g2: float = 0.0
    delta1: float = 0.0
    delta2: float = 0.0
    omega21: float = 0.0
    Delta: float = 0.0
    Gamma13: float = 0.0
    Gamma23: float = 0.0
    gamma13: float = 0.0
    gamma23: float = 0.0
    gamma12: float = 0.0

    def delta_nu(self) -> float:
        """Field detuning in Hz (nu1 - nu2)."""
        return self.Delta / (2.0 * math.pi)

    @classmethod
    def from_delta_nu(cls, delta_nu: float, **kwargs) -> "AtomFieldParams":
        return cls(Delta=2.0 * math.pi * delta_nu, **kwargs)

    def replace(self, **changes) -> "AtomFieldParams":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return AtomFieldParams(**values)

    def without_decay(self) -> "AtomFieldParams":
        return self.replace(Gamma13=0.0, Gamma23=0.0, gamma13=0.0, gamma23=0.0, gamma12=0.0)


_NONNEGATIVE = ("g1", "g2", "Gamma13", "Gamma23", "gamma13", "gamma23", "gamma12")


def validate_params(p: AtomFieldParams) -> list[str]:
    """Return every violated invariant of ``p``; an empty list means valid."""
    errors = []
    for name in _NONNEGATIVE:
        value = getattr(p, name)
        if value < 0:
            errors.append(f"{name} negative")
    for f in fields(p):
        value = getattr(p, f.name)
        if not math.isfinite(value):
            errors.append(f"{f.name} not finite")
    return errors


def check_params(p: AtomFieldParams) -> None:
    errors = validate_params(p)
    if errors:
        raise ParamError("; ".join(errors))


@dataclass(frozen=True)
class CouplingSpec:
    """Ingredients of an atom-field coupling constant.

    ``mu`` is the dipole matrix element, ``omega`` the field (or transition)
    frequency, ``epsilon0`` the permittivity and ``V`` the mode volume, all in
    one consistent unit system.
    """

    mu: float
    omega: float
    epsilon0: float = 1.0
    V: float = 1.0


def coupling_from_dipole(spec: CouplingSpec) -> float:
    """g = mu * sqrt(omega / (epsilon0 * V)) with hbar = 1."""
    for name in ("omega", "epsilon0", "V"):
        if not getattr(spec, name) > 0:
            raise ParamError(f"{name} must be positive, got {getattr(spec, name)!r}")
    return spec.mu * math.sqrt(spec.omega / (spec.epsilon0 * spec.V))


@dataclass(frozen=True)
class CoherenceState:
    """Populations and lower-triangle coherences in the control-field frame.

    The same record is used for time derivatives returned by the
    right-hand-side functions.
    """

    J11: float = 0.0
    J22: float = 0.0
    J33: float = 0.0
    J13: complex = 0j
    J23: complex = 0j
    J12: complex = 0j

    @property
    def delta13(self) -> float:
        return self.J11 - self.J33

    @property
    def delta23(self) -> float:
        return self.J22 - self.J33

    def trace(self) -> float:
        return self.J11 + self.J22 + self.J33

    @classmethod
    def ground1(cls) -> "CoherenceState":
        """All population in level 1, no coherences."""
        return cls(J11=1.0)

    @classmethod
    def from_amplitudes(cls, c1: complex, c2: complex, c3: complex = 0j) -> "CoherenceState":
        """Pure state c1|1> + c2|2> + c3|3>, with <J_nm> = conj(c_n) * c_m."""
        c1, c2, c3 = complex(c1), complex(c2), complex(c3)
        return cls(
            J11=abs(c1) ** 2,
            J22=abs(c2) ** 2,
            J33=abs(c3) ** 2,
            J13=c1.conjugate() * c3,
            J23=c2.conjugate() * c3,
            J12=c1.conjugate() * c2,
        )

    def as_tuple(self) -> tuple:
        return (self.J11, self.J22, self.J33, self.J13, self.J23, self.J12)

    def max_abs_diff(self, other: "CoherenceState") -> float:
        return max(abs(a - b) for a, b in zip(self.as_tuple(), other.as_tuple()))


@dataclass(frozen=True)
class FieldState:
    """Field amplitudes in the frame rotating with the control frequency.

    a1 = a1x - i*a1y and a2 = a2x - i*a2y. The canonical frame has a1y = 0,
    which is the default; a nonzero ``a1y`` is allowed for cross-checks but
    rejected by the operations that assume the canonical frame.
    """

    a1x: float = 0.0
    a2x: float = 0.0
    a2y: float = 0.0
    a1y: float = 0.0

    @property
    def a1(self) -> complex:
        return complex(self.a1x, -self.a1y)

    @property
    def a2(self) -> complex:
        return complex(self.a2x, -self.a2y)

    @property
    def is_canonical(self) -> bool:
        return self.a1y == 0.0

    def require_canonical(self) -> None:
        if not self.is_canonical:
            raise ContractError(f"control field must be real in the rotating frame (a1y={self.a1y!r})")

"""Bloch-vector picture of the Lambda system.

Each transition pair (13, 23, 12) gets a real three-vector built from its
coherence and the matching population difference. The reduced dynamics below
drop the 1<->2 coherence and all relaxation, leaving two coupled two-level
precessions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import AtomFieldParams, CoherenceState, ContractError, FieldState

PAIRS = ("13", "23", "12")

# Flat real layout shared by every right-hand side and the integrator.
STATE_LAYOUT = ("J11", "J22", "J33", "Jx13", "Jy13", "Jx23", "Jy23", "Jx12", "Jy12")


@dataclass(frozen=True)
class BlochVector:
    pair: str
    Jx: float
    Jy: float
    Jz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.Jx, self.Jy, self.Jz])

    def norm(self) -> float:
        return math.sqrt(self.Jx**2 + self.Jy**2 + self.Jz**2)


@dataclass(frozen=True)
class RabiVector:
    pair: str
    Ox: float
    Oy: float
    Oz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.Ox, self.Oy, self.Oz])


@dataclass(frozen=True)
class RealComponentState:
    """Real components of the three coherences plus the populations.

    Also used as the container for time derivatives. The z components are
    derived from the populations and never stored.
    """

    J11: float = 0.0
    J22: float = 0.0
    J33: float = 0.0
    Jx13: float = 0.0
    Jy13: float = 0.0
    Jx23: float = 0.0
    Jy23: float = 0.0
    Jx12: float = 0.0
    Jy12: float = 0.0

    @property
    def Jz13(self) -> float:
        return self.J11 - self.J33

    @property
    def Jz23(self) -> float:
        return self.J22 - self.J33

    @property
    def Jz12(self) -> float:
        return self.J11 - self.J22

    def to_vector(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in STATE_LAYOUT], dtype=float)

    @classmethod
    def from_vector(cls, y) -> "RealComponentState":
        return cls(*(float(v) for v in y))

    @classmethod
    def from_coherences(cls, s: CoherenceState) -> "RealComponentState":
        return cls(
            s.J11, s.J22, s.J33,
            s.J13.real, s.J13.imag,
            s.J23.real, s.J23.imag,
            s.J12.real, s.J12.imag,
        )

    def to_coherences(self) -> CoherenceState:
        return CoherenceState(
            J11=self.J11,
            J22=self.J22,
            J33=self.J33,
            J13=complex(self.Jx13, self.Jy13),
            J23=complex(self.Jx23, self.Jy23),
            J12=complex(self.Jx12, self.Jy12),
        )

    def z_components(self) -> dict[str, float]:
        return {"Jz12": self.Jz12, "Jz13": self.Jz13, "Jz23": self.Jz23}


def precession_rhs(J: BlochVector, O: RabiVector) -> np.ndarray:
    """dJ/dt = J x Omega."""
    if J.pair != O.pair:
        raise ContractError(f"pair mismatch: Bloch vector {J.pair}, Rabi vector {O.pair}")
    return np.array([
        J.Jy * O.Oz - J.Jz * O.Oy,
        J.Jz * O.Ox - J.Jx * O.Oz,
        J.Jx * O.Oy - J.Jy * O.Ox,
    ])


def bloch_from_coherences(s: CoherenceState) -> dict[str, BlochVector]:
    r = RealComponentState.from_coherences(s)
    return {
        "13": BlochVector("13", r.Jx13, r.Jy13, r.Jz13),
        "23": BlochVector("23", r.Jx23, r.Jy23, r.Jz23),
        "12": BlochVector("12", r.Jx12, r.Jy12, r.Jz12),
    }


def coherences_from_bloch(vectors: dict[str, BlochVector], trace: float = 1.0) -> CoherenceState:
    """Inverse of :func:`bloch_from_coherences`.

    Two population differences fix the populations only up to their sum, so
    the trace has to be supplied.
    """
    z13, z23 = vectors["13"].Jz, vectors["23"].Jz
    J33 = (trace - z13 - z23) / 3.0
    return CoherenceState(
        J11=z13 + J33,
        J22=z23 + J33,
        J33=J33,
        J13=complex(vectors["13"].Jx, vectors["13"].Jy),
        J23=complex(vectors["23"].Jx, vectors["23"].Jy),
        J12=complex(vectors["12"].Jx, vectors["12"].Jy),
    )


def rabi_vectors(p: AtomFieldParams, f: FieldState, t: float) -> dict[str, RabiVector]:
    """Precession vectors of the 1<->3 and 2<->3 transitions at time ``t``.

    The signal transverse part rotates at the field detuning; only the signal
    magnitude is taken from ``f``.
    """
    f.require_canonical()
    a2 = math.hypot(f.a2x, f.a2y)
    phase = p.Delta * t
    return {
        "13": RabiVector("13", 4.0 * p.g1 * f.a1x, 0.0, p.delta1),
        "23": RabiVector(
            "23",
            4.0 * p.g2 * a2 * math.cos(phase),
            4.0 * p.g2 * a2 * math.sin(phase),
            p.delta1 + p.omega21,
        ),
    }


def _reduced_vec(y, f: FieldState, p: AtomFieldParams) -> list[float]:
    _, _, _, x13, y13, x23, y23, _, _ = y
    d13 = y[0] - y[2]
    d23 = y[1] - y[2]
    w23 = p.delta1 + p.omega21
    c1 = p.g1 * f.a1x
    c2x = p.g2 * f.a2x
    c2y = p.g2 * f.a2y

    dx13 = -p.delta1 * y13
    dy13 = p.delta1 * x13 - c1 * d13
    dz13 = 4.0 * c1 * y13 + 2.0 * (c2x * y23 + c2y * x23)
    dx23 = -w23 * y23 - c2y * d23
    dy23 = w23 * x23 - c2x * d23
    dz23 = 2.0 * c1 * y13 + 4.0 * (c2x * y23 + c2y * x23)

    # populations from the two inversion equations, trace held fixed
    dJ33 = -(dz13 + dz23) / 3.0
    return [dz13 + dJ33, dz23 + dJ33, dJ33, dx13, dy13, dx23, dy23, 0.0, 0.0]


def reduced_rhs(s: RealComponentState, f: FieldState, p: AtomFieldParams, t: float = 0.0) -> RealComponentState:
    """Reduced equations with the 1<->2 coherence and all relaxation dropped.

    J12 components are treated as identically zero and get zero derivative.
    ``t`` is accepted for signature symmetry; the signal phase is already in
    ``f``.
    """
    f.require_canonical()
    return RealComponentState.from_vector(_reduced_vec(s.to_vector(), f, p))


def effective_precession_vectors(p: AtomFieldParams, f: FieldState) -> dict[str, RabiVector]:
    """Axes about which the reduced equations actually rotate.

    With the other transition switched off, the reduced equations move the
    rescaled vector (Jx, Jy, Jz/2) as dV/dt = Omega x V with these vectors:
    transverse part 2*g*a rather than 4*g*a, and the signal y component
    entering with a minus sign.
    """
    f.require_canonical()
    return {
        "13": RabiVector("13", 2.0 * p.g1 * f.a1x, 0.0, p.delta1),
        "23": RabiVector("23", 2.0 * p.g2 * f.a2x, -2.0 * p.g2 * f.a2y, p.delta1 + p.omega21),
    }


def precess(J: BlochVector, O: RabiVector, duration: float, dt: float) -> np.ndarray:
    """RK4 solution of dJ/dt = J x Omega for a fixed Omega; rows are (Jx, Jy, Jz)."""
    from .dynamics import time_grid
    from .rk4 import rk4

    if J.pair != O.pair:
        raise ContractError(f"pair mismatch: Bloch vector {J.pair}, Rabi vector {O.pair}")
    omega = O.as_array()
    return rk4(lambda t, y: np.cross(y, omega), J.as_array(), time_grid(0.0, duration, dt))

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lambdatrap.model import (
    AtomFieldParams,
    CoherenceState,
    ContractError,
    CouplingSpec,
    FieldState,
    ParamError,
    coupling_from_dipole,
    validate_params,
)

finite = st.floats(-1e6, 1e6, allow_nan=False)
positive = st.floats(1e-3, 1e3)


@pytest.mark.parametrize(
    "spec, expected",
    [
        (CouplingSpec(mu=0, omega=1, epsilon0=1, V=1), 0.0),
        (CouplingSpec(mu=1, omega=1, epsilon0=1, V=1), 1.0),
        (CouplingSpec(mu=1, omega=1, epsilon0=1, V=4), 0.5),
    ],
)
def test_coupling_from_dipole(spec, expected):
    assert coupling_from_dipole(spec) == expected


@pytest.mark.parametrize("field", ["omega", "epsilon0", "V"])
@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_coupling_rejects_nonpositive(field, bad):
    kwargs = dict(mu=1.0, omega=1.0, epsilon0=1.0, V=1.0)
    kwargs[field] = bad
    with pytest.raises(ParamError, match=field):
        coupling_from_dipole(CouplingSpec(**kwargs))


@given(mu=positive, omega=positive, V=positive, k=positive)
def test_coupling_homogeneity(mu, omega, V, k):
    g = coupling_from_dipole(CouplingSpec(mu, omega, 1.0, V))
    assert coupling_from_dipole(CouplingSpec(k * mu, omega, 1.0, V)) == pytest.approx(k * g, rel=1e-12)
    assert coupling_from_dipole(CouplingSpec(mu, omega, 1.0, k * V)) == pytest.approx(g / math.sqrt(k), rel=1e-12)


def test_validate_params_examples():
    assert validate_params(AtomFieldParams()) == []
    assert validate_params(AtomFieldParams(g1=-1)) == ["g1 negative"]
    errors = validate_params(AtomFieldParams(Gamma13=-0.1, gamma12=-0.1))
    assert errors == ["Gamma13 negative", "gamma12 negative"]


def test_detunings_may_be_negative():
    assert validate_params(AtomFieldParams(delta1=-3, delta2=-1, omega21=-2, Delta=-5)) == []


@given(Delta=finite)
def test_delta_nu_round_trip(Delta):
    p = AtomFieldParams(Delta=Delta)
    assert p.delta_nu() * 2 * math.pi == pytest.approx(Delta, rel=1e-15, abs=1e-300)
    assert p.delta_nu() == Delta / (2 * math.pi)


@given(st.tuples(*[st.floats(-10, 10)] * 3))
def test_population_difference_accessors(pops):
    s = CoherenceState(*pops)
    assert s.delta13 == pops[0] - pops[2]
    assert s.delta23 == pops[1] - pops[2]


def test_from_amplitudes():
    s = CoherenceState.from_amplitudes(0.6, 0.8j)
    assert s.J11 == pytest.approx(0.36)
    assert s.J22 == pytest.approx(0.64)
    assert s.J33 == 0
    assert s.J12 == pytest.approx(0.6 * 0.8j)
    assert s.J13 == 0 and s.J23 == 0
    assert s.trace() == pytest.approx(1.0)


def test_field_state_frames():
    f = FieldState(a1x=2.0, a2x=1.0, a2y=0.5)
    assert f.is_canonical
    assert f.a1 == 2.0
    assert f.a2 == complex(1.0, -0.5)
    g = FieldState(a1x=1.0, a1y=0.3)
    assert not g.is_canonical
    assert g.a1 == complex(1.0, -0.3)
    with pytest.raises(ContractError):
        g.require_canonical()


def test_params_are_immutable():
    p = AtomFieldParams(g1=1.0)
    with pytest.raises(AttributeError):
        p.g1 = 2.0
    assert p.replace(g1=2.0).g1 == 2.0 and p.g1 == 1.0

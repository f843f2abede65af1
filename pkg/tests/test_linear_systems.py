import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadric_backlund.linear_systems import (AuxField, SystemKind, auxfield_from_csv, auxfield_to_csv, integrate,
                                             path_difference, prime_integral)
from quadric_backlund.peterson_seeds import PetersonParams, vacuum_state
from quadric_backlund.quadric_geom import QuadricSpec
from quadric_backlund.sg_family import EquationKind as K, GridSpec, SpectralParam, one_soliton

SPEC = QuadricSpec.hyperbolic_paraboloid(2.0, 1)
G = GridSpec(0.0, 0.0, 0.02, 0.02, 21, 21)


def _init():
    return vacuum_state(PetersonParams(SPEC, 1.0, 1), 0.0, 0.0)


@settings(max_examples=8)
@given(s=st.floats(1.5, 3.0), c=st.floats(-5.0, -3.0))
def test_prime_integral_conserved_and_paths_agree(s, c):
    f = one_soliton(K.HYPERBOLIC_SINH, SpectralParam(s), c, 1, G)
    field = integrate(SystemKind.PARAB_HYP_REAL, f, _init(), SPEC)
    assert np.max(np.abs(prime_integral(SystemKind.PARAB_HYP_REAL, field.states, SPEC))) < 1e-8
    assert path_difference(SystemKind.PARAB_HYP_REAL, f, _init(), SPEC) < 1e-6


def test_vacuum_angle_reproduces_the_seed_state():
    P = PetersonParams(SPEC, 1.0, 1)
    f = one_soliton(K.HYPERBOLIC_SINH, SpectralParam(2.0), -2.0, 1, G).with_values(np.zeros(G.shape))
    field = integrate(SystemKind.PARAB_HYP_REAL, f, _init(), SPEC, substeps=4)
    U, V = G.mesh()
    exact = vacuum_state(P, U, V).as_array()
    assert np.max(np.abs(field.states.as_array() - exact)) < 1e-8


def test_initial_state_must_satisfy_prime_integral():
    bad = _init()
    bad = type(bad)(bad.alpha, bad.beta, bad.lam + 0.5, bad.mu)
    f = one_soliton(K.HYPERBOLIC_SINH, SpectralParam(2.0), -2.0, 1, G)
    with pytest.raises(ValueError):
        integrate(SystemKind.PARAB_HYP_REAL, f, bad, SPEC)


def test_wrong_equation_kind_is_rejected():
    f = one_soliton(K.HYPERBOLIC_SINE, SpectralParam(2.0), 0.0, 1, G)
    with pytest.raises(ValueError):
        integrate(SystemKind.PARAB_HYP_REAL, f, _init(), SPEC)


def test_csv_roundtrip():
    f = one_soliton(K.HYPERBOLIC_SINH, SpectralParam(2.0), -2.0, 1, G)
    field = integrate(SystemKind.PARAB_HYP_REAL, f, _init(), SPEC)
    back = auxfield_from_csv(auxfield_to_csv(field))
    assert isinstance(back, AuxField)
    assert np.allclose(back.states.as_array(), field.states.as_array(), rtol=0, atol=1e-15)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadric_backlund.numerics import central
from quadric_backlund.peterson_seeds import (PetersonParams, peterson_point, peterson_point_ab,
                                             peterson_point_integral, vacuum_state)
from quadric_backlund.quadric_geom import QuadricSpec, bdot, xz_complex, xz_derivatives


@given(e=st.sampled_from([1, -1]), s=st.floats(0.3, 2.0), u=st.floats(-1, 1), v=st.floats(0.2, 1.0))
def test_first_form_is_pulled_back_from_the_quadric(e, s, u, v):
    P = PetersonParams(QuadricSpec.hyperbolic_paraboloid(2.0, e), s, e)
    xu = central(lambda t: peterson_point(P, t, v), u, 1e-4)
    xv = central(lambda t: peterson_point(P, u, t), v, 1e-4)
    st_ = vacuum_state(P, u, v)
    xa, xb = xz_derivatives(P.spec, 0.0, st_.alpha, st_.beta)[:2]
    scale = 1 + np.cosh(s) ** 2
    assert abs(bdot(xu, xu) - bdot(xa, xa) * st_.lam**2) < 1e-6 * scale
    assert abs(bdot(xu, xv) - bdot(xa, xb) * st_.lam * st_.mu) < 1e-6 * scale
    assert abs(bdot(xv, xv) - bdot(xb, xb) * st_.mu**2) < 1e-6 * scale


@settings(max_examples=10)
@given(a=st.floats(-1, 1), b=st.floats(-1, 1), s=st.floats(0.5, 2.0))
def test_quadrature_form_matches_closed_form(a, b, s):
    P = PetersonParams(QuadricSpec.hyperbolic_paraboloid(2.0, 1), s, 1)
    assert np.max(np.abs(peterson_point_integral(P, a, b) - peterson_point_ab(P, a, b))) < 1e-9


def test_large_bending_parameter_recovers_the_quadric():
    P = PetersonParams(QuadricSpec.hyperbolic_paraboloid(2.0, 1), 20.0, 1)
    a, b = np.meshgrid(np.linspace(-1, 1, 9), np.linspace(-1, 1, 9))
    assert np.max(np.abs(peterson_point_ab(P, a, b) - xz_complex(P.spec, 0.0, a, b))) < 1e-6


def test_parameter_validation():
    with pytest.raises(ValueError):
        PetersonParams(QuadricSpec.hyperbolic_paraboloid(2.0, 1), 0.0)
    with pytest.raises(ValueError):
        PetersonParams(QuadricSpec.hyperbolic_paraboloid(2.0, 1), 1.0, 2)

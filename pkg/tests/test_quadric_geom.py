import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from quadric_backlund.quadric_geom import (QuadricKind, QuadricSpec, SurfacePoint, codazzi_residual, confocal_distance,
                                           distinguished_field, fundamental_forms, fundamental_forms_fd, h_function,
                                           ivory_map, bdot, xz_complex)

coord = st.floats(-1.5, 1.5)
eps = st.sampled_from([1, -1])


@given(e=eps, z=st.floats(-2.5, 1.9), a=coord, b=coord)
def test_confocal_member_satisfies_its_equation(e, z, a, b):
    spec = QuadricSpec.hyperbolic_paraboloid(2.0, e)
    assert confocal_distance(spec, z, xz_complex(spec, z, a, b)) < 1e-12


@given(e=eps, z=st.floats(-0.9, 1.9), a=coord, b=coord)
def test_ivory_affinity_lands_on_the_confocal_member(e, z, a, b):
    spec = QuadricSpec.hyperbolic_paraboloid(2.0, e)
    assert np.max(np.abs(ivory_map(spec, z, a, b).complex - xz_complex(spec, z, a, b))) < 1e-12


@settings(max_examples=10)
@given(e=eps, a=st.floats(-1, 1), b=st.floats(-1, 1))
def test_closed_form_fundamental_forms_match_differences(e, a, b):
    spec = QuadricSpec.hyperbolic_paraboloid(2.0, e)
    exact, fd = fundamental_forms(spec, 0.3, a, b), fundamental_forms_fd(spec, 0.3, a, b)
    for name in ("E", "F", "G", "L", "M", "N"):
        assert abs(getattr(exact, name) - getattr(fd, name)) < 1e-6


@given(e=eps, a=st.floats(-1, 1), b=st.floats(-1, 1))
def test_codazzi(e, a, b):
    assume(h_function(QuadricSpec.hyperbolic_paraboloid(2.0, e), a, b) > 0.1)
    assert codazzi_residual(QuadricSpec.hyperbolic_paraboloid(2.0, e), a, b) < 1e-6


@given(e=eps, a=coord, b=coord)
def test_distinguished_field_square(e, a, b):
    spec = QuadricSpec.hyperbolic_paraboloid(2.0, e)
    assume(h_function(spec, a, b) > 0.1)
    v = distinguished_field(spec, a, b)
    assert abs(bdot(v, v) - (1 - e / h_function(spec, a, b))) < 1e-12


def test_surface_point_mask_roundtrip():
    spec = QuadricSpec.hyperbolic_paraboloid(2.0, -1)
    X = xz_complex(spec, 0.5, np.linspace(0, 1, 5), np.linspace(0, 1, 5))
    p = SurfacePoint.from_complex(X)
    assert p.imag_mask == (False, True, False)
    assert np.allclose(p.complex, X)


def test_invalid_quadrics_are_rejected():
    with pytest.raises(ValueError):
        QuadricSpec(QuadricKind.HYPERBOLIC_PARABOLOID, 2.0, -1.0)
    with pytest.raises(ValueError):
        QuadricSpec(QuadricKind.HYPERBOLOID_ONE_SHEET, 3.0, 2.0, 1.0)
    with pytest.raises(ValueError):
        QuadricSpec.hyperbolic_paraboloid(2.0, 0)

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quadric_backlund.sg_family import (EquationKind as K, GridSpec, ScalarField, SpectralParam, backlund_integrate,
                                        backlund_residual, bpt_superpose, field_from_csv, field_to_csv,
                                        one_soliton, pde_residual)

G = GridSpec.square(-1, 1, 0.05)
FINE = GridSpec.square(-0.5, 0.5, 0.025)
sig = st.floats(0.5, 2.5) | st.floats(-2.5, -0.5)


@given(s=sig, c=st.floats(-1, 1))
def test_hsg_soliton_solves_pde(s, c):
    f = one_soliton(K.HYPERBOLIC_SINE, SpectralParam(s), c, 1, FINE)
    assert pde_residual(f).max_abs(interior=True) < 1e-3


@given(phi=st.floats(0.2, 1.3), c=st.floats(-1, 1))
def test_elliptic_soliton_solves_pde(phi, c):
    f = one_soliton(K.ELLIPTIC_SINE, SpectralParam.unit(phi), c, 1, FINE)
    assert pde_residual(f).max_abs(interior=True) < 1e-3


def test_residual_drops_fourfold_when_step_halves():
    r = []
    for h in (0.04, 0.02):
        f = one_soliton(K.HYPERBOLIC_SINE, SpectralParam(2.0), 0.1, 1, GridSpec.square(-1, 1, h))
        r.append(pde_residual(f).max_abs(interior=True))
    assert 3.0 < r[0] / r[1] < 5.0


@given(s=sig, seed=st.floats(-1, 1))
def test_integrated_transform_of_vacuum_satisfies_relations(s, seed):
    g = GridSpec.square(-0.5, 0.5, 0.02)
    f0 = ScalarField(g, np.zeros(g.shape), K.HYPERBOLIC_SINE)
    f1 = backlund_integrate(f0, SpectralParam(s), seed)
    r1, r2 = backlund_residual(f0, f1, SpectralParam(s))
    assert max(r1.max_abs(), r2.max_abs()) < 1e-2 * (1 + abs(s) + 1 / abs(s))
    assert f1.values[0, 0] == pytest.approx(seed)


@given(s1=st.floats(1.5, 3.0), s2=st.floats(3.5, 6.0))
def test_superposition_is_symmetric(s1, s2):
    a, b = SpectralParam(s1), SpectralParam(s2)
    f0 = ScalarField(G, np.zeros(G.shape), K.HYPERBOLIC_SINE)
    f1, f2 = one_soliton(K.HYPERBOLIC_SINE, a, 0.1, 1, G), one_soliton(K.HYPERBOLIC_SINE, b, -0.2, 1, G)
    x, y = bpt_superpose(f0, f1, f2, a, b), bpt_superpose(f0, f2, f1, b, a)
    assert np.max(np.abs(x.values - y.values)[x.valid & y.valid]) < 1e-12


def test_inverse_pair_returns_to_vacuum():
    a, b = SpectralParam(2.0), SpectralParam(-2.0)
    f0 = ScalarField(G, np.zeros(G.shape), K.HYPERBOLIC_SINE)
    f1, f2 = one_soliton(K.HYPERBOLIC_SINE, a, 0.0, 1, G), one_soliton(K.HYPERBOLIC_SINE, b, 0.0, 1, G)
    assert np.max(np.abs(bpt_superpose(f0, f1, f2, a, b).values)) < 1e-12


def test_spectral_parameter_validation():
    with pytest.raises(ValueError):
        SpectralParam(0)
    with pytest.raises(ValueError):
        SpectralParam(2.0).require(K.ELLIPTIC_SINE)
    with pytest.raises(ValueError):
        SpectralParam(1j).require(K.HYPERBOLIC_SINE)


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(0, 0, -0.1, 0.1, 10, 10)
    with pytest.raises(ValueError):
        GridSpec(0, 0, 0.1, 0.1, 2, 10)


@given(c=st.floats(-2, 2))
def test_csv_roundtrip(c):
    f = one_soliton(K.HYPERBOLIC_SINE, SpectralParam(2.0), c, 1, GridSpec.square(0, 0.2, 0.05))
    g = field_from_csv(field_to_csv(f))
    assert g.grid == f.grid and np.array_equal(g.values, f.values) and np.array_equal(g.valid, f.valid)

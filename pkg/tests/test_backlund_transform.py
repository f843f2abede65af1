import numpy as np
import pytest
from hypothesis import given, strategies as st

from quadric_backlund import backlund_transform as bt
from quadric_backlund.quadric_geom import QuadricSpec

SPEC = QuadricSpec.hyperbolic_paraboloid(2.0, 1)
zs = st.floats(0.05, 1.95) | st.floats(-1.95, -0.05)


@given(z=zs)
def test_spectral_identity(z):
    assert bt.spectral_identity_residual(SPEC, z) < 1e-12


@given(z=zs, e1=st.sampled_from([1, -1]), e1p=st.sampled_from([1, -1]))
def test_inverse_transform_negates_the_spectral_parameter(z, e1, e1p):
    p = bt.TransformParams(z, e1, e1p)
    s, s_inv = (bt.spectral_from_confocal(SPEC, q).sigma.real for q in (p, p.inverse()))
    assert abs(s + s_inv) < 1e-14
    # the two sign choices eps1 give reciprocal magnitudes
    other = bt.spectral_from_confocal(SPEC, bt.TransformParams(z, -e1, e1p)).sigma.real
    assert abs(abs(s * other) - 1) < 1e-12


@given(t=st.floats(-3, 3), eps=st.sampled_from([1, -1]), e1=st.sampled_from([1, -1]))
def test_signed_angle_split_roundtrip(t, eps, e1):
    th, s, b = bt.split_signed(bt.signed_angle(np.array([t]), eps, e1), eps)
    assert b[0] == 1 and s[0] == -e1
    assert abs(th[0] - t) < 1e-9 * (1 + abs(t)) or eps == -1 and abs((th[0] - t + np.pi) % (2 * np.pi) - np.pi) < 1e-9


def test_angle_matrix_invariant_is_enforced():
    with pytest.raises(ValueError):
        bt.AngleMatrix(2.0, 0.0, 1)


@given(t1=st.floats(-1, 1), t2=st.floats(-1, 1), s1=st.floats(1.5, 2.5), s2=st.floats(3.0, 5.0))
def test_matrix_superposition_is_symmetric(t1, t2, s1, s2):
    R1, R2 = bt.signed_angle(np.array(t1), -1, 1), bt.signed_angle(np.array(t2), -1, 1)
    D1, D2 = bt.d_from_sigma(s1, 1), bt.d_from_sigma(s2, 1)
    assert np.max(np.abs(bt.bpt_states(R1, R2, D1, D2) - bt.bpt_states(R2, R1, D2, D1))) < 1e-10


def test_singular_superposition_raises():
    R = bt.signed_angle(np.array(0.3), -1, 1)
    D = bt.d_from_sigma(2.0, 1)
    with pytest.raises(np.linalg.LinAlgError):
        bt.bpt_states(R, R, D, D)


def test_inconsistent_triple_inputs_raise():
    R = [bt.signed_angle(np.array(t), -1, 1) for t in (0.1, 0.2, 0.3)]
    D = [bt.d_from_sigma(s, 1) for s in (2.0, 3.0, 5.0)]
    faces = [bt._pair(D[0], D[1], R[0], R[1]) @ bt.angle_matrix(1e-3, -1),
             bt._pair(D[0], D[2], R[0], R[2]), bt._pair(D[1], D[2], R[1], R[2])]
    with pytest.raises(ValueError):
        bt.m3_states(*R, *D, faces=faces)
    assert bt.m3_states(*R, *D).disagreement < 1e-12


def test_zero_confocal_parameter_rejected():
    with pytest.raises(ValueError):
        bt.TransformParams(0.0)


def _leaf(eps, e1, seed=0.3, n=41, h=1e-2):
    from quadric_backlund.linear_systems import SystemKind
    from quadric_backlund.peterson_seeds import PetersonParams, peterson_point, vacuum_state
    from quadric_backlund.sg_family import GridSpec, ScalarField, backlund_integrate
    spec = QuadricSpec.hyperbolic_paraboloid(2.0, eps)
    g = GridSpec(0.0, 0.5, h, h, n, n)
    U, V = g.mesh()
    P = PetersonParams(spec, 1.0, eps)
    kind = SystemKind.PARAB_HYP_REAL if eps == 1 else SystemKind.PARAB_HYP_IMAG
    p = bt.TransformParams(0.7, e1, 1)
    f0 = ScalarField(g, np.zeros(g.shape), kind.equation)
    th = backlund_integrate(f0, bt.spectral_from_confocal(spec, p), seed, eps1=e1).values
    V0 = vacuum_state(P, U, V)
    return spec, g, p, V0, th, bt.algebraic_backlund(V0, th, p, spec), peterson_point(P, U, V)


@pytest.mark.parametrize("eps,e1", [(1, 1), (1, -1), (-1, 1), (-1, -1)])
def test_algebraic_step_invariants(eps, e1):
    from quadric_backlund.linear_systems import SystemKind, prime_integral
    from quadric_backlund.quadric_geom import tangency_residual
    spec, g, p, V0, th, V1, _ = _leaf(eps, e1)
    kind = SystemKind.PARAB_HYP_REAL if eps == 1 else SystemKind.PARAB_HYP_IMAG
    assert np.max(np.abs(prime_integral(kind, V1, spec))) < 1e-8
    assert np.max(np.abs(tangency_residual(spec, p.z, (V0.alpha, V0.beta), (V1.alpha, V1.beta)))) < 1e-8
    back = bt.algebraic_backlund(V1, 0.0, p.inverse(), spec, theta0=th)
    assert np.max(np.abs(back.as_array() - V0.as_array())) < 1e-10
    # real transforms keep the (u, v) orientation; it flips only across the leaf's cuspidal
    # edge, where lambda_1 mu_1 changes sign
    band = (slice(4, -4),) * 2
    s0 = bt.jacobian_sign(V0.alpha, V0.beta, g.du, g.dv)[band]
    s1 = bt.jacobian_sign(V1.alpha, V1.beta, g.du, g.dv)[band]
    assert np.all(s0 * s1 == np.sign(V1.lam * V1.mu / (V0.lam * V0.mu))[band])


@given(angles=st.tuples(*[st.floats(-np.pi, np.pi)] * 3), shift=st.tuples(*[st.floats(-5, 5)] * 3))
def test_leaf_commutes_with_rigid_motions(angles, shift):
    spec, g, p, V0, th, V1, x0 = _leaf(1, 1, n=15)
    a, b, c = angles
    rz = np.array([[np.cos(a), -np.sin(a), 0], [np.sin(a), np.cos(a), 0], [0, 0, 1]])
    ry = np.array([[np.cos(b), 0, np.sin(b)], [0, 1, 0], [-np.sin(b), 0, np.cos(b)]])
    rx = np.array([[1, 0, 0], [0, np.cos(c), -np.sin(c)], [0, np.sin(c), np.cos(c)]])
    rot, t = rz @ ry @ rx, np.array(shift)
    x1 = bt.realize_leaf(x0, g.du, g.dv, V0, 0.0, V1, p, spec)
    moved = bt.realize_leaf(bt.transform_rigid(x0, rot, t), g.du, g.dv, V0, 0.0, V1, p, spec)
    assert np.nanmax(np.abs(moved - bt.transform_rigid(x1, rot, t))) < 1e-10

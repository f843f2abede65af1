import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadric_backlund import pendulum_solitons as pe

A1 = 2.0
A2 = A1 / (1 - A1)
V = np.linspace(0.0, 0.5, 501)


@settings(max_examples=10)
@given(c=st.floats(-1.0, 1.0), th=st.floats(0.3, 0.8), sign=st.sampled_from([1, -1]))
def test_energy_is_conserved(c, th, sign):
    if pe.energy_radicand(th, c) <= 1e-3:
        return
    assert pe.energy_drift_rate(c, th, sign, V) < 1e-10


@given(c1=st.floats(-3.0, -1.0), sign=st.sampled_from([1, -1]))
def test_c_minus_one_is_the_unit_soliton(c1, sign):
    theta = pe.sigma_one_soliton(V, c1, sign)
    p = pe.pendulum_integrate(-1.0, float(theta[0]), int(np.sign(np.gradient(theta, V)[0])), V)
    assert pe.soliton_match(p)[0] < 1e-9


def test_normalized_profile_satisfies_the_reduced_system():
    p = pe.pendulum_integrate(-1.0, 0.5, 1, np.linspace(0, 0.6, 601))
    prof = pe.alpha_profile(p, A1, pe.normalizable_init(p, A1, A2))
    z = pe.reconstruct_zero_soliton(p, prof, A1, A2)
    assert abs(z.constant[0] * z.scale**2 - 1) < 1e-12
    assert pe.reduced_system_residual(z) < 1e-8
    assert z.to_csv().splitlines()[0] == "v,theta,theta_prime,alpha,beta,mu"


@given(c=st.floats(0.0, 1.0), th=st.floats(0.3, 0.8))
def test_constant_cannot_be_normalized_for_nonnegative_c(c, th):
    p = pe.pendulum_integrate(c, th, 1, np.linspace(0, 0.2, 201))
    assert np.linalg.eigvalsh(pe.normalization_form(p, A1, A2))[-1] <= 1e-12
    with pytest.raises(ValueError):
        pe.normalizable_init(p, A1, A2)


def test_theta1_pair_is_compatible():
    f = pe.theta1_transform(-1.0, -2.0, np.linspace(0, 0.2, 41), np.linspace(0.5, 0.7, 41), -0.3)
    assert pe.transform_consistency(f) < 1e-6


@given(a=st.floats(-2, 2), ap=st.floats(-2, 2))
def test_alpha_profile_is_linear_in_its_initial_data(a, ap):
    p = pe.pendulum_integrate(-0.5, 0.6, 1, np.linspace(0, 0.3, 301))
    x, y, s = (pe.alpha_profile(p, A1, init).alpha for init in ((a, ap), (1.0, -0.5), (a + 1.0, ap - 0.5)))
    assert np.max(np.abs(x + y - s)) < 1e-10 * (1 + np.max(np.abs(s)))
    assert np.all(pe.alpha_profile(p, A1, (0.0, 0.0)).alpha == 0)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stfdtd import oracle as o

# frozen reference values (closed-form evaluation, checked by hand where noted)
GAMMA_FIG2, T_FIG2 = -2 / 9, 8 / 9
THETA_R_FIG6, THETA_T_FIG6 = 10.847412564914586, 13.408957213331101
WEDGE = (0.6666666666666667, 3.8719444454094893, 7.976294977581775)


def test_fig2_coefficients():
    pr = o.predict(o.UniformInterfaceProblem(1.0, 2.0, 0.2))
    assert pr.Gamma == pytest.approx(GAMMA_FIG2, abs=1e-14)
    assert pr.T == pytest.approx(T_FIG2, abs=1e-14)
    # normal-incidence Doppler factors (1-0.2)/(1+0.2) and (1-0.2)/(1-0.4)
    assert pr.omega_r / (2 * np.pi) == pytest.approx(2 / 3, rel=1e-14)
    assert pr.omega_t / (2 * np.pi) == pytest.approx(4 / 3, rel=1e-14)


def test_fig6_angles():
    p = o.UniformInterfaceProblem(1.0, np.sqrt(3), -0.3, np.radians(20))
    tr, tt = o.deflection_angles(p)
    assert np.degrees(tr) == pytest.approx(THETA_R_FIG6, abs=1e-10)
    assert np.degrees(tt) == pytest.approx(THETA_T_FIG6, abs=1e-10)
    # caption values, two decimals
    assert round(np.degrees(tr), 2) == 10.85
    assert round(np.degrees(tt), 2) == 13.41


def test_stationary_snell():
    p = o.UniformInterfaceProblem(1.0, np.sqrt(3), 0.0, np.radians(20))
    _, tt = o.deflection_angles(p)
    assert np.degrees(tt) == pytest.approx(np.degrees(np.arcsin(np.sin(np.radians(20)) / np.sqrt(3))))
    assert np.degrees(tt) == pytest.approx(11.39, abs=0.01)


def test_phase_matching_agrees_with_closed_form():
    p = o.UniformInterfaceProblem(1.2, 2.1, -0.25, np.radians(35), 3.0)
    w_r, k_r, w_t, k_t = o.phase_matched_waves(p)
    pr = o.predict(p)
    assert w_r == pytest.approx(pr.omega_r, rel=1e-12)
    assert w_t == pytest.approx(pr.omega_t, rel=1e-12)
    assert -k_r == pytest.approx(pr.k_r[1], rel=1e-12)
    assert k_t == pytest.approx(pr.k_t[1], rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(n1=st.floats(1, 3), n2=st.floats(1, 3), beta=st.floats(-0.25, 0.25),
       th=st.floats(0, 0.6))
def test_dispersion_closure(n1, n2, beta, th):
    p = o.UniformInterfaceProblem(n1, n2, beta, th, 2 * np.pi)
    try:
        pr = o.predict(p)
    except (o.EvanescentTransmission, o.DegenerateDenominator):
        return
    assert np.hypot(*pr.k_r) == pytest.approx(n1 * pr.omega_r, rel=1e-10)
    assert np.hypot(*pr.k_t) == pytest.approx(n2 * pr.omega_t, rel=1e-10)
    # interface invariant w - beta k_z shared by all three waves
    inv = p.omega_i - beta * pr.k_i[1]
    assert pr.omega_r - beta * pr.k_r[1] == pytest.approx(inv, rel=1e-10, abs=1e-10)
    assert pr.omega_t - beta * pr.k_t[1] == pytest.approx(inv, rel=1e-10, abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(n1=st.floats(1, 3), n2=st.floats(1, 3), th=st.floats(0, 1.2))
def test_static_limit_is_fresnel(n1, n2, th):
    p = o.UniformInterfaceProblem(n1, n2, 0.0, th)
    try:
        pr = o.predict(p)
    except o.EvanescentTransmission:
        assert n1 * np.sin(th) > n2
        return
    tt = np.arcsin(n1 * np.sin(th) / n2)
    c1, c2 = n1 * np.cos(th), n2 * np.cos(tt)
    assert pr.Gamma == pytest.approx((c1 - c2) / (c1 + c2), abs=1e-12)
    assert pr.T == pytest.approx(2 * c1 / (c1 + c2), abs=1e-12)
    assert pr.omega_r == pytest.approx(p.omega_i, rel=1e-12)


def test_static_energy_balance():
    n1, n2, th = 1.0, 1.7, 0.4
    pr = o.predict(o.UniformInterfaceProblem(n1, n2, 0.0, th))
    flux = pr.Gamma**2 + (n2 / n1) * np.cos(pr.theta_t) / np.cos(th) * pr.T**2
    assert flux == pytest.approx(1.0, abs=1e-12)


def test_luminal_denominator_raises():
    with pytest.raises(o.DegenerateDenominator):
        o.scattering_coeffs(o.UniformInterfaceProblem(1.0, 2.0, 0.5))


@given(b=st.floats(-0.95, 0.95), e=st.floats(-5, 5), by=st.floats(-5, 5))
def test_frame_round_trip(b, e, by):
    f = {"Ex": e, "By": by, "Dx": 2 * e, "Hy": 0.5 * by}
    back = o.lorentz_boost(o.lorentz_boost(f, b), -b)
    for k in f:
        assert back[k] == pytest.approx(f[k], abs=1e-12 * max(1, abs(f[k])) * 10)


def test_comoving_frequency_is_invariant_on_interface():
    p = o.UniformInterfaceProblem(1.0, 2.0, 0.3)
    pr = o.predict(p)
    wi = o.comoving_frequency(p.omega_i, pr.k_i[1], p.beta)
    assert o.comoving_frequency(pr.omega_t, pr.k_t[1], p.beta) == pytest.approx(wi)


def test_wedge_cascade_frozen():
    ev = o.wedge_cascade((1, 3, 6), 0.2, -0.3, 1.0)
    assert [e["interface"] for e in ev] == ["I", "II", "I"]
    assert [e["omega"] for e in ev] == pytest.approx(WEDGE, rel=1e-12)
    # contra-moving far wall compresses the pulse on every bounce
    assert ev[2]["omega"] / ev[1]["omega"] > 1 and ev[1]["omega"] > 1


def test_gaussian_spectrum_norm():
    ky = np.linspace(-4, 4, 401)
    kz = np.linspace(-4, 4, 401)
    K, Y = np.meshgrid(kz, ky, indexing="ij")
    F = o.gaussian_spectrum(Y, K, 2.0, 3.0, 0.0, 0.0)
    num = np.sum(F**2) * (ky[1] - ky[0]) * (kz[1] - kz[0])
    assert num == pytest.approx(o.gaussian_spectrum_norm(2.0, 3.0), rel=1e-6)


class TestAccelerated:
    p = o.AcceleratedInterfaceProblem(1.0, np.sqrt(3), -0.2, 0.5, 13.3)

    def test_trajectory(self):
        assert self.p.position(0.0) == pytest.approx(13.3)
        assert self.p.velocity(0.0) == pytest.approx(0.5)
        # proper acceleration: gamma^3 dv/dt = a'
        h = 1e-5
        t = 3.0
        v = self.p.velocity(t)
        dv = (self.p.velocity(t + h) - self.p.velocity(t - h)) / (2 * h)
        assert dv / (1 - v * v) ** 1.5 == pytest.approx(-0.2, rel=1e-6)

    def test_limit_factors_match_uniform_doppler(self):
        r, t = o.accelerated_limit_factors(self.p, 0.0)
        pr = o.predict(o.UniformInterfaceProblem(1.0, np.sqrt(3), 0.5))
        assert r == pytest.approx(pr.Gamma, rel=1e-12)
        assert t == pytest.approx(pr.T, rel=1e-12)

    def test_small_acceleration_reduces_to_uniform(self):
        p = o.AcceleratedInterfaceProblem(1.0, 2.0, -1e-9, 0.2, 5.0)
        inc = lambda z, t: np.cos(2 * np.pi * (z - t))
        zs, ts = np.array([1.0, 2.0]), np.array([20.0, 21.3])
        er, _ = o.accelerated_scattered_fields(p, inc, zs, ts, t_min=-50)
        pr = o.predict(o.UniformInterfaceProblem(1.0, 2.0, 0.2))
        # uniform-motion reflected wave through the same emission events
        expect = []
        for z, t in zip(zs, ts):
            te = (z + t - 5.0) / 1.2
            expect.append(pr.Gamma * inc(5.0 + 0.2 * te, te))
        assert er == pytest.approx(expect, abs=1e-6)

    def test_wrong_side_is_zero(self):
        inc = lambda z, t: 1.0
        # (14, 5) is just inside medium 2, (10, 5) in medium 1
        er, et = o.accelerated_scattered_fields(self.p, inc, [14.0, 10.0], [5.0, 5.0], t_min=-30)
        assert er[0] == 0.0 and et[0] != 0.0
        assert et[1] == 0.0 and er[1] != 0.0

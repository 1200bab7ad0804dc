import numpy as np
import pytest

from stfdtd.conventional import NonFiniteField
from stfdtd.diagnostics import LineSource, PointProbe, SourceSpec
from stfdtd.grid import GridSpec, InterfaceTrajectory, MaterialMap
from stfdtd.hybrid import (JumpClosure, Simulation, SourceInTransitionRegion, b_average,
                           energy_growth, from_starred, to_starred, uniform_hybrid_step)
from stfdtd.validation import fig2_coefficients, reduction_error


def test_starred_fields_reduce_at_rest():
    rng = np.random.default_rng(0)
    D, By = rng.standard_normal(20), rng.standard_normal(19)
    E, Hy = from_starred(D, By, 2.0)
    k = np.arange(3, 15)
    Es, Hs = to_starred(E, By, Hy, D, k, 0.0)
    assert np.array_equal(Es, E[k]) and np.array_equal(Hs, Hy[k])


def test_b_average_upwind_side():
    By = np.arange(10.0)
    assert b_average(By, np.array([5]), True)[0] == 3.5
    assert b_average(By, np.array([5]), False)[0] == 5.5


def test_jump_closure_limits():
    cl = JumpClosure(np.array([10.3]), np.array([0.2]), 1.0, 4.0, 1.0, 1.0)
    # nodes far from the interface: eps unchanged
    assert cl.node_eps(np.array([[5]]))[0, 0] == pytest.approx(1.0)
    assert cl.node_eps(np.array([[15]]))[0, 0] == pytest.approx(4.0)
    # no shift of H away from the interface cell
    assert cl.cell_h_shift(np.array([[5]]), np.array([[1.0]]), np.array([[1.0]]))[0, 0] == 0.0
    rest = JumpClosure(np.array([10.3]), np.array([0.0]), 1.0, 4.0, 1.0, 1.0)
    assert rest.cell_h_shift(np.array([[10]]), np.array([[1.0]]), np.array([[4.0]]))[0, 0] == 0.0


@pytest.mark.parametrize("ny", [1, 12])
def test_reduction_at_rest(ny):
    assert reduction_error(ny, steps=200) <= 1e-12


def test_uniform_step_at_rest_is_yee():
    rng = np.random.default_rng(1)
    D, B = rng.standard_normal(32), rng.standard_normal(32)
    Dn, Bn = uniform_hybrid_step(D, B, 0.5, 2.0, 0.0)
    Bref = B - 0.5 * (np.roll(D / 2, -1) - D / 2)
    Dref = D - 0.5 * (Bref - np.roll(Bref, 1))
    assert np.allclose(Bn, Bref) and np.allclose(Dn, Dref)


def test_energy_growth_brackets():
    assert energy_growth(1.5, 0.2, 0.95 * 1.5 / 1.3, steps=2000) < 1.01
    assert energy_growth(1.5, 0.2, 1.05 * 1.5 / 1.3, steps=2000) > 10


def test_fig2_coarse_hybrid_close_to_moving_values():
    r = fig2_coefficients(1)
    assert r["Gamma"] == pytest.approx(-2 / 9, rel=0.07)
    assert r["T"] == pytest.approx(8 / 9, rel=0.03)


def test_fig2_coarse_conventional_gives_stationary_values():
    r = fig2_coefficients(1, "conventional_only", "E")
    assert r["Gamma"] == pytest.approx(-1 / 3, rel=0.02)
    assert r["T"] == pytest.approx(2 / 3, rel=0.02)


def _setup(S=0.5, src_at=20, steps=50, beta=0.2):
    g = GridSpec(120, 1, 1.0, 1.0, S, steps)
    mat = MaterialMap([(1, 1), (4, 1)], [InterfaceTrajectory("uniform", 60.0, beta)])
    return g, mat, LineSource(SourceSpec(tau=5.0, T0=20.0, location=src_at))


def test_source_inside_band_rejected():
    g, mat, src = _setup(src_at=60)
    with pytest.raises(SourceInTransitionRegion):
        Simulation(g, mat, [src])


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_unstable_run_raises():
    g, mat, src = _setup(S=1.5, steps=3000, beta=0.0)
    sim = Simulation(g, mat, [src], check_every=10)
    with pytest.raises(NonFiniteField):
        sim.run()


def test_linearity():
    out = []
    for E0 in (1.0, 2.0):
        g = GridSpec(300, 1, 1.0, 1.0, 0.5, 500)
        mat = MaterialMap([(1, 1), (4, 1)], [InterfaceTrajectory("uniform", 100.0, 0.2)])
        pr = PointProbe("p", 20)
        Simulation(g, mat, [LineSource(SourceSpec(E0=E0, tau=8.0, T0=30.0, location=30))], [pr]).run()
        out.append(pr.array()[1])
    assert np.allclose(out[1], 2 * out[0], rtol=1e-12, atol=1e-15)


def test_deterministic():
    res = []
    for _ in range(2):
        g = GridSpec(200, 1, 1.0, 1.0, 0.5, 300)
        mat = MaterialMap([(1, 1), (4, 1)], [InterfaceTrajectory("uniform", 80.0, -0.3)])
        sim = Simulation(g, mat, [LineSource(SourceSpec(tau=8.0, T0=30.0, location=30))])
        sim.run()
        res.append(sim.state.D.copy())
    assert np.array_equal(res[0], res[1])

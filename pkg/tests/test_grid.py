import numpy as np
import pytest

from stfdtd.grid import (GridSpec, InterfaceTrajectory, MaterialMap, OverlappingTransitionRegions,
                         ValidationError, check_courant, classify_cells, epsilon_field,
                         eval_epsilon, medium_index)


def test_gridspec_validation():
    g = GridSpec(10, 1, 0.5, 0.5, 0.25, 3)
    assert g.S == 0.5
    assert g.z[-1] == 4.5
    with pytest.raises(ValidationError):
        GridSpec(0, 1, 1, 1, 1)
    with pytest.raises(ValidationError):
        GridSpec(10, 1, 1, 1, -1)


def test_trajectories():
    u = InterfaceTrajectory("uniform", 10.0, -0.3)
    assert u.position([0.0], 5.0)[0] == pytest.approx(8.5)
    c = InterfaceTrajectory("curved_parabolic", 5.0, 0.1, shape_coeffs=(0, 0, 0.5), y0=2.0)
    assert c.position([2.0, 4.0], 0.0) == pytest.approx([5.0, 7.0])
    a = InterfaceTrajectory("accelerated", 0.0, a_prime=0.1)
    assert a.velocity([0.0], 0.0)[0] == 0.0
    assert 0 < a.velocity([0.0], 50.0)[0] < 1
    p = InterfaceTrajectory("piecewise_linear", 0.0, segments=((0.0, 0.5), (2.0, -0.5)))
    assert p.position([0.0], 3.0)[0] == pytest.approx(0.5)
    assert p.velocity([0.0], 3.0)[0] == -0.5


@pytest.mark.parametrize("kw", [dict(kind="warp"), dict(beta=1.0), dict(kind="accelerated"),
                                dict(kind="accelerated", a_prime=1.0, beta0=-1.0),
                                dict(kind="piecewise_linear"),
                                dict(kind="piecewise_linear", segments=((1.0, 0.1),))])
def test_trajectory_rejects(kw):
    with pytest.raises(ValidationError):
        InterfaceTrajectory(**kw)


def test_material_map_counts():
    with pytest.raises(ValidationError):
        MaterialMap([(1, 1), (2, 1)], [])
    with pytest.raises(ValidationError):
        MaterialMap([(0.5, 1)], [])


def test_eval_epsilon_boundary_rule():
    g = GridSpec(20, 1, 1.0, 1.0, 0.5)
    mat = MaterialMap([(1, 1), (4, 1)], [InterfaceTrajectory("uniform", 10.0, 0.2)])
    # node exactly on the interface belongs to the left medium
    assert eval_epsilon(mat, g, 10, 0, 0) == 1.0
    assert eval_epsilon(mat, g, 11, 0, 0) == 4.0
    # at step 10 (t = 5) the interface is at 11
    assert eval_epsilon(mat, g, 11, 0, 10) == 1.0
    eps = epsilon_field(mat, g, 0)
    assert eps.shape == (20, 1)
    assert eps[:11].max() == 1.0 and eps[11:].min() == 4.0


def test_medium_index_three_media():
    mat = MaterialMap([(1, 1), (3, 1), (6, 1)],
                      [InterfaceTrajectory("uniform", 2.0), InterfaceTrajectory("uniform", 5.0)])
    idx = medium_index(mat, [0.0, 3.0, 7.0], [0.0], 0.0)
    assert idx[:, 0].tolist() == [0, 1, 2]


def test_classify_cells_band():
    g = GridSpec(40, 1, 1.0, 1.0, 0.5)
    mat = MaterialMap([(1, 1), (4, 1)], [InterfaceTrajectory("uniform", 20.4, 0.2)])
    r = classify_cells(mat, g, 0, half=2)
    assert r.kc[0, 0] == 20
    assert (r.k_min[0, 0], r.k_max[0, 0]) == (18, 23)
    assert r.width_cells == 5
    assert r.hybrid_mask(40)[:, 0].sum() == 6


def test_classify_overlap_and_edge():
    g = GridSpec(40, 1, 1.0, 1.0, 0.5)
    close = MaterialMap([(1, 1), (2, 1), (3, 1)],
                        [InterfaceTrajectory("uniform", 15.0), InterfaceTrajectory("uniform", 19.0)])
    with pytest.raises(OverlappingTransitionRegions):
        classify_cells(close, g, 0)
    edge = MaterialMap([(1, 1), (2, 1)], [InterfaceTrajectory("uniform", 2.0)])
    with pytest.raises(OverlappingTransitionRegions):
        classify_cells(edge, g, 0)


def test_check_courant():
    mat = MaterialMap([(1, 1), (4, 1)], [InterfaceTrajectory("uniform", 20.0, 0.2)])
    ok = GridSpec(40, 1, 1.0, 1.0, 0.8, 10)
    assert check_courant(ok, mat) == pytest.approx(1 / 1.2)
    bad = GridSpec(40, 1, 1.0, 1.0, 0.9, 10)
    with pytest.raises(ValidationError, match="S_max"):
        check_courant(bad, mat)
    assert check_courant(bad, mat, unsafe=True) == pytest.approx(1 / 1.2)
    two_d = GridSpec(40, 8, 1.0, 1.0, 0.5, 10)
    assert check_courant(two_d, mat) == pytest.approx(1 / 1.2 / np.sqrt(2))

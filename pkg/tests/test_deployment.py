import numpy as np
import pytest

from beamsched.config import SystemConfig
from beamsched.deployment import Deployment, distance, generate_deployment


def test_aps_on_a_line():
    cfg = SystemConfig(num_aps_N=2, inter_cell_distance=400.0)
    dep = generate_deployment(cfg, np.random.default_rng(0))
    np.testing.assert_array_equal(dep.ap_positions, [[0.0, 0.0], [400.0, 0.0]])


def test_single_ue_inside_cell():
    cfg = SystemConfig(num_aps_N=1, num_ues_per_ap_M=1)
    for seed in range(20):
        dep = generate_deployment(cfg, np.random.default_rng(seed))
        assert dep.ue_positions.shape == (1, 1, 2)
        assert 1.0 <= np.linalg.norm(dep.ue_positions[0, 0]) <= cfg.radius


def test_same_seed_same_deployment():
    cfg = SystemConfig(num_aps_N=2, num_ues_per_ap_M=5)
    a = generate_deployment(cfg, np.random.default_rng(99))
    b = generate_deployment(cfg, np.random.default_rng(99))
    assert a.ap_positions.tobytes() == b.ap_positions.tobytes()
    assert a.ue_positions.tobytes() == b.ue_positions.tobytes()


@pytest.mark.parametrize("seed", range(10))
def test_containment_and_floor(seed):
    cfg = SystemConfig(num_aps_N=10, num_ues_per_ap_M=3, inter_cell_distance=200.0)
    dep = generate_deployment(cfg, np.random.default_rng(seed))
    assert dep.ap_positions.shape == (10, 2)
    assert dep.ue_positions.shape == (10, 3, 2)
    d = dep.distances()
    own = d[np.arange(10), np.arange(10)]
    assert own.max() <= cfg.radius
    assert d.min() >= 1.0


def test_floor_holds_with_tiny_cell():
    # radius barely above the floor forces many redraws
    cfg = SystemConfig(num_aps_N=1, num_ues_per_ap_M=4, cell_radius=1.05)
    dep = generate_deployment(cfg, np.random.default_rng(3))
    assert dep.distances().min() >= 1.0


def test_distance_345():
    dep = Deployment(np.array([[0.0, 0.0]]), np.array([[[3.0, 4.0]]]))
    assert distance(dep, 0, (0, 0)) == 5.0
    assert distance(dep, 0, (0, 0)) == distance(dep, 0, (0, 0))


def test_cross_link_distance_matches_coordinates():
    cfg = SystemConfig(num_aps_N=3, num_ues_per_ap_M=4)
    dep = generate_deployment(cfg, np.random.default_rng(5))
    ap_x, ap_y = dep.ap_positions[2]
    ue_x, ue_y = dep.ue_positions[1, 3]
    expected = ((ue_x - ap_x) ** 2 + (ue_y - ap_y) ** 2) ** 0.5
    assert distance(dep, 2, (1, 3)) == pytest.approx(expected, rel=1e-15)
    assert dep.distances()[2, 1, 3] == pytest.approx(expected, rel=1e-15)


def test_distance_index_errors():
    dep = Deployment(np.zeros((1, 2)), np.ones((1, 2, 2)))
    with pytest.raises(IndexError):
        distance(dep, 1, (0, 0))
    with pytest.raises(IndexError):
        distance(dep, 0, (0, 2))


def test_rejects_empty_network():
    # SystemConfig already refuses these; bypass it to reach the generator's own check
    cfg = SystemConfig()
    object.__setattr__(cfg, "num_aps_N", 0)
    with pytest.raises(ValueError):
        generate_deployment(cfg, np.random.default_rng(0))

import math

import numpy as np
import pytest

from pwesim.geometry import Circle, Vec2
from pwesim.scene import (Antenna, HsfPanel, Scene, build_default_scene,
                          fan_directions, mirror_panel, rx_accepts,
                          subunit_center, tx_ray_fan)

DEG = math.pi / 180.0


@pytest.fixture(scope="module")
def scene():
    return build_default_scene()


class TestDefaultScene:
    def test_corridor_box(self, scene):
        assert scene.corridor_x_min == -1.0
        assert scene.corridor_x_max == 4.0
        assert scene.floor_y == 0.0
        assert scene.ceiling_height == 3.0

    def test_antennas(self, scene):
        assert scene.tx.position == Vec2(0.0, 1.0)
        assert scene.tx.boresight == Vec2(0.0, 1.0)
        assert scene.tx.beam_halfwidth == pytest.approx(15.0 * DEG)
        assert scene.tx.gain == 1.0
        assert scene.rx.position == Vec2(3.6, 2.4)
        assert scene.rx.beam_halfwidth == pytest.approx(30.0 * DEG)
        # receiver tilted 77 degrees counter-clockwise from straight up
        tilt = 77.0 * DEG
        assert scene.rx.boresight.x == pytest.approx(-math.sin(tilt))
        assert scene.rx.boresight.y == pytest.approx(math.cos(tilt))

    def test_aperture(self, scene):
        assert scene.rx_aperture.center == scene.rx.position
        assert scene.rx_aperture.radius == 0.08

    def test_ceiling_panel_is_mirror(self, scene):
        panel = scene.ceiling
        assert panel.subunit_count == 5000
        assert panel.y_height == 3.0
        assert panel.normal_at(0) == Vec2(0.0, -1.0)
        assert panel.normal_at(4999) == Vec2(0.0, -1.0)


class TestHsfPanel:
    def test_subunit_centers(self, scene):
        panel = scene.ceiling
        c0 = subunit_center(panel, 0)
        assert c0.x == pytest.approx(-0.9995, abs=1e-12)
        assert c0.y == 3.0
        mid = subunit_center(panel, 2500)
        assert mid.x == pytest.approx(1.5005, abs=1e-12)

    def test_centers_strictly_increasing(self, scene):
        panel = scene.ceiling
        xs = [subunit_center(panel, i).x for i in range(0, 5000, 500)]
        steps = np.diff(xs)
        assert np.all(steps > 0)
        assert subunit_center(panel, 11).x - subunit_center(panel, 10).x \
            == pytest.approx(0.001, abs=1e-12)

    def test_center_out_of_range(self, scene):
        with pytest.raises(IndexError):
            subunit_center(scene.ceiling, 5000)
        with pytest.raises(IndexError):
            subunit_center(scene.ceiling, -1)

    def test_index_at_clips(self, scene):
        panel = scene.ceiling
        assert panel.index_at(-1.0) == 0
        assert panel.index_at(-5.0) == 0
        assert panel.index_at(4.0) == 4999
        assert panel.index_at(-0.9995) == 0
        assert panel.index_at(1.5005) == 2500

    def test_count_follows_span(self):
        panel = mirror_panel(3.0, 0.0, 1.0, 0.3)  # 1 / 0.3 -> 4 subunits
        assert panel.subunit_count == 4

    def test_normal_count_must_match(self):
        with pytest.raises(ValueError):
            HsfPanel(3.0, 0.0, 1.0, 0.5, [Vec2(0.0, -1.0)])

    def test_normals_must_be_unit_and_downward(self):
        with pytest.raises(ValueError):
            HsfPanel(3.0, 0.0, 1.0, 0.5,
                     [Vec2(0.0, -2.0), Vec2(0.0, -1.0)])
        with pytest.raises(ValueError):
            HsfPanel(3.0, 0.0, 1.0, 0.5, [Vec2(0.0, 1.0), Vec2(0.0, -1.0)])

    def test_normals_array_read_only(self, scene):
        arr = scene.ceiling.normals_array()
        with pytest.raises(ValueError):
            arr[0, 0] = 5.0


class TestSceneValidation:
    def test_user_height_must_be_inside(self, scene):
        with pytest.raises(ValueError):
            Scene(ceiling=scene.ceiling, floor_y=0.0, corridor_x_min=-1.0,
                  corridor_x_max=4.0, tx=Antenna(Vec2(0.0, 3.5),
                                                 Vec2(0.0, 1.0), 0.25),
                  rx=scene.rx, rx_aperture=scene.rx_aperture,
                  user_height=3.5, ceiling_height=3.0)

    def test_aperture_must_be_inside(self, scene):
        with pytest.raises(ValueError):
            Scene(ceiling=scene.ceiling, floor_y=0.0, corridor_x_min=-1.0,
                  corridor_x_max=4.0, tx=scene.tx, rx=scene.rx,
                  rx_aperture=Circle(Vec2(9.0, 2.4), 0.05),
                  user_height=1.0, ceiling_height=3.0)


class TestAntenna:
    def test_boresight_must_be_unit(self):
        with pytest.raises(ValueError):
            Antenna(Vec2(0.0, 0.0), Vec2(0.0, 2.0), 0.1)

    def test_halfwidth_range(self):
        with pytest.raises(ValueError):
            Antenna(Vec2(0.0, 0.0), Vec2(0.0, 1.0), -0.1)
        with pytest.raises(ValueError):
            Antenna(Vec2(0.0, 0.0), Vec2(0.0, 1.0), math.pi + 0.1)

    def test_gain_nonnegative(self):
        with pytest.raises(ValueError):
            Antenna(Vec2(0.0, 0.0), Vec2(0.0, 1.0), 0.1, gain=-1.0)


class TestFan:
    def test_directions_span_the_cone(self):
        dirs = fan_directions(Vec2(0.0, 1.0), 15.0 * DEG, 3)
        assert dirs.shape == (3, 2)
        # middle ray on boresight, edges at exactly +-15 degrees
        assert dirs[1, 0] == pytest.approx(0.0, abs=1e-12)
        assert dirs[1, 1] == pytest.approx(1.0, abs=1e-12)
        assert dirs[0, 0] == pytest.approx(math.sin(15.0 * DEG), abs=1e-12)
        assert dirs[2, 0] == pytest.approx(-math.sin(15.0 * DEG), abs=1e-12)
        angles = np.arctan2(dirs[:, 1], dirs[:, 0])
        assert np.all(np.diff(angles) > 0)  # sweeping in increasing angle

    def test_directions_are_unit(self):
        dirs = fan_directions(Vec2(0.6, 0.8), 0.3, 101)
        norms = np.hypot(dirs[:, 0], dirs[:, 1])
        assert np.max(np.abs(norms - 1.0)) < 1e-12

    def test_needs_two_rays(self):
        with pytest.raises(ValueError):
            fan_directions(Vec2(0.0, 1.0), 0.1, 1)

    def test_ray_fan_power_split(self, scene):
        rays = tx_ray_fan(scene, 0.25, 11, total_power=0.1)
        assert len(rays) == 11
        assert all(r.origin == Vec2(0.25, 1.0) for r in rays)
        assert all(r.power == 0.1 / 11 for r in rays)
        total = math.fsum(r.power for r in rays)
        assert total == pytest.approx(0.1, rel=1e-12)

    def test_ray_fan_rejects_negative_power(self, scene):
        with pytest.raises(ValueError):
            tx_ray_fan(scene, 0.0, 5, total_power=-1.0)


class TestRxAccepts:
    def test_arrival_along_boresight(self, scene):
        assert rx_accepts(scene, -scene.rx.boresight)

    def test_edge_of_cone(self, scene):
        tilt = 77.0 * DEG
        inside = tilt + 29.9 * DEG  # effective arrival 29.9 deg off axis
        outside = tilt + 30.1 * DEG
        assert rx_accepts(scene, Vec2(math.sin(inside), -math.cos(inside)))
        assert not rx_accepts(scene, Vec2(math.sin(outside),
                                          -math.cos(outside)))

    def test_zero_width_cone(self, scene):
        rx = Antenna(scene.rx.position, scene.rx.boresight, 0.0)
        narrow = Scene(ceiling=scene.ceiling, floor_y=0.0,
                       corridor_x_min=-1.0, corridor_x_max=4.0,
                       tx=scene.tx, rx=rx, rx_aperture=scene.rx_aperture,
                       user_height=1.0, ceiling_height=3.0)
        assert rx_accepts(narrow, -rx.boresight)
        off = 1e-3
        tilt = 77.0 * DEG + off
        assert not rx_accepts(narrow, Vec2(math.sin(tilt), -math.cos(tilt)))

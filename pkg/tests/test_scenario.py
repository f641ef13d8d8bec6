import json

import numpy as np
import pytest

from dirsim import (
    ConfigError,
    ScenarioConfig,
    build_topology,
    load_config,
    path_loss,
    place_irs_semicircle,
)


class TestPathLoss:
    def test_reference_distance_returns_c0(self):
        # At d = d0 the distance factor is exactly 1 for any exponent.
        for alpha in (1.0, 2.0, 4.5):
            assert path_loss(3.0, alpha, c0_db=7.0, d0=3.0) == 10.0 ** 0.7

    def test_decade_scaling(self):
        assert path_loss(10.0, 2.0, c0_db=0.0, d0=1.0) == pytest.approx(1e-2, rel=1e-12)

    def test_multiplicative_in_distance(self):
        # (d0/(d1*d2/d0))^a == (d0/d1)^a * (d0/d2)^a
        for alpha in (2.0, 2.2, 4.5):
            lhs = path_loss(5.0 * 7.0, alpha)
            rhs = path_loss(5.0, alpha) * path_loss(7.0, alpha)
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_strictly_decreasing(self):
        ds = np.linspace(0.5, 100.0, 50)
        vals = [path_loss(d, 2.2) for d in ds]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_nonpositive_distance_rejected(self):
        with pytest.raises(ValueError):
            path_loss(0.0, 2.0)
        with pytest.raises(ValueError):
            path_loss(-1.0, 2.0)
        with pytest.raises(ValueError):
            path_loss(1.0, 2.0, d0=0.0)


class TestSemicirclePlacement:
    REGION = (900.0, 1100.0, 900.0, 1100.0)

    def test_circumscribing_circle_geometry(self):
        pts = place_irs_semicircle(5, self.REGION)
        center = np.array([1000.0, 1000.0])
        radii = np.hypot(*(pts - center).T)
        np.testing.assert_allclose(radii, np.sqrt(2) * 100.0, rtol=1e-9)

    def test_equidistant_from_center(self):
        pts = place_irs_semicircle(9, self.REGION)
        radii = np.hypot(pts[:, 0] - 1000.0, pts[:, 1] - 1000.0)
        assert np.ptp(radii) / radii.mean() < 1e-9

    def test_single_point_is_midpoint(self):
        pt = place_irs_semicircle(1, self.REGION)[0]
        # Midpoint of the origin-facing half: on the segment center -> origin.
        direction = pt - np.array([1000.0, 1000.0])
        assert direction[0] < 0 and direction[1] < 0
        assert abs(direction[0] - direction[1]) < 1e-9

    def test_four_points_span_half_circle(self):
        pts = place_irs_semicircle(4, self.REGION)
        assert pts.shape == (4, 2)
        angles = np.arctan2(pts[:, 1] - 1000.0, pts[:, 0] - 1000.0)
        spacings = np.diff(np.sort(np.unwrap(angles)))
        np.testing.assert_allclose(spacings, np.pi / 3.0, rtol=1e-9)

    def test_degenerate_region_rejected(self):
        with pytest.raises(ValueError):
            place_irs_semicircle(4, (0.0, 0.0, 0.0, 1.0))


class TestTopology:
    def test_normalization_switch(self):
        cfg = ScenarioConfig(normalize_pathloss=True)
        topo = build_topology(cfg)
        assert topo.beta_f_x == 1.0 and topo.beta_f_y == 1.0
        np.testing.assert_array_equal(topo.beta_g_x, 1.0)
        np.testing.assert_array_equal(topo.beta_d_y, 1.0)

    def test_same_seed_bit_identical(self):
        cfg = ScenarioConfig()
        a, b = build_topology(cfg), build_topology(cfg)
        np.testing.assert_array_equal(a.ue_positions_x, b.ue_positions_x)
        np.testing.assert_array_equal(a.beta_d_x, b.beta_d_x)
        np.testing.assert_array_equal(a.beta_g_y, b.beta_g_y)

    def test_different_seed_differs(self):
        a = build_topology(ScenarioConfig(master_seed=1))
        b = build_topology(ScenarioConfig(master_seed=2))
        assert not np.array_equal(a.ue_positions_x, b.ue_positions_x)

    def test_ue_counts(self):
        topo = build_topology(ScenarioConfig(num_ues_x=10, num_ues_y=10))
        assert topo.ue_positions_x.shape == (10, 2)
        assert topo.ue_positions_y.shape == (10, 2)
        assert len(topo.beta_d_x) == 10 and len(topo.beta_g_y) == 10

    def test_exponents_applied_per_link_type(self):
        cfg = ScenarioConfig()
        topo = build_topology(cfg)
        bs_x = np.array(cfg.bs_x_pos)
        d_bs_irs = np.mean(np.hypot(*(topo.irs_positions - bs_x).T))
        assert topo.beta_f_x == pytest.approx((1.0 / d_bs_irs) ** 2.0, rel=1e-12)
        d_direct = np.hypot(*(topo.ue_positions_x[0] - bs_x))
        assert topo.beta_d_x[0] == pytest.approx((1.0 / d_direct) ** 4.5, rel=1e-12)
        d_irs_ue = np.mean(np.hypot(*(topo.irs_positions - topo.ue_positions_x[0]).T))
        assert topo.beta_g_x[0] == pytest.approx((1.0 / d_irs_ue) ** 2.2, rel=1e-12)

    def test_ue_positions_inside_region(self):
        cfg = ScenarioConfig()
        topo = build_topology(cfg)
        xmin, xmax, ymin, ymax = cfg.ue_region
        for pts in (topo.ue_positions_x, topo.ue_positions_y):
            assert np.all((pts[:, 0] >= xmin) & (pts[:, 0] <= xmax))
            assert np.all((pts[:, 1] >= ymin) & (pts[:, 1] <= ymax))

    def test_no_irs_topology(self):
        topo = build_topology(ScenarioConfig(num_irs=0))
        assert topo.irs_positions.shape == (0, 2)


class TestConfig:
    def test_defaults_carry_standard_setup(self):
        cfg = ScenarioConfig()
        assert cfg.bs_x_pos == (50.0, 0.0)
        assert cfg.bs_y_pos == (0.0, 50.0)
        assert cfg.ue_region == (900.0, 1100.0, 900.0, 1100.0)
        assert cfg.link_budget_db == 150.0
        assert (cfg.num_ues_x, cfg.num_ues_y, cfg.paths, cfg.slots) == (10, 10, 2, 10000)

    def test_snr_is_linear_budget(self):
        assert ScenarioConfig(link_budget_db=30.0).snr == pytest.approx(1000.0)

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError, match="unknown config keys: bogus"):
            ScenarioConfig.from_dict({"bogus": 1})

    def test_field_level_error_message(self):
        with pytest.raises(ConfigError, match="elements_per_irs"):
            ScenarioConfig(elements_per_irs=0)
        with pytest.raises(ConfigError, match="ue_region"):
            ScenarioConfig(ue_region=(1.0, 1.0, 0.0, 2.0))
        with pytest.raises(ConfigError, match="slots"):
            ScenarioConfig(slots=0)

    def test_json_round_trip(self, tmp_path):
        cfg = ScenarioConfig(num_irs=8, elements_per_irs=4, master_seed=99)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg.to_dict()))
        assert load_config(path) == cfg

    def test_load_rejects_bad_json(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_config(path)

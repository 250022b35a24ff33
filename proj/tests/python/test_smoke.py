"""Smoke tests for the Python bindings: end-to-end pipeline sanity."""

import math

import pytest

import mfsim


def test_build_turn_road_geometry():
    spec = mfsim.RoadSpec()
    spec.entry_length = 0.0
    spec.exit_length = 0.0
    spec.radius = 10.0
    spec.turn_angle = math.pi / 2.0
    lanelet = mfsim.build_turn_road(spec)
    assert lanelet.length == pytest.approx(10.0 * math.pi / 2.0, abs=1e-9)
    x, y = lanelet.centerline_xy()[-1]
    assert x == pytest.approx(10.0, abs=1e-9)
    assert y == pytest.approx(10.0, abs=1e-9)


def test_invalid_road_raises():
    spec = mfsim.RoadSpec()
    spec.turn_angle = 0.5  # radius missing
    with pytest.raises(ValueError):
        mfsim.build_turn_road(spec)


def test_grid_counts():
    assert len(mfsim.generate_grid(mfsim.default_grid())) == 49
    assert len(mfsim.generate_grid(mfsim.paper_scale_grid())) == 78


def test_scenario_roundtrip(tmp_path):
    grid = mfsim.GridSpec()
    grid.radii = [10.0]
    grid.angles_deg = [90.0]
    scenario = mfsim.generate_grid(grid)[0]
    path = tmp_path / "scenario.json"
    mfsim.save_scenario(scenario, path)
    loaded = mfsim.load_scenario(path)
    assert loaded == scenario
    assert loaded.scenario_id == "turn_r10_g+90"


def test_low_fidelity_identity_and_high_fidelity_gap():
    grid = mfsim.GridSpec()
    grid.radii = [15.0]
    grid.angles_deg = [90.0]
    scenario = mfsim.generate_grid(grid)[0]

    low = mfsim.RunConfig()
    low.backend = mfsim.Fidelity.LOW
    low_log = mfsim.run_scenario(scenario, low)
    assert low_log.completed
    assert low_log.termination[0].reason == mfsim.Termination.GOAL_REACHED
    assert low_log.max_planned_vs_executed_error() == 0.0

    high = mfsim.RunConfig()
    high.backend = mfsim.Fidelity.HIGH
    high_log = mfsim.run_scenario(scenario, high)
    assert high_log.completed

    metrics = mfsim.compare_runs(low_log, high_log)
    assert len(metrics) == 1
    assert metrics[0].max_abs_d > 0.0
    assert metrics[0].max_abs_d < 1.0


def test_catalog():
    ids = mfsim.catalog_ids()
    assert set(ids) == {"touring", "offroad", "citycar"}
    touring = mfsim.vehicle_catalog("touring")
    assert touring.wheelbase == pytest.approx(2.7)
    with pytest.raises(KeyError):
        mfsim.vehicle_catalog("monster_truck")


def test_parity_is_exact():
    report = mfsim.check_instantiation_parity(mfsim.crossing_scenario())
    assert report.max_position_delta == 0.0
    assert report.max_heading_delta == 0.0


def test_lateral_displacement_shifted_line():
    ref = [(float(x), 0.0) for x in range(0, 50)]
    cmp = [(float(x), 0.5) for x in range(5, 45)]
    series = mfsim.lateral_displacement(ref, cmp)
    assert all(abs(s.d - 0.5) < 1e-12 for s in series)

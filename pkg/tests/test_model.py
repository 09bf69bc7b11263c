import copy
import logging

import numpy as np
import pytest

from MetaAct.model import (ActuatorSpec, HeaterLoopSpec, Material, build_actuator, coverage_profile, discretize,
                           rectangular_loop, spec_diagnostics, validate_spec)
from MetaAct.model.discretize import build_grid
from MetaAct.utils.exceptions import ConfigError, SpecError

PAPER = Material('paper', k=0.05, rho=750.0, cp=1340.0, E=3e9, alpha_eff=-30e-6, thickness=100e-6)


def _strip(loops=(), n_cells=20):
    return ActuatorSpec(length=0.1, width=0.035, substrate=PAPER, loops=tuple(loops), n_cells=n_cells)


def test_default_device_geometry(default_cfg):
    spec = build_actuator(default_cfg)
    assert spec.loop_names == ('outer', 'inner')
    diag = spec_diagnostics(spec)
    assert diag['outer_area_mm2'] == pytest.approx(1493.6, rel=1e-9)
    assert diag['inner_area_mm2'] == pytest.approx(1131.0, rel=1e-9)
    assert diag['area_ratio_outer_inner'] == pytest.approx(1.3206, abs=1e-3)
    assert diag['center_distance_mm'] == pytest.approx(9.8, rel=1e-9)
    assert 100.0 <= diag['crosstalk_ratio'] <= 140.0
    assert diag['quoted_center_distance_mm'] == pytest.approx(123 * 0.05 * 1e-4 / (10 * 6.5e-3) * 1e3)


def test_conventional_drops_bottom_loop(default_cfg):
    cfg = copy.deepcopy(default_cfg)
    cfg.actuator.kind = 'conventional'
    spec = build_actuator(cfg)
    assert spec.name == 'conventional'
    assert spec.loop_names == ('outer',)


def test_unknown_kind(default_cfg):
    cfg = copy.deepcopy(default_cfg)
    cfg.actuator.kind = 'triple'
    with pytest.raises(ConfigError):
        build_actuator(cfg)


def test_bopp_thickness_override(default_cfg, caplog):
    caplog.set_level(logging.WARNING, logger='MetaAct.model')
    assert default_cfg.actuator.bopp_thickness_um is None
    assert build_actuator(default_cfg).loop('outer').layers[-1].thickness == pytest.approx(51e-6)
    assert not caplog.records

    cfg = copy.deepcopy(default_cfg)
    cfg.actuator.bopp_thickness_um = 38
    spec = build_actuator(cfg)
    assert spec.loop('outer').layers[-1].thickness == pytest.approx(38e-6)
    assert any('overrides materials.bopp.thickness_um' in r.getMessage() for r in caplog.records)


def test_bopp_thickness_from_material_record(default_cfg, caplog):
    caplog.set_level(logging.WARNING, logger='MetaAct.model')
    cfg = copy.deepcopy(default_cfg)
    cfg.materials.bopp.thickness_um = 25.0
    assert build_actuator(cfg).loop('inner').layers[-1].thickness == pytest.approx(25e-6)
    # an override equal to the record is not worth a warning
    cfg.actuator.bopp_thickness_um = 25.0
    build_actuator(cfg)
    assert not caplog.records


def test_unknown_loop_name_rejected(default_cfg):
    cfg = copy.deepcopy(default_cfg)
    cfg.loops.middle = copy.deepcopy(cfg.loops.inner)
    with pytest.raises(ConfigError) as err:
        build_actuator(cfg)
    assert err.value.key == 'loops.middle'
    loop = HeaterLoopSpec('middle', 'top', ((0.0, 0.05, 0.0, 0.01),), width=0.01)
    with pytest.raises(SpecError) as err:
        validate_spec(_strip([loop]))
    assert err.value.kind == 'name'


def test_clamp_from_config(default_cfg):
    assert build_actuator(default_cfg).clamp == pytest.approx(7.7e-3)
    cfg = copy.deepcopy(default_cfg)
    cfg.actuator.kind = 'conventional'
    assert build_actuator(cfg).clamp == pytest.approx(7.7e-3)
    for bad in (-1.0, 100.0):
        cfg.actuator.clamp_mm = bad
        with pytest.raises(SpecError) as err:
            build_actuator(cfg)
        assert err.value.field == 'actuator.clamp_mm'


def test_validation_logs_diagnostics(default_cfg, caplog):
    caplog.set_level(logging.DEBUG, logger='MetaAct.model.actuator')
    build_actuator(default_cfg)
    assert any('crosstalk_ratio' in r.getMessage() for r in caplog.records)


def test_rectangular_loop_rects():
    loop = rectangular_loop('outer', 'top', (0.0, 0.1, 0.0, 0.035), 6.5e-3, rung=4.4e-3)
    assert len(loop.rects) == 4
    assert len(loop.rails) == 2
    assert loop.area == pytest.approx(1493.6e-6)


def test_loop_drive_levels():
    loop = rectangular_loop('outer', 'top', (0.0, 0.1, 0.0, 0.035), 6.5e-3, resistance=1500.0)
    assert loop.drive_voltage(0.75) == pytest.approx(np.sqrt(0.75 * 1500.0))
    assert loop.drive_current(0.75) == pytest.approx(np.sqrt(0.75 / 1500.0))


def test_nonpositive_dimension():
    spec = ActuatorSpec(length=-0.1, width=0.035, substrate=PAPER)
    with pytest.raises(SpecError) as err:
        validate_spec(spec)
    assert err.value.kind == 'dimension'
    assert err.value.field == 'actuator.length'


def test_out_of_bounds_footprint():
    loop = HeaterLoopSpec('outer', 'top', ((0.0, 0.12, 0.0, 0.01),), width=0.01)
    with pytest.raises(SpecError) as err:
        validate_spec(_strip([loop]))
    assert err.value.kind == 'bounds'


def test_same_side_overlap():
    a = HeaterLoopSpec('outer', 'top', ((0.0, 0.05, 0.0, 0.01), (0.04, 0.09, 0.0, 0.01)), width=0.01)
    with pytest.raises(SpecError) as err:
        validate_spec(_strip([a]))
    assert err.value.kind == 'overlap'


def test_two_loops_on_one_face():
    a = HeaterLoopSpec('outer', 'top', ((0.0, 0.05, 0.0, 0.01),), width=0.01)
    b = HeaterLoopSpec('inner', 'top', ((0.06, 0.09, 0.0, 0.01),), width=0.01)
    with pytest.raises(SpecError) as err:
        validate_spec(_strip([a, b]))
    assert err.value.kind == 'count'


def test_resistance_range():
    loop = HeaterLoopSpec('outer', 'top', ((0.0, 0.05, 0.0, 0.01),), width=0.01, resistance=50.0)
    with pytest.raises(SpecError) as err:
        validate_spec(_strip([loop]))
    assert err.value.kind == 'range'


def test_too_few_cells():
    with pytest.raises(SpecError):
        validate_spec(_strip(n_cells=5))


def test_coverage_profile_conserves_area(default_cfg):
    spec = build_actuator(default_cfg)
    for n_cells in (17, 200):
        grid = build_grid(spec, n_cells)
        for loop in spec.loops:
            f = coverage_profile(loop, grid)
            assert np.all((f >= 0.0) & (f <= 1.0))
            assert np.sum(f * grid.dx * grid.width) == pytest.approx(loop.area, rel=1e-12)


def test_coverage_profile_is_mirror_symmetric(default_cfg):
    spec = build_actuator(default_cfg)
    for n_cells in (17, 200, 401):
        grid = build_grid(spec, n_cells)
        for loop in spec.loops:
            f = coverage_profile(loop, grid)
            assert np.allclose(f, f[::-1], rtol=0.0, atol=1e-12)


def test_discretized_weights_and_capacity(default_cfg):
    spec = build_actuator(default_cfg)
    act = discretize(spec)
    assert act.n_cells == 200
    # lane edges are the union of all rectangle y-edges
    assert np.allclose(act.grid.y_edges * 1e3, [0.0, 6.5, 9.8, 16.3, 18.7, 25.2, 28.5, 35.0])
    for name in act.loop_names:
        assert act.q(name).sum() == pytest.approx(1.0)
        assert act.footprint_area(name) == pytest.approx(spec.loop(name).area)
    # mid-strip blocks under both faces carry substrate plus one stack per covered face
    sub_c = PAPER.rho * PAPER.cp * PAPER.thickness
    bare = act.heat_capacity / (act.grid.dx[:, None] * act.grid.lane_widths[None, :])
    assert bare.min() == pytest.approx(sub_c)
    assert act.A.sum() == pytest.approx(2 * 0.1 * 0.035)


def test_lane_refinement_keeps_totals(default_cfg):
    cfg = copy.deepcopy(default_cfg)
    cfg.actuator.lane_refine = 3
    act = discretize(build_actuator(cfg))
    assert act.n_lanes == 21
    assert act.footprint_area('inner') == pytest.approx(1131.0e-6)

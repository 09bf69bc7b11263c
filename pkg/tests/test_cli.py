import pandas as pd
import pytest
import yaml

import run
from MetaAct.settings import CSV_HEADER, MANIFEST_NAME
from run_utils import file_digest, format_value, write_csv

SMALL = """
actuator:
    n_cells: 30
thermal:
    dt: 0.5
schedule:
    kind: 'step'
    loop: 'inner'
    power: 0.5
    t_on: 5.0
run:
    name: 'small'
    duration: 10.0
    stride: 2
"""


@pytest.fixture
def small_cfg(tmp_path):
    path = tmp_path / 'small.yaml'
    path.write_text(SMALL)
    return path


def test_preset_list(capsys):
    assert run.main(['preset', '--list']) == 0
    names = capsys.readouterr().out.split()
    assert 'power_sweep' in names and 'forced_return' in names


def test_unknown_preset_is_config_error(tmp_path):
    assert run.main(['preset', 'fig9', '--out', str(tmp_path)]) == 2


def test_bad_config_exit_code(tmp_path):
    cfg_file = tmp_path / 'bad.yaml'
    cfg_file.write_text('thermal:\n    h: -1\n')
    assert run.main(['simulate', str(cfg_file), '--out', str(tmp_path / 'out')]) == 2
    cfg_file.write_text('thermal:\n    h: 10\nrun: name: x\n')
    assert run.main(['simulate', str(cfg_file), '--out', str(tmp_path / 'out')]) == 2


def test_unstable_explicit_step_exit_code(small_cfg, tmp_path):
    argv = ['simulate', str(small_cfg), '--out', str(tmp_path / 'out'),
            '--set', 'thermal.scheme', 'explicit', 'thermal.dt', '50.0', 'run.duration', '100.0']
    assert run.main(argv) == 3


def test_simulate_outputs(small_cfg, tmp_path):
    out = tmp_path / 'out'
    assert run.main(['simulate', str(small_cfg), '--out', str(out)]) == 0
    frame = pd.read_csv(out / 'small.csv')
    assert tuple(frame.columns) == CSV_HEADER
    assert len(frame) == 11
    assert frame['ref_disp_mm'].iloc[5] > 0.0
    manifest = yaml.safe_load((out / MANIFEST_NAME).read_text())
    paths = [entry['path'] for entry in manifest['files']]
    assert paths == sorted(['small.csv', 'resolved_config.yaml'])
    resolved = yaml.safe_load((out / 'resolved_config.yaml').read_text())
    assert resolved['actuator']['n_cells'] == 30 and 'ROOT_DIR' not in resolved


def test_simulate_is_byte_identical(small_cfg, tmp_path):
    for name in ('a', 'b'):
        assert run.main(['simulate', str(small_cfg), '--out', str(tmp_path / name)]) == 0
    for name in ('small.csv', 'resolved_config.yaml', MANIFEST_NAME):
        assert file_digest(tmp_path / 'a' / name) == file_digest(tmp_path / 'b' / name)


def test_strict_flag(small_cfg, tmp_path):
    argv = ['simulate', str(small_cfg), '--set', 'thermal.hh', '3']
    assert run.main(argv[:2] + ['--out', str(tmp_path / 'a')] + argv[2:]) == 2
    assert run.main(argv[:2] + ['--out', str(tmp_path / 'b'), '--no-strict'] + argv[2:]) == 0


def test_sweep_command(tmp_path):
    from MetaAct.settings import CONFIG_DIR
    out = tmp_path / 'sweep'
    argv = ['sweep', str(CONFIG_DIR / 'sweep_power.yaml'), '--out', str(out), '--set', 'actuator.n_cells', '30']
    assert run.main(argv) == 0
    summary = pd.read_csv(out / 'summary.csv')
    assert len(summary) == 6
    assert summary['ref_disp_mm'].iloc[0] == 0.0
    assert summary['ref_disp_mm'].is_monotonic_increasing
    assert len(list((out / 'runs').glob('*.csv'))) == 6


def test_write_csv_header_only(tmp_path):
    path = write_csv([], tmp_path / 'empty.csv')
    assert path.read_text() == ','.join(CSV_HEADER) + '\n'


def test_format_value():
    assert format_value(-0.0) == '0'
    assert format_value(1.0 / 3.0) == '0.333333333'
    assert format_value(float('nan')) == 'nan'
    assert format_value(None) == ''
    assert format_value('outer') == 'outer'


def test_every_listed_preset_dispatches(tmp_path, capsys):
    assert run.main(['preset', '--list']) == 0
    names = capsys.readouterr().out.split()
    assert names
    for name in names:
        out = tmp_path / name
        argv = ['preset', name, '--out', str(out), '--set', 'actuator.n_cells', '10', 'thermal.dt', '1.0',
                'run.stride', '1']
        assert run.main(argv) == 0, name
        summary = pd.read_csv(out / 'summary.csv')
        assert len(summary) > 0
        assert len(list((out / 'runs').glob('*.csv'))) > 0


def test_calibrate_writes_review_report(tmp_path):
    from MetaAct.calibrate import REVIEW_GATE
    from MetaAct.settings import DEFAULT_TARGETS
    out = tmp_path / 'fit'
    assert run.main(['calibrate', str(DEFAULT_TARGETS), '--out', str(out), '--max_iter', '1']) == 0
    report = yaml.safe_load((out / 'calibration_report.yaml').read_text())
    assert report['review_gate'] == REVIEW_GATE
    assert report['gate_passed'] == (report['objective'] <= REVIEW_GATE)
    assert set(report['params']) == {'thermal', 'materials', 'mechanics'}
    assert (out / 'fitted_params.yaml').exists()

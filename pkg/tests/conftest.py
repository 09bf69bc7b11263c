import copy

import pytest

from MetaAct.config import cfg_from_yaml_file, load_default_config
from MetaAct.settings import CONFIG_DIR


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run slow calibrated checks')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def default_cfg():
    return load_default_config()


@pytest.fixture
def coarse_cfg(default_cfg):
    """Default device on a coarse grid, quick enough for transient runs."""
    new = copy.deepcopy(default_cfg)
    new.actuator.n_cells = 50
    new.thermal.dt = 0.5
    new.run.stride = 2
    return new


@pytest.fixture
def calibrated_cfg(default_cfg):
    """Defaults with the shipped fitted parameters and a moderately fine grid."""
    new = cfg_from_yaml_file(CONFIG_DIR / 'calibrated.yaml', copy.deepcopy(default_cfg))
    new.actuator.n_cells = 100
    new.thermal.dt = 0.5
    new.run.stride = 2
    return new

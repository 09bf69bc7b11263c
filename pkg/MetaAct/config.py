import copy
import logging
from pathlib import Path

import yaml
from easydict import EasyDict

from .settings import DEFAULT_CONFIG, OPEN_SECTIONS
from .utils.exceptions import ConfigError

logger = logging.getLogger(__name__)


def log_config_to_file(cfg, pre='cfg', logger=None):
    for key, val in cfg.items():
        if isinstance(cfg[key], EasyDict):
            logger.info('\n%s.%s = edict()' % (pre, key))
            log_config_to_file(cfg[key], pre=pre + '.' + key, logger=logger)
            continue
        logger.info('%s.%s: %s' % (pre, key, val))


def load_yaml(text, source='<text>'):
    """Parse YAML text into a mapping; syntax errors carry their line number."""
    try:
        data = yaml.load(text, Loader=yaml.FullLoader)
    except yaml.YAMLError as err:
        mark = getattr(err, 'problem_mark', None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigError('%s: %s' % (source, getattr(err, 'problem', None) or err), line=line)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError('%s: top level must be a mapping' % source)
    return data


def _coerce(value, template, key):
    """Cast a new value to the type of the default it replaces."""
    if template is None or value is None:
        return value
    if isinstance(template, bool):
        if not isinstance(value, bool):
            raise ConfigError('expected true/false, got %r' % value, key=key)
        return value
    if isinstance(template, (int, float)):
        if isinstance(value, bool):
            raise ConfigError('expected a number, got %r' % value, key=key)
        try:
            number = float(value)
        except (TypeError, ValueError):
            raise ConfigError('expected a number, got %r' % value, key=key)
        if isinstance(template, int) and not isinstance(value, float) and number.is_integer():
            return int(number)
        return number
    if isinstance(template, str):
        if isinstance(value, (dict, list)):
            raise ConfigError('expected a string, got %r' % value, key=key)
        return str(value)
    if isinstance(template, list):
        if not isinstance(value, list):
            raise ConfigError('expected a list, got %r' % value, key=key)
        return value
    return value


def merge_new_config(config, new_config, strict=True, prefix='', base_dir=None):
    """Merge a mapping into the config tree in place.

    With `strict`, every key must already exist in the tree, except new
    records under the open sections (materials), which are merged over
    a copy of the first existing record of that section.
    """
    if '_BASE_CONFIG_' in new_config:
        base_file = Path(new_config['_BASE_CONFIG_'])
        if not base_file.is_absolute() and base_dir is not None:
            base_file = Path(base_dir) / base_file
        cfg_from_yaml_file(base_file, config, strict=strict)

    for key, val in new_config.items():
        if key == '_BASE_CONFIG_':
            continue
        dotted = prefix + str(key)
        if key not in config:
            if prefix.rstrip('.') in OPEN_SECTIONS and len(config):
                config[key] = copy.deepcopy(next(iter(config.values())))
            elif strict:
                raise ConfigError('unknown key', key=dotted)
            else:
                logger.warning('ignoring unknown config key %s' % dotted)
                continue
        if isinstance(config[key], dict):
            if not isinstance(val, dict):
                raise ConfigError('expected a section, got %r' % (val,), key=dotted)
            merge_new_config(config[key], val, strict=strict, prefix=dotted + '.')
            continue
        if isinstance(val, dict):
            raise ConfigError('unexpected section', key=dotted)
        config[key] = _coerce(val, config[key], dotted)

    return config


def cfg_from_yaml_file(cfg_file, config, strict=True):
    cfg_file = Path(cfg_file)
    try:
        text = cfg_file.read_text()
    except OSError as err:
        raise ConfigError('cannot read config: %s' % err, key=str(cfg_file))
    merge_new_config(config=config, new_config=load_yaml(text, cfg_file.name), strict=strict,
                     base_dir=cfg_file.parent)
    return config


def cfg_from_list(cfg_list, config, strict=True):
    """Set config keys via list (e.g., from command line)."""
    if len(cfg_list) % 2 != 0:
        raise ConfigError('--set needs key value pairs, got %d items' % len(cfg_list))
    for k, v in zip(cfg_list[0::2], cfg_list[1::2]):
        value = load_yaml('value: %s' % v, '--set').get('value') if v != '' else ''
        new = value
        for subkey in reversed(k.split('.')):
            new = {subkey: new}
        merge_new_config(config, new, strict=strict)
    return config


def load_default_config():
    """Fresh copy of the full schema with its default values."""
    config = EasyDict(load_yaml(DEFAULT_CONFIG.read_text(), DEFAULT_CONFIG.name))
    config.ROOT_DIR = cfg.ROOT_DIR
    return config


def resolve_config(cfg_file=None, text=None, params=None, set_cfgs=None, strict=True):
    """Defaults, then the config file or text, then a fitted fragment, then --set pairs."""
    config = load_default_config()
    if cfg_file is not None:
        cfg_from_yaml_file(cfg_file, config, strict=strict)
    if text:
        merge_new_config(config, load_yaml(text), strict=strict)
    if params is not None:
        cfg_from_yaml_file(params, config, strict=True)
    if set_cfgs:
        cfg_from_list(set_cfgs, config, strict=strict)
    return config


def parse_config(text='', strict=True):
    """Fully resolved ScenarioConfig of a YAML document; empty text gives the default device."""
    from .engine import build_scenario
    return build_scenario(resolve_config(text=text, strict=strict))


cfg = EasyDict()
cfg.ROOT_DIR = (Path(__file__).resolve().parent / '../').resolve()

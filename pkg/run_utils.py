import hashlib
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import tqdm
import yaml
from easydict import EasyDict

from MetaAct.engine import run_scenario, to_frame
from MetaAct.settings import CSV_DIGITS, CSV_HEADER, MANIFEST_NAME


def format_value(value):
    if isinstance(value, str):
        return value
    if value is None:
        return ''
    value = float(value)
    if np.isnan(value):
        return 'nan'
    text = '%.*g' % (CSV_DIGITS, value)
    return '0' if text == '-0' else text


def _write_frame(frame, path):
    text = frame.apply(lambda col: col.map(format_value)) if len(frame) else frame
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text.to_csv(path, index=False, lineterminator='\n')
    return path


def write_csv(records, path):
    """Time series with the fixed header, 9 significant digits, '\\n' line endings."""
    frame = to_frame(records)
    frame.columns = list(CSV_HEADER)
    return _write_frame(frame, path)


def write_summary(table, path):
    return _write_frame(table.reset_index(drop=True), path)


def plain(cfg):
    """Config tree as plain YAML-safe python objects, without runtime entries."""
    if isinstance(cfg, dict):
        return {str(k): plain(v) for k, v in cfg.items() if k != 'ROOT_DIR'}
    if isinstance(cfg, (list, tuple)):
        return [plain(v) for v in cfg]
    if isinstance(cfg, Path):
        return str(cfg)
    if isinstance(cfg, np.generic):
        return cfg.item()
    return cfg


def write_yaml(data, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='\n') as f:
        yaml.safe_dump(plain(data), f, default_flow_style=False, sort_keys=False)
    return path


def file_digest(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out_dir, files):
    """manifest.yaml with the sha256 of every emitted file, sorted by relative path."""
    out_dir = Path(out_dir)
    entries = sorted(({'path': Path(f).relative_to(out_dir).as_posix(), 'sha256': file_digest(f)} for f in files),
                     key=lambda e: e['path'])
    return write_yaml(EasyDict(files=entries), out_dir / MANIFEST_NAME)


def run_batch(configs, workers=1, desc='scenarios'):
    """Run scenarios, in worker processes when workers > 1; results keep the input order."""
    configs = list(configs)
    pbar = tqdm.tqdm(total=len(configs), desc=desc, dynamic_ncols=True, leave=False)
    results = []
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for series in executor.map(run_scenario, configs):
                results.append(series)
                pbar.update()
    else:
        for config in configs:
            results.append(run_scenario(config))
            pbar.update()
    pbar.close()
    return results
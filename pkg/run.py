import argparse
import copy
import datetime
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

sys.path.append('./')
import pandas as pd
from tensorboardX import SummaryWriter

from MetaAct.calibrate import (BOUNDS, REVIEW_GATE, CalibrationSettings, ParameterSet, fit, load_targets,
                               params_fragment, passes_review_gate, simulate_observables)
from MetaAct.config import cfg, log_config_to_file, merge_new_config, resolve_config
from MetaAct.engine import PRESETS, build_scenario, preset, run_scenario
from MetaAct.gripper import grasp_mode, gripper_from_cfg, jaw_range, object_from_cfg
from MetaAct.model import build_actuator, spec_diagnostics
from MetaAct.utils import common_utils
from MetaAct.utils.exceptions import ConfigError, MetaActError
from run_utils import run_batch, write_csv, write_manifest, write_summary, write_yaml

COMMANDS = ('simulate', 'preset', 'calibrate', 'gripper', 'sweep')


def parse_config(argv=None):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--out', type=str, default=None, help='output directory (default output/<tag>/<extra_tag>)')
    common.add_argument('--strict', dest='strict', action='store_true', default=True,
                        help='reject unknown config keys')
    common.add_argument('--no-strict', dest='strict', action='store_false', help='warn on unknown config keys')
    common.add_argument('--params', type=str, default=None, help='fitted parameter fragment to merge')
    common.add_argument('--extra_tag', type=str, default='default', help='extra tag for this experiment')
    common.add_argument('--workers', type=int, default=1, help='number of worker processes')
    common.add_argument('--tb_log', action='store_true', default=False, help='write a tensorboard trace')
    common.add_argument('--set', dest='set_cfgs', default=None, nargs=argparse.REMAINDER,
                        help='set extra config keys if needed')

    parser = argparse.ArgumentParser(description='electrothermal actuator simulator')
    sub = parser.add_subparsers(dest='command', required=True)
    p = sub.add_parser('simulate', parents=[common], help='run one scenario')
    p.add_argument('cfg_file', type=str)
    p = sub.add_parser('preset', parents=[common], help='run an experiment protocol')
    p.add_argument('name', type=str, nargs='?', default=None)
    p.add_argument('--list', action='store_true', default=False, help='print the preset names')
    p.add_argument('--cfg_file', type=str, default=None, help='config the protocol starts from')
    p = sub.add_parser('calibrate', parents=[common], help='fit h, alpha_eff_paper and tau_mech')
    p.add_argument('targets', type=str)
    p.add_argument('--cfg_file', type=str, default=None)
    p.add_argument('--max_iter', type=int, default=500)
    p = sub.add_parser('gripper', parents=[common], help='jaw range and grasp modes')
    p.add_argument('cfg_file', type=str)
    p = sub.add_parser('sweep', parents=[common], help='one scenario per value of sweep.key')
    p.add_argument('cfg_file', type=str)

    args = parser.parse_args(argv)
    return args


def _tag(args):
    if args.command == 'preset':
        return args.name or 'preset'
    cfg_file = getattr(args, 'cfg_file', None)
    return Path(cfg_file).stem if cfg_file else args.command


def _load(args):
    return resolve_config(cfg_file=getattr(args, 'cfg_file', None), params=args.params,
                          set_cfgs=args.set_cfgs, strict=args.strict)


def simulate(args, config, out_dir, logger):
    scenario = build_scenario(config)
    records = run_scenario(scenario)
    logger.info('%s: %d records, final ref_disp %.4g mm' % (scenario.name, len(records), records[-1].ref_disp_mm))
    return [write_csv(records, out_dir / ('%s.csv' % scenario.name))]


def run_preset(args, config, out_dir, logger):
    runs, summarize = preset(args.name, config)
    logger.info('preset %s: %d runs' % (args.name, len(runs)))
    results = run_batch([run.config for run in runs], workers=args.workers, desc=args.name)
    files = [write_csv(series, out_dir / 'runs' / ('%s.csv' % run.name)) for run, series in zip(runs, results)]
    summary = summarize(runs, results)
    logger.info('summary of %s:\n%s' % (args.name, summary.to_string(index=False)))
    files.append(write_summary(summary, out_dir / 'summary.csv'))
    return files


def calibrate(args, config, out_dir, logger):
    targets = load_targets(args.targets)
    init = ParameterSet(h=float(config.thermal.h),
                        alpha_eff_paper=float(config.materials[config.actuator.substrate].alpha_eff),
                        tau_mech=float(config.mechanics.tau_mech))
    settings = CalibrationSettings()
    tb_log = SummaryWriter(log_dir=str(out_dir / 'tensorboard')) if args.tb_log else None
    executor = ProcessPoolExecutor(max_workers=args.workers) if args.workers > 1 else None
    try:
        best, trace = fit(targets, init, config, bounds=BOUNDS, settings=settings, max_iter=args.max_iter,
                          map_fn=executor.map if executor is not None else map, tb_log=tb_log, progress=True)
    finally:
        if executor is not None:
            executor.shutdown()
        if tb_log is not None:
            tb_log.close()

    simulated = simulate_observables(best, config, settings)
    table = pd.DataFrame([dict(name=t.name, unit=t.unit, weight=t.weight, target=t.value,
                               simulated=simulated[t.name],
                               rel_error=(simulated[t.name] - t.value) / t.value) for t in targets])
    logger.info('calibration result:\n%s' % table.to_string(index=False))
    passed = passes_review_gate(trace[-1])
    if not passed:
        logger.warning('objective %.4g > %.2g: model review required, fitted_params.yaml is not a validated '
                       'calibration' % (trace[-1], REVIEW_GATE))
    report = dict(objective=float(trace[-1]), review_gate=REVIEW_GATE, gate_passed=passed,
                  params=params_fragment(best, config))
    return [
        write_yaml(report, out_dir / 'calibration_report.yaml'),
        write_yaml(params_fragment(best, config), out_dir / 'fitted_params.yaml'),
        write_summary(table, out_dir / 'observables.csv'),
        write_summary(pd.DataFrame(dict(iteration=range(len(trace)), objective=trace)),
                      out_dir / 'objective_trace.csv'),
    ]


def gripper(args, config, out_dir, logger):
    spec = gripper_from_cfg(config.gripper, build_actuator(config))
    trajectory = jaw_range(spec, build_scenario(config))
    rows = []
    for k, item in enumerate(config.objects or [config.object]):
        obj_cfg = copy.deepcopy(config.object)
        merge_new_config(obj_cfg, item, strict=args.strict, prefix='objects.%d.' % k)
        obj = object_from_cfg(obj_cfg)
        mode = grasp_mode(trajectory, obj)
        logger.info('%s: %s' % (obj.name, mode))
        rows.append(dict(object=obj.name, kind=obj.kind, outer_mm=obj.outer_mm, cavity_mm=obj.cavity_mm,
                         context=obj.context, tube_mm=obj.tube_mm, min_opening_mm=trajectory.min_mm,
                         rest_opening_mm=trajectory.rest_mm, max_opening_mm=trajectory.max_mm, mode=mode))
    return [write_summary(pd.DataFrame(rows), out_dir / 'gripper_summary.csv')]


def sweep(args, config, out_dir, logger):
    key, values = config.sweep.key, list(config.sweep.values)
    if not values:
        raise ConfigError('no values to sweep', key='sweep.values')
    variants = []
    for k, value in enumerate(values):
        variant = copy.deepcopy(config)
        new = value
        for subkey in reversed(key.split('.')):
            new = {subkey: new}
        merge_new_config(variant, new, strict=True)
        variant.run.name = '%s_%03d' % (config.run.name, k)
        variants.append(variant)
    scenarios = [build_scenario(v) for v in variants]
    results = run_batch(scenarios, workers=args.workers, desc='sweep')
    files, rows = [], []
    for scenario, value, series in zip(scenarios, values, results):
        files.append(write_csv(series, out_dir / 'runs' / ('%s.csv' % scenario.name)))
        rows.append(dict(run=scenario.name, **{key: value}, **series[-1]._asdict()))
    files.append(write_summary(pd.DataFrame(rows), out_dir / 'summary.csv'))
    return files


HANDLERS = {
    'simulate': simulate,
    'preset': run_preset,
    'calibrate': calibrate,
    'gripper': gripper,
    'sweep': sweep,
}


def dispatch(command, args):
    """Run one command; returns the process exit code."""
    logger = common_utils.create_logger()
    if command == 'preset' and args.list:
        for name in PRESETS:
            print(name)
        return 0
    try:
        if command == 'preset' and args.name is None:
            raise ConfigError('preset needs a name (or --list)', key='preset')
        config = _load(args)
        out_dir = Path(args.out) if args.out else cfg.ROOT_DIR / 'output' / _tag(args) / args.extra_tag
        out_dir.mkdir(parents=True, exist_ok=True)

        log_file = out_dir / ('log_%s_%s.txt' % (command, datetime.datetime.now().strftime('%Y%m%d-%H%M%S')))
        logger = common_utils.create_logger(log_file)
        logger.info('**********************Start %s**********************' % command)
        for key, val in vars(args).items():
            logger.info('{:16} {}'.format(key, val))
        log_config_to_file(config, logger=logger)
        logger.info('actuator diagnostics: %s' % spec_diagnostics(build_actuator(config), h=float(config.thermal.h)))

        files = HANDLERS[command](args, config, out_dir, logger)
        files.append(write_yaml(config, out_dir / 'resolved_config.yaml'))
        write_manifest(out_dir, files)
        logger.info('**********************End %s: %d files in %s**********************'
                    % (command, len(files), out_dir))
    except MetaActError as err:
        logger.error('%s: %s' % (type(err).__name__, err))
        return err.exit_code
    return 0


def main(argv=None):
    args = parse_config(argv)
    return dispatch(args.command, args)


if __name__ == '__main__':
    sys.exit(main())

import argparse
import logging
import logging.handlers
import os
import sys
from datetime import datetime
from typing import List, Optional

from semigfpy.config import ACTIVE_LOGGERS
from semigfpy.experiment.runner import RunStatus, run
from semigfpy.experiment.scenario import MODES, ConfigError, parse_config
from semigfpy.model.params import SystemParams
from semigfpy.setup_utils import setup_matplotlib


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Evaluate, simulate and cross-check the ergodic rates of a semi-grant-free NOMA uplink.',
                                     epilog='Precedence: command-line flags > scenario file > configs.ini defaults.')
    parser.add_argument("--config", help="Location of the scenario file (`key = value` lines)",
                        type=str, default=None)
    parser.add_argument("--mode", help="What to evaluate",
                        type=str, choices=MODES, default=None)
    parser.add_argument("--axis", help="Parameter to sweep",
                        type=str, choices=SystemParams.axes(), default=None)
    parser.add_argument("--from", help="First axis value", dest='start',
                        type=float, default=None)
    parser.add_argument("--to", help="Last axis value (inclusive)", dest='stop',
                        type=float, default=None)
    parser.add_argument("--step", help="Axis step",
                        type=float, default=None)
    parser.add_argument("--trials", help="Monte Carlo trials per point",
                        type=int, default=None)
    parser.add_argument("--seed", help="Monte Carlo seed",
                        type=int, default=None)
    parser.add_argument("--out", help="Output directory",
                        type=str, default=None)
    parser.add_argument("--jobs", help="Sweep points evaluated concurrently",
                        type=int, default=None)
    parser.add_argument("--debug", help="Print debug messages",
                        action='store_true')
    return parser


def _setup_logging(debug: bool) -> None:
    sysout_handler = logging.StreamHandler(sys.stdout)
    sysout_handler.addFilter(lambda record: record.levelno >= (logging.DEBUG if debug else logging.INFO))
    logging.basicConfig(level=logging.WARNING,
                        format='[%(asctime)s] %(message)s',
                        handlers=[sysout_handler],
                        force=True)
    for logger_name in ACTIVE_LOGGERS:
        logging.getLogger(logger_name).setLevel(logging.DEBUG)


def _add_file_log(out: str,
                  pending: logging.handlers.MemoryHandler) -> None:
    os.makedirs(out, exist_ok=True)
    current_datetime = datetime.now().strftime("%Y%m%d%H%M%S")
    file_handler = logging.FileHandler(filename=os.path.join(out, f'log_{current_datetime}.log'),
                                       mode='w+')
    file_handler.setFormatter(logging.Formatter('[%(asctime)s] %(message)s'))
    file_handler.addFilter(lambda record: record.levelno >= logging.DEBUG)
    # replay what was logged before the output directory was known
    pending.setTarget(file_handler)
    pending.flush()
    _drop_pending(pending=pending)
    logging.getLogger().addHandler(file_handler)


def _drop_pending(pending: logging.handlers.MemoryHandler) -> None:
    logging.getLogger().removeHandler(pending)
    pending.close()


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command-line front-end.

    Args:
        argv (Optional[List[str]], optional): The arguments (without the program name). Defaults to `sys.argv[1:]`.

    Returns:
        int: The exit status: 0 success, 2 configuration error, 3 numeric-tolerance failure, 4 I/O error.
    """
    args = build_parser().parse_args(argv)
    _setup_logging(debug=args.debug)
    logger = logging.getLogger('experiment')

    overrides = {'mode': args.mode,
                 'axis': args.axis,
                 'from': args.start,
                 'to': args.stop,
                 'step': args.step,
                 'trials': args.trials,
                 'seed': args.seed,
                 'out': args.out,
                 'jobs': args.jobs}
    # the defaults applied while parsing belong in the file log too
    pending = logging.handlers.MemoryHandler(capacity=1024, flushLevel=logging.CRITICAL + 1)
    logging.getLogger().addHandler(pending)
    try:
        text = ''
        if args.config:
            with open(args.config, 'r', encoding='utf-8') as f:
                text = f.read()
        cfg = parse_config(text=text, overrides=overrides)
    except (ConfigError, ValueError) as e:
        _drop_pending(pending=pending)
        print(f'error: {e}', file=sys.stderr)
        return int(RunStatus.CONFIG_ERROR)
    except OSError as e:
        _drop_pending(pending=pending)
        print(f'error: cannot read scenario file: {e}', file=sys.stderr)
        return int(RunStatus.IO_ERROR)

    setup_matplotlib()
    try:
        _add_file_log(out=cfg.out, pending=pending)
        status = run(cfg=cfg)
    except OSError as e:
        _drop_pending(pending=pending)
        print(f'error: cannot write to {cfg.out}: {e}', file=sys.stderr)
        return int(RunStatus.IO_ERROR)
    except ArithmeticError as e:
        logger.error(f'[{__name__}.main] Numerical failure: {e}')
        print(f'error: numerical failure: {e}', file=sys.stderr)
        return int(RunStatus.TOLERANCE_FAILURE)
    if status != RunStatus.OK:
        print('error: some oracle integrations missed the requested tolerance (best estimates written)', file=sys.stderr)
    return int(status)


if __name__ == '__main__':
    sys.exit(main())

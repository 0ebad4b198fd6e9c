import configparser
import logging
import math
import re
from typing import Any, Dict, List, Optional

from semigfpy.config import (MC_N_JOBS, MC_SEED, MC_TRIALS, N_INNER, N_OUTER,
                             ORACLE_ABS_TOL, ORACLE_REL_TOL)
from semigfpy.model.params import SystemParams
from semigfpy.oracle.integrate import IntegrationConfig
from semigfpy.specfun.quadrature import QuadratureSpec

MODES = ['analytic', 'oracle', 'montecarlo', 'compare', 'errata']

# config-file key -> ScenarioConfig attribute
KEYS = {
    'mode': 'mode',
    'radius_m': 'radius_m',
    'alpha': 'pathloss_exp',
    'p_gb_dbm': 'p_gb_dbm',
    'p_gf_dbm': 'p_gf_dbm',
    'noise_dbm': 'noise_dbm',
    'fading_mean_gb': 'fading_mean_gb',
    'fading_mean_gf': 'fading_mean_gf',
    'sic_threshold': 'sic_threshold',
    'n_outer': 'n_outer',
    'n_inner': 'n_inner',
    'trials': 'trials',
    'seed': 'seed',
    'axis': 'axis',
    'from': 'start',
    'to': 'stop',
    'step': 'step',
    'out': 'out',
    'jobs': 'jobs',
    'abs_tol': 'abs_tol',
    'rel_tol': 'rel_tol',
    'figure': 'figure'
}

_SECTION = 'scenario'


class ConfigError(Exception):
    def __init__(self,
                 msg: str,
                 key: Optional[str] = None,
                 line: Optional[int] = None):
        """Create a scenario configuration error.

        Args:
            msg (str): The diagnostic.
            key (Optional[str], optional): The offending key. Defaults to None.
            line (Optional[int], optional): The 1-based line of the key in the document. Defaults to None.
        """
        self.key = key
        self.line = line
        where = ''.join([f' key `{key}`' if key else '', f' (line {line})' if line else ''])
        super().__init__(f'Invalid scenario{where}: {msg}')


class ScenarioConfig:
    def __init__(self,
                 mode: str,
                 params: SystemParams = SystemParams(),
                 quad: QuadratureSpec = QuadratureSpec(),
                 trials: int = MC_TRIALS,
                 seed: int = MC_SEED,
                 axis: Optional[str] = None,
                 start: Optional[float] = None,
                 stop: Optional[float] = None,
                 step: Optional[float] = None,
                 out: str = 'results',
                 jobs: int = MC_N_JOBS,
                 abs_tol: float = ORACLE_ABS_TOL,
                 rel_tol: float = ORACLE_REL_TOL,
                 figure: bool = True):
        self.mode = mode
        self.params = params
        self.quad = quad
        self.trials = trials
        self.seed = seed
        self.axis = axis
        self.start = start
        self.stop = stop
        self.step = step
        self.out = out
        self.jobs = jobs
        self.abs_tol = abs_tol
        self.rel_tol = rel_tol
        self.figure = figure

    def __str__(self) -> str:
        sweep = f'{self.axis} in [{self.start}, {self.stop}] step {self.step}' if self.axis else 'single point'
        return f'{self.mode} run, {sweep}, {self.params}, {self.quad}, {self.trials} trials, seed {self.seed}'

    def __repr__(self) -> str:
        return str(self)

    def __eq__(self,
               other: 'ScenarioConfig') -> bool:
        if isinstance(other, ScenarioConfig):
            return self.to_json() == other.to_json()
        return False

    @property
    def integration(self) -> IntegrationConfig:
        return IntegrationConfig(abs_tol=self.abs_tol,
                                 rel_tol=self.rel_tol)

    def sweep_values(self) -> List[Optional[float]]:
        """Get the axis values, `[None]` for a single-point run.

        Returns:
            List[Optional[float]]: The values from `start` to `stop` (inclusive) by `step`.
        """
        if self.axis is None:
            return [None]
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + i * self.step, 12) for i in range(n)]

    def params_at(self,
                  value: Optional[float]) -> SystemParams:
        """Get the scenario at one axis value."""
        return self.params if value is None else self.params.replace(**{self.axis: value})

    def to_json(self) -> Dict[str, Any]:
        return {
            'mode': self.mode,
            'params': self.params.to_json(),
            'quad': self.quad.to_json(),
            'trials': self.trials,
            'seed': self.seed,
            'axis': self.axis,
            'start': self.start,
            'stop': self.stop,
            'step': self.step,
            'out': self.out,
            'jobs': self.jobs,
            'abs_tol': self.abs_tol,
            'rel_tol': self.rel_tol,
            'figure': self.figure
        }

    @staticmethod
    def from_json(my_args: Dict[str, Any]) -> 'ScenarioConfig':
        args = dict(my_args)
        args['params'] = SystemParams.from_json(args['params'])
        args['quad'] = QuadratureSpec.from_json(args['quad'])
        return ScenarioConfig(**args)


def _line_of(text: str,
             key: str) -> Optional[int]:
    pattern = re.compile(rf'^\s*{re.escape(key)}\s*[=:]')
    for i, line in enumerate(text.splitlines()):
        if pattern.match(line):
            return i + 1
    return None


def _read(text: str) -> Dict[str, str]:
    parser = configparser.ConfigParser(interpolation=None,
                                       default_section='__defaults__',
                                       comment_prefixes=('#', ';'),
                                       inline_comment_prefixes=('#', ';'))
    parser.optionxform = str
    try:
        # the header line shifts every reported line number by one
        parser.read_string(f'[{_SECTION}]\n{text}')
    except configparser.DuplicateOptionError as e:
        raise ConfigError(msg='duplicate key', key=e.option, line=e.lineno - 1)
    except configparser.DuplicateSectionError as e:
        raise ConfigError(msg='sections are not allowed', line=e.lineno - 1 if e.lineno else None)
    except configparser.ParsingError as e:
        lineno, line = e.errors[0]
        raise ConfigError(msg=f'expected `key = value`, got {line.strip()}', line=lineno - 1)
    if parser.sections() != [_SECTION]:
        raise ConfigError(msg=f'sections are not allowed, found {[s for s in parser.sections() if s != _SECTION]}')
    return dict(parser[_SECTION].items())


def _number(raw: Dict[str, str],
            key: str,
            kind: type,
            lines: Dict[str, Optional[int]]) -> Any:
    value = raw[key]
    if isinstance(value, str):
        try:
            if kind is int:
                f = float(value)
                if not f.is_integer():
                    raise ValueError
                return int(f)
            return float(value)
        except ValueError:
            raise ConfigError(msg=f'malformed {"integer" if kind is int else "number"} `{value}`', key=key, line=lines.get(key))
    return kind(value)


def parse_config(text: str,
                 overrides: Optional[Dict[str, Any]] = None) -> ScenarioConfig:
    """Parse a `key = value` scenario document.

    Comments (`#`, `;`) and blank lines are ignored; unknown keys are rejected.
    `overrides` (same keys, e.g. from command-line flags) take precedence over the
    document. Every default applied is logged.

    Args:
        text (str): The document.
        overrides (Optional[Dict[str, Any]], optional): Values replacing those of the document. Defaults to None.

    Raises:
        ConfigError: Raised on syntax errors, unknown or missing keys, malformed numbers and out-of-range values.

    Returns:
        ScenarioConfig: The fully populated configuration.
    """
    logger = logging.getLogger('experiment')
    raw: Dict[str, Any] = _read(text)
    lines = {k: _line_of(text, k) for k in raw}
    for k in raw:
        if k not in KEYS:
            raise ConfigError(msg=f'unknown key; valid keys are {", ".join(KEYS.keys())}', key=k, line=lines[k])
    for k, v in (overrides or {}).items():
        if k not in KEYS:
            raise ConfigError(msg='unknown override', key=k)
        if v is not None:
            raw[k] = v
            lines[k] = None

    if 'mode' not in raw:
        raise ConfigError(msg='missing required key', key='mode')
    mode = str(raw['mode']).strip()
    if mode not in MODES:
        raise ConfigError(msg=f'mode must be one of {", ".join(MODES)}, got `{mode}`', key='mode', line=lines.get('mode'))

    defaults = ScenarioConfig(mode=mode)
    default_values = {'radius_m': defaults.params.radius_m,
                      'alpha': defaults.params.pathloss_exp,
                      'p_gb_dbm': defaults.params.p_gb_dbm,
                      'p_gf_dbm': defaults.params.p_gf_dbm,
                      'noise_dbm': defaults.params.noise_dbm,
                      'fading_mean_gb': defaults.params.fading_mean_gb,
                      'fading_mean_gf': defaults.params.fading_mean_gf,
                      'sic_threshold': defaults.params.sic_threshold,
                      'n_outer': defaults.quad.n_outer,
                      'n_inner': defaults.quad.n_inner,
                      'trials': defaults.trials,
                      'seed': defaults.seed,
                      'out': defaults.out,
                      'jobs': defaults.jobs,
                      'abs_tol': defaults.abs_tol,
                      'rel_tol': defaults.rel_tol,
                      'figure': defaults.figure}
    for k, v in default_values.items():
        if k not in raw:
            logger.info(f'[{__name__}.parse_config] Using default {k}={v}.')
            raw[k] = v

    floats = ['radius_m', 'alpha', 'p_gb_dbm', 'p_gf_dbm', 'noise_dbm', 'fading_mean_gb',
              'fading_mean_gf', 'sic_threshold', 'abs_tol', 'rel_tol']
    ints = ['n_outer', 'n_inner', 'trials', 'seed', 'jobs']
    vals = {k: _number(raw, k, float, lines) for k in floats}
    vals.update({k: _number(raw, k, int, lines) for k in ints})

    def check(key: str, ok: bool, what: str) -> None:
        if not ok:
            raise ConfigError(msg=f'value {raw[key]} out of range ({what})', key=key, line=lines.get(key))

    for k in ['radius_m', 'alpha', 'fading_mean_gb', 'fading_mean_gf', 'abs_tol']:
        check(k, math.isfinite(vals[k]) and vals[k] > 0, 'must be positive')
    for k in ['p_gb_dbm', 'p_gf_dbm', 'noise_dbm']:
        check(k, math.isfinite(vals[k]), 'must be finite')
    check('sic_threshold', vals['sic_threshold'] >= 0, 'must be non-negative')
    check('rel_tol', vals['rel_tol'] >= 1e-10, 'must be at least 1e-10')
    for k in ['n_outer', 'n_inner', 'trials']:
        check(k, vals[k] >= 1, 'must be a positive integer')
    check('seed', vals['seed'] >= 0, 'must be a non-negative integer')
    check('jobs', vals['jobs'] != 0, 'must be non-zero (negative values count back from the number of CPUs)')

    figure = raw['figure']
    if isinstance(figure, str):
        if figure.strip().lower() not in configparser.ConfigParser.BOOLEAN_STATES:
            raise ConfigError(msg=f'malformed boolean `{figure}`', key='figure', line=lines.get('figure'))
        figure = configparser.ConfigParser.BOOLEAN_STATES[figure.strip().lower()]

    axis = raw.get('axis')
    start = stop = step = None
    if axis is not None:
        axis = str(axis).strip()
        check('axis', axis in SystemParams.axes(), f'valid axes are {", ".join(SystemParams.axes())}')
        for k in ['from', 'to', 'step']:
            if k not in raw:
                raise ConfigError(msg=f'a sweep over `{axis}` needs `from`, `to` and `step`', key=k)
        start, stop, step = [_number(raw, k, float, lines) for k in ['from', 'to', 'step']]
        check('step', math.isfinite(step) and step > 0, 'must be positive')
        check('to', math.isfinite(start) and math.isfinite(stop) and start <= stop, 'must not be below `from`')
    else:
        for k in ['from', 'to', 'step']:
            if k in raw:
                raise ConfigError(msg='sweep bounds given without `axis`', key=k, line=lines.get(k))

    params = SystemParams(radius_m=vals['radius_m'],
                          pathloss_exp=vals['alpha'],
                          p_gb_dbm=vals['p_gb_dbm'],
                          p_gf_dbm=vals['p_gf_dbm'],
                          noise_dbm=vals['noise_dbm'],
                          fading_mean_gb=vals['fading_mean_gb'],
                          fading_mean_gf=vals['fading_mean_gf'],
                          sic_threshold=vals['sic_threshold'])
    cfg = ScenarioConfig(mode=mode,
                         params=params,
                         quad=QuadratureSpec(n_outer=vals['n_outer'], n_inner=vals['n_inner']),
                         trials=vals['trials'],
                         seed=vals['seed'],
                         axis=axis,
                         start=start,
                         stop=stop,
                         step=step,
                         out=str(raw['out']).strip(),
                         jobs=vals['jobs'],
                         abs_tol=vals['abs_tol'],
                         rel_tol=vals['rel_tol'],
                         figure=bool(figure))
    logger.debug(f'[{__name__}.parse_config] Parsed {cfg}.')
    return cfg


def serialize_config(cfg: ScenarioConfig) -> str:
    """Write a configuration as a `key = value` document that `parse_config` reads back.

    Args:
        cfg (ScenarioConfig): The configuration.

    Returns:
        str: The document.
    """
    p = cfg.params
    entries = [('mode', cfg.mode),
               ('radius_m', repr(p.radius_m)),
               ('alpha', repr(p.pathloss_exp)),
               ('p_gb_dbm', repr(p.p_gb_dbm)),
               ('p_gf_dbm', repr(p.p_gf_dbm)),
               ('noise_dbm', repr(p.noise_dbm)),
               ('fading_mean_gb', repr(p.fading_mean_gb)),
               ('fading_mean_gf', repr(p.fading_mean_gf)),
               ('sic_threshold', repr(p.sic_threshold)),
               ('n_outer', str(cfg.quad.n_outer)),
               ('n_inner', str(cfg.quad.n_inner)),
               ('trials', str(cfg.trials)),
               ('seed', str(cfg.seed)),
               ('out', cfg.out),
               ('jobs', str(cfg.jobs)),
               ('abs_tol', repr(cfg.abs_tol)),
               ('rel_tol', repr(cfg.rel_tol)),
               ('figure', 'yes' if cfg.figure else 'no')]
    if cfg.axis is not None:
        entries.extend([('axis', cfg.axis),
                        ('from', repr(cfg.start)),
                        ('to', repr(cfg.stop)),
                        ('step', repr(cfg.step))])
    return ''.join([f'{k} = {v}\n' for k, v in entries])

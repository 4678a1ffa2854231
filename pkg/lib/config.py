from dataclasses import dataclass, fields, replace
from pathlib import Path
import os
import yaml

from lib.model import ModelParams
from lib.dynamics import IntegratorConfig, DEFAULT_DT, DEFAULT_T_MAX, DEFAULT_RECORD_EVERY
from lib.states import KINDS
from lib.errors import ConfigError

# scenario configuration
# precedence (lowest to highest): defaults, YAML config file, PSEUDOMODE_* environment, flags
#
# a config file is a flat YAML mapping, e.g.
#     preparation: all
#     n_atoms: 2
#     gamma_over_omega: 1.0
#     alpha2: 0.5
#     measures: [purity, eof]

ENV_PREFIX = 'PSEUDOMODE_'

MEASURES = ('purity', 'mutual_info', 'classical', 'discord', 'eof')
TWO_QUBIT_MEASURES = ('mutual_info', 'classical', 'discord', 'eof')

# fixed CSV column order, absent measures are dropped, never reordered
COLUMNS = ('t_omega', 'purity', 'mutual_info', 'classical_A', 'classical_B', 'discord_A', 'discord_B', 'eof')

# short flag names accepted as config keys too
ALIASES = {
    'prep': 'preparation',
    'atoms': 'n_atoms',
    'side': 'measured_side',
    'out': 'out_dir',
}


@dataclass(frozen=True)
class ScenarioConfig:
    preparation: str = 'all'
    n_atoms: int = 1
    gamma_over_omega: float = 1.0
    alpha2: float = 0.5
    t_max: float = DEFAULT_T_MAX
    dt: float = DEFAULT_DT
    record_every: int = DEFAULT_RECORD_EVERY
    measures: tuple = MEASURES
    measured_side: str = 'both'
    out_dir: str = 'out'
    fock_cutoff: int = 1
    omega: float = 1.0
    omega0: float = 0.0
    hermitize: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'measures', tuple(self.measures))
        if self.preparation != 'all' and self.preparation not in KINDS:
            raise ConfigError(f'ERROR: preparation must be one of a, b, c, d, all; got "{self.preparation}"')
        if not 0 < self.alpha2 < 1:
            raise ConfigError(f'ERROR: alpha2 must lie in (0, 1), got {self.alpha2}')
        if not self.gamma_over_omega > 0:
            raise ConfigError(f'ERROR: gamma_over_omega must be > 0, got {self.gamma_over_omega}')
        if self.measured_side not in ('A', 'B', 'both'):
            raise ConfigError(f'ERROR: side must be A, B or both; got "{self.measured_side}"')
        unknown = [m for m in self.measures if m not in MEASURES]
        if unknown:
            raise ConfigError(f'ERROR: unknown measures {unknown}, expected a subset of {list(MEASURES)}')
        # let the component types check their own invariants
        self.model_params()
        self.integrator()

    @property
    def preparations(self) -> tuple:
        return KINDS if self.preparation == 'all' else (self.preparation,)

    @property
    def sides(self) -> tuple:
        return ('A', 'B') if self.measured_side == 'both' else (self.measured_side,)

    def model_params(self) -> ModelParams:
        return ModelParams(
            n_atoms=self.n_atoms,
            omega=self.omega,
            gamma=self.gamma_over_omega * self.omega,
            omega0=self.omega0,
            fock_cutoff=self.fock_cutoff,
        )

    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig(dt=self.dt, t_max=self.t_max, record_every=self.record_every, hermitize=self.hermitize)

    def columns(self) -> list:
        wanted = {'t_omega'}
        for m in self.measures:
            if m in TWO_QUBIT_MEASURES and self.n_atoms != 2:
                continue
            if m in ('classical', 'discord'):
                wanted.update(f'{m}_{side}' for side in self.sides)
            else:
                wanted.add(m)
        return [c for c in COLUMNS if c in wanted]


FIELD_TYPES = {f.name: f.type for f in fields(ScenarioConfig)}


def _coerce(key: str, value):
    kind = FIELD_TYPES[key]
    try:
        if kind is tuple:
            if isinstance(value, str):
                value = [v.strip() for v in value.split(',') if v.strip()]
            return tuple(value)
        if kind is bool:
            if isinstance(value, str):
                return value.strip().lower() in ('1', 'true', 'yes', 'on')
            return bool(value)
        if kind is int:
            number = float(value)
            if number != int(number):
                raise ValueError
            return int(number)
        if kind is float:
            return float(value)
        return str(value)
    except (TypeError, ValueError):
        raise ConfigError(f'ERROR: invalid value for {key}: "{value}"')


# normalize keys ('t-max' -> 't_max', 'prep' -> 'preparation') and types
# unknown keys are skipped with a warning
def normalize(values: dict, source: str) -> dict:
    out = {}
    for k, v in values.items():
        if v is None:
            continue
        key = str(k).strip().lower().replace('-', '_')
        key = ALIASES.get(key, key)
        if key not in FIELD_TYPES:
            print(f'WARNING: ignoring unknown key "{k}" in {source}')
            continue
        out[key] = _coerce(key, v)
    return out


# load a scenario config from a local YAML file
def load_path(path) -> dict:
    path = Path(path)
    try:
        with open(path, encoding='utf-8') as f:
            config = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as err:
        raise ConfigError(f'ERROR: failed to load config "{path}": {err}')
    if not isinstance(config, dict):
        raise ConfigError(f'ERROR: config "{path}" must be a mapping of key: value pairs')
    print(f'loaded scenario config: {path}')
    return normalize(config, str(path))


def from_env(environ=None) -> dict:
    environ = os.environ if environ is None else environ
    values = {
        k[len(ENV_PREFIX):]: v
        for k, v in environ.items()
        if k.startswith(ENV_PREFIX)
    }
    return normalize(values, 'environment')


def build(flags: dict = None, config_path=None, environ=None, base: ScenarioConfig = None) -> ScenarioConfig:
    '''Merge defaults (or base), config file, environment and flags into a validated config.'''
    values = {}
    if config_path is not None:
        values.update(load_path(config_path))
    values.update(from_env(environ))
    values.update(normalize(flags or {}, 'flags'))
    return replace(base or ScenarioConfig(), **values)

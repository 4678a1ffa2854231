from dataclasses import replace
from itertools import combinations
from pathlib import Path
import numpy as np

from lib.config import ScenarioConfig, COLUMNS
from lib.errors import ConfigError
from lib import scenario
from lib import measures

# purity trajectories as witnesses of the initial system-environment correlation
#
# two preparations are told apart by the largest gap between their curves;
# an observed trajectory is attributed to the preparation whose simulated
# curve is closest in RMS distance


def max_gap(first, second) -> float:
    return float(np.max(np.abs(np.asarray(first) - np.asarray(second))))


def pairwise_gaps(curves: dict) -> dict:
    '''{(k1, k2): max gap} for every pair of curves, keys in insertion order'''
    return {(k1, k2): max_gap(curves[k1], curves[k2]) for k1, k2 in combinations(curves, 2)}


def purity_curves(trajectories: dict) -> dict:
    return {kind: traj.series(measures.purity) for kind, traj in trajectories.items()}


def identify(times, observed, references: dict) -> list:
    '''Rank reference curves by RMS distance to an observed series.

    references maps label -> (times, values); each reference is linearly
    interpolated onto the observed times. Returns [(label, rms), ...] best first.
    Observed times outside a reference's range are ignored for that reference.
    '''
    times = np.asarray(times, dtype=np.float64)
    observed = np.asarray(observed, dtype=np.float64)
    ranking = []
    for label, (ref_t, ref_v) in references.items():
        ref_t = np.asarray(ref_t)
        inside = (times >= ref_t[0]) & (times <= ref_t[-1])
        if not np.any(inside):
            print(f'WARNING: observed times do not overlap reference {label}')
            continue
        simulated = np.interp(times[inside], ref_t, ref_v)
        ranking.append((label, float(np.sqrt(np.mean((simulated - observed[inside])**2)))))
    ranking.sort(key=lambda item: item[1])
    return ranking


# 'discord_B' -> ('discord', 'B'), 'eof' -> ('eof', None)
def _column_measure(column: str):
    for measure in ('classical', 'discord'):
        if column.startswith(f'{measure}_'):
            return measure, column[len(measure) + 1:]
    return column, None


def identify_csv(path, cfg: ScenarioConfig, column: str = 'purity', quiet: bool = False) -> list:
    '''Identify the preparation behind an observed trajectory stored as CSV (t_omega + column).

    The references are simulated curves of the same column, so two-qubit
    columns need cfg.n_atoms == 2.
    '''
    if column not in COLUMNS or column == 't_omega':
        raise ConfigError(f'ERROR: cannot compare column "{column}", expected one of {", ".join(COLUMNS[1:])}')
    measure, side = _column_measure(column)
    cfg = replace(cfg, preparation='all', measures=(measure,), measured_side=side or cfg.measured_side)
    if column not in cfg.columns():
        raise ConfigError(f'ERROR: column "{column}" needs n_atoms=2, got n_atoms={cfg.n_atoms}')

    data = scenario.read_csv(path)
    if 't_omega' not in data or column not in data:
        raise ValueError(f'ERROR: {path} needs columns t_omega and {column}')
    if len(data['t_omega']) == 0:
        raise ValueError(f'ERROR: {path} has no samples')

    cfg = replace(cfg, t_max=max(cfg.t_max, float(data['t_omega'].max())))
    trajectories = scenario.run(cfg, quiet=quiet)
    references = {
        kind: (traj.times, np.array([row[column] for row in scenario.measure_rows(traj, cfg)]))
        for kind, traj in trajectories.items()
    }
    return identify(data['t_omega'], data[column], references)


def alpha_sweep(alpha2_values, gammas, base: ScenarioConfig, out_dir=None, quiet: bool = False) -> list:
    '''Largest pairwise purity gap between preparations for each (alpha2, gamma/omega).

    Returns one row per combination with a gap_<k1><k2> column per pair and
    max_gap; writes sweep.csv into out_dir when given.
    '''
    rows = []
    for alpha2 in alpha2_values:
        for gamma in gammas:
            cfg = replace(base, preparation='all', alpha2=float(alpha2), gamma_over_omega=float(gamma))
            gaps = pairwise_gaps(purity_curves(scenario.run(cfg, quiet=quiet)))
            row = {'alpha2': float(alpha2), 'gamma_over_omega': float(gamma)}
            row.update({f'gap_{k1}{k2}': v for (k1, k2), v in gaps.items()})
            row['max_gap'] = max(gaps.values())
            rows.append(row)

    if out_dir is not None and rows:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        scenario.write_csv(out_dir / 'sweep.csv', list(rows[0]), rows)
    return rows

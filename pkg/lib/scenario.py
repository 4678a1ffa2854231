from dataclasses import replace
from pathlib import Path
import csv
import time
import numpy as np

from lib.config import ScenarioConfig
from lib.model import build_operators
from lib.states import Preparation, initial_state
from lib.dynamics import evolve, evolve_full, Trajectory
from lib import measures
from lib import plot

# runs scenarios and turns trajectories into CSV rows / SVG panels
#
# CSV: UTF-8, comma separated, header row, LF line endings,
# numbers with 12 significant digits so identical configs give identical bytes


def run(cfg: ScenarioConfig, quiet: bool = False, full: bool = False) -> dict:
    '''Evolve every requested preparation on one shared operator set and time grid.'''
    p = cfg.model_params()
    ops = build_operators(p)
    integrator = cfg.integrator()
    step = evolve_full if full else evolve

    trajectories = {}
    for kind in cfg.preparations:
        rho0 = initial_state(Preparation(kind, cfg.alpha2), p)
        trajectories[kind] = step(rho0, ops, p, integrator, label=f'prep {kind}', quiet=quiet)
    return trajectories


def measure_rows(traj: Trajectory, cfg: ScenarioConfig, opt: measures.OptimizerConfig = None) -> list:
    '''One dict per recorded sample, keyed by the CSV columns of cfg.'''
    columns = cfg.columns()
    rows = []
    for t, rho in zip(traj.times, traj.reduced_states):
        row = {'t_omega': t}
        if 'purity' in columns:
            row['purity'] = measures.purity(rho)
        if cfg.n_atoms == 2:
            mi = measures.mutual_information(rho)
            if 'mutual_info' in columns:
                row['mutual_info'] = mi
            for side in cfg.sides:
                if f'classical_{side}' in columns or f'discord_{side}' in columns:
                    j, _ = measures.classical_correlation(rho, side, opt)
                    if f'classical_{side}' in columns:
                        row[f'classical_{side}'] = j
                    if f'discord_{side}' in columns:
                        row[f'discord_{side}'] = measures.clamp_discord(mi - j)
            if 'eof' in columns:
                row['eof'] = measures.eof(rho)
        rows.append(row)
    return rows


def format_value(x) -> str:
    if isinstance(x, str):
        return x
    # + 0.0 turns -0.0 into 0.0
    return f'{float(x) + 0.0:.12g}'


def write_csv(path, columns: list, rows: list):
    path = Path(path)
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(row[c]) for c in columns])


def read_csv(path) -> dict:
    '''Columns of a CSV written by write_csv (or any numeric CSV with a header row).'''
    with open(path, newline='', encoding='utf-8') as f:
        reader = csv.DictReader(f)
        rows = list(reader)
        names = reader.fieldnames or []
    return {name: np.array([float(r[name]) for r in rows]) for name in names}


def csv_path(out_dir, kind: str) -> Path:
    return Path(out_dir) / f'prep_{kind}.csv'


def simulate(cfg: ScenarioConfig, quiet: bool = False, opt: measures.OptimizerConfig = None) -> dict:
    '''Run cfg and write one CSV per preparation; returns {kind: (path, rows, trajectory)}.'''
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    trajectories = run(cfg, quiet=quiet)
    columns = cfg.columns()
    results = {}
    for kind, traj in trajectories.items():
        if not quiet:
            print(f'measuring prep {kind}... ', end='', flush=True)
        start = time.time()
        rows = measure_rows(traj, cfg, opt)
        path = csv_path(out_dir, kind)
        write_csv(path, columns, rows)
        if not quiet:
            print(f'({round(time.time() - start, 2)}s) -> {path}')
        results[kind] = (path, rows, traj)
    return results


# FIGURES ======================================================================

# which runs and panels make up each figure; all at alpha2 = 0.5
FIGURES = {
    1: {
        'n_atoms': 1,
        'panels': [('a', 1.0, 'purity'), ('b', 5.0, 'purity')],
        'title': 'one-qubit purity',
    },
    2: {
        'n_atoms': 2,
        'panels': [('a', 1.0, 'purity'), ('b', 5.0, 'purity')],
        'title': 'two-qubit purity',
    },
    3: {
        'n_atoms': 2,
        'panels': [('a', 1.0, 'mutual_info'), ('b', 1.0, 'classical'), ('c', 1.0, 'eof'), ('d', 1.0, 'discord')],
        'title': 'two-qubit correlations',
    },
}

YLABELS = {
    'purity': 'purity P',
    'mutual_info': 'mutual information I',
    'classical': 'classical correlation J',
    'eof': 'entanglement of formation',
    'discord': 'quantum discord D',
}

PLOTTED_SIDE = 'B'
COINCIDENCE_TOL = 1e-9


def reproduce_figure(which: int, out_dir, base: ScenarioConfig = None, quiet: bool = False,
                     opt: measures.OptimizerConfig = None) -> list:
    '''Write figN<panel>.csv and figN<panel>.svg for every panel of figure `which`.'''
    if which not in FIGURES:
        raise ValueError(f'ERROR: no figure {which}, expected one of {sorted(FIGURES)}')
    figure = FIGURES[which]
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    base = base or ScenarioConfig()

    panel_measures = tuple(sorted({m for _, _, m in figure['panels']}))
    written = []
    for gamma in sorted({g for _, g, _ in figure['panels']}):
        cfg = replace(base, preparation='all', n_atoms=figure['n_atoms'], gamma_over_omega=gamma,
                      alpha2=0.5, measures=panel_measures, measured_side='both', out_dir=str(out_dir))
        trajectories = run(cfg, quiet=quiet)
        rows = {kind: measure_rows(traj, cfg, opt) for kind, traj in trajectories.items()}
        times = trajectories['a'].times

        for panel, g, measure in figure['panels']:
            if g != gamma:
                continue
            name = f'fig{which}{panel}'
            data_columns = [c for c in cfg.columns() if c == measure or c.startswith(f'{measure}_')]
            columns = ['t_omega'] + [f'{c}_{kind}' for c in data_columns for kind in rows]
            table = [
                {'t_omega': t, **{f'{c}_{kind}': rows[kind][i][c] for c in data_columns for kind in rows}}
                for i, t in enumerate(times)
            ]
            csv_file = out_dir / f'{name}.csv'
            write_csv(csv_file, columns, table)

            column = measure if measure in data_columns else f'{measure}_{PLOTTED_SIDE}'
            curves = {kind: np.array([r[column] for r in rows[kind]]) for kind in rows}
            if which == 1:
                curves = _merge_coincident(curves)
            svg_file = out_dir / f'{name}.svg'
            plot.panel(
                svg_file, times, curves,
                ylabel=YLABELS[measure] + ('' if column == measure else f' (measured on {PLOTTED_SIDE})'),
                title=f"({panel}) {figure['title']}, Γ = {gamma:g}Ω",
            )
            written += [csv_file, svg_file]
            if not quiet:
                print(f'wrote {csv_file} and {svg_file}')
    return written


# one-qubit curves from b and d coincide; draw them once as "b = d"
def _merge_coincident(curves: dict) -> dict:
    gap = float(np.max(np.abs(curves['b'] - curves['d'])))
    if gap > COINCIDENCE_TOL:
        print(f'WARNING: b and d curves differ by {gap:.3g}, drawing both')
        return curves
    return {'a': curves['a'], 'b=d': curves['b'], 'c': curves['c']}

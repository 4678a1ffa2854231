from itertools import combinations
import numpy as np
import pytest

from lib import scenario
from lib import witness
from lib import measures
from lib.config import ScenarioConfig
from lib.qcore import Ket

# trajectories of the figure scenarios, shared across tests
_cache = {}


def trajectories(n_atoms: int, gamma: float, dt: float = 0.001, record_every: int = 10):
    key = (n_atoms, gamma, dt, record_every)
    if key not in _cache:
        cfg = ScenarioConfig(n_atoms=n_atoms, gamma_over_omega=gamma, alpha2=0.5, dt=dt, record_every=record_every)
        _cache[key] = scenario.run(cfg, quiet=True)
    return _cache[key]


def gaps(n_atoms: int, gamma: float, **kwargs) -> dict:
    return witness.pairwise_gaps(witness.purity_curves(trajectories(n_atoms, gamma, **kwargs)))


# same sample times as the default run, half the step
def reference_gaps(n_atoms: int, gamma: float) -> dict:
    return gaps(n_atoms, gamma, dt=0.0005, record_every=20)


@pytest.mark.parametrize('gamma', [1.0, 5.0])
def test_b_and_d_coincide_for_one_qubit(gamma):
    curves = witness.purity_curves(trajectories(1, gamma))
    assert witness.max_gap(curves['b'], curves['d']) <= 1e-9


def test_strong_coupling_distinguishes_one_qubit_preparations():
    observed, reference = gaps(1, 1.0), reference_gaps(1, 1.0)
    threshold = reference[('a', 'b')] / 2
    assert observed[('a', 'b')] > threshold
    for pair in [('a', 'b'), ('a', 'c'), ('b', 'c'), ('c', 'd')]:
        assert observed[pair] > reference[pair] / 2
        assert observed[pair] > 0.05


def test_weak_coupling_hides_preparations():
    strong = max(gaps(1, 1.0).values())
    weak = max(gaps(1, 5.0).values())
    assert weak * 3 < strong


def test_two_qubit_purity_distinguishes_all_preparations():
    observed, reference = gaps(2, 1.0), reference_gaps(2, 1.0)
    for pair in combinations('abcd', 2):
        assert observed[pair] > reference[pair] / 2
        assert observed[pair] > 1e-4


def test_asymptotic_purity_in_weak_coupling():
    cfg = ScenarioConfig(n_atoms=1, gamma_over_omega=5.0, t_max=50.0, record_every=1000)
    ground = Ket.basis(cfg.model_params().layout.select({'atom1'}), [0])
    for kind, traj in scenario.run(cfg, quiet=True).items():
        final = traj.reduced_states[-1]
        assert measures.purity(final) > 0.999, kind
        assert measures.fidelity(final, ground) > 0.999, kind


_rows = {}


# two-qubit measure rows at gamma/omega = 1, every 0.1 in omega * t
def correlation_rows() -> dict:
    if not _rows:
        cfg = ScenarioConfig(n_atoms=2, gamma_over_omega=1.0, alpha2=0.5, record_every=100)
        for kind, traj in trajectories(2, 1.0, record_every=100).items():
            _rows[kind] = scenario.measure_rows(traj, cfg)
    return _rows


def test_correlation_measures_are_consistent():
    series = correlation_rows()

    for kind, rows in series.items():
        for row in rows:
            for side in ('A', 'B'):
                raw = row['mutual_info'] - row[f'classical_{side}']
                assert raw >= -1e-6
                assert abs(row['mutual_info'] - row[f'classical_{side}'] - row[f'discord_{side}']) <= 1e-6
            assert 0 <= row['eof'] <= 1

    first = series['a'][0]
    for column in ('mutual_info', 'classical_B', 'discord_B', 'eof'):
        assert abs(first[column]) <= 1e-9
    for kind in 'bcd':
        for column in ('mutual_info', 'classical_B', 'discord_B', 'eof'):
            assert max(row[column] for row in series[kind][1:]) > 1e-4, (kind, column)


def test_correlations_separate_c_and_d_beyond_purity():
    series = correlation_rows()
    purity_gap = witness.max_gap([r['purity'] for r in series['c']], [r['purity'] for r in series['d']])
    correlation_gap = max(
        witness.max_gap([r[column] for r in series['c']], [r[column] for r in series['d']])
        for column in ('mutual_info', 'classical_B', 'discord_B', 'eof')
    )
    assert correlation_gap > 2 * purity_gap
    assert correlation_gap > 0.1


@pytest.mark.parametrize('n_atoms', [1, 2])
def test_numerical_hygiene(n_atoms):
    for gamma in (1.0, 5.0):
        for kind, traj in trajectories(n_atoms, gamma).items():
            assert max(d['trace_drift'] for d in traj.diagnostics) <= 1e-9
            assert min(d['min_eig'] for d in traj.diagnostics) >= -1e-8
            assert traj.excitation_rise <= 1e-10


def test_step_halving_on_figure_scenarios():
    for gamma in (1.0, 5.0):
        coarse, fine = trajectories(1, gamma), trajectories(1, gamma, dt=0.0005, record_every=20)
        for kind in coarse:
            for x, y in zip(coarse[kind].reduced_states, fine[kind].reduced_states):
                assert np.abs(x.data - y.data).max() <= 1e-9

import numpy as np
import pytest

from lib.model import ModelParams, build_operators
from lib.qcore import Ket
from lib.states import KINDS, Preparation, initial_state
from lib.dynamics import IntegratorConfig, evolve, evolve_full, excited_population_oracle
from lib.errors import ConfigError, IntegrationUnstable, LayoutMismatch
from lib import measures


def excited_start(gamma):
    p = ModelParams(n_atoms=1, gamma=gamma)
    return p, build_operators(p), Ket.basis(p.layout, [1, 0]).projector()


@pytest.mark.parametrize('gamma', [1.0, 4.0, 5.0])
def test_single_excitation_oracle(gamma):
    p, ops, rho0 = excited_start(gamma)
    traj = evolve(rho0, ops, p, IntegratorConfig(t_max=10.0), quiet=True)
    simulated = np.array([rho.data[1, 1].real for rho in traj.reduced_states])
    assert np.abs(simulated - excited_population_oracle(traj.times, gamma)).max() <= 1e-6


def test_oracle_limits():
    t = np.linspace(0, 5, 11)
    assert excited_population_oracle([0.0], 1.0)[0] == pytest.approx(1.0)
    # without decay the excitation swaps back and forth at frequency omega
    assert np.allclose(excited_population_oracle(t, 0.0), np.cos(t)**2)


def test_recording_grid():
    p, ops, rho0 = excited_start(1.0)
    traj = evolve_full(rho0, ops, p, IntegratorConfig(dt=0.001, t_max=1.0, record_every=10), quiet=True)
    assert len(traj) == 101
    assert np.allclose(np.diff(traj.times), 0.01)
    assert traj.full_states[0] is rho0
    assert traj.reduced_states[0].layout.roles == ('atom1',)
    assert evolve(rho0, ops, p, IntegratorConfig(t_max=1.0), quiet=True).full_states is None


def test_integrator_config():
    for dt in (0.0, 0.02, -0.001):
        with pytest.raises(ConfigError):
            IntegratorConfig(dt=dt)
    with pytest.raises(ConfigError):
        IntegratorConfig(record_every=0)
    assert IntegratorConfig(dt=0.001, t_max=10.0).n_steps == 10000


def test_layout_mismatch():
    p = ModelParams(n_atoms=1)
    rho0 = initial_state(Preparation('a'), ModelParams(n_atoms=2))
    with pytest.raises(LayoutMismatch):
        evolve(rho0, build_operators(p), p, IntegratorConfig(t_max=0.1), quiet=True)


def test_unstable_step_is_reported():
    p = ModelParams(n_atoms=1, gamma=1e4)
    rho0 = initial_state(Preparation('a'), p)
    with pytest.raises(IntegrationUnstable) as err:
        evolve(rho0, build_operators(p), p, IntegratorConfig(dt=0.01, t_max=1.0), quiet=True)
    assert 0 < err.value.time <= 1.0


def test_unstable_between_samples():
    p = ModelParams(n_atoms=1, gamma=1e4)
    rho0 = initial_state(Preparation('a'), p)
    cfg = IntegratorConfig(dt=0.01, t_max=0.05, record_every=1000)
    with pytest.raises(IntegrationUnstable) as err:
        evolve(rho0, build_operators(p), p, cfg, quiet=True)
    assert 0 < err.value.time <= 0.05


@pytest.mark.parametrize('n_atoms', [1, 2])
def test_hygiene(n_atoms):
    for gamma in (1.0, 5.0):
        p = ModelParams(n_atoms=n_atoms, gamma=gamma)
        ops = build_operators(p)
        for kind in KINDS:
            traj = evolve(initial_state(Preparation(kind), p), ops, p, IntegratorConfig(), quiet=True)
            assert max(d['trace_drift'] for d in traj.diagnostics) <= 1e-9
            assert min(rho.min_eigenvalue() for rho in traj.reduced_states) >= -1e-8
            assert traj.excitation_rise <= 1e-10
            excitation = np.array([d['excitation'] for d in traj.diagnostics])
            assert np.all(np.diff(excitation) <= 1e-10)


@pytest.mark.parametrize('n_atoms', [1, 2])
def test_fock_cutoff_doubling(n_atoms):
    cfg = IntegratorConfig(t_max=5.0)
    for kind in KINDS:
        runs = []
        for cutoff in (1, 2):
            p = ModelParams(n_atoms=n_atoms, gamma=1.0, fock_cutoff=cutoff)
            runs.append(evolve(initial_state(Preparation(kind), p), build_operators(p), p, cfg, quiet=True))
        for x, y in zip(*[r.reduced_states for r in runs]):
            assert np.abs(x.data - y.data).max() <= 1e-12


def test_purity_returns_to_one_in_weak_coupling():
    p = ModelParams(n_atoms=1, gamma=5.0)
    ops = build_operators(p)
    cfg = IntegratorConfig(t_max=50.0, record_every=1000)
    ground = Ket.basis(p.layout.select({'atom1'}), [0])
    for kind in KINDS:
        traj = evolve(initial_state(Preparation(kind), p), ops, p, cfg, quiet=True)
        assert measures.purity(traj.reduced_states[-1]) > 0.999
        assert measures.fidelity(traj.reduced_states[-1], ground) > 0.999

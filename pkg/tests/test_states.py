import numpy as np
import pytest

from lib.model import ModelParams
from lib.qcore import partial_trace
from lib.states import (KINDS, CorrelationClass, Preparation, initial_state, system_marginal,
                        system_role, state_correlation_class)
from lib.errors import ConfigError
from lib import measures


@pytest.mark.parametrize('alpha2', [0.1, 0.5, 0.9])
def test_marginals_are_equal(alpha2):
    p = ModelParams(n_atoms=1)
    reduced = [partial_trace(initial_state(Preparation(k, alpha2), p), {'atom1'}) for k in KINDS]
    for rho in reduced:
        assert np.abs(rho.data - np.diag([alpha2, 1 - alpha2])).max() <= 1e-12
    for rho in reduced[1:]:
        assert np.abs(rho.data - reduced[0].data).max() <= 1e-12


def test_preparation_validation():
    with pytest.raises(ConfigError):
        Preparation('e')
    for alpha2 in (0.0, 1.0, -0.5):
        with pytest.raises(ConfigError):
            Preparation('a', alpha2)


def test_correlation_classes():
    assert [state_correlation_class(Preparation(k)) for k in KINDS] == [
        CorrelationClass.NONE,
        CorrelationClass.CLASSICAL_ONLY,
        CorrelationClass.DISCORD_NO_ENTANGLEMENT,
        CorrelationClass.ENTANGLED,
    ]


def test_state_structure():
    p = ModelParams(n_atoms=1)
    states = {k: initial_state(Preparation(k, 0.3), p) for k in KINDS}
    assert measures.purity(states['d']) == pytest.approx(1.0, abs=1e-12)
    assert measures.concurrence(states['d']) == pytest.approx(2 * np.sqrt(0.3 * 0.7), abs=1e-9)
    assert measures.concurrence(states['c']) <= 1e-9
    assert measures.discord(states['b']) <= 1e-6
    assert measures.discord(states['c'], side='B') > 1e-3
    assert measures.mutual_information(states['a']) <= 1e-9


def test_probe_atom():
    p = ModelParams(n_atoms=2)
    assert system_role(p) == 'atom2'
    for k in KINDS:
        rho = initial_state(Preparation(k), p)
        assert rho.layout.roles == ('atom1', 'atom2', 'pseudomode')
        probe = partial_trace(rho, {'atom1'})
        assert np.abs(probe.data - np.diag([1, 0])).max() <= 1e-12
        system = partial_trace(rho, {'atom2'})
        assert np.abs(system.data - system_marginal(Preparation(k), 'atom2').data).max() <= 1e-12


def test_larger_cutoff_keeps_one_excitation():
    p = ModelParams(n_atoms=1, fock_cutoff=3)
    for k in KINDS:
        rho = initial_state(Preparation(k), p)
        mode = partial_trace(rho, {'pseudomode'})
        assert np.abs(mode.data[2:, :]).max() == 0

from dataclasses import dataclass
from enum import Enum
import numpy as np

from lib.qcore import SpaceLayout, Ket, DensityMatrix, tensor
from lib.model import ModelParams
from lib.errors import ConfigError, CutoffTooSmall

# initial atom + pseudo-mode states that all share the one-qubit marginal
#     rho_S = alpha^2 |g><g| + (1 - alpha^2) |e><e|
#
# a) uncorrelated      rho_S x |0><0|
# b) classical         alpha^2 |g><g| x |1><1| + (1 - alpha^2) |e><e| x |0><0|
# c) discordant        alpha^2 |g><g| x |phi><phi| + (1 - alpha^2) |e><e| x |0><0|,  |phi> = (|0> + |1>)/sqrt(2)
# d) entangled         |psi><psi|,  |psi> = alpha |g>|1> + sqrt(1 - alpha^2) |e>|0>
#
# environment kets |n>_E are pseudo-mode Fock states
# with a probe atom the full state is |g><g| (atom1, probe) x rho_i (atom2, system)

KINDS = ('a', 'b', 'c', 'd')


class CorrelationClass(str, Enum):
    NONE = 'none'
    CLASSICAL_ONLY = 'classical_only'
    DISCORD_NO_ENTANGLEMENT = 'discord_no_entanglement'
    ENTANGLED = 'entangled'


CORRELATION_CLASSES = {
    'a': CorrelationClass.NONE,
    'b': CorrelationClass.CLASSICAL_ONLY,
    'c': CorrelationClass.DISCORD_NO_ENTANGLEMENT,
    'd': CorrelationClass.ENTANGLED,
}


@dataclass(frozen=True)
class Preparation:
    kind: str
    alpha2: float = 0.5

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f'ERROR: unknown preparation "{self.kind}", expected one of {", ".join(KINDS)}')
        if not 0 < self.alpha2 < 1:
            raise ConfigError(f'ERROR: alpha2 must lie in (0, 1), got {self.alpha2}')


def system_role(p: ModelParams) -> str:
    return 'atom2' if p.n_atoms == 2 else 'atom1'


def system_marginal(prep: Preparation, role: str = 'atom1') -> DensityMatrix:
    '''diag(alpha^2, 1 - alpha^2) in {|g>, |e>}, the same for every kind.'''
    layout = SpaceLayout((2,), (role,))
    return DensityMatrix(layout, np.diag([prep.alpha2, 1 - prep.alpha2]))


def initial_state(prep: Preparation, p: ModelParams) -> DensityMatrix:
    if p.fock_cutoff < 1:
        raise CutoffTooSmall(f'ERROR: preparations need Fock levels 0 and 1, cutoff is {p.fock_cutoff}')

    role = system_role(p)
    atom = SpaceLayout((2,), (role,))
    mode = SpaceLayout((p.fock_cutoff + 1,), ('pseudomode',))

    g, e = Ket.basis(atom, [0]), Ket.basis(atom, [1])
    vac, one = Ket.basis(mode, [0]), Ket.basis(mode, [1])
    phi = Ket(mode, (vac.amplitudes + one.amplitudes) / np.sqrt(2))

    a2 = prep.alpha2
    if prep.kind == 'a':
        rho = tensor(system_marginal(prep, role), vac.projector())
    elif prep.kind == 'b':
        rho = _mix(a2, tensor(g.projector(), one.projector()), tensor(e.projector(), vac.projector()))
    elif prep.kind == 'c':
        rho = _mix(a2, tensor(g.projector(), phi.projector()), tensor(e.projector(), vac.projector()))
    else:
        psi = np.sqrt(a2) * tensor(g, one).amplitudes + np.sqrt(1 - a2) * tensor(e, vac).amplitudes
        rho = Ket(atom.concat(mode), psi).projector()

    if p.n_atoms == 2:
        probe = SpaceLayout((2,), ('atom1',))
        rho = tensor(Ket.basis(probe, [0]).projector(), rho)
    return rho.validate()


def _mix(weight: float, first: DensityMatrix, second: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(first.layout, weight * first.data + (1 - weight) * second.data)


def state_correlation_class(prep: Preparation) -> CorrelationClass:
    return CORRELATION_CLASSES[prep.kind]

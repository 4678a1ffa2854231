from dataclasses import dataclass
from enum import Enum
import math
import numpy as np
from scipy import integrate

from lib.qcore import SpaceLayout, DensityMatrix
from lib.errors import ConfigError, CutoffTooSmall, LayoutMismatch, SingularSpectralDensity

# damped Jaynes-Cummings model, pseudo-mode form, interaction picture
#
# atoms: |g> = index 0, |e> = index 1
# pseudo-mode: Fock states |0> .. |n_max>
# all rates are in the same unit as omega; with omega = 1 times are in units of 1/omega

SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=np.complex128)  # |g><e|


class Regime(str, Enum):
    STRONG = 'strong'
    WEAK = 'weak'
    BOUNDARY = 'boundary'


@dataclass(frozen=True)
class ModelParams:
    n_atoms: int = 1
    omega: float = 1.0       # coupling constant, sets the time unit
    gamma: float = 1.0       # pseudo-mode decay rate
    omega0: float = 0.0      # Bohr frequency, only enters spectral_density
    fock_cutoff: int = 1     # highest pseudo-mode Fock level kept

    def __post_init__(self):
        if self.n_atoms not in (1, 2):
            raise ConfigError(f'ERROR: n_atoms must be 1 or 2, got {self.n_atoms}')
        if not self.omega > 0:
            raise ConfigError(f'ERROR: omega must be > 0, got {self.omega}')
        if not self.gamma >= 0:
            raise ConfigError(f'ERROR: gamma must be >= 0, got {self.gamma}')
        if not self.omega0 >= 0:
            raise ConfigError(f'ERROR: omega0 must be >= 0, got {self.omega0}')
        if self.fock_cutoff < 1:
            raise CutoffTooSmall(f'ERROR: fock_cutoff must be >= 1, got {self.fock_cutoff}')

    @property
    def gamma_over_omega(self) -> float:
        return self.gamma / self.omega

    @property
    def atom_roles(self) -> tuple:
        return ('atom1', 'atom2')[:self.n_atoms]

    @property
    def layout(self) -> SpaceLayout:
        return SpaceLayout((2,) * self.n_atoms + (self.fock_cutoff + 1,), self.atom_roles + ('pseudomode',))


@dataclass(frozen=True, eq=False)
class OperatorSet:
    layout: SpaceLayout
    V: np.ndarray
    a: np.ndarray
    a_dag: np.ndarray
    sigma_minus: tuple
    sigma_plus: tuple
    number: np.ndarray       # total excitation N = sum_j s+^j s-^j + a^dag a


# place a single-subsystem operator at position i of a product space
def _embed(op: np.ndarray, i: int, dims: tuple) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for j, d in enumerate(dims):
        out = np.kron(out, op if j == i else np.eye(d))
    return out


def ladder(n_max: int) -> np.ndarray:
    '''Annihilation operator on Fock levels 0..n_max, a|n> = sqrt(n)|n-1>.'''
    return np.diag(np.sqrt(np.arange(1, n_max + 1)), k=1).astype(np.complex128)


def build_operators(p: ModelParams) -> OperatorSet:
    '''V = omega * (sum_j sigma_+^j) a + h.c. on [atom1, (atom2), pseudomode].'''
    layout = p.layout
    dims = layout.dims
    mode = layout.index('pseudomode')

    a = _embed(ladder(p.fock_cutoff), mode, dims)
    a_dag = a.conj().T
    sm = tuple(_embed(SIGMA_MINUS, j, dims) for j in range(p.n_atoms))
    sp = tuple(s.conj().T for s in sm)

    coupling = sum(s @ a for s in sp)
    V = p.omega * (coupling + coupling.conj().T)
    number = sum(s_p @ s_m for s_p, s_m in zip(sp, sm)) + a_dag @ a

    for m in (V, a, a_dag, number, *sm, *sp):
        m.setflags(write=False)
    return OperatorSet(layout, V, a, a_dag, sm, sp, number)


def liouvillian_apply(ops: OperatorSet, gamma: float, rho) -> np.ndarray:
    '''d(rho)/dt = -i[V, rho] + gamma/2 (2 a rho a^dag - a^dag a rho - rho a^dag a)'''
    if isinstance(rho, DensityMatrix):
        if rho.layout != ops.layout:
            raise LayoutMismatch(f'ERROR: state layout {rho.layout.roles}{rho.layout.dims} does not match operators {ops.layout.roles}{ops.layout.dims}')
        rho = rho.data
    elif np.shape(rho) != ops.V.shape:
        raise LayoutMismatch(f'ERROR: matrix shape {np.shape(rho)} does not match operators {ops.V.shape}')

    V, a, a_dag = ops.V, ops.a, ops.a_dag
    n = a_dag @ a
    drho = -1j * (V @ rho - rho @ V)
    if gamma != 0:
        drho = drho + (gamma / 2) * (2 * a @ rho @ a_dag - n @ rho - rho @ n)
    return drho


def liouvillian_matrix(ops: OperatorSet, gamma: float) -> np.ndarray:
    '''Superoperator L with vec(d(rho)/dt) = L @ vec(rho), row-major vec.

    Uses vec(A X B) = kron(A, B.T) vec(X) for C-ordered flattening.
    '''
    d = ops.V.shape[0]
    eye = np.eye(d)
    V, a, a_dag = ops.V, ops.a, ops.a_dag
    n = a_dag @ a
    L = -1j * (np.kron(V, eye) - np.kron(eye, V.T))
    if gamma != 0:
        L = L + (gamma / 2) * (2 * np.kron(a, a_dag.T) - np.kron(n, eye) - np.kron(eye, n.T))
    return L


def spectral_density(p: ModelParams, w: float) -> float:
    '''Lorentzian J(w) = (omega^2 / pi) * gamma / ((w - omega0)^2 + gamma^2 / 4)'''
    detuning = w - p.omega0
    denom = detuning**2 + p.gamma**2 / 4
    if denom == 0:
        raise SingularSpectralDensity(f'ERROR: J(w) is singular at w = omega0 = {p.omega0} when gamma = 0')
    return p.omega**2 / math.pi * p.gamma / denom


def regime(p: ModelParams) -> Regime:
    '''strong iff gamma < 2 omega, weak iff gamma > 2 omega'''
    threshold = 2 * p.omega
    if abs(p.gamma - threshold) <= 1e-12 * threshold:
        return Regime.BOUNDARY
    return Regime.STRONG if p.gamma < threshold else Regime.WEAK


def mean_excitation(ops: OperatorSet, rho) -> float:
    '''<N> = Tr(N rho), total excitations shared by atoms and pseudo-mode.'''
    data = rho.data if isinstance(rho, DensityMatrix) else np.asarray(rho)
    return float(np.trace(ops.number @ data).real)


def spectral_weight(p: ModelParams, half_widths: float = 200.0) -> float:
    '''Integral of J(w) over omega0 +- half_widths * gamma; tends to 2 omega^2 as the window grows.'''
    if p.gamma == 0:
        raise SingularSpectralDensity('ERROR: J(w) is a delta peak when gamma = 0')
    lo, hi = p.omega0 - half_widths * p.gamma, p.omega0 + half_widths * p.gamma
    value, _ = integrate.quad(lambda w: spectral_density(p, w), lo, hi, points=[p.omega0], limit=200)
    return float(value)

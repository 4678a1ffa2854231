from dataclasses import dataclass
import numpy as np
from scipy import optimize

from lib.qcore import DensityMatrix, Ket, partial_trace, eig_hermitian
from lib.errors import LayoutMismatch, PseudomodeError

# scalar witnesses on reduced atom states
# entropic quantities are in bits (log base 2)
#
# two-qubit states: side 'A' is the first subsystem of the layout, 'B' the second
# classical_correlation(side='B') measures B and conditions A, the
# convention used by the mutual information / discord definitions

ENTROPY_EPS = 1e-12        # eigenvalues at or below this contribute 0 to S
BRANCH_EPS = 1e-14         # measurement outcomes this unlikely contribute 0
CONCURRENCE_CLAMP = -1e-10
REPORT_TOL = 1e-6
SIDES = ('A', 'B')

SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SYSY = np.kron(SIGMA_Y, SIGMA_Y)


@dataclass(frozen=True)
class MeasurementBasis:
    theta: float = 0.0
    phi: float = 0.0

    # equivalent angles with theta in [0, pi] and phi in [0, 2 pi)
    @classmethod
    def wrapped(cls, theta: float, phi: float) -> 'MeasurementBasis':
        theta = float(theta) % (2 * np.pi)
        if theta > np.pi:
            theta = 2 * np.pi - theta
            phi = phi + np.pi
        return cls(theta, float(phi) % (2 * np.pi))

    def vectors(self):
        '''|b> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> and its orthogonal complement'''
        c, s = np.cos(self.theta / 2), np.sin(self.theta / 2)
        w = np.exp(1j * self.phi)
        return np.array([c, w * s]), np.array([-np.conj(w) * s, c])

    def projectors(self):
        return tuple(np.outer(v, v.conj()) for v in self.vectors())


@dataclass(frozen=True)
class OptimizerConfig:
    n_theta: int = 64
    n_phi: int = 128
    refine: bool = True
    fatol: float = 1e-10
    xatol: float = 1e-8
    max_iter: int = 4000


@dataclass(frozen=True)
class MeasureReport:
    purity: float
    entropy: float
    entropy_A: float = None
    entropy_B: float = None
    entropy_AB: float = None
    mutual_info: float = None
    classical_corr: float = None
    discord: float = None
    discord_raw: float = None
    concurrence: float = None
    eof: float = None
    argmin_basis: MeasurementBasis = None
    measured_side: str = None


def _shannon(p) -> np.ndarray:
    '''-sum p log2 p along the last axis, entries <= ENTROPY_EPS count as 0'''
    p = np.asarray(p, dtype=np.float64)
    safe = np.where(p > ENTROPY_EPS, p, 1.0)
    return -np.sum(np.where(p > ENTROPY_EPS, p * np.log2(safe), 0.0), axis=-1)


def _data(rho) -> np.ndarray:
    return rho.data if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=np.complex128)


def _two_qubit(rho: DensityMatrix) -> DensityMatrix:
    if not isinstance(rho, DensityMatrix) or rho.layout.dims != (2, 2):
        dims = rho.layout.dims if isinstance(rho, DensityMatrix) else np.shape(rho)
        raise LayoutMismatch(f'ERROR: expected a two-qubit state, got dims {dims}')
    return rho


def purity(rho) -> float:
    '''P = Tr(rho^2)'''
    m = _data(rho)
    return float(np.trace(m @ m).real)


def entropy(rho) -> float:
    '''von Neumann entropy in bits'''
    evals, _ = eig_hermitian(_data(rho))
    return float(_shannon(evals))


def fidelity(rho, target: Ket) -> float:
    '''<psi|rho|psi> for a pure target state'''
    psi = target.amplitudes
    return float(np.real(psi.conj() @ _data(rho) @ psi))


def marginals(rho: DensityMatrix):
    rho = _two_qubit(rho)
    first, second = rho.layout.roles
    return partial_trace(rho, {first}), partial_trace(rho, {second})


def mutual_information(rho_AB: DensityMatrix) -> float:
    '''I = S(A) + S(B) - S(AB)'''
    rho_A, rho_B = marginals(rho_AB)
    return entropy(rho_A) + entropy(rho_B) - entropy(rho_AB)


# rho as T[u, m, u', m'], measured subsystem on the second axis
def _measured_last(rho: DensityMatrix, side: str) -> np.ndarray:
    if side not in SIDES:
        raise ValueError(f'ERROR: side must be A or B, got "{side}"')
    T = _two_qubit(rho).data.reshape(2, 2, 2, 2)
    return T.transpose(1, 0, 3, 2) if side == 'A' else T


def _branch_entropy(T: np.ndarray, bs: np.ndarray) -> np.ndarray:
    '''p_b * S(rho_u|b) for each measurement vector b (rows of bs)'''
    M = np.einsum('nj,ajck,nk->nac', bs.conj(), T, bs)
    p = np.real(M[:, 0, 0] + M[:, 1, 1])
    out = np.zeros_like(p)
    ok = p > BRANCH_EPS
    if np.any(ok):
        Mn = M[ok] / p[ok, None, None]
        det = np.real(Mn[:, 0, 0] * Mn[:, 1, 1]) - np.abs(Mn[:, 0, 1])**2
        disc = np.sqrt(np.clip(1 - 4 * det, 0, 1))
        lam = np.stack(((1 + disc) / 2, (1 - disc) / 2), axis=-1)
        out[ok] = p[ok] * _shannon(lam)
    return out


def conditional_entropy(rho_AB: DensityMatrix, side: str, thetas, phis) -> np.ndarray:
    '''sum over outcomes of p S(post-measurement state) for projective measurements at (theta, phi)

    thetas and phis broadcast against each other; the result has their broadcast shape.
    '''
    T = _measured_last(rho_AB, side)
    thetas, phis = np.broadcast_arrays(np.asarray(thetas, dtype=np.float64), np.asarray(phis, dtype=np.float64))
    shape = thetas.shape
    c, s = np.cos(thetas.ravel() / 2), np.sin(thetas.ravel() / 2)
    w = np.exp(1j * phis.ravel())
    plus = np.stack((c + 0j, w * s), axis=-1)
    minus = np.stack((-np.conj(w) * s, c + 0j), axis=-1)
    return (_branch_entropy(T, plus) + _branch_entropy(T, minus)).reshape(shape)


def classical_correlation(rho_AB: DensityMatrix, side: str = 'B', opt: OptimizerConfig = None):
    '''J = S(unmeasured) - min over projective measurements of the conditional entropy.

    The minimum is found on an n_theta x n_phi grid over the Bloch sphere and
    refined with Nelder-Mead from the best grid point. Returns (J, basis).
    '''
    opt = opt or OptimizerConfig()
    rho_A, rho_B = marginals(rho_AB)
    unmeasured = rho_A if side == 'B' else rho_B

    thetas = np.linspace(0, np.pi, opt.n_theta)
    phis = np.linspace(0, 2 * np.pi, opt.n_phi, endpoint=False)
    grid = conditional_entropy(rho_AB, side, thetas[:, None], phis[None, :])
    i, j = np.unravel_index(np.argmin(grid), grid.shape)
    best, angles = float(grid[i, j]), (thetas[i], phis[j])

    if opt.refine:
        objective = lambda x: float(conditional_entropy(rho_AB, side, x[0], x[1]))
        result = optimize.minimize(
            objective, x0=np.array(angles), method='Nelder-Mead',
            options={'xatol': opt.xatol, 'fatol': opt.fatol, 'maxiter': opt.max_iter},
        )
        # never accept a refinement that is worse than the grid
        if result.fun < best:
            best, angles = float(result.fun), tuple(result.x)

    return entropy(unmeasured) - best, MeasurementBasis.wrapped(*angles)


def clamp_discord(d_raw: float) -> float:
    '''small negatives within the optimizer tolerance are reported as 0'''
    return 0.0 if -REPORT_TOL <= d_raw < 0 else d_raw


def discord(rho_AB: DensityMatrix, side: str = 'B', opt: OptimizerConfig = None) -> float:
    '''D = I - J at the achieved minimum (raw, may be slightly negative)'''
    j, _ = classical_correlation(rho_AB, side, opt)
    return mutual_information(rho_AB) - j


def concurrence(rho_AB: DensityMatrix) -> float:
    '''Wootters concurrence max(0, l1 - l2 - l3 - l4).

    The l_i are square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy),
    taken from the Hermitian matrix sqrt(rho) (sy x sy) rho* (sy x sy) sqrt(rho)
    which has the same spectrum. Complex conjugation is in the computational basis.
    '''
    m = _two_qubit(rho_AB).data
    evals, vecs = eig_hermitian(m)
    root = vecs @ np.diag(np.sqrt(np.clip(evals, 0, None))) @ vecs.conj().T
    flipped = SYSY @ m.conj() @ SYSY
    R = root @ flipped @ root
    lam = np.linalg.eigvalsh((R + R.conj().T) / 2)
    lam = np.where((lam < 0) & (lam > CONCURRENCE_CLAMP), 0.0, lam)
    lam = np.sort(np.sqrt(np.clip(lam, 0, None)))[::-1]
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def eof_from_concurrence(c: float) -> float:
    '''EoF = h(f), f = (1 + sqrt(1 - C^2)) / 2, h the binary entropy'''
    f = (1 + np.sqrt(max(0.0, 1 - c**2))) / 2
    return float(_shannon([f, 1 - f]))


def eof(rho_AB: DensityMatrix) -> float:
    return eof_from_concurrence(concurrence(rho_AB))


def _clamp_purity(p: float, dim: int) -> float:
    if 1 < p <= 1 + 1e-9:
        return 1.0
    if 1 / dim - 1e-9 <= p < 1 / dim:
        return 1 / dim
    return p


def report(rho: DensityMatrix, side: str = 'B', opt: OptimizerConfig = None) -> MeasureReport:
    '''All witnesses for a one- or two-qubit atom state.

    One-qubit inputs only fill purity and entropy.
    '''
    P = _clamp_purity(purity(rho), rho.dim)
    S = entropy(rho)
    if len(rho.layout.dims) == 1:
        return MeasureReport(purity=P, entropy=S)

    rho_A, rho_B = marginals(rho)
    s_a, s_b = entropy(rho_A), entropy(rho_B)
    mi = s_a + s_b - S
    j, basis = classical_correlation(rho, side, opt)
    d_raw = mi - j
    d = clamp_discord(d_raw)
    if d_raw < -REPORT_TOL:
        raise PseudomodeError(f'ERROR: negative discord beyond tolerance (I={mi:.9g}, J={j:.9g}, D={d_raw:.9g})')
    c = concurrence(rho)
    return MeasureReport(
        purity=P, entropy=S, entropy_A=s_a, entropy_B=s_b, entropy_AB=S,
        mutual_info=mi, classical_corr=j, discord=d, discord_raw=d_raw,
        concurrence=c, eof=eof_from_concurrence(c),
        argmin_basis=basis, measured_side=side,
    )

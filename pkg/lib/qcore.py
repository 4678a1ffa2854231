from dataclasses import dataclass
import numpy as np

from lib.errors import DuplicateRole, UnknownRole, NotHermitian, InvalidState

# dense linear algebra on small labeled tensor-product spaces
#
# basis convention: the FIRST subsystem of a layout is the most significant
# digit of the basis index, so two qubits are ordered |00>, |01>, |10>, |11>
# this is what np.kron produces and what partial_trace and sigma_y x sigma_y assume

ROLES = ('atom1', 'atom2', 'pseudomode')

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-9
PSD_TOL = 1e-8
NORM_TOL = 1e-12


@dataclass(frozen=True)
class SpaceLayout:
    dims: tuple
    roles: tuple

    def __post_init__(self):
        object.__setattr__(self, 'dims', tuple(int(d) for d in self.dims))
        object.__setattr__(self, 'roles', tuple(self.roles))
        if len(self.dims) != len(self.roles):
            raise ValueError(f'ERROR: {len(self.dims)} dims for {len(self.roles)} roles')
        if len(self.dims) == 0:
            raise ValueError('ERROR: empty layout')
        if any(d < 2 for d in self.dims):
            raise ValueError(f'ERROR: subsystem dimensions must be >= 2, got {self.dims}')
        for role in self.roles:
            if role not in ROLES:
                raise UnknownRole(f'ERROR: unknown role "{role}"')
        if len(set(self.roles)) != len(self.roles):
            raise DuplicateRole(f'ERROR: duplicate role in {self.roles}')

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def index(self, role: str) -> int:
        if role not in self.roles:
            raise UnknownRole(f'ERROR: role "{role}" not in layout {self.roles}')
        return self.roles.index(role)

    def dim(self, role: str) -> int:
        return self.dims[self.index(role)]

    # sub-layout over the given roles, kept in this layout's order
    def select(self, roles) -> 'SpaceLayout':
        for role in roles:
            self.index(role)
        kept = [i for i, r in enumerate(self.roles) if r in roles]
        return SpaceLayout(tuple(self.dims[i] for i in kept), tuple(self.roles[i] for i in kept))

    def concat(self, other: 'SpaceLayout') -> 'SpaceLayout':
        overlap = set(self.roles) & set(other.roles)
        if overlap:
            raise DuplicateRole(f'ERROR: roles {sorted(overlap)} appear in both operands')
        return SpaceLayout(self.dims + other.dims, self.roles + other.roles)

    # mixed-radix index of a product basis state, first subsystem most significant
    def basis_index(self, digits) -> int:
        if len(digits) != len(self.dims):
            raise ValueError(f'ERROR: expected {len(self.dims)} digits, got {len(digits)}')
        return int(np.ravel_multi_index(tuple(digits), self.dims))


@dataclass(frozen=True, eq=False)
class Ket:
    layout: SpaceLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != self.layout.total_dim:
            raise ValueError(f'ERROR: {amps.size} amplitudes for dimension {self.layout.total_dim}')
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > NORM_TOL:
            raise InvalidState(f'ERROR: ket norm is {norm}, expected 1')
        amps.setflags(write=False)
        object.__setattr__(self, 'amplitudes', amps)

    @classmethod
    def basis(cls, layout: SpaceLayout, digits) -> 'Ket':
        amps = np.zeros(layout.total_dim, dtype=np.complex128)
        amps[layout.basis_index(digits)] = 1
        return cls(layout, amps)

    def projector(self) -> 'DensityMatrix':
        return DensityMatrix(self.layout, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    layout: SpaceLayout
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=np.complex128)
        n = self.layout.total_dim
        if data.shape != (n, n):
            raise ValueError(f'ERROR: matrix shape {data.shape} does not match dimension {n}')
        data.setflags(write=False)
        object.__setattr__(self, 'data', data)

    @property
    def dim(self) -> int:
        return self.layout.total_dim

    def trace(self) -> float:
        return float(np.trace(self.data).real)

    def hermiticity_defect(self) -> float:
        return float(np.abs(self.data - self.data.conj().T).max())

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(_hermitian_part(self.data))[0])

    # checks the three density matrix invariants, raises InvalidState on the first violation
    def validate(self) -> 'DensityMatrix':
        defect = self.hermiticity_defect()
        if defect > HERMITIAN_TOL:
            raise InvalidState(f'ERROR: state is not Hermitian (defect {defect:.3g})')
        drift = abs(np.trace(self.data) - 1)
        if drift > TRACE_TOL:
            raise InvalidState(f'ERROR: state trace differs from 1 by {drift:.3g}')
        low = self.min_eigenvalue()
        if low < -PSD_TOL:
            raise InvalidState(f'ERROR: state has negative eigenvalue {low:.3g}')
        return self


def _hermitian_part(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def tensor(a, b):
    '''Kronecker product with a's subsystems first.

    Both operands must be the same kind (Ket or DensityMatrix) and carry
    disjoint roles; the result's layout is a.layout followed by b.layout.
    '''
    layout = a.layout.concat(b.layout)
    if isinstance(a, Ket) and isinstance(b, Ket):
        return Ket(layout, np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(layout, np.kron(a.data, b.data))
    raise TypeError(f'ERROR: cannot tensor {type(a).__name__} with {type(b).__name__}')


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    '''Reduced state over the roles in keep, in their original relative order.'''
    keep = set(keep)
    if len(keep) == 0:
        raise UnknownRole('ERROR: partial_trace needs at least one role to keep')
    layout = rho.layout.select(keep)
    if layout.roles == rho.layout.roles:
        return rho

    # einsum contraction: traced subsystems share their row and column letter
    n = len(rho.layout.dims)
    rows = [chr(ord('a') + i) for i in range(n)]
    cols = [
        chr(ord('a') + n + i) if role in keep else rows[i]
        for i, role in enumerate(rho.layout.roles)
    ]
    out_rows = [rows[i] for i, role in enumerate(rho.layout.roles) if role in keep]
    out_cols = [cols[i] for i, role in enumerate(rho.layout.roles) if role in keep]
    subscripts = f"{''.join(rows)}{''.join(cols)}->{''.join(out_rows)}{''.join(out_cols)}"

    reduced = np.einsum(subscripts, rho.data.reshape(rho.layout.dims * 2))
    d = layout.total_dim
    return DensityMatrix(layout, reduced.reshape(d, d))


def eig_hermitian(m):
    '''Eigenvalues (real, ascending) and orthonormal eigenvector columns of a Hermitian matrix.'''
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitian(f'ERROR: expected a square matrix, got shape {m.shape}')
    defect = np.abs(m - m.conj().T).max() if m.size else 0.0
    if defect > HERMITIAN_TOL:
        raise NotHermitian(f'ERROR: matrix is not Hermitian (defect {defect:.3g})')
    return np.linalg.eigh(_hermitian_part(m))


def dag(m) -> np.ndarray:
    return np.asarray(m).conj().T


def mat_mul(a, b) -> np.ndarray:
    return np.asarray(a) @ np.asarray(b)


def mat_add(a, b) -> np.ndarray:
    return np.asarray(a) + np.asarray(b)


def scale(m, factor) -> np.ndarray:
    return factor * np.asarray(m)

from dataclasses import dataclass, field
import time
import numpy as np

from lib.qcore import DensityMatrix, partial_trace
from lib.model import ModelParams, OperatorSet, liouvillian_matrix
from lib.errors import ConfigError, IntegrationUnstable, LayoutMismatch

# fixed-step RK4 on the pseudo-mode master equation
#
# time is dimensionless (omega * t); the integrator works on the row-major
# vectorized density matrix with the precomputed superoperator L / omega
# after every step rho <- (rho + rho^dag) / 2 when hermitize is set
# the trace is never renormalized, its drift is reported as a diagnostic

DEFAULT_DT = 0.001
DEFAULT_T_MAX = 10.0
DEFAULT_RECORD_EVERY = 10

TRACE_DRIFT_LIMIT = 1e-6
NEGATIVITY_LIMIT = -1e-6


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = DEFAULT_DT
    t_max: float = DEFAULT_T_MAX
    record_every: int = DEFAULT_RECORD_EVERY
    hermitize: bool = True

    def __post_init__(self):
        if not 0 < self.dt <= 0.01:
            raise ConfigError(f'ERROR: dt must lie in (0, 0.01], got {self.dt}')
        if not self.t_max > 0:
            raise ConfigError(f'ERROR: t_max must be > 0, got {self.t_max}')
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ConfigError(f'ERROR: record_every must be a positive integer, got {self.record_every}')

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.t_max / self.dt)))


@dataclass(eq=False)
class Trajectory:
    times: np.ndarray                     # omega * t at each recorded sample
    reduced_states: list                  # DensityMatrix over the atom roles
    diagnostics: list                     # one dict per sample
    full_states: list = None              # only filled by evolve_full
    excitation_rise: float = 0.0          # largest single-step increase of <N>
    label: str = ''
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.times)

    def series(self, fn) -> np.ndarray:
        return np.array([fn(rho) for rho in self.reduced_states])


def evolve(rho0: DensityMatrix, ops: OperatorSet, p: ModelParams, cfg: IntegratorConfig,
           label: str = '', quiet: bool = False) -> Trajectory:
    return _integrate(rho0, ops, p, cfg, label, quiet, keep_full=False)


def evolve_full(rho0: DensityMatrix, ops: OperatorSet, p: ModelParams, cfg: IntegratorConfig,
                label: str = '', quiet: bool = False) -> Trajectory:
    '''Same as evolve, but also keeps the atom + pseudo-mode state at every sample.'''
    return _integrate(rho0, ops, p, cfg, label, quiet, keep_full=True)


def _integrate(rho0, ops, p, cfg, label, quiet, keep_full):
    if rho0.layout != ops.layout:
        raise LayoutMismatch(f'ERROR: initial state layout {rho0.layout.roles}{rho0.layout.dims} does not match operators {ops.layout.roles}{ops.layout.dims}')
    rho0.validate()

    if not quiet:
        print(f'evolving {label or "state"} (n_atoms={p.n_atoms}, gamma/omega={p.gamma_over_omega:g})... ', end='', flush=True)
    start = time.time()

    d = rho0.dim
    L = liouvillian_matrix(ops, p.gamma) / p.omega
    number = ops.number.T.reshape(-1)       # <N> = number @ vec(rho)
    atoms = set(p.atom_roles)
    h = cfg.dt

    times, reduced, diagnostics, full = [], [], [], []

    def record(step, y):
        t = step * h
        m = y.reshape(d, d)
        state = DensityMatrix(rho0.layout, m) if step else rho0
        diag = {
            'trace_drift': float(abs(np.trace(m) - 1)),
            'min_eig': state.min_eigenvalue(),
            'hermiticity': state.hermiticity_defect(),
            'excitation': float((number @ y).real),
        }
        if diag['trace_drift'] > TRACE_DRIFT_LIMIT or diag['min_eig'] < NEGATIVITY_LIMIT:
            raise IntegrationUnstable(
                f"ERROR: integration unstable at omega*t = {t:.6g} "
                f"(trace drift {diag['trace_drift']:.3g}, min eigenvalue {diag['min_eig']:.3g})", t)
        times.append(t)
        reduced.append(partial_trace(state, atoms))
        diagnostics.append(diag)
        if keep_full:
            full.append(state)

    y = rho0.data.reshape(-1).copy()
    n_prev = float((number @ y).real)
    rise = 0.0
    record(0, y)
    for step in range(1, cfg.n_steps + 1):
        k1 = L @ y
        k2 = L @ (y + (h / 2) * k1)
        k3 = L @ (y + (h / 2) * k2)
        k4 = L @ (y + h * k3)
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if cfg.hermitize:
            m = y.reshape(d, d)
            y = ((m + m.conj().T) / 2).reshape(-1)
        if not np.all(np.isfinite(y)):
            raise IntegrationUnstable(f'ERROR: integration diverged at omega*t = {step * h:.6g}', step * h)

        # trace and populations every step, the spectrum only at recorded samples
        populations = y[::d + 1].real
        drift = abs(populations.sum() - 1)
        if drift > TRACE_DRIFT_LIMIT or populations.min() < NEGATIVITY_LIMIT:
            raise IntegrationUnstable(
                f'ERROR: integration unstable at omega*t = {step * h:.6g} '
                f'(trace drift {drift:.3g}, min population {populations.min():.3g})', step * h)

        n_now = float((number @ y).real)
        rise = max(rise, n_now - n_prev)
        n_prev = n_now

        if step % cfg.record_every == 0:
            record(step, y)

    elapsed = round(time.time() - start, 2)
    if not quiet:
        print(f'({elapsed}s)')

    return Trajectory(
        times=np.array(times),
        reduced_states=reduced,
        diagnostics=diagnostics,
        full_states=full if keep_full else None,
        excitation_rise=rise,
        label=label,
        meta={'gamma_over_omega': p.gamma_over_omega, 'n_atoms': p.n_atoms, 'dt': cfg.dt},
    )


def excited_population_oracle(times, gamma_over_omega: float) -> np.ndarray:
    '''Closed-form excited population for one atom starting in |e>|0>.

    Inside the one-excitation sector the atom amplitude obeys
        c'' + (g/2) c' + c = 0,  c(0) = 1, c'(0) = 0
    with g = gamma/omega and time in units of 1/omega; returns |c|^2.
    '''
    t = np.asarray(times, dtype=np.float64)
    q = gamma_over_omega / 4
    disc = 1 - q**2
    if disc > 0:
        w = np.sqrt(disc)
        c = np.exp(-q * t) * (np.cos(w * t) + (q / w) * np.sin(w * t))
    elif disc < 0:
        k = np.sqrt(-disc)
        # cosh + (q/k) sinh, written with decaying exponentials only
        c = 0.5 * (1 + q / k) * np.exp((k - q) * t) + 0.5 * (1 - q / k) * np.exp(-(k + q) * t)
    else:
        c = np.exp(-q * t) * (1 + q * t)
    return c**2

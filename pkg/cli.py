import argparse
import cmd
import shlex
import sys
import time
from rich.console import Console
from rich.table import Table
from rich import box

from lib import config
from lib import scenario
from lib import selftest
from lib import witness
from lib import measures
from lib.model import build_operators, mean_excitation, regime, spectral_density, spectral_weight
from lib.states import KINDS, Preparation, initial_state, state_correlation_class
from lib.dynamics import DEFAULT_DT, DEFAULT_T_MAX
from lib.errors import PseudomodeError, ConfigError, IntegrationUnstable

console = Console()

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_UNSTABLE = 3


# argparse reports errors by exiting; raise instead so the shell survives
class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f'ERROR: {message}, try "help {self.prog}"')


def scenario_parser(prog: str) -> ArgumentParser:
    parser = ArgumentParser(prog=prog)
    parser.add_argument('--prep', choices=[*KINDS, 'all'])
    parser.add_argument('--atoms', type=int, choices=[1, 2])
    parser.add_argument('--gamma-over-omega', type=float)
    parser.add_argument('--alpha2', type=float)
    parser.add_argument('--t-max', type=float)
    parser.add_argument('--dt', type=float)
    parser.add_argument('--record-every', type=int)
    parser.add_argument('--side', choices=['A', 'B', 'both'])
    parser.add_argument('--measures', help='comma separated subset of purity,mutual_info,classical,discord,eof')
    parser.add_argument('--fock-cutoff', type=int)
    parser.add_argument('--out')
    parser.add_argument('--config', help='YAML file of key: value pairs, flags win')
    parser.add_argument('--quiet', action='store_true')
    return parser


def scenario_flags(args) -> dict:
    keys = ('prep', 'atoms', 'gamma_over_omega', 'alpha2', 't_max', 'dt', 'record_every',
            'side', 'measures', 'fock_cutoff', 'out')
    return {k: getattr(args, k, None) for k in keys}


def float_list(text: str) -> list:
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise ConfigError(f'ERROR: expected comma separated numbers, got "{text}"')


class Shell(cmd.Cmd):
    intro = 'Welcome to pseudomode-witness. Enter ? to list commands.'
    prompt = '\n(pseudomode) '

    status: int = EXIT_OK

    # "reproduce-figure 1" -> "reproduce_figure 1"
    def precmd(self, line):
        head, _, rest = line.partition(' ')
        return f"{head.replace('-', '_')} {rest}".strip()

    def emptyline(self):
        pass

    def default(self, line):
        console.print(f'ERROR: unknown command "{line.split()[0]}", enter ? to list commands', style='red')
        self.status = EXIT_USAGE

    # CONSOLE COMMANDS =========================================================

    def do_simulate(self, arg):
        '''simulate preparations and write one CSV per preparation

        simulate [--prep a|b|c|d|all] [--atoms 1|2] [--gamma-over-omega R] [--alpha2 R]
                 [--t-max R] [--dt R] [--record-every N] [--side A|B|both]
                 [--measures LIST] [--out DIR] [--config FILE]
        e.g. "simulate --prep all --atoms 2 --gamma-over-omega 1 --out out/"
        '''
        self.run(self.simulate, arg)

    def do_reproduce_figure(self, arg):
        '''write the CSV and SVG panels of figure 1, 2 or 3

        reproduce-figure [1|2|3] [--out DIR] [--t-max R] [--dt R] [--record-every N]
        e.g. "reproduce-figure 3 --out figures/"
        '''
        self.run(self.reproduce_figure, arg)

    def do_selftest(self, arg):
        '''run the oracle and invariant checks, exit status 0 iff all pass

        selftest [--dt R] [--t-max R]
        e.g. "selftest"
        '''
        self.run(self.selftest, arg)

    def do_info(self, arg):
        '''show model parameters, coupling regime, spectral density and initial states

        info [--atoms 1|2] [--gamma-over-omega R] [--alpha2 R] [--config FILE]
        e.g. "info --gamma-over-omega 5"
        '''
        self.run(self.info, arg)

    def do_sweep(self, arg):
        '''largest pairwise purity gap between preparations over alpha2 and gamma/omega

        sweep [--alpha2-values LIST] [--gammas LIST] [--atoms 1|2] [--out DIR]
        e.g. "sweep --alpha2-values 0.1,0.5,0.9 --gammas 1,5"
        '''
        self.run(self.sweep, arg)

    def do_identify(self, arg):
        '''rank preparations by distance to an observed trajectory of one CSV column

        identify [PATH TO .csv] [--column NAME] [scenario flags]
        the CSV needs t_omega and the column (purity by default); two-qubit
        columns such as mutual_info or eof need --atoms 2
        e.g. "identify measured.csv --gamma-over-omega 1 --alpha2 0.5"
        '''
        self.run(self.identify, arg)

    def do_exit(self, arg):
        '''exit the console'''
        return True

    # COMMANDS =================================================================

    def run(self, command, arg):
        try:
            self.status = command(arg)
        except SystemExit as exit:
            # --help
            self.status = exit.code or EXIT_OK
        except ConfigError as err:
            console.print(err, style='red')
            self.status = EXIT_USAGE
        except IntegrationUnstable as err:
            console.print(err, style='red')
            self.status = EXIT_UNSTABLE
        except (PseudomodeError, ValueError, OSError) as err:
            console.print(err, style='red')
            self.status = EXIT_FAILED

    def simulate(self, arg) -> int:
        args = scenario_parser('simulate').parse_args(shlex.split(arg))
        cfg = config.build(scenario_flags(args), args.config)

        start = time.time()
        results = scenario.simulate(cfg, quiet=args.quiet)
        elapsed = round(time.time() - start, 2)

        table = Table(box=box.MINIMAL)
        for k in ['prep', 'correlation', 'samples', 'P(0)', 'P(end)', 'P(min)', 'max trace drift', 'file']:
            table.add_column(k)
        for kind, (path, rows, traj) in results.items():
            purities = traj.series(measures.purity)
            drift = max(d['trace_drift'] for d in traj.diagnostics)
            table.add_row(
                kind, state_correlation_class(Preparation(kind, cfg.alpha2)).value, str(len(traj)),
                f'{purities[0]:.6f}', f'{purities[-1]:.6f}', f'{purities.min():.6f}', f'{drift:.2e}', str(path),
            )
        console.print(table)
        print(f'finished in ({elapsed}s)')
        return EXIT_OK

    def reproduce_figure(self, arg) -> int:
        parser = ArgumentParser(prog='reproduce-figure')
        parser.add_argument('which', type=int, choices=sorted(scenario.FIGURES))
        parser.add_argument('--out', default='figures')
        parser.add_argument('--t-max', type=float)
        parser.add_argument('--dt', type=float)
        parser.add_argument('--record-every', type=int)
        parser.add_argument('--fock-cutoff', type=int)
        parser.add_argument('--config')
        parser.add_argument('--quiet', action='store_true')
        args = parser.parse_args(shlex.split(arg))
        base = config.build(scenario_flags(args), args.config)

        start = time.time()
        files = scenario.reproduce_figure(args.which, args.out, base=base, quiet=args.quiet)
        console.print(f'figure {args.which}: wrote {len(files)} files to {args.out}', style='green')
        print(f'finished in ({round(time.time() - start, 2)}s)')
        return EXIT_OK

    def selftest(self, arg) -> int:
        parser = ArgumentParser(prog='selftest')
        parser.add_argument('--dt', type=float, default=DEFAULT_DT)
        parser.add_argument('--t-max', type=float, default=DEFAULT_T_MAX)
        args = parser.parse_args(shlex.split(arg))

        def progress(check):
            style = 'green' if check.passed else 'red'
            console.print(f"{'PASS' if check.passed else 'FAIL'} {check.name}", style=style)

        results = selftest.run_checks(args.dt, args.t_max, progress=progress)

        table = Table(box=box.MINIMAL)
        for k in ['check', 'tolerance', 'value', 'result', 'detail']:
            table.add_column(k)
        for check in results:
            table.add_row(
                check.name, f'{check.tolerance:.0e}', f'{check.value:.3e}',
                'pass' if check.passed else 'FAIL', check.detail,
            )
        console.print(table)
        failed = [c.name for c in results if not c.passed]
        if failed:
            console.print(f'{len(failed)} of {len(results)} checks failed', style='red')
            return EXIT_FAILED
        console.print(f'all {len(results)} checks passed', style='green')
        return EXIT_OK

    def info(self, arg) -> int:
        args = scenario_parser('info').parse_args(shlex.split(arg))
        cfg = config.build(scenario_flags(args), args.config)
        p = cfg.model_params()

        table = Table(title='MODEL', box=box.MINIMAL)
        table.add_column('key')
        table.add_column('value')
        rows = {
            'n_atoms': p.n_atoms,
            'omega': p.omega,
            'gamma': p.gamma,
            'gamma/omega': p.gamma_over_omega,
            'omega0': p.omega0,
            'fock_cutoff': p.fock_cutoff,
            'regime': regime(p).value,
            'J(omega0)': f'{spectral_density(p, p.omega0):.6g}',
            'J(omega0 + gamma/2)': f'{spectral_density(p, p.omega0 + p.gamma / 2):.6g}',
            'integral of J': f'{spectral_weight(p):.6g}',
            'space': ' x '.join(f'{r}[{d}]' for r, d in zip(p.layout.roles, p.layout.dims)),
        }
        for k, v in rows.items():
            table.add_row(k, str(v))
        console.print(table)

        ops = build_operators(p)
        table_prep = Table(title='PREPARATIONS', box=box.MINIMAL)
        for k in ['prep', 'correlation', 'alpha2', '<N>(0)']:
            table_prep.add_column(k)
        for kind in KINDS:
            prep = Preparation(kind, cfg.alpha2)
            n0 = mean_excitation(ops, initial_state(prep, p))
            table_prep.add_row(kind, state_correlation_class(prep).value, f'{cfg.alpha2:g}', f'{n0:.6g}')
        console.print(table_prep)
        return EXIT_OK

    def sweep(self, arg) -> int:
        parser = scenario_parser('sweep')
        parser.add_argument('--alpha2-values', default='0.1,0.3,0.5,0.7,0.9')
        parser.add_argument('--gammas', default='1,5')
        args = parser.parse_args(shlex.split(arg))
        base = config.build(scenario_flags(args), args.config)

        rows = witness.alpha_sweep(float_list(args.alpha2_values), float_list(args.gammas), base,
                                   out_dir=base.out_dir, quiet=args.quiet)
        table = Table(box=box.MINIMAL)
        for k in rows[0]:
            table.add_column(k)
        for row in rows:
            table.add_row(*[f'{v:.4g}' for v in row.values()])
        console.print(table)
        return EXIT_OK

    def identify(self, arg) -> int:
        parser = scenario_parser('identify')
        parser.add_argument('path')
        parser.add_argument('--column', default='purity')
        args = parser.parse_args(shlex.split(arg))
        cfg = config.build(scenario_flags(args), args.config)

        ranking = witness.identify_csv(args.path, cfg, column=args.column, quiet=args.quiet)
        if not ranking:
            raise ValueError(f'ERROR: no preparation overlaps the times in {args.path}')
        table = Table(box=box.MINIMAL)
        for k in ['rank', 'prep', 'correlation', 'rms distance']:
            table.add_column(k)
        for i, (kind, rms) in enumerate(ranking):
            table.add_row(str(i + 1), kind, state_correlation_class(Preparation(kind, cfg.alpha2)).value, f'{rms:.3e}')
        console.print(table)
        best = ranking[0][0]
        console.print(f'best match: prep {best} ({state_correlation_class(Preparation(best, cfg.alpha2)).value})', style='green')
        return EXIT_OK


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    shell = Shell()
    if not argv:
        shell.cmdloop()
        return shell.status
    shell.onecmd(shell.precmd(shlex.join(argv)))
    return shell.status


if __name__ == '__main__':
    sys.exit(main())

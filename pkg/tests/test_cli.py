import pytest

import cli


def run(*argv) -> int:
    return cli.main(list(argv))


def test_simulate(tmp_path):
    out = tmp_path / 'out'
    assert run('simulate', '--prep', 'a', '--atoms', '1', '--gamma-over-omega', '1', '--t-max', '1', '--out', str(out), '--quiet') == 0
    lines = (out / 'prep_a.csv').read_text(encoding='utf-8').splitlines()
    assert lines[1] == '0,0.5'


def test_invalid_alpha_writes_nothing(tmp_path):
    out = tmp_path / 'out'
    assert run('simulate', '--alpha2', '1.0', '--out', str(out)) == 2
    assert not out.exists()


def test_usage_errors(tmp_path):
    assert run('simulate', '--atoms', '3') == 2
    assert run('simulate', '--frobnicate') == 2
    assert run('reproduce-figure', '7', '--out', str(tmp_path)) == 2


def test_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv('PSEUDOMODE_ALPHA2', '1.5')
    assert run('simulate', '--out', str(tmp_path / 'out')) == 2
    # flags win over the environment
    assert run('simulate', '--prep', 'b', '--alpha2', '0.4', '--t-max', '0.5', '--out', str(tmp_path / 'out'), '--quiet') == 0


def test_config_file(tmp_path):
    path = tmp_path / 'run.yaml'
    path.write_text(f'prep: d\nt_max: 0.5\nout_dir: {tmp_path / "cfg"}\n', encoding='utf-8')
    assert run('simulate', '--config', str(path), '--quiet') == 0
    assert sorted(p.name for p in (tmp_path / 'cfg').iterdir()) == ['prep_d.csv']


def test_unstable_exit_code(tmp_path):
    assert run('simulate', '--prep', 'a', '--gamma-over-omega', '10000', '--dt', '0.01', '--t-max', '1', '--out', str(tmp_path), '--quiet') == 3


def test_reproduce_figure(tmp_path):
    assert run('reproduce-figure', '1', '--out', str(tmp_path), '--t-max', '1', '--quiet') == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ['fig1a.csv', 'fig1a.svg', 'fig1b.csv', 'fig1b.svg']


def test_selftest_broken_step(capsys):
    assert run('selftest', '--dt', '0.5') == 1
    out = capsys.readouterr().out
    assert 'FAIL step_halving' in out
    for name in ('single_excitation_oracle_strong', 'discord_grid_oracle', 'rho_b_rho_d_coincidence', 'marginal_equality'):
        assert name in out


def test_info(capsys):
    assert run('info', '--gamma-over-omega', '5') == 0
    out = capsys.readouterr().out
    assert 'weak' in out
    assert 'entangled' in out


def test_identify(tmp_path, capsys):
    assert run('simulate', '--prep', 'c', '--t-max', '2', '--out', str(tmp_path), '--quiet') == 0
    assert run('identify', str(tmp_path / 'prep_c.csv'), '--t-max', '2', '--quiet') == 0
    assert 'best match: prep c' in capsys.readouterr().out
    assert run('identify', str(tmp_path / 'missing.csv')) == 1


def test_sweep(tmp_path):
    assert run('sweep', '--alpha2-values', '0.5', '--gammas', '1', '--t-max', '1', '--out', str(tmp_path), '--quiet') == 0
    assert (tmp_path / 'sweep.csv').exists()
    assert run('sweep', '--gammas', 'one') == 2


def test_shell_dispatch():
    shell = cli.Shell()
    assert shell.precmd('reproduce-figure 1 --out x') == 'reproduce_figure 1 --out x'
    assert shell.onecmd('exit') is True


def test_unknown_command(capsys):
    assert run('simulat', '--prep', 'a') == 2
    assert 'ERROR: unknown command "simulat"' in capsys.readouterr().out
    assert run('exit') == 0

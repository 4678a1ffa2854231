import re
import numpy as np
import pytest

from lib import scenario
from lib.config import ScenarioConfig

SHORT = dict(t_max=1.0, record_every=50)


def test_single_preparation(tmp_path):
    cfg = ScenarioConfig(preparation='a', n_atoms=1, gamma_over_omega=1.0, out_dir=str(tmp_path), **SHORT)
    results = scenario.simulate(cfg, quiet=True)
    assert list(results) == ['a']
    path = tmp_path / 'prep_a.csv'
    lines = path.read_text(encoding='utf-8').splitlines()
    assert lines[0] == 't_omega,purity'
    assert lines[1] == '0,0.5'
    assert len(lines) == 1 + 21


def test_all_preparations_share_times(tmp_path):
    cfg = ScenarioConfig(out_dir=str(tmp_path), **SHORT)
    scenario.simulate(cfg, quiet=True)
    tables = [scenario.read_csv(scenario.csv_path(tmp_path, k)) for k in 'abcd']
    for table in tables[1:]:
        assert np.array_equal(table['t_omega'], tables[0]['t_omega'])


def test_output_is_deterministic(tmp_path):
    first, second = tmp_path / 'first', tmp_path / 'second'
    for out in (first, second):
        cfg = ScenarioConfig(n_atoms=2, out_dir=str(out), measures=('purity', 'eof', 'discord'), measured_side='B', **SHORT)
        scenario.simulate(cfg, quiet=True)
    for k in 'abcd':
        data = (first / f'prep_{k}.csv').read_bytes()
        assert data == (second / f'prep_{k}.csv').read_bytes()
        assert b'\r\n' not in data
    header = (first / 'prep_a.csv').read_text(encoding='utf-8').splitlines()[0]
    assert header == 't_omega,purity,discord_B,eof'


def test_format_value():
    assert scenario.format_value(-0.0) == '0'
    assert scenario.format_value(1 / 3) == '0.333333333333'
    assert scenario.format_value(1.5e-13) == '1.5e-13'
    assert scenario.format_value(np.float64(2.0)) == '2'


def test_figure_1(tmp_path):
    files = scenario.reproduce_figure(1, tmp_path, base=ScenarioConfig(**SHORT), quiet=True)
    names = sorted(f.name for f in files)
    assert names == ['fig1a.csv', 'fig1a.svg', 'fig1b.csv', 'fig1b.svg']
    header = (tmp_path / 'fig1a.csv').read_text(encoding='utf-8').splitlines()[0]
    assert header == 't_omega,purity_a,purity_b,purity_c,purity_d'

    svg = (tmp_path / 'fig1a.svg').read_text(encoding='utf-8')
    assert 'Ωt' in svg
    assert all(href.startswith('#') for href in re.findall(r'href="([^"]*)"', svg))


def test_figure_3_panels(tmp_path):
    base = ScenarioConfig(t_max=0.5, record_every=100)
    files = scenario.reproduce_figure(3, tmp_path, base=base, quiet=True)
    assert sorted(f.name for f in files if f.suffix == '.svg') == ['fig3a.svg', 'fig3b.svg', 'fig3c.svg', 'fig3d.svg']
    header = (tmp_path / 'fig3b.csv').read_text(encoding='utf-8').splitlines()[0].split(',')
    assert header[0] == 't_omega'
    assert 'classical_A_a' in header and 'classical_B_d' in header


def test_unknown_figure(tmp_path):
    with pytest.raises(ValueError):
        scenario.reproduce_figure(4, tmp_path)


def test_merge_coincident(capsys):
    t = np.linspace(0, 1, 5)
    merged = scenario._merge_coincident({'a': t, 'b': t**2, 'c': t, 'd': t**2})
    assert list(merged) == ['a', 'b=d', 'c']
    apart = scenario._merge_coincident({'a': t, 'b': t**2, 'c': t, 'd': t**3})
    assert list(apart) == ['a', 'b', 'c', 'd']
    assert 'WARNING' in capsys.readouterr().out

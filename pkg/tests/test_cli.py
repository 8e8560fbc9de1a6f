import csv
import io
import json

import pytest

from subradius import cli
from subradius.cli import BENCH_COLUMNS, builtin_spec, main, random_spec
from subradius.errors import InvalidInputError
from subradius.families import FamilyKind, illustrative_family
from subradius.lsr import Variant
from subradius.serialization import dumps_family, load_vertices


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_builtin_names():
    assert builtin_spec('euler:7').params == {'r': 7}
    assert builtin_spec('pascal').kind is FamilyKind.PASCAL_RHOMBUS
    for bad in ('euler:x', 'pascal:2', 'hilbert'):
        with pytest.raises(InvalidInputError):
            builtin_spec(bad)


def test_random_spec():
    spec = random_spec('3,2,0.5,17')
    assert spec.params == {'d': 3, 'm': 2, 'density': 0.5, 'seed': 17}
    with pytest.raises(InvalidInputError):
        random_spec('3,2,0.5')


def test_gen_builtin():
    code, out, _ = run('gen', '--builtin', 'illustrative')
    assert code == 0
    assert out == dumps_family(illustrative_family())


def test_gen_random_is_deterministic(tmp_path):
    path = tmp_path / 'f.json'
    code, _, _ = run('gen', '--random', '3,2,0.6,5', '-o', str(path))
    assert code == 0
    _, again, _ = run('gen', '--random', '3,2,0.6,5')
    assert path.read_text() == again


def test_lsr_reaches_accuracy(tmp_path):
    vertices = tmp_path / 'v.json'
    manifest = tmp_path / 'm.json'
    code, out, _ = run('lsr', '--builtin', 'illustrative', '--transpose',
                       '--rescale', 'auto', '--output-vertices',
                       str(vertices), '--manifest', str(manifest))
    assert code == 0
    report = json.loads(out)
    assert report['terminated_by'] == 'accuracy'
    assert report['algorithm'] == 'a'
    assert float(report['lower']) <= float(report['upper'])
    assert report['slp_candidates'] == [[1, 1, 2, 1, 1, 2, 1, 2]]
    assert load_vertices(str(vertices), 2).shape[1] == report['vertex_count']
    written = json.loads(manifest.read_text())
    assert written['command'] == 'lsr'
    assert written['report'] == report


def test_lsr_budget_exit_code():
    code, out, _ = run('lsr', '--builtin', 'critical', '--algorithm', 's',
                       '--max-evals', '50', '--slp', 'none')
    assert code == 2
    report = json.loads(out)
    assert report['terminated_by'] == 'budget'
    assert report['slp_candidates'] == []


def test_lsr_epsilon_ladder():
    code, out, _ = run('lsr', '--builtin', 'illustrative', '--epsilon',
                       '0.1,0', '--max-evals', '30', '--jobs', '1')
    assert code in (0, 2)
    ladder = json.loads(out)['ladder']
    assert [float(r['epsilon']) for r in ladder] == [0.1, 0.0]


def test_missing_family_file(tmp_path):
    code, out, err = run('lsr', '--family', str(tmp_path / 'absent.json'))
    assert code == 1
    assert out == ''
    assert json.loads(err)['reason'] == 'io-error'


def test_bad_family_file(tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text('{"dim": 2, "matrices": [[1, 2, 3]]}')
    code, _, err = run('lsr', '--family', str(path))
    assert code == 1
    assert json.loads(err)['reason'] == 'bad-matrix'


@pytest.mark.parametrize('argv', [
    ['lsr'],
    ['lsr', '--builtin', 'pascal', '--algorithm', 'x'],
    ['lsr', '--builtin', 'pascal', '--rescale', '-1'],
    ['frobnicate'],
])
def test_usage_errors(argv):
    code, _, err = run(*argv)
    assert code == 1
    assert json.loads(err)['reason'] == 'bad-arguments'


def test_signed_family_is_rejected_by_lsr():
    code, _, err = run('lsr', '--builtin', 'jsr')
    assert code == 1
    assert json.loads(err)['reason'] == 'invalid-input'


def test_bench_empty_sweep():
    code, out, _ = run('bench')
    assert code == 0
    assert out == ','.join(BENCH_COLUMNS) + '\n'


def test_bench_rows():
    code, out, _ = run('bench', '--dims', '2', '--seeds', '1,2',
                       '--max-evals', '40', '--algorithm', 'a',
                       '--jobs', '1')
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r['seed'] for r in rows] == ['1', '2']
    for row in rows:
        assert row['d'] == '2'
        assert row['status'] in ('accuracy', 'budget') \
            or row['status'].startswith('error:')


def test_jsr_single_matrix(tmp_path):
    path = tmp_path / 'one.json'
    path.write_text(json.dumps({'dim': 2, 'matrices': [[2, 0, 0, 2]]}))
    code, out, _ = run('jsr', '--family', str(path))
    assert code == 0
    report = json.loads(out)
    assert float(report['lower']) == pytest.approx(2.0)
    assert float(report['upper']) == pytest.approx(2.0)
    assert report['algorithm'] == 'adaptive'


def test_jsr_rejects_eigen_init():
    code, _, err = run('jsr', '--builtin', 'jsr', '--init', 'eig:1')
    assert code == 1
    assert json.loads(err)['reason'] == 'bad-arguments'


def test_bench_row_survives_unexpected_errors(monkeypatch):
    def boom(*args, **kwargs):
        raise RuntimeError('solver crashed')

    monkeypatch.setattr(cli, 'run_rescaled', boom)
    row = cli.bench_row((2, 2, 1.0, 3, 1.01), Variant.A, 1e-4, 40, 'ones',
                        0.0)
    assert row['status'] == 'error:RuntimeError'
    assert row['lower'] == row['upper'] == ''
    assert row['seed'] == 3


def test_bench_keeps_going_after_a_failed_point(monkeypatch):
    real = cli.run_rescaled

    def flaky(family, cfg, variant, rescale):
        if cfg.theta == 1.5:
            raise ZeroDivisionError('bad point')
        return real(family, cfg, variant, rescale)

    monkeypatch.setattr(cli, 'run_rescaled', flaky)
    code, out, _ = run('bench', '--dims', '2', '--seeds', '1',
                       '--thetas', '1.5,1.01', '--max-evals', '40',
                       '--algorithm', 'e', '--jobs', '1')
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r['status'] for r in rows][0] == 'error:ZeroDivisionError'
    assert rows[1]['status'] in ('accuracy', 'budget')

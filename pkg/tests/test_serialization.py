from dataclasses import replace
import json

from numpy.testing import assert_array_equal
import pytest

from subradius.errors import FamilyFormatError
from subradius.families import illustrative_family, random_family
from subradius.jsr import JsrConfig, gripenberg_jsr
from subradius.lsr import SolverConfig, run_algorithm_a
from subradius.serialization import (RunManifest, dump_family, dumps_family,
                                     jsr_report_to_dict, load_family,
                                     load_vertices, loads_family,
                                     parse_family, parse_vertices,
                                     report_to_dict, vertices_to_dict,
                                     write_json)

REPORT_KEYS = {'lower', 'upper', 'metrics', 'slp_candidates', 'vertex_count',
               'terminated_by', 'lp_failures', 'algorithm', 'rescale',
               'driver_iterations'}


def test_parse_family():
    family = parse_family({'dim': 2,
                           'matrices': [[7, 0, 2, 3], ['2', '4', '0', '8']],
                           'labels': ['P', 'Q']})
    assert family == illustrative_family()
    assert family.labels == ('P', 'Q')


def test_decimal_strings_parse_exactly():
    family = parse_family({'dim': 1, 'matrices': [['0.1']]})
    assert family[0][0, 0] == 0.1


@pytest.mark.parametrize('data,reason', [
    ([1, 2], 'not-an-object'),
    ({'matrices': [[1]]}, 'bad-dim'),
    ({'dim': 0, 'matrices': [[1]]}, 'bad-dim'),
    ({'dim': True, 'matrices': [[1]]}, 'bad-dim'),
    ({'dim': 1}, 'missing-matrices'),
    ({'dim': 1, 'matrices': []}, 'missing-matrices'),
    ({'dim': 2, 'matrices': [[1, 2, 3]]}, 'bad-matrix'),
    ({'dim': 1, 'matrices': [['x']]}, 'bad-number'),
    ({'dim': 1, 'matrices': [[None]]}, 'bad-number'),
    ({'dim': 1, 'matrices': [['inf']]}, 'bad-number'),
    ({'dim': 1, 'matrices': [[1]], 'labels': ['a', 'b']}, 'bad-labels'),
    ({'dim': 1, 'matrices': [[1]], 'labels': [3]}, 'bad-labels'),
])
def test_parse_family_errors(data, reason):
    with pytest.raises(FamilyFormatError) as ex:
        parse_family(data)
    assert ex.value.reason == reason


def test_bad_json():
    with pytest.raises(FamilyFormatError) as ex:
        loads_family('{"dim": 2,')
    assert ex.value.reason == 'bad-json'


def test_dump_is_exact_and_stable(tmp_path):
    family = random_family(3, 2, 0.7, seed=9)
    text = dumps_family(family)
    assert loads_family(text) == family
    assert dumps_family(loads_family(text)) == text
    path = tmp_path / 'family.json'
    dump_family(family, str(path))
    assert path.read_text() == text
    assert load_family(str(path)) == family


def test_load_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_family(str(tmp_path / 'absent.json'))


def test_vertex_file(tmp_path):
    v = parse_vertices({'dim': 2, 'vertices': [[1, 0], [0.3, 0.5]]})
    assert_array_equal(v, [[1.0, 0.3], [0.0, 0.5]])
    path = tmp_path / 'v.json'
    write_json(vertices_to_dict(v), str(path))
    assert_array_equal(load_vertices(str(path), dim=2), v)


@pytest.mark.parametrize('data,reason', [
    ({'dim': 3, 'vertices': [[1, 0, 0]]}, 'bad-dim'),
    ({'dim': 2}, 'missing-vertices'),
    ({'dim': 2, 'vertices': [[1, 0, 0]]}, 'bad-vertex'),
])
def test_vertex_file_errors(data, reason):
    with pytest.raises(FamilyFormatError) as ex:
        parse_vertices(data, dim=2)
    assert ex.value.reason == reason


def test_report_schema(normalized_illustrative):
    report = run_algorithm_a(normalized_illustrative,
                             SolverConfig(max_evals=20))
    out = report_to_dict(report)
    assert set(out) == REPORT_KEYS
    assert float(out['lower']) == pytest.approx(report.lower, rel=1e-14)
    assert out['algorithm'] == 'a'
    assert out['terminated_by'] in ('accuracy', 'budget')
    assert set(out['metrics']) == {'l_opt', 'l_slp', 'n', 'n_op', 'j_max'}
    assert out['vertex_count'] == report.vertex_count
    json.dumps(out)


def test_words_are_one_based(normalized_illustrative):
    report = run_algorithm_a(normalized_illustrative,
                             SolverConfig(max_evals=20))
    out = report_to_dict(replace(report, slp_candidates=((0, 1, 1),)))
    assert out['slp_candidates'] == [[1, 2, 2]]


def test_jsr_report_schema(jsr_example):
    out = jsr_report_to_dict(gripenberg_jsr(jsr_example,
                                            JsrConfig(max_evals=20)))
    assert set(out) == REPORT_KEYS
    assert out['algorithm'] == 'classic'
    assert out['slp_candidates'] == []
    assert out['vertex_count'] == 0


def test_manifest(tmp_path):
    manifest = RunManifest('gen', ['gen', '--random', '2,2,0.5,1'], {}, 1,
                           0.1234567,
                           {'lower': '1'})
    out = manifest.to_dict()
    assert out['wall_seconds'] == 0.123457
    assert out['version'] == '0.1'
    path = tmp_path / 'manifest.json'
    write_json(out, str(path))
    assert json.loads(path.read_text()) == out

"""
JSON formats: family files, vertex files, solver reports and run manifests.

Family file::

    {"dim": 2, "matrices": [[7, 0, 2, 3], [2, 4, 0, 8]], "labels": ["A1", "A2"]}

Each matrix is given row-major as a flat list of ``dim ** 2`` numbers or
decimal strings; strings are parsed with ``float`` and so round exactly as
the decimal literal would. Vertex file::

    {"dim": 2, "vertices": [[1, 0], [0.3, 0.5]]}

Reals in reports are written as strings with 15 significant digits; words
are written 1-based.
"""
from dataclasses import dataclass, field
import json
import logging

import numpy as np

from subradius import __version__
from subradius.errors import FamilyFormatError
from subradius.family import MatrixFamily
from subradius.jsr import JsrReport
from subradius.lsr import SolverReport
from subradius.mytypes import *
from subradius.util import format_real

__all__ = ['RunManifest', 'dump_family', 'dumps_family', 'family_to_dict',
           'jsr_report_to_dict', 'load_family', 'load_vertices',
           'loads_family', 'parse_family', 'parse_vertices',
           'report_to_dict', 'vertices_to_dict', 'write_json']

logger = logging.getLogger(__name__)


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float, str)):
        raise FamilyFormatError('%s: expected a number or decimal string, '
                                'got %r' % (where, x), 'bad-number')
    try:
        value = float(x)
    except ValueError:
        raise FamilyFormatError('%s: cannot parse %r as a real' % (where, x),
                                'bad-number')
    if not np.isfinite(value):
        raise FamilyFormatError('%s: non-finite entry %r' % (where, x),
                                'bad-number')
    return value


def _dim(data: Mapping[str, Any]) -> int:
    d = data.get('dim')
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise FamilyFormatError('"dim" must be a positive integer, got %r'
                                % (d,), 'bad-dim')
    return d


def _object(data: Any) -> Mapping[str, Any]:
    if not isinstance(data, dict):
        raise FamilyFormatError('expected a JSON object at the top level',
                                'not-an-object')
    return data


def parse_family(data: Any) -> MatrixFamily:
    """
    Builds a family from a decoded family file.

    Args:
        data (Any): the decoded JSON value

    Returns:
        MatrixFamily: the family, in file order

    Raises:
        FamilyFormatError: with reason ``not-an-object``, ``bad-dim``,
            ``missing-matrices``, ``bad-matrix``, ``bad-number`` or
            ``bad-labels``
    """
    data = _object(data)
    d = _dim(data)
    matrices = data.get('matrices')
    if not isinstance(matrices, list) or not matrices:
        raise FamilyFormatError('"matrices" must be a non-empty list',
                                'missing-matrices')
    members = []
    for k, flat in enumerate(matrices):
        if not isinstance(flat, list) or len(flat) != d * d:
            raise FamilyFormatError('matrix %d must be a list of %d entries'
                                    % (k + 1, d * d), 'bad-matrix')
        values = [_number(x, 'matrix %d entry %d' % (k + 1, t + 1))
                  for t, x in enumerate(flat)]
        members.append(np.array(values).reshape(d, d))
    labels = data.get('labels', [])
    if (not isinstance(labels, list)
            or (labels and len(labels) != len(members))
            or not all(isinstance(s, str) for s in labels)):
        raise FamilyFormatError('"labels" must list one string per matrix',
                                'bad-labels')
    return MatrixFamily(tuple(members), labels=tuple(labels))


def _load(path: str) -> Any:
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as ex:
        raise FamilyFormatError('%s: not valid JSON (%s)' % (path, ex),
                                'bad-json')


def loads_family(text: str) -> MatrixFamily:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as ex:
        raise FamilyFormatError('not valid JSON (%s)' % ex, 'bad-json')
    return parse_family(data)


def load_family(path: str) -> MatrixFamily:
    """
    Raises:
        FamilyFormatError: if the file is not a valid family file
        OSError: if the file cannot be read
    """
    return parse_family(_load(path))


def family_to_dict(family: MatrixFamily) -> Dict[str, Any]:
    """
    Entries are written with ``repr``, the shortest decimal that parses back
    to the same double.
    """
    return {'dim': family.dim,
            'matrices': [[repr(float(x)) for x in a.reshape(-1)]
                         for a in family],
            'labels': list(family.labels)}


def dumps_family(family: MatrixFamily) -> str:
    return json.dumps(family_to_dict(family), indent=2, sort_keys=True) + '\n'


def dump_family(family: MatrixFamily, path: str):
    with open(path, 'w') as f:
        f.write(dumps_family(family))


def parse_vertices(data: Any, dim: Optional[int] = None) -> np.ndarray:
    """
    Reads a vertex file into a d x p vertex matrix.

    Raises:
        FamilyFormatError: with reason ``bad-dim``, ``missing-vertices``,
            ``bad-vertex`` or ``bad-number``
    """
    data = _object(data)
    d = _dim(data)
    if dim is not None and d != dim:
        raise FamilyFormatError('vertex file has dimension %d, expected %d'
                                % (d, dim), 'bad-dim')
    vertices = data.get('vertices')
    if not isinstance(vertices, list) or not vertices:
        raise FamilyFormatError('"vertices" must be a non-empty list',
                                'missing-vertices')
    columns = []
    for k, v in enumerate(vertices):
        if not isinstance(v, list) or len(v) != d:
            raise FamilyFormatError('vertex %d must have %d entries'
                                    % (k + 1, d), 'bad-vertex')
        columns.append([_number(x, 'vertex %d' % (k + 1)) for x in v])
    return np.array(columns, dtype=float).T


def load_vertices(path: str, dim: Optional[int] = None) -> np.ndarray:
    return parse_vertices(_load(path), dim)


def vertices_to_dict(vertices: np.ndarray) -> Dict[str, Any]:
    v = np.asarray(vertices, dtype=float)
    return {'dim': v.shape[0],
            'vertices': [[repr(float(x)) for x in v[:, j]]
                         for j in range(v.shape[1])]}


def _word(word: Sequence[int]) -> List[int]:
    return [i + 1 for i in word]


def report_to_dict(report: SolverReport) -> Dict[str, Any]:
    """
    The fixed-schema JSON form of an LSR report.
    """
    return {'lower': format_real(report.lower),
            'upper': format_real(report.upper),
            'metrics': report.metrics.to_dict(),
            'slp_candidates': [_word(w) for w in report.slp_candidates],
            'vertex_count': report.vertex_count,
            'terminated_by': report.terminated_by.value,
            'lp_failures': report.lp_failures,
            'algorithm': report.variant.value,
            'rescale': format_real(report.rescale),
            'driver_iterations': report.driver_iterations}


def jsr_report_to_dict(report: JsrReport) -> Dict[str, Any]:
    """
    The JSON form of a JSR report; same field set as `report_to_dict`, with
    the largest-product candidates left empty.
    """
    return {'lower': format_real(report.lower),
            'upper': format_real(report.upper),
            'metrics': report.metrics.to_dict(),
            'slp_candidates': [],
            'vertex_count': report.vertex_count,
            'terminated_by': report.terminated_by.value,
            'lp_failures': report.lp_failures,
            'algorithm': 'adaptive' if report.adaptive else 'classic',
            'rescale': format_real(report.rescale),
            'driver_iterations': 0}


@dataclass(frozen=True)
class RunManifest:
    """
    Everything needed to rerun a command deterministically.

    Attributes:
        command (str): the subcommand
        argv (Sequence[str]): the full argument vector
        config (Mapping[str, Any]): the resolved solver settings
        seed (Optional[int]): the seed of any random draw
        wall_seconds (float): elapsed time of the run
        report (Mapping[str, Any]): the report, as emitted
    """
    command: str
    argv: Sequence[str]
    config: Mapping[str, Any]
    seed: Optional[int]
    wall_seconds: float
    report: Mapping[str, Any]
    version: str = field(default=__version__)

    def to_dict(self) -> Dict[str, Any]:
        return {'command': self.command,
                'argv': list(self.argv),
                'config': dict(self.config),
                'seed': self.seed,
                'wall_seconds': round(self.wall_seconds, 6),
                'version': self.version,
                'report': dict(self.report)}


def write_json(obj: Any, path: str):
    with open(path, 'w') as f:
        json.dump(obj, f, indent=2, sort_keys=True)
        f.write('\n')

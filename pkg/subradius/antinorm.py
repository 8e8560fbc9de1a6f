"""
Polytope antinorms on the nonnegative orthant.

A vertex matrix ``V`` (d x p, nonnegative nonzero columns) defines the unit
antiball ``conv(V) + R_+^d``; its Minkowski gauge is the antinorm ``a_V``.
For a vector ``z >= 0``, ``a_V(z) = 1 / c0`` where ``c0`` solves::

    minimize  c0
    s.t.      V c - c0 z <= 0
              -sum(c)    <= -1
              c0, c >= 0

An infeasible program means ``z`` sees no part of the antiball
(``a_V(z) = 0``); an optimum ``c0 = 0`` means ``a_V(z) = +inf``. For a
matrix, ``a_V(P) = min_i a_V(P v_i)`` and the minimizing image ``P v_j`` is
the candidate vertex used by the adaptive solvers.

The vertex set ``V = I`` gives the 1-antinorm, which is evaluated in closed
form without solving any LP.
"""
from dataclasses import dataclass, field, replace
import logging

import numpy as np

from subradius.errors import InvalidInputError, NumericalFailure
from subradius.lp import LpOptions, LpProblem, LpStatus, solve_lp
from subradius.mtry import mtry
from subradius.mytypes import *
from subradius.option import Nothing, Option, Some
from subradius.settings import DEFAULT_TOL
from subradius.util import as_vector, normalize_l1, require_nonnegative

__all__ = ['AntinormValue', 'PolytopeAntinorm', 'antinorm_lp', 'eval_matrix',
           'eval_vector', 'one_antinorm_matrix', 'p_antinorm_vector', 'prune',
           'rescaled_eigenvector', 'try_insert_vertex']

logger = logging.getLogger(__name__)

_DUPLICATE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class PolytopeAntinorm:
    """
    An immutable polytope antinorm.

    Attributes:
        vertices (Matrix): d x p vertex matrix, one vertex per column
        tol (float): tolerance of the insertion and pruning tests
        lp_options (LpOptions): options for every LP solved on its behalf
    """
    vertices: Matrix = field(repr=False)
    tol: float = DEFAULT_TOL
    lp_options: LpOptions = field(default_factory=LpOptions, repr=False)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if v.ndim != 2 or v.shape[0] == 0 or v.shape[1] == 0:
            raise InvalidInputError('a vertex matrix needs at least one '
                                    'column, got shape %s' % (v.shape,))
        if not np.all(np.isfinite(v)):
            raise InvalidInputError('vertices must be finite')
        require_nonnegative(v, 'vertex matrix')
        if np.any(v.sum(axis=0) <= 0):
            raise InvalidInputError('vertices must be nonzero')
        if self.tol < 0:
            raise InvalidInputError('tol must be nonnegative')
        v.setflags(write=False)
        object.__setattr__(self, 'vertices', v)

    def __repr__(self) -> str:
        return 'PolytopeAntinorm(dim=%d, vertices=%d, tol=%g)' % (
            self.dim, self.size, self.tol)

    @property
    def dim(self) -> int:
        return self.vertices.shape[0]

    @property
    def size(self) -> int:
        return self.vertices.shape[1]

    @property
    def is_identity(self) -> bool:
        return (self.size == self.dim
                and np.array_equal(self.vertices, np.eye(self.dim)))

    def column(self, i: int) -> Vector:
        return self.vertices[:, i]

    @staticmethod
    def identity(dim: int, tol: float = DEFAULT_TOL) -> 'PolytopeAntinorm':
        """
        Returns:
            PolytopeAntinorm: the 1-antinorm, ``a(z) = sum(z)``
        """
        return PolytopeAntinorm(np.eye(dim), tol)

    @staticmethod
    def from_vector(v, tol: float = DEFAULT_TOL) -> 'PolytopeAntinorm':
        """
        The antinorm whose antiball is ``v + R_+^d``, typically seeded with the
        leading eigenvector of a family member.
        """
        return PolytopeAntinorm(as_vector(v).reshape(-1, 1), tol)

    @staticmethod
    def from_vertices(vertices: Sequence[Sequence[float]],
                      tol: float = DEFAULT_TOL) -> 'PolytopeAntinorm':
        """
        Args:
            vertices (Sequence[Sequence[float]]): one d-vector per vertex

        Returns:
            PolytopeAntinorm: the antinorm with those columns, in order
        """
        return PolytopeAntinorm(np.array(vertices, dtype=float).T, tol)

    def with_vertex(self, z: Vector) -> 'PolytopeAntinorm':
        return replace(self, vertices=np.column_stack([self.vertices, z]))

    def without_vertex(self, i: int) -> 'PolytopeAntinorm':
        return replace(self, vertices=np.delete(self.vertices, i, axis=1))

    def vertex_list(self) -> List[List[float]]:
        return [list(map(float, self.column(i))) for i in range(self.size)]


@dataclass(frozen=True, eq=False)
class AntinormValue:
    """
    Attributes:
        value (float): the antinorm, in [0, +inf]
        c_min (float): the LP optimum, ``1 / value``
        argmin_vertex_index (int): minimizing vertex (matrix evaluation only,
            -1 otherwise)
        candidate (Optional[Vector]): the image ``P v_j`` of the minimizing
            vertex (matrix evaluation only)
        lp_failures (int): vertices skipped because their LP failed
    """
    value: float
    c_min: float
    argmin_vertex_index: int = -1
    candidate: Optional[Vector] = field(default=None, repr=False)
    lp_failures: int = 0

    @staticmethod
    def of(value: float) -> 'AntinormValue':
        if value == 0:
            return AntinormValue(0.0, np.inf)
        if np.isinf(value):
            return AntinormValue(np.inf, 0.0)
        return AntinormValue(float(value), 1.0 / value)


def antinorm_lp(vertices: Matrix, z: Vector) -> LpProblem:
    """
    Builds the evaluation LP for ``a_V(z)`` over ``x = (c0, c_1..c_p)``.

    Args:
        vertices (Matrix): the d x p vertex matrix V
        z (Vector): the point, length d

    Returns:
        LpProblem: the program whose optimum is ``c0 = 1 / a_V(z)``
    """
    d, p = vertices.shape
    objective = np.zeros(p + 1)
    objective[0] = 1.0
    rows = np.zeros((d + 1, p + 1))
    rows[:d, 0] = -z
    rows[:d, 1:] = vertices
    rows[d, 1:] = -1.0
    rhs = np.zeros(d + 1)
    rhs[d] = -1.0
    return LpProblem(objective, rows, rhs)


def _nonnegative_vector(a: PolytopeAntinorm, z) -> Vector:
    v = as_vector(z, a.dim, 'antinorm argument')
    return require_nonnegative(v, 'antinorm argument')


def _solve_vector(a: PolytopeAntinorm, z: Vector) -> AntinormValue:
    if a.is_identity:
        return AntinormValue.of(float(z.sum()))
    if not np.any(z > 0):
        return AntinormValue.of(0.0)
    outcome = solve_lp(antinorm_lp(a.vertices, z), a.lp_options)
    if outcome.status is LpStatus.INFEASIBLE:
        return AntinormValue.of(0.0)
    if outcome.status is LpStatus.OPTIMAL:
        c0 = float(outcome.solution[0])
        if c0 <= 0:
            return AntinormValue(np.inf, 0.0)
        return AntinormValue(1.0 / c0, c0)
    raise NumericalFailure('antinorm LP ended with status %s'
                           % outcome.status.value,
                           iterations=outcome.iterations,
                           context={'vertex_count': a.size})


def eval_vector(a: PolytopeAntinorm, z) -> AntinormValue:
    """
    Evaluates the antinorm at a nonnegative vector.

    Args:
        a (PolytopeAntinorm): the antinorm
        z (array_like): a nonnegative d-vector

    Returns:
        AntinormValue: the value and the LP optimum

    Raises:
        InvalidInputError: if `z` has negative entries
        NumericalFailure: if the LP solve fails
    """
    return _solve_vector(a, _nonnegative_vector(a, z))


def eval_matrix(a: PolytopeAntinorm,
                p,
                skip_failures: bool = False) -> AntinormValue:
    """
    Evaluates the matrix antinorm ``min_i a(P v_i)``.

    Ties go to the lowest vertex index. With `skip_failures`, vertices whose
    LP fails are left out of the minimum and counted in `lp_failures`; the
    evaluation only fails when every vertex does.

    Args:
        a (PolytopeAntinorm): the antinorm
        p (array_like): a nonnegative d x d matrix
        skip_failures (bool): tolerate individual LP failures

    Returns:
        AntinormValue: the value, the minimizing vertex index and the
            candidate vertex ``P v_j``

    Raises:
        InvalidInputError: if `p` has negative entries
        NumericalFailure: if an LP solve fails (every LP, with
            `skip_failures`)
    """
    p = require_nonnegative(np.asarray(p, dtype=float), 'matrix')
    if a.is_identity:
        sums = p.sum(axis=0)
        j = int(np.argmin(sums))
        best = AntinormValue.of(float(sums[j]))
        return replace(best, argmin_vertex_index=j, candidate=p[:, j].copy())
    images = p @ a.vertices
    best: Optional[AntinormValue] = None
    best_index = -1
    failures = 0
    last_error: Optional[Exception] = None
    for j in range(a.size):
        z = images[:, j]
        attempt = mtry(lambda: _solve_vector(a, z))
        if attempt.is_failure():
            err = attempt.get()
            if isinstance(err, NumericalFailure):
                err.context['vertex_index'] = j
            if not skip_failures:
                raise err
            attempt.log_failure(logger, 'skipping vertex %d', j)
            failures += 1
            last_error = attempt.get()
            continue
        value = attempt.get()
        if best is None or value.value < best.value:
            best, best_index = value, j
    if best is None:
        raise NumericalFailure('every antinorm LP failed',
                               iterations=getattr(last_error, 'iterations', 0),
                               context={'vertex_count': a.size})
    return replace(best,
                   argmin_vertex_index=best_index,
                   candidate=images[:, best_index].copy(),
                   lp_failures=failures)


def one_antinorm_matrix(a) -> float:
    """
    The 1-antinorm of a nonnegative matrix: its smallest column sum.
    """
    a = require_nonnegative(np.asarray(a, dtype=float), 'matrix')
    return float(a.sum(axis=0).min())


def p_antinorm_vector(p: float, x) -> float:
    """
    Evaluates the p-antinorm ``(sum x_i^p)^(1/p)`` of a nonnegative vector.

    Args:
        p (float): the exponent, in ``(0, 1]``, negative, or ``-inf``
            (the minimum entry)
        x (array_like): a nonnegative vector

    Returns:
        float: the antinorm; 0 when p < 0 and some entry is zero

    Raises:
        InvalidInputError: if `p` is 0 or greater than 1, or `x` is negative
    """
    if p == 0 or p > 1 or np.isnan(p):
        raise InvalidInputError('p must be -inf, negative, or in (0, 1], '
                                'got %r' % p)
    x = require_nonnegative(as_vector(x), 'vector')
    if p == -np.inf:
        return float(x.min())
    if p < 0:
        if np.any(x == 0):
            return 0.0
        return float(np.sum(x ** p) ** (1.0 / p))
    return float(np.sum(x ** p) ** (1.0 / p))


def try_insert_vertex(a: PolytopeAntinorm,
                      z,
                      known_value: Optional[float] = None
                      ) -> Tuple[PolytopeAntinorm, bool]:
    """
    Adds `z` to the vertex set if ``a(z) <= 1 + tol``.

    Args:
        a (PolytopeAntinorm): the antinorm
        z (array_like): a nonnegative, nonzero d-vector
        known_value (Optional[float]): ``a(z)`` when already known, e.g. the
            matrix antinorm whose candidate `z` is

    Returns:
        Tuple[PolytopeAntinorm, bool]: the refined antinorm and whether `z`
            was accepted; an LP failure counts as a rejection
    """
    z = _nonnegative_vector(a, z)
    if not np.any(z > 0):
        raise InvalidInputError('cannot insert the zero vector')
    if known_value is None:
        attempt = (mtry(lambda: _solve_vector(a, z).value)
                   .log_failure(logger, 'rejecting candidate vertex'))
        if attempt.is_failure():
            return a, False
        known_value = attempt.get()
    if known_value <= 1 + a.tol:
        logger.debug('inserting vertex %s (a = %.10g)', z, known_value)
        return a.with_vertex(z), True
    return a, False


def _dedupe(v: Matrix) -> Matrix:
    # columns on one ray are duplicates; the one closest to the origin is
    # kept, at the position of the first occurrence
    keep: List[int] = []
    for j in range(v.shape[1]):
        col = v[:, j]
        unit = normalize_l1(col)
        for t, k in enumerate(keep):
            other = normalize_l1(v[:, k])
            if np.allclose(unit, other, rtol=_DUPLICATE_RTOL, atol=0.0):
                if col.sum() < v[:, k].sum():
                    keep[t] = j
                break
        else:
            keep.append(j)
    return v[:, keep] if len(keep) < v.shape[1] else v


def prune(a: PolytopeAntinorm) -> PolytopeAntinorm:
    """
    Removes redundant vertices.

    A vertex ``v_i`` is redundant when ``a_W(v_i) >= 1 + tol`` for the
    antinorm ``a_W`` of the remaining vertices. Indices are scanned from the
    last to the first, and the scan restarts as long as some vertex was
    removed. A vertex whose removal would leave a rank-one set is never
    tested, and a vertex whose test LP fails is kept. Finally, columns on the
    same ray are merged.

    Args:
        a (PolytopeAntinorm): the antinorm

    Returns:
        PolytopeAntinorm: an antinorm with the same values and fewer vertices
    """
    v = a.vertices
    removed = True
    while removed and v.shape[1] > 1:
        removed = False
        for i in range(v.shape[1] - 1, -1, -1):
            if v.shape[1] <= 1:
                break
            w = np.delete(v, i, axis=1)
            if np.linalg.matrix_rank(w) == 1:
                continue
            others = replace(a, vertices=w)
            attempt = (mtry(lambda: _solve_vector(others, v[:, i]).value)
                       .log_failure(logger, 'keeping vertex %d', i))
            if attempt.get_or_else(-np.inf) >= 1 + a.tol:
                v = w
                removed = True
    v = _dedupe(v)
    if v.shape[1] < a.size:
        logger.debug('pruned %d of %d vertices', a.size - v.shape[1], a.size)
        return replace(a, vertices=v)
    return a


def rescaled_eigenvector(a: PolytopeAntinorm,
                         v,
                         theta: float) -> Option[Vector]:
    """
    Scales a leading eigenvector to sit strictly inside the antiball,
    ``v / (a(v) theta)``, so that ``a`` of the result is ``1 / theta``.

    Args:
        a (PolytopeAntinorm): the current antinorm
        v (array_like): a nonnegative nonzero eigenvector
        theta (float): the scaling parameter, greater than 1

    Returns:
        Option[Vector]: the rescaled vector, or `Nothing` when ``a(v)`` is 0
            or not finite (the antinorm cannot see `v`) or its LP fails

    Raises:
        InvalidInputError: if ``theta <= 1`` or `v` is negative
    """
    if not theta > 1:
        raise InvalidInputError('theta must be greater than 1, got %r' % theta)
    v = _nonnegative_vector(a, v)
    value = (mtry(lambda: _solve_vector(a, v).value)
             .log_failure(logger, 'cannot evaluate eigenvector')
             .to_option()
             .filter(lambda x: 0 < x < np.inf))
    if value.is_empty():
        logger.warning('eigenvector %s is invisible to the antinorm, '
                       'not inserted', v)
        return Nothing()
    return Some(v / (value.get() * theta))

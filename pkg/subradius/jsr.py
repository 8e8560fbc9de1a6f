"""
Joint spectral radius bounds with real balanced polytope norms.

A full-rank vertex matrix ``V`` (d x p) defines the unit ball
``absco(V) = {V c : sum |c_i| <= 1}`` and the norm::

    ||z|| = min sum(c+ + c-)   s.t.   V (c+ - c-) = z,   c+, c- >= 0

The induced matrix norm is attained at a vertex,
``||A|| = max_i ||A v_i||``, and the maximizing image is the candidate
vertex of the adaptive variant.

The Gripenberg loop mirrors the LSR loop with every order reversed: the
running lower bound takes ``rho(P)^(1/n)``, the prefix score is the
smallest norm root along the word, and a product stays active while its
score exceeds ``L + delta``.
"""
from dataclasses import dataclass, field, replace
import logging

import numpy as np

from subradius.errors import InvalidInputError, NumericalFailure
from subradius.family import (MatrixFamily, ProductNode, extend_product,
                              frontier_minimum, rescale_family)
from subradius.lp import LpOptions, LpProblem, LpStatus, solve_lp
from subradius.lsr import DegreeRecord, Metrics, Termination
from subradius.mtry import mtry
from subradius.mytypes import *
from subradius.settings import DEFAULT_TOL
from subradius.spectral import spectral_radius
from subradius.util import as_vector

__all__ = ['JsrConfig', 'JsrReport', 'NormValue', 'PolytopeNorm',
           'adaptive_gripenberg_jsr', 'gripenberg_jsr', 'norm_lp',
           'polytope_norm_matrix', 'polytope_norm_vector', 'prune_norm',
           'run_jsr']

logger = logging.getLogger(__name__)

PRELIMINARY_EVALS = 10


@dataclass(frozen=True, eq=False)
class PolytopeNorm:
    """
    An immutable real balanced polytope norm.

    Attributes:
        vertices (Matrix): d x p vertex matrix of rank d, one vertex per
            column; ``-v`` is implicitly a vertex whenever ``v`` is
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
        if np.linalg.matrix_rank(v) < v.shape[0]:
            raise InvalidInputError('the vertices of a polytope norm must '
                                    'span R^%d' % v.shape[0])
        if self.tol < 0:
            raise InvalidInputError('tol must be nonnegative')
        v.setflags(write=False)
        object.__setattr__(self, 'vertices', v)

    def __repr__(self) -> str:
        return 'PolytopeNorm(dim=%d, vertices=%d, tol=%g)' % (
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

    @staticmethod
    def identity(dim: int, tol: float = DEFAULT_TOL) -> 'PolytopeNorm':
        """
        Returns:
            PolytopeNorm: the 1-norm, the cross-polytope ``absco(I)``
        """
        return PolytopeNorm(np.eye(dim), tol)

    @staticmethod
    def from_vertices(vertices: Sequence[Sequence[float]],
                      tol: float = DEFAULT_TOL) -> 'PolytopeNorm':
        return PolytopeNorm(np.array(vertices, dtype=float).T, tol)

    def with_vertex(self, z: Vector) -> 'PolytopeNorm':
        return replace(self, vertices=np.column_stack([self.vertices, z]))

    def vertex_list(self) -> List[List[float]]:
        return [list(map(float, self.vertices[:, i]))
                for i in range(self.size)]


@dataclass(frozen=True, eq=False)
class NormValue:
    """
    Attributes:
        value (float): the norm
        argmax_vertex_index (int): maximizing vertex (matrix evaluation only,
            -1 otherwise)
        candidate (Optional[Vector]): the image ``A v_j`` of the maximizing
            vertex
        lp_failures (int): vertex LPs skipped during a matrix evaluation
    """
    value: float
    argmax_vertex_index: int = -1
    candidate: Optional[Vector] = field(default=None, repr=False)
    lp_failures: int = 0


def norm_lp(vertices: Matrix, z: Vector) -> LpProblem:
    """
    Builds the LP of ``||z||`` over ``x = (c+, c-)``; the equality
    ``V (c+ - c-) = z`` is written as a pair of inequalities.
    """
    v = np.asarray(vertices, dtype=float)
    z = np.asarray(z, dtype=float)
    p = v.shape[1]
    split = np.hstack([v, -v])
    return LpProblem(objective=np.ones(2 * p),
                     ineq_matrix=np.vstack([split, -split]),
                     ineq_rhs=np.concatenate([z, -z]))


def _solve_vector(nrm: PolytopeNorm, z: Vector) -> float:
    if nrm.is_identity:
        return float(np.abs(z).sum())
    if not np.any(z != 0):
        return 0.0
    outcome = solve_lp(norm_lp(nrm.vertices, z), nrm.lp_options)
    if outcome.status is LpStatus.OPTIMAL:
        return float(outcome.objective_value)
    # rank(V) = d makes the program feasible and bounded
    raise NumericalFailure('norm LP ended with status %s'
                           % outcome.status.value,
                           iterations=outcome.iterations,
                           context={'vertex_count': nrm.size})


def polytope_norm_vector(nrm: PolytopeNorm, z) -> float:
    """
    Evaluates the polytope norm at a real vector.

    Args:
        nrm (PolytopeNorm): the norm
        z (array_like): a real d-vector

    Returns:
        float: ``||z||``

    Raises:
        NumericalFailure: if the LP solve fails
    """
    return _solve_vector(nrm, as_vector(z, nrm.dim, 'norm argument'))


def polytope_norm_matrix(nrm: PolytopeNorm,
                         a,
                         skip_failures: bool = False) -> NormValue:
    """
    Evaluates the induced norm ``max_i ||A v_i||``.

    Ties go to the lowest vertex index. With `skip_failures`, vertices whose
    LP fails are left out of the maximum and counted; the evaluation only
    fails when every vertex does.

    Args:
        nrm (PolytopeNorm): the norm
        a (array_like): a real d x d matrix
        skip_failures (bool): tolerate individual LP failures

    Returns:
        NormValue: the value, the maximizing vertex index and the candidate
            vertex ``A v_j``

    Raises:
        NumericalFailure: if an LP solve fails (every LP, with
            `skip_failures`)
    """
    a = np.asarray(a, dtype=float)
    images = a @ nrm.vertices
    if nrm.is_identity:
        sums = np.abs(a).sum(axis=0)
        j = int(np.argmax(sums))
        return NormValue(float(sums[j]), j, images[:, j].copy())
    best, best_index, failures = -np.inf, -1, 0
    for j in range(nrm.size):
        z = images[:, j]
        attempt = mtry(lambda: _solve_vector(nrm, z))
        if attempt.is_failure():
            err = attempt.get()
            if isinstance(err, NumericalFailure):
                err.context['vertex_index'] = j
            if not skip_failures:
                raise err
            attempt.log_failure(logger, 'skipping vertex %d', j)
            failures += 1
            continue
        if attempt.get() > best:
            best, best_index = attempt.get(), j
    if best_index < 0:
        raise NumericalFailure('every norm LP failed',
                               context={'vertex_count': nrm.size})
    return NormValue(best, best_index, images[:, best_index].copy(), failures)


def try_insert_norm_vertex(nrm: PolytopeNorm,
                           z,
                           known_value: Optional[float] = None
                           ) -> Tuple[PolytopeNorm, bool]:
    """
    Adds `z` to the vertex set if ``||z|| >= 1 - tol``, i.e. when `z` is not
    strictly inside the unit ball.

    Returns:
        Tuple[PolytopeNorm, bool]: the refined norm and whether `z` was
            accepted; an LP failure counts as a rejection
    """
    z = as_vector(z, nrm.dim, 'candidate vertex')
    if not np.any(z != 0):
        return nrm, False
    if known_value is None:
        attempt = (mtry(lambda: _solve_vector(nrm, z))
                   .log_failure(logger, 'rejecting candidate vertex'))
        if attempt.is_failure():
            return nrm, False
        known_value = attempt.get()
    if known_value >= 1 - nrm.tol:
        logger.debug('inserting vertex %s (norm = %.10g)', z, known_value)
        return nrm.with_vertex(z), True
    return nrm, False


def prune_norm(nrm: PolytopeNorm) -> PolytopeNorm:
    """
    Removes vertices lying inside the ball spanned by the others,
    ``||v_i||_W <= 1 - tol``.

    Indices are scanned from the last to the first, restarting while some
    vertex was removed. A vertex whose removal would drop the rank below d
    is kept, and so is a vertex whose test LP fails.
    """
    v = nrm.vertices
    d = nrm.dim
    removed = True
    while removed and v.shape[1] > d:
        removed = False
        for i in range(v.shape[1] - 1, -1, -1):
            if v.shape[1] <= d:
                break
            w = np.delete(v, i, axis=1)
            if np.linalg.matrix_rank(w) < d:
                continue
            others = replace(nrm, vertices=w)
            attempt = (mtry(lambda: _solve_vector(others, v[:, i]))
                       .log_failure(logger, 'keeping vertex %d', i))
            if attempt.get_or_else(np.inf) <= 1 - nrm.tol:
                v = w
                removed = True
    if v.shape[1] < nrm.size:
        logger.debug('pruned %d of %d vertices', nrm.size - v.shape[1],
                     nrm.size)
        return replace(nrm, vertices=v)
    return nrm


@dataclass(frozen=True)
class JsrConfig:
    """
    Attributes:
        delta (float): target accuracy, positive
        max_evals (int): budget M on matrix-norm evaluations
        tol (float): insertion and pruning tolerance
        init (Union[str, PolytopeNorm, np.ndarray]): the initial norm,
            ``'ones'`` for the 1-norm or an explicit full-rank vertex set
        rescale (Union[float, str]): a positive factor applied to the family
            before solving, or ``'auto'`` to normalize by the lower bound of
            a preliminary classic 1-norm run with the same budget; bounds are
            mapped back
        max_vertex_growth (float): candidate vertices whose largest entry
            exceeds this multiple of the initial vertices' are not inserted
        lp_options (LpOptions): options for the norm LPs
    """
    delta: float = 1e-6
    max_evals: int = 1000
    tol: float = DEFAULT_TOL
    init: Union[str, PolytopeNorm, np.ndarray] = 'ones'
    rescale: Union[float, str] = 1.0
    lp_options: LpOptions = field(default_factory=LpOptions)
    max_vertex_growth: float = 1e4

    def validate(self, family: MatrixFamily) -> 'JsrConfig':
        if not self.delta > 0:
            raise InvalidInputError('delta must be positive')
        if self.max_evals < len(family):
            raise InvalidInputError('max_evals must be at least the family '
                                    'size %d' % len(family))
        if self.tol < 0:
            raise InvalidInputError('tol must be nonnegative')
        if not self.max_vertex_growth > 1:
            raise InvalidInputError('max_vertex_growth must exceed 1')
        if isinstance(self.rescale, str):
            if self.rescale != 'auto':
                raise InvalidInputError('rescale must be a positive real or '
                                        'auto, got %r' % self.rescale)
        elif not (np.isfinite(self.rescale) and self.rescale > 0):
            raise InvalidInputError('rescale must be positive')
        return self

    def initial_norm(self, family: MatrixFamily) -> PolytopeNorm:
        init = self.init
        if isinstance(init, str):
            if init != 'ones':
                raise InvalidInputError('bad init %r, expected ones' % init)
            nrm = PolytopeNorm.identity(family.dim)
        elif isinstance(init, PolytopeNorm):
            nrm = init
        else:
            nrm = PolytopeNorm(np.asarray(init, dtype=float))
        if nrm.dim != family.dim:
            raise InvalidInputError('initial norm has dimension %d, the '
                                    'family %d' % (nrm.dim, family.dim))
        return replace(nrm, tol=self.tol, lp_options=self.lp_options)


@dataclass(frozen=True, eq=False)
class JsrReport:
    """
    Attributes:
        lower (float): the final lower bound on the JSR
        upper (float): the final upper bound on the JSR
        metrics (Metrics): (l_opt, l_smp, n, n_op, J_max); the second entry
            is the last degree that raised the lower bound
        terminated_by (Termination): accuracy or budget
        final_vertices (Optional[Matrix]): the vertex matrix at the end of
            an adaptive run, `None` for a classic one
        vertices_added (int): net growth of the vertex set
        lp_failures (int): norm LPs that failed and were worked around
        history (Tuple[DegreeRecord, ...]): one record per degree
        adaptive (bool): whether the norm was refined
        rescale (float): the factor applied to the family; the bounds are
            already mapped back
        rejected_vertices (int): candidates left out for exceeding
            `max_vertex_growth`
    """
    lower: float
    upper: float
    metrics: Metrics
    terminated_by: Termination
    final_vertices: Optional[Matrix] = field(default=None, repr=False)
    vertices_added: int = 0
    lp_failures: int = 0
    history: Tuple[DegreeRecord, ...] = field(default=(), repr=False)
    adaptive: bool = False
    rescale: float = 1.0
    rejected_vertices: int = 0

    @property
    def gap(self) -> float:
        return self.upper - self.lower

    @property
    def vertex_count(self) -> int:
        return 0 if self.final_vertices is None else self.final_vertices.shape[1]


class _JsrRun:

    def __init__(self, family: MatrixFamily, cfg: JsrConfig, adaptive: bool):
        self.family = family
        self.cfg = cfg
        self.adaptive = adaptive
        self.norm = cfg.initial_norm(family)
        self.vertex_cap = (cfg.max_vertex_growth
                           * float(np.abs(self.norm.vertices).max()))
        self.lower = 0.0
        self.lp_failures = 0
        self.rejected = 0
        self.expanded: Set[Word] = set()

    def norm_of(self, node: ProductNode) -> Optional[NormValue]:
        attempt = (mtry(lambda: polytope_norm_matrix(self.norm, node.matrix,
                                                     skip_failures=True))
                   .log_failure(logger, 'norm of product %s failed',
                                list(node.word)))
        if attempt.is_failure():
            self.lp_failures += 1
            return None
        value = attempt.get()
        self.lp_failures += value.lp_failures
        return value

    def visit(self, node: ProductNode, prefix_score: float) -> float:
        n = node.degree
        value = self.norm_of(node)
        rho = spectral_radius(node.matrix, nonnegative=False).rho
        self.lower = max(self.lower, rho ** (1.0 / n))
        if value is None:
            return prefix_score
        if self.adaptive and value.candidate is not None:
            self.offer(value)
        return min(prefix_score, value.value ** (1.0 / n))

    def offer(self, value: NormValue):
        if np.abs(value.candidate).max() > self.vertex_cap:
            # only an unnormalized family produces vertices this large
            self.rejected += 1
            return
        self.norm, _ = try_insert_norm_vertex(self.norm, value.candidate,
                                              known_value=value.value)

    def refine(self):
        if self.adaptive:
            self.norm = prune_norm(self.norm)

    def certify(self, upper: float) -> float:
        """
        Re-derives the upper bound from the final norm alone: the largest
        ``min`` over prefixes of ``||P||^(1/k)`` across the leaves of the
        explored tree, at least `upper`.
        """
        def score(node: ProductNode) -> Optional[float]:
            value = self.norm_of(node)
            if value is None:
                return None
            return -value.value ** (1.0 / node.degree)

        # the walk minimizes, so scores and bounds are negated
        certified, scored = frontier_minimum(self.family, self.expanded,
                                             score, -upper, root=-np.inf)
        logger.debug('certified H=%.15g (running %.15g) from %d products',
                     -certified, upper, scored)
        return -certified


def _solve(family: MatrixFamily, cfg: JsrConfig, adaptive: bool) -> JsrReport:
    run = _JsrRun(family, cfg, adaptive)
    initial_size = run.norm.size
    m, delta = len(family), cfg.delta
    logger.info('%s Gripenberg on %r, delta=%g, M=%d',
                'adaptive' if adaptive else 'classic', family, delta,
                cfg.max_evals)

    active: List[ProductNode] = []
    for i in range(m):
        node = family.member_node(i)
        active.append(node.with_score(run.visit(node, np.inf)))
    upper = max(node.q_cached for node in active)
    run.refine()

    n, n_op, j, j_max, l_opt, l_smp = 1, m, m, m, 1, 1
    history = [DegreeRecord(1, run.lower, upper, j, run.norm.size, n_op)]

    while upper - run.lower >= delta and n_op <= cfg.max_evals:
        if not active:
            break
        upper_old, lower_old = upper, run.lower
        n += 1
        kept: List[ProductNode] = []
        best_kept = -np.inf
        for x in active:
            run.expanded.add(x.word)
            for i in range(m):
                y = extend_product(family, x, i)
                score = run.visit(y, x.q_cached)
                if score > run.lower + delta:
                    kept.append(y.with_score(score))
                    best_kept = max(best_kept, score)
        upper = min(upper_old, max(best_kept, run.lower + delta))
        n_op += j * m
        j = len(kept)
        j_max = max(j_max, j)
        if upper - run.lower < upper_old - lower_old:
            l_opt = n
        if run.lower > lower_old:
            l_smp = n
        run.refine()
        active = kept
        history.append(DegreeRecord(n, run.lower, upper, j, run.norm.size,
                                    n_op))
        logger.debug('degree %d: L=%.15g H=%.15g J=%d |V|=%d n_op=%d',
                     n, run.lower, upper, j, run.norm.size, n_op)

    if adaptive:
        upper = max(upper, run.certify(upper))
    if run.rejected:
        logger.warning('%d candidate vertices exceeded %g times the initial '
                       'scale and were not inserted; the family is probably '
                       'not normalized', run.rejected, cfg.max_vertex_growth)
    terminated_by = (Termination.ACCURACY
                     if upper - run.lower <= delta * (1 + 1e-9)
                     else Termination.BUDGET)
    logger.info('Gripenberg stopped by %s: L=%.15g H=%.15g',
                terminated_by.value, run.lower, upper)
    return JsrReport(lower=run.lower,
                     upper=upper,
                     metrics=Metrics(l_opt, l_smp, n, n_op, j_max),
                     terminated_by=terminated_by,
                     final_vertices=run.norm.vertices if adaptive else None,
                     vertices_added=run.norm.size - initial_size,
                     lp_failures=run.lp_failures,
                     history=tuple(history),
                     adaptive=adaptive,
                     rescale=family.rescale,
                     rejected_vertices=run.rejected)


def _auto_factor(prelim: JsrReport) -> float:
    if prelim.lower > 0:
        return 1.0 / prelim.lower
    if 0 < prelim.upper < np.inf:
        return 1.0 / prelim.upper
    # nilpotent-looking family: nothing to normalize by
    return 1.0


def run_jsr(family: MatrixFamily,
            cfg: JsrConfig,
            adaptive: bool = True) -> JsrReport:
    """
    Bounds the JSR of a real family, rescaling it first as `cfg` asks.

    Args:
        family (MatrixFamily): any real family
        cfg (JsrConfig): accuracy, budget, initial norm and rescaling
        adaptive (bool): refine the norm during the run

    Returns:
        JsrReport: bounds on the JSR of `family` itself

    Raises:
        InvalidInputError: if the config is out of range
        ProductOverflowError: if products grow past 1e150
    """
    cfg.validate(family)
    known_lower = 0.0
    if cfg.rescale == 'auto':
        # the 1-norm is evaluated in closed form, so the full budget is cheap
        prelim = _solve(family,
                        replace(cfg, init='ones',
                                max_evals=max(PRELIMINARY_EVALS,
                                              cfg.max_evals)),
                        adaptive=False)
        logger.info('preliminary bounds (%.15g, %.15g)',
                    prelim.lower, prelim.upper)
        c, known_lower = _auto_factor(prelim), prelim.lower
    else:
        c = float(cfg.rescale)
    report = _solve(rescale_family(family, c), cfg, adaptive)
    if c == 1 and known_lower <= report.lower:
        return report
    logger.info('mapping bounds back by 1/%.15g', c)
    return replace(report,
                   lower=max(report.lower / c, known_lower),
                   upper=report.upper / c)


def gripenberg_jsr(family: MatrixFamily, cfg: JsrConfig) -> JsrReport:
    """
    Classic Gripenberg bounds with the fixed norm ``cfg.init``.
    """
    return run_jsr(family, cfg, adaptive=False)


def adaptive_gripenberg_jsr(family: MatrixFamily, cfg: JsrConfig) -> JsrReport:
    """
    Gripenberg bounds with a polytope norm refined by the candidate vertex of
    every evaluation and pruned after each degree.

    Args:
        family (MatrixFamily): any real family
        cfg (JsrConfig): accuracy, budget, initial norm and rescaling

    Returns:
        JsrReport: the bounds, metrics and final vertex set
    """
    return run_jsr(family, cfg, adaptive=True)

"""
Lower spectral radius bounds by branch and bound over the product semigroup.

All three variants share one loop. At degree n every kept product ``X`` of
degree n - 1 is extended by each member, ``Y = X A_i``, in family order. The
prefix score ``q(Y) = max(q(X), a(Y)^(1/n))`` bounds the LSR from below
along ``Y``'s branch, and the running upper bound takes ``rho(Y)^(1/n)``.
``Y`` is kept for the next degree only while ``q(Y) < H - delta``; the lower
bound after the degree is ``max(L_old, min(min_kept_q, H - delta))``.

``s``  uses a fixed antinorm.
``a``  offers the candidate vertex of every evaluation to the antinorm
       right away, and prunes after the first degree and after every
       later one.
``e``  additionally inserts the leading eigenvector of every product that
       strictly improved the upper bound, shrunk by ``theta``, before
       pruning.

The adaptive variants score products under an antinorm that grows while the
pass runs, so the running lower bound mixes antinorms. At the end of a pass
the explored tree is re-scored under the final antinorm alone and the
reported lower bound is the smaller of the two; when that leaves the gap at
``delta`` or more the search restarts from degree 1 with the refined
antinorm, until the gap closes or the budget runs out.

Adding a vertex never lowers the antinorm of a vector, but the matrix
antinorm ``min_i a(P v_i)`` can drop when the new vertex lies below the
unit level. The running upper bound also differs between runs that explore
different trees, so ``a`` and ``e`` are compared with ``s`` on their final
bounds only, not degree by degree.
"""
from dataclasses import dataclass, field, replace
import enum
import logging

import numpy as np

from subradius.antinorm import (AntinormValue, PolytopeAntinorm, eval_matrix,
                                prune, rescaled_eigenvector, try_insert_vertex)
from subradius.errors import InvalidInputError
from subradius.family import (MatrixFamily, ProductNode, extend_product,
                              frontier_minimum)
from subradius.lp import LpOptions
from subradius.mtry import mtry
from subradius.mytypes import *
from subradius.spectral import SpectralInfo, spectral_radius
from subradius.settings import DEFAULT_THETA, DEFAULT_TOL

__all__ = ['BoundsState', 'DegreeRecord', 'EvalRecord', 'Metrics',
           'SolverConfig', 'SolverReport', 'Termination', 'Variant',
           'fold_lower', 'run_algorithm_a', 'run_algorithm_e',
           'run_algorithm_s', 'run_lsr']

logger = logging.getLogger(__name__)

# relative margin for "strictly improves the upper bound"
IMPROVEMENT_RTOL = 1e-12
# relative margin for products attaining the upper bound (s.l.p. pool)
ATTAIN_RTOL = 1e-10


class Variant(enum.Enum):
    S = 's'
    A = 'a'
    E = 'e'

    @property
    def adaptive(self) -> bool:
        return self is not Variant.S


class Termination(enum.Enum):
    ACCURACY = 'accuracy'
    BUDGET = 'budget'


@dataclass(frozen=True)
class SolverConfig:
    """
    Attributes:
        delta (float): target accuracy, positive
        max_evals (int): budget M on matrix-antinorm evaluations
        theta (float): eigenvector shrink factor of variant ``e``, above 1
        tol (float): insertion and pruning tolerance
        init (Union[str, PolytopeAntinorm, np.ndarray]): the initial
            antinorm: ``'ones'`` (the 1-antinorm), ``'eig:K'`` (the leading
            eigenvector of member K, 1-based), or an explicit vertex set
        lp_options (LpOptions): options for the antinorm LPs
        record_trace (bool): keep one `EvalRecord` per evaluated product
    """
    delta: float = 1e-6
    max_evals: int = 1000
    theta: float = DEFAULT_THETA
    tol: float = DEFAULT_TOL
    init: Union[str, PolytopeAntinorm, np.ndarray] = 'ones'
    lp_options: LpOptions = field(default_factory=LpOptions)
    record_trace: bool = False

    def validate(self, family: MatrixFamily) -> 'SolverConfig':
        """
        Raises:
            InvalidInputError: if a field is out of range for `family`
        """
        if not self.delta > 0:
            raise InvalidInputError('delta must be positive')
        if self.max_evals < len(family):
            raise InvalidInputError('max_evals must be at least the family '
                                    'size %d' % len(family))
        if not self.theta > 1:
            raise InvalidInputError('theta must be greater than 1')
        if self.tol < 0:
            raise InvalidInputError('tol must be nonnegative')
        return self

    def initial_antinorm(self, family: MatrixFamily) -> PolytopeAntinorm:
        """
        Builds the initial antinorm named by `init`.

        Args:
            family (MatrixFamily): the family being solved

        Returns:
            PolytopeAntinorm: the antinorm, carrying this config's `tol` and
                LP options

        Raises:
            InvalidInputError: if `init` is malformed or has the wrong
                dimension
        """
        init = self.init
        if isinstance(init, str):
            if init == 'ones':
                a = PolytopeAntinorm.identity(family.dim)
            elif init.startswith('eig:'):
                try:
                    k = int(init[4:])
                except ValueError:
                    raise InvalidInputError('bad init %r' % init)
                if not 1 <= k <= len(family):
                    raise InvalidInputError('init %r: member index out of '
                                            'range 1..%d' % (init, len(family)))
                v = spectral_radius(family[k - 1], nonnegative=True).leading_vector
                a = PolytopeAntinorm.from_vector(v)
            else:
                raise InvalidInputError('bad init %r, expected ones or eig:K'
                                        % init)
        elif isinstance(init, PolytopeAntinorm):
            a = init
        else:
            a = PolytopeAntinorm(np.asarray(init, dtype=float))
        if a.dim != family.dim:
            raise InvalidInputError('initial antinorm has dimension %d, the '
                                    'family %d' % (a.dim, family.dim))
        return replace(a, tol=self.tol, lp_options=self.lp_options)


@dataclass(frozen=True)
class Metrics:
    l_opt: int
    l_slp: int
    n: int
    n_op: int
    j_max: int

    def as_tuple(self) -> Tuple[int, int, int, int, int]:
        return self.l_opt, self.l_slp, self.n, self.n_op, self.j_max

    def to_dict(self) -> Dict[str, int]:
        return {'l_opt': self.l_opt, 'l_slp': self.l_slp, 'n': self.n,
                'n_op': self.n_op, 'j_max': self.j_max}


@dataclass(frozen=True, eq=False)
class BoundsState:
    """
    The search state after a completed degree. Its lower bound is the
    running one of the pass; the report carries the certified bound.

    Attributes:
        lower (float): the lower bound L
        upper (float): the upper bound H
        active (Tuple[ProductNode, ...]): the kept products of this degree,
            each carrying its prefix score
        degree (int): the degree n
    """
    lower: float
    upper: float
    active: Tuple[ProductNode, ...] = field(repr=False)
    degree: int

    @property
    def l(self) -> List[float]:
        return [node.q_cached for node in self.active]


@dataclass(frozen=True)
class DegreeRecord:
    degree: int
    lower: float
    upper: float
    active_count: int
    vertex_count: int
    n_op: int
    pass_index: int = 0


@dataclass(frozen=True)
class EvalRecord:
    """
    One evaluated product.

    Attributes:
        degree (int): the product degree
        word (Word): the product word
        score (float): its prefix score q
        rho_root (float): ``rho^(1/degree)``
        upper (float): the running upper bound right after this product
        kept (bool): whether it joined the active set
    """
    degree: int
    word: Word
    score: float
    rho_root: float
    upper: float
    kept: bool


@dataclass(frozen=True, eq=False)
class SolverReport:
    """
    Attributes:
        lower (float): the final lower bound
        upper (float): the final upper bound
        metrics (Metrics): (l_opt, l_slp, n, n_op, J_max)
        terminated_by (Termination): accuracy or budget
        final_vertices (Matrix): the vertex matrix at the end of the run
        lp_failures (int): antinorm LPs that failed and were worked around
        slp_candidates (Tuple[Word, ...]): filled in by
            `identify_slp_candidates`
        slp_pool (Tuple[Word, ...]): the products of degree l_slp that attain
            the upper bound, in evaluation order
        history (Tuple[DegreeRecord, ...]): one record per degree
        final_state (BoundsState): bounds and active set at termination
        trace (Tuple[EvalRecord, ...]): per-product records, when requested
        variant (Variant): the algorithm that produced the report
        rescale (float): the `rescale` of the family the solver ran on; when
            a driver normalized the family, lower and upper are already
            mapped back to the family it was given
        driver_iterations (int): outer iterations of the rescaling driver,
            0 for a plain run
        passes (int): branch-and-bound passes; adaptive runs restart from
            degree 1 when the refined antinorm does not certify the running
            lower bound
    """
    lower: float
    upper: float
    metrics: Metrics
    terminated_by: Termination
    final_vertices: Matrix = field(repr=False)
    lp_failures: int = 0
    slp_candidates: Tuple[Word, ...] = ()
    slp_pool: Tuple[Word, ...] = field(default=(), repr=False)
    history: Tuple[DegreeRecord, ...] = field(default=(), repr=False)
    final_state: Optional[BoundsState] = field(default=None, repr=False)
    trace: Tuple[EvalRecord, ...] = field(default=(), repr=False)
    variant: Variant = Variant.S
    rescale: float = 1.0
    driver_iterations: int = 0
    passes: int = 1

    @property
    def gap(self) -> float:
        return self.upper - self.lower

    @property
    def vertex_count(self) -> int:
        return self.final_vertices.shape[1]


def fold_lower(previous: float,
               best_kept: float,
               upper: float,
               delta: float) -> float:
    """
    The end-of-degree lower bound ``max(L_old, min(min_kept_q, H - delta))``.

    Args:
        previous (float): the lower bound of the previous degree
        best_kept (float): the smallest prefix score among kept products,
            +inf when none was kept
        upper (float): the upper bound after the degree
        delta (float): the target accuracy

    Returns:
        float: the new lower bound
    """
    return max(previous, min(best_kept, upper - delta))


class _Run:
    """
    Mutable state of one solver run, shared by all of its passes.
    """

    def __init__(self,
                 family: MatrixFamily,
                 cfg: SolverConfig,
                 variant: Variant):
        self.family = family
        self.cfg = cfg
        self.variant = variant
        self.antinorm = cfg.initial_antinorm(family)
        self.upper = np.inf
        self.lp_failures = 0
        self.improvers: List[SpectralInfo] = []
        self.attaining: Dict[int, List[Tuple[Word, float]]] = {}
        self.trace: List[EvalRecord] = []
        self.history: List[DegreeRecord] = []
        self.expanded: Set[Word] = set()
        self.n_op = 0
        self.n_max = 0
        self.j_max = 0
        self.l_opt = 1
        self.l_slp = 1

    def evaluate(self, node: ProductNode) -> Optional[AntinormValue]:
        attempt = (mtry(lambda: eval_matrix(self.antinorm, node.matrix,
                                            skip_failures=True))
                   .log_failure(logger, 'antinorm of product %s failed',
                                list(node.word)))
        if attempt.is_failure():
            self.lp_failures += 1
            return None
        value = attempt.get()
        self.lp_failures += value.lp_failures
        return value

    def visit(self,
              node: ProductNode,
              prefix_score: float) -> Tuple[float, float]:
        """
        Evaluates one product: updates the upper bound, refines the antinorm
        and returns the prefix score and ``rho^(1/n)``.
        """
        n = node.degree
        value = self.evaluate(node)
        # a failed evaluation keeps the prefix score, a valid lower estimate
        score = (prefix_score if value is None
                 else max(prefix_score, value.value ** (1.0 / n)))
        info = spectral_radius(node.matrix, nonnegative=True)
        rho_root = info.rho ** (1.0 / n)
        if (self.variant is Variant.E
                and rho_root < self.upper * (1 - IMPROVEMENT_RTOL)):
            self.improvers.append(info)
        self.upper = min(self.upper, rho_root)
        self._track_attaining(node.word, rho_root)
        if (self.variant.adaptive and value is not None
                and value.candidate is not None
                and np.any(value.candidate > 0)):
            self.antinorm, _ = try_insert_vertex(self.antinorm,
                                                 value.candidate,
                                                 known_value=value.value)
        return score, rho_root

    def record(self,
               node: ProductNode,
               score: float,
               rho_root: float,
               kept: bool):
        if self.cfg.record_trace:
            self.trace.append(EvalRecord(node.degree, node.word, score,
                                         rho_root, self.upper, kept))

    def _track_attaining(self, word: Word, rho_root: float):
        pool = self.attaining.setdefault(len(word), [])
        if rho_root <= self.upper * (1 + ATTAIN_RTOL):
            pool.append((word, rho_root))

    def pool_for(self, degree: int) -> Tuple[Word, ...]:
        best = self.upper * (1 + ATTAIN_RTOL)
        # restart passes revisit words, keep the first occurrence
        return tuple(dict.fromkeys(w for w, r in self.attaining.get(degree, ())
                                   if r <= best))

    def refine(self):
        if self.variant is Variant.E:
            for info in self.improvers:
                rescaled_eigenvector(self.antinorm, info.leading_vector,
                                     self.cfg.theta).map(self._insert_eigen)
            self.improvers = []
        if self.variant.adaptive:
            self.antinorm = prune(self.antinorm)

    def _insert_eigen(self, w: Vector):
        self.antinorm, _ = try_insert_vertex(self.antinorm, w,
                                             known_value=1.0 / self.cfg.theta)

    def search(self, index: int) -> BoundsState:
        """
        One branch-and-bound pass from degree 1 with the current antinorm.

        Returns the state after the last completed degree; its lower bound
        is the running one, folded from scores taken as the antinorm grew.
        """
        family, cfg, delta = self.family, self.cfg, self.cfg.delta
        m = len(family)
        self.expanded = set()
        active: List[ProductNode] = []
        for i in range(m):
            node = family.member_node(i)
            score, rho_root = self.visit(node, 0.0)
            self.record(node, score, rho_root, True)
            active.append(node.with_score(score))
        lower = min(node.q_cached for node in active)
        self.refine()

        n, j = 1, m
        self.n_op += m
        self.j_max = max(self.j_max, j)
        self.history.append(DegreeRecord(1, lower, self.upper, j,
                                         self.antinorm.size, self.n_op,
                                         index))
        logger.debug('pass %d degree 1: L=%.15g H=%.15g',
                     index, lower, self.upper)

        while self.upper - lower >= delta and self.n_op <= cfg.max_evals:
            if not active:
                # every product was discarded: L = H - delta already
                break
            upper_old, lower_old = self.upper, lower
            n += 1
            kept: List[ProductNode] = []
            best_kept = np.inf
            for x in active:
                self.expanded.add(x.word)
                for i in range(m):
                    y = extend_product(family, x, i)
                    score, rho_root = self.visit(y, x.q_cached)
                    keep = score < self.upper - delta
                    self.record(y, score, rho_root, keep)
                    if keep:
                        kept.append(y.with_score(score))
                        best_kept = min(best_kept, score)
            lower = fold_lower(lower_old, best_kept, self.upper, delta)
            self.n_op += j * m
            j = len(kept)
            self.j_max = max(self.j_max, j)
            if self.upper - lower < upper_old - lower_old:
                self.l_opt = n
            if self.upper < upper_old:
                self.l_slp = n
            self.refine()
            active = kept
            self.history.append(DegreeRecord(n, lower, self.upper, j,
                                             self.antinorm.size, self.n_op,
                                             index))
            logger.debug('pass %d degree %d: L=%.15g H=%.15g J=%d |V|=%d '
                         'n_op=%d', index, n, lower, self.upper, j,
                         self.antinorm.size, self.n_op)
        self.n_max = max(self.n_max, n)
        return BoundsState(lower, self.upper, tuple(active), n)

    def certify(self, lower: float) -> float:
        """
        Re-derives the lower bound of the last pass from the current
        antinorm alone.

        Every leaf of the pass's product tree, discarded or still active, is
        scored by ``max`` over its prefixes of ``a(P)^(1/k)`` under the one
        final antinorm. The smallest such score (capped at `lower`) is a
        lower bound on the LSR even when the pass refined the antinorm while
        it ran.
        """
        def score(node: ProductNode) -> Optional[float]:
            value = self.evaluate(node)
            if value is None:
                return None
            return value.value ** (1.0 / node.degree)

        certified, scored = frontier_minimum(self.family, self.expanded,
                                             score, lower)
        logger.debug('certified L=%.15g (running %.15g) from %d products',
                     certified, lower, scored)
        return certified


def _solve(family: MatrixFamily,
           cfg: SolverConfig,
           variant: Variant) -> SolverReport:
    family.require_nonnegative()
    cfg.validate(family)
    run = _Run(family, cfg, variant)
    delta = cfg.delta
    logger.info('algorithm %s on %r, delta=%g, M=%d',
                variant.value, family, delta, cfg.max_evals)

    lower, index = 0.0, 0
    while True:
        state = run.search(index)
        certified = (run.certify(state.lower) if variant.adaptive
                     else state.lower)
        lower = max(lower, certified)
        if (not variant.adaptive
                or run.upper - lower <= delta * (1 + 1e-9)
                or run.n_op > cfg.max_evals):
            break
        logger.info('pass %d: running L=%.15g is only certified to %.15g, '
                    'restarting from degree 1 with %d vertices',
                    index, state.lower, certified, run.antinorm.size)
        index += 1

    gap = run.upper - lower
    terminated_by = (Termination.ACCURACY if gap <= delta * (1 + 1e-9)
                     else Termination.BUDGET)
    logger.info('algorithm %s stopped by %s after %d pass(es): L=%.15g '
                'H=%.15g', variant.value, terminated_by.value, index + 1,
                lower, run.upper)
    return SolverReport(
        lower=lower,
        upper=run.upper,
        metrics=Metrics(run.l_opt, run.l_slp, run.n_max, run.n_op,
                        run.j_max),
        terminated_by=terminated_by,
        final_vertices=run.antinorm.vertices,
        lp_failures=run.lp_failures,
        slp_pool=run.pool_for(run.l_slp),
        history=tuple(run.history),
        final_state=state,
        trace=tuple(run.trace),
        variant=variant,
        rescale=family.rescale,
        passes=index + 1,
    )


def run_algorithm_s(family: MatrixFamily, cfg: SolverConfig) -> SolverReport:
    """
    Bounds the LSR of a nonnegative family with a fixed antinorm.

    Args:
        family (MatrixFamily): a nonnegative family
        cfg (SolverConfig): accuracy, budget and initial antinorm

    Returns:
        SolverReport: the bounds and performance metrics

    Raises:
        InvalidInputError: if the family has negative entries or the config
            is out of range
        ProductOverflowError: if products grow past 1e150
    """
    return _solve(family, cfg, Variant.S)


def run_algorithm_a(family: MatrixFamily, cfg: SolverConfig) -> SolverReport:
    """
    Bounds the LSR while refining a polytope antinorm with the candidate
    vertex of every evaluation. See `run_algorithm_s`.
    """
    return _solve(family, cfg, Variant.A)


def run_algorithm_e(family: MatrixFamily, cfg: SolverConfig) -> SolverReport:
    return _solve(family, cfg, Variant.E)


def run_lsr(family: MatrixFamily,
            cfg: SolverConfig,
            variant: Union[Variant, str] = Variant.A) -> SolverReport:
    return _solve(family, cfg, Variant(variant))

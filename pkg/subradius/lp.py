"""
A small dense linear-programming solver.

Problems have the form::

    minimize    f^T x
    subject to  A x <= b
                lb <= x <= ub

with no equality rows. The default method is a two-phase revised simplex
written directly on numpy arrays: bounds are shifted or split into
nonnegative variables, finite upper bounds become extra rows, rows with a
negative right-hand side get an artificial variable, and phase one drives the
artificials out. Pricing is Dantzig's rule, switching to Bland's rule after
``3 n`` consecutive degenerate pivots so cycling cannot occur. Every
iteration refactors the basis from scratch; the problems solved here have a
few dozen rows at most.

``method='highs'`` delegates to `scipy.optimize.linprog` instead and exists
as an independent cross-check.
"""
from dataclasses import dataclass, field
import enum
import logging

import numpy as np
from scipy.optimize import linprog

from subradius.errors import InvalidInputError
from subradius.mytypes import *
from subradius.settings import default_lp_settings

__all__ = ['LpOptions', 'LpOutcome', 'LpProblem', 'LpStatus', 'solve_lp']

logger = logging.getLogger(__name__)

_PIVOT_TOL = 1e-11


class LpStatus(enum.Enum):
    OPTIMAL = 'Optimal'
    INFEASIBLE = 'Infeasible'
    UNBOUNDED = 'Unbounded'
    NUMERICAL_FAILURE = 'NumericalFailure'


@dataclass(frozen=True, eq=False)
class LpProblem:
    """
    Attributes:
        objective (Vector): the cost vector f, length n
        ineq_matrix (Matrix): the r x n constraint matrix A
        ineq_rhs (Vector): the right-hand side b, length r
        lower_bounds (Vector): lb, entries may be -inf (default all zero)
        upper_bounds (Vector): ub, entries may be +inf (default all +inf)
    """
    objective: Vector
    ineq_matrix: Matrix
    ineq_rhs: Vector
    lower_bounds: Optional[Vector] = None
    upper_bounds: Optional[Vector] = None

    def __post_init__(self):
        f = np.asarray(self.objective, dtype=float).reshape(-1)
        n = f.shape[0]
        a = np.asarray(self.ineq_matrix, dtype=float).reshape(-1, n)
        b = np.asarray(self.ineq_rhs, dtype=float).reshape(-1)
        if a.shape[0] != b.shape[0]:
            raise InvalidInputError('constraint matrix has %d rows but the '
                                    'right-hand side has %d entries'
                                    % (a.shape[0], b.shape[0]))
        lb = (np.zeros(n) if self.lower_bounds is None
              else np.asarray(self.lower_bounds, dtype=float).reshape(-1))
        ub = (np.full(n, np.inf) if self.upper_bounds is None
              else np.asarray(self.upper_bounds, dtype=float).reshape(-1))
        if lb.shape[0] != n or ub.shape[0] != n:
            raise InvalidInputError('bounds must have %d entries' % n)
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(a))
                and np.all(np.isfinite(b))):
            raise InvalidInputError('LP data must be finite')
        if np.any(np.isnan(lb)) or np.any(np.isnan(ub)):
            raise InvalidInputError('LP bounds must not be NaN')
        for name, value in (('objective', f), ('ineq_matrix', a),
                            ('ineq_rhs', b), ('lower_bounds', lb),
                            ('upper_bounds', ub)):
            object.__setattr__(self, name, value)

    @property
    def num_rows(self) -> int:
        return self.ineq_matrix.shape[0]

    @property
    def num_vars(self) -> int:
        return self.objective.shape[0]


@dataclass(frozen=True)
class LpOptions:
    feas_tol: float = default_lp_settings['feas_tol']
    max_iter: Optional[int] = None
    method: str = default_lp_settings['method']

    def iteration_cap(self, dim: int) -> int:
        """
        Returns:
            int: `max_iter` if set, otherwise ``max(300, dim)``
        """
        if self.max_iter is not None:
            return self.max_iter
        return max(default_lp_settings['max_iter'], dim)


@dataclass(frozen=True, eq=False)
class LpOutcome:
    status: LpStatus
    solution: Optional[Vector] = field(default=None, repr=False)
    objective_value: Optional[float] = None
    iterations: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


@dataclass(frozen=True, eq=False)
class _Standardized:
    """
    ``x = offset + transform @ y`` with ``y >= 0`` and ``a @ y <= b``.
    """
    a: Matrix
    b: Vector
    c: Vector
    offset: Vector
    transform: Matrix


def _standardize(p: LpProblem) -> Optional[_Standardized]:
    n = p.num_vars
    lb, ub = p.lower_bounds, p.upper_bounds
    offset = np.zeros(n)
    columns: List[Tuple[int, float]] = []
    caps: List[Tuple[int, float]] = []
    for j in range(n):
        lo, hi = lb[j], ub[j]
        if lo > hi:
            return None
        if np.isfinite(lo):
            offset[j] = lo
            columns.append((j, 1.0))
            if np.isfinite(hi):
                caps.append((len(columns) - 1, hi - lo))
        elif np.isfinite(hi):
            offset[j] = hi
            columns.append((j, -1.0))
        else:
            columns.append((j, 1.0))
            columns.append((j, -1.0))
    transform = np.zeros((n, len(columns)))
    for k, (j, sign) in enumerate(columns):
        transform[j, k] = sign
    a = p.ineq_matrix @ transform
    b = p.ineq_rhs - p.ineq_matrix @ offset
    if caps:
        rows = np.zeros((len(caps), len(columns)))
        for t, (k, _) in enumerate(caps):
            rows[t, k] = 1.0
        a = np.vstack([a, rows])
        b = np.concatenate([b, [cap for _, cap in caps]])
    return _Standardized(a, b, p.objective @ transform, offset, transform)


def _iterate(m: Matrix,
             rhs: Vector,
             cost: Vector,
             basis: np.ndarray,
             allowed: np.ndarray,
             tol: float,
             max_iter: int
             ) -> Tuple[LpStatus, np.ndarray, int]:
    basis = basis.copy()
    dual_tol = tol * max(1.0, float(np.abs(cost).max(initial=0.0)))
    bland = False
    degenerate = 0
    for it in range(max_iter):
        b_mat = m[:, basis]
        try:
            x_b = np.linalg.solve(b_mat, rhs)
            pi = np.linalg.solve(b_mat.T, cost[basis])
        except np.linalg.LinAlgError:
            return LpStatus.NUMERICAL_FAILURE, basis, it
        reduced = cost - pi @ m
        reduced[basis] = 0.0
        reduced[~allowed] = 0.0
        entering = np.flatnonzero(reduced < -dual_tol)
        if entering.size == 0:
            return LpStatus.OPTIMAL, basis, it
        q = entering[0] if bland else entering[np.argmin(reduced[entering])]
        u = np.linalg.solve(b_mat, m[:, q])
        pos = u > _PIVOT_TOL
        if not pos.any():
            return LpStatus.UNBOUNDED, basis, it
        ratios = np.full(u.shape, np.inf)
        ratios[pos] = np.maximum(x_b[pos], 0.0) / u[pos]
        theta = ratios.min()
        ties = np.flatnonzero(ratios <= theta + tol)
        leave = ties[np.argmin(basis[ties])]
        if theta <= tol:
            degenerate += 1
            if not bland and degenerate >= 3 * m.shape[1]:
                logger.debug('switching to Bland pricing after %d degenerate '
                             'pivots', degenerate)
                bland = True
        else:
            degenerate = 0
        basis[leave] = q
    return LpStatus.NUMERICAL_FAILURE, basis, max_iter


def _drive_out_artificials(m: Matrix,
                           basis: np.ndarray,
                           structural: int) -> np.ndarray:
    basis = basis.copy()
    for pos in np.flatnonzero(basis >= structural):
        try:
            row = np.linalg.solve(m[:, basis].T,
                                  np.eye(len(basis))[pos]) @ m
        except np.linalg.LinAlgError:
            continue
        row[basis] = 0.0
        candidates = np.flatnonzero(np.abs(row[:structural]) > 1e-9)
        # a row with no candidate is redundant; its artificial stays at zero
        if candidates.size:
            basis[pos] = candidates[0]
    return basis


def _simplex(s: _Standardized,
             tol: float,
             max_iter: int) -> Tuple[LpStatus, Optional[Vector], int]:
    r, n = s.a.shape
    if r == 0:
        if np.any(s.c < -tol):
            return LpStatus.UNBOUNDED, None, 0
        return LpStatus.OPTIMAL, np.zeros(n), 0
    neg = np.flatnonzero(s.b < 0)
    k = neg.size
    m = np.hstack([s.a, np.eye(r), np.zeros((r, k))])
    rhs = s.b.copy()
    m[neg] *= -1.0
    rhs[neg] *= -1.0
    basis = np.arange(n, n + r)
    for t, i in enumerate(neg):
        m[i, n + r + t] = 1.0
        basis[i] = n + r + t
    structural = n + r
    iterations = 0
    if k:
        phase_one = np.zeros(n + r + k)
        phase_one[structural:] = 1.0
        status, basis, its = _iterate(m, rhs, phase_one, basis,
                                      np.ones(n + r + k, dtype=bool),
                                      tol, max_iter)
        iterations += its
        if status is not LpStatus.OPTIMAL:
            return LpStatus.NUMERICAL_FAILURE, None, iterations
        x_b = np.linalg.solve(m[:, basis], rhs)
        residual = float(np.sum(x_b[basis >= structural]))
        if residual > tol * max(1.0, float(np.abs(rhs).max())):
            return LpStatus.INFEASIBLE, None, iterations
        basis = _drive_out_artificials(m, basis, structural)
    cost = np.zeros(n + r + k)
    cost[:n] = s.c
    status, basis, its = _iterate(m, rhs, cost, basis,
                                  np.arange(n + r + k) < structural,
                                  tol, max(max_iter - iterations, 1))
    iterations += its
    if status is not LpStatus.OPTIMAL:
        return status, None, iterations
    x = np.zeros(n + r + k)
    try:
        x[basis] = np.linalg.solve(m[:, basis], rhs)
    except np.linalg.LinAlgError:
        return LpStatus.NUMERICAL_FAILURE, None, iterations
    return LpStatus.OPTIMAL, np.maximum(x[:n], 0.0), iterations


def _feasible(p: LpProblem, x: Vector, tol: float) -> bool:
    scale = max(1.0, float(np.abs(p.ineq_rhs).max(initial=0.0)),
                float(np.abs(p.ineq_matrix).max(initial=0.0))
                * float(np.abs(x).max(initial=0.0)))
    slack = tol * scale
    rows_ok = (p.num_rows == 0
               or np.all(p.ineq_matrix @ x <= p.ineq_rhs + slack))
    return bool(rows_ok
                and np.all(x >= p.lower_bounds - slack)
                and np.all(x <= p.upper_bounds + slack))


def _solve_simplex(p: LpProblem, opts: LpOptions) -> LpOutcome:
    s = _standardize(p)
    if s is None:
        return LpOutcome(LpStatus.INFEASIBLE)
    max_iter = opts.iteration_cap(s.a.shape[0] + s.a.shape[1])
    status, y, iterations = _simplex(s, opts.feas_tol, max_iter)
    if status is not LpStatus.OPTIMAL:
        return LpOutcome(status, iterations=iterations)
    x = s.offset + s.transform @ y
    if not _feasible(p, x, 1e2 * opts.feas_tol):
        logger.debug('simplex basis solution violates constraints')
        return LpOutcome(LpStatus.NUMERICAL_FAILURE, iterations=iterations)
    return LpOutcome(LpStatus.OPTIMAL, x, float(p.objective @ x), iterations)


_HIGHS_STATUS = {0: LpStatus.OPTIMAL,
                 2: LpStatus.INFEASIBLE,
                 3: LpStatus.UNBOUNDED}


def _solve_highs(p: LpProblem, opts: LpOptions) -> LpOutcome:
    bounds = [(None if np.isinf(lo) else lo, None if np.isinf(hi) else hi)
              for lo, hi in zip(p.lower_bounds, p.upper_bounds)]
    res = linprog(p.objective,
                  A_ub=p.ineq_matrix if p.num_rows else None,
                  b_ub=p.ineq_rhs if p.num_rows else None,
                  bounds=bounds,
                  method='highs',
                  options={'primal_feasibility_tolerance': max(opts.feas_tol, 1e-10),
                           'maxiter': opts.iteration_cap(p.num_rows + p.num_vars)})
    status = _HIGHS_STATUS.get(res.status, LpStatus.NUMERICAL_FAILURE)
    iterations = int(getattr(res, 'nit', 0) or 0)
    if status is not LpStatus.OPTIMAL:
        return LpOutcome(status, iterations=iterations)
    return LpOutcome(status, np.asarray(res.x, dtype=float), float(res.fun),
                     iterations)


def solve_lp(p: LpProblem, opts: Optional[LpOptions] = None) -> LpOutcome:
    """
    Solves a linear program.

    Never raises on degenerate or badly scaled input: every failure mode is
    reported through the outcome's status, leaving the caller to decide
    whether to abort or skip.

    Args:
        p (LpProblem): the problem
        opts (Optional[LpOptions]): tolerances, iteration cap and method

    Returns:
        LpOutcome: the status, and for `Optimal` the solution and objective
    """
    opts = opts or LpOptions()
    if opts.method == 'highs':
        return _solve_highs(p, opts)
    if opts.method != 'simplex':
        raise InvalidInputError('unknown LP method %r' % opts.method)
    return _solve_simplex(p, opts)

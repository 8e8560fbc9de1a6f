"""
Outer strategies built on the LSR solvers: restarting on a rescaled family
with a warm-started antinorm, and regularization by small positive
perturbations.
"""
from dataclasses import replace
from functools import partial
import logging

import numpy as np

from subradius.antinorm import PolytopeAntinorm
from subradius.errors import InvalidInputError, NumericalFailure, SubradiusError
from subradius.family import MatrixFamily, rescale_family
from subradius.lsr import (SolverConfig, SolverReport, Termination, Variant,
                           run_lsr)
from subradius.mytypes import *
from subradius.par_list import par_map

__all__ = ['PRELIMINARY_EVALS', 'iterative_rescaling_driver',
           'perturbation_matrices', 'perturbed_family', 'preliminary_factor',
           'regularized_lsr', 'run_rescaled']

logger = logging.getLogger(__name__)

PRELIMINARY_EVALS = 10


def _normalizer(lower: float, upper: float) -> float:
    if lower > 0:
        return 1.0 / lower
    if 0 < upper < np.inf:
        logger.warning('lower bound is 0, normalizing by the upper bound')
        return 1.0 / upper
    raise InvalidInputError('cannot normalize a family with bounds (%g, %g)'
                            % (lower, upper))


def _slp_normalizer(lower: float, upper: float) -> float:
    # the upper bound is rho(P)^(1/k) of the best product found so far
    if 0 < upper < np.inf:
        return 1.0 / upper
    return _normalizer(lower, upper)


def preliminary_factor(family: MatrixFamily,
                       cfg: SolverConfig,
                       variant: Union[Variant, str] = Variant.S,
                       evals: int = PRELIMINARY_EVALS) -> float:
    """
    Returns ``1 / L`` for the lower bound ``L`` of a short run with budget
    `evals` (``1 / H`` when ``L = 0``).
    """
    prelim = run_lsr(family,
                     replace(cfg, max_evals=max(evals, len(family))),
                     variant)
    logger.info('preliminary bounds (%.15g, %.15g)',
                prelim.lower, prelim.upper)
    return _normalizer(prelim.lower, prelim.upper)


def run_rescaled(family: MatrixFamily,
                 cfg: SolverConfig,
                 variant: Union[Variant, str] = Variant.A,
                 rescale: Union[float, str] = 1.0) -> SolverReport:
    """
    Solves ``c * family`` once and maps the bounds back to `family`.

    Args:
        family (MatrixFamily): a nonnegative family
        cfg (SolverConfig): solver settings
        variant (Union[Variant, str]): the algorithm
        rescale (Union[float, str]): the factor ``c``, or ``'auto'`` for the
            `preliminary_factor` of `family`

    Returns:
        SolverReport: bounds on the LSR of `family`

    Raises:
        InvalidInputError: if `rescale` is neither positive nor ``'auto'``
    """
    if isinstance(rescale, str):
        if rescale != 'auto':
            raise InvalidInputError('rescale must be a positive real or auto, '
                                    'got %r' % rescale)
        c = preliminary_factor(family, cfg, variant)
    else:
        c = float(rescale)
    report = run_lsr(rescale_family(family, c), cfg, variant)
    if c == 1:
        return report
    return replace(report, lower=report.lower / c, upper=report.upper / c)


def iterative_rescaling_driver(family: MatrixFamily,
                               cfg: SolverConfig,
                               max_iter: int = 20,
                               variant: Union[Variant, str] = Variant.A,
                               preliminary_evals: int = PRELIMINARY_EVALS
                               ) -> SolverReport:
    """
    Repeatedly normalizes the family by its candidate s.l.p. and restarts the
    adaptive solver from the vertex set of the previous run.

    A preliminary run with budget `preliminary_evals` gives the first bounds
    ``L <= LSR <= H``, where ``H = rho(P)^(1/k)`` for the best product
    ``P`` found. Each outer iteration solves ``family / H`` with the full
    budget, starting from the last vertex set, so the rescaled LSR is at
    most 1 and equals 1 once ``P`` is a spectrum lowest product. It stops
    once the rescaled gap is below `delta`, neither rescaled bound moved by
    `delta` or more (``|L_new - L| / H < delta`` and the same for ``H``),
    or `max_iter` iterations ran. The accuracy `delta` is therefore relative
    to the LSR.

    Args:
        family (MatrixFamily): a nonnegative family
        cfg (SolverConfig): solver settings; `init` seeds the preliminary run
        max_iter (int): the largest number of outer iterations, at least 1
        variant (Union[Variant, str]): ``a`` or ``e``
        preliminary_evals (int): budget of the preliminary run

    Returns:
        SolverReport: the last inner report, with the best bounds found over
            all runs mapped back to `family`'s scale

    Raises:
        InvalidInputError: if `max_iter` < 1 or `variant` is not adaptive
        SubradiusError: inner-run failures, tagged with the iteration index
    """
    variant = Variant(variant)
    if max_iter < 1:
        raise InvalidInputError('max_iter must be at least 1')
    if not variant.adaptive:
        raise InvalidInputError('the rescaling driver needs variant a or e')
    delta = cfg.delta
    prelim = run_lsr(family,
                     replace(cfg, max_evals=max(preliminary_evals,
                                                len(family))),
                     variant)
    lower, upper = prelim.lower, prelim.upper
    vertices = prelim.final_vertices
    logger.info('preliminary bounds (%.15g, %.15g)', lower, upper)

    report = prelim
    rescaled_lower = rescaled_upper = None
    j = 0
    while j < max_iter:
        j += 1
        c = _slp_normalizer(lower, upper)
        warm = replace(cfg, init=PolytopeAntinorm(vertices))
        try:
            report = run_lsr(rescale_family(family, c), warm, variant)
        except SubradiusError as ex:
            if isinstance(ex, NumericalFailure):
                ex.context['driver_iteration'] = j
            logger.error('rescaling iteration %d failed: %s', j, ex)
            raise
        rescaled_lower, rescaled_upper = report.lower, report.upper
        new_lower, new_upper = report.lower / c, report.upper / c
        logger.info('iteration %d: rescaled bounds (%.15g, %.15g), '
                    '%d vertices', j, rescaled_lower, rescaled_upper,
                    report.vertex_count)
        stalled = (abs(rescaled_lower - lower * c) < delta
                   and abs(rescaled_upper - upper * c) < delta)
        lower, upper = max(lower, new_lower), min(upper, new_upper)
        vertices = report.final_vertices
        if rescaled_upper - rescaled_lower < delta or stalled:
            break

    converged = (upper - lower) * c <= delta * (1 + 1e-9)
    return replace(report,
                   lower=lower,
                   upper=upper,
                   driver_iterations=j,
                   terminated_by=(Termination.ACCURACY if converged
                                  else Termination.BUDGET))


def perturbation_matrices(dim: int,
                          count: int,
                          seed: int) -> List[Matrix]:
    """
    Draws `count` strictly positive d x d matrices of unit Frobenius norm.

    Entries are ``1 - u`` for ``u`` uniform on [0, 1) from a PCG64 stream
    seeded with `seed`, drawn matrix by matrix in row-major order.

    Args:
        dim (int): the dimension d
        count (int): how many matrices
        seed (int): the PCG64 seed

    Returns:
        List[Matrix]: the perturbation directions
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    out = []
    for _ in range(count):
        m = 1.0 - rng.random((dim, dim))
        out.append(m / np.linalg.norm(m, 'fro'))
    return out


def perturbed_family(family: MatrixFamily,
                     directions: Sequence[Matrix],
                     epsilon: float) -> MatrixFamily:
    if epsilon == 0:
        return family
    return replace(family,
                   members=tuple(a + epsilon * d
                                 for a, d in zip(family.members, directions)))


def regularized_lsr(family: MatrixFamily,
                    cfg: SolverConfig,
                    epsilons: Sequence[float],
                    perturbation_seed: int = 0,
                    variant: Union[Variant, str] = Variant.A,
                    jobs: Optional[int] = 1) -> List[SolverReport]:
    """
    Solves ``F + eps {D_1, ..., D_m}`` for a descending ladder of `epsilons`.

    The directions ``D_i`` are drawn once and shared by every rung, so the
    reports trace one path towards the unperturbed family. Rungs are
    independent and run on a process pool of `jobs` workers.

    Args:
        family (MatrixFamily): a nonnegative family
        cfg (SolverConfig): solver settings for every rung
        epsilons (Sequence[float]): nonnegative and nonincreasing; 0 solves
            the family itself
        perturbation_seed (int): seed of the directions
        variant (Union[Variant, str]): the algorithm
        jobs (Optional[int]): worker processes, `None` for ``SUBRADIUS_JOBS``

    Returns:
        List[SolverReport]: one report per epsilon, in input order

    Raises:
        InvalidInputError: if `epsilons` is negative or not descending
    """
    eps = [float(e) for e in epsilons]
    if any(e < 0 or not np.isfinite(e) for e in eps):
        raise InvalidInputError('epsilons must be nonnegative reals')
    if any(a < b for a, b in zip(eps, eps[1:])):
        raise InvalidInputError('epsilons must be in descending order')
    family.require_nonnegative()
    directions = perturbation_matrices(family.dim, len(family),
                                       perturbation_seed)
    families = [perturbed_family(family, directions, e) for e in eps]
    logger.info('regularized ladder over %d epsilons', len(eps))
    return par_map(partial(run_lsr, cfg=cfg, variant=Variant(variant)),
                   families, jobs)

"""
Process-wide defaults.

The only environment dependence of the package is ``SUBRADIUS_JOBS``, the
default number of worker processes for sweeps and epsilon ladders.
"""
import logging
import os
from multiprocessing import cpu_count

__all__ = ['DEFAULT_THETA', 'DEFAULT_TOL', 'ENUMERATION_CAP', 'GAP_TOL',
           'JOBS_ENV_VAR', 'OVERFLOW_LIMIT', 'default_jobs',
           'default_lp_settings', 'default_pool_settings']

logger = logging.getLogger(__name__)

JOBS_ENV_VAR = 'SUBRADIUS_JOBS'

# insertion / pruning tolerance, above the LP feasibility tolerance
DEFAULT_TOL = 1e-9
DEFAULT_THETA = 1.005
OVERFLOW_LIMIT = 1e150
GAP_TOL = 1e-8
ENUMERATION_CAP = 100000


def default_jobs() -> int:
    """
    Reads the default worker count from ``SUBRADIUS_JOBS``.

    Returns:
        int: the configured count, or the CPU count when the variable is unset
             or unusable
    """
    raw = os.environ.get(JOBS_ENV_VAR)
    if raw is None or not raw.strip():
        return cpu_count()
    try:
        jobs = int(raw)
    except ValueError:
        logger.warning('ignoring %s=%r, not an integer', JOBS_ENV_VAR, raw)
        return cpu_count()
    return max(1, jobs)


default_pool_settings = {'processes': default_jobs(),
                         'chunksize': 1}

default_lp_settings = {'feas_tol': 1e-10,
                       'max_iter': 300,
                       'method': 'simplex'}

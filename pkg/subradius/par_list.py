import logging
import typing

from multiprocess.pool import Pool

from subradius.mytypes import *
from subradius.settings import default_pool_settings

__all__ = ['ParList', 'par_map']

logger = logging.getLogger(__name__)

EvalWithPool = F1[Optional[Pool], typing.Iterable[A]]


class ParList(Generic[A]):
    """
    An ordered list of values whose computation is deferred until `run()`,
    where it is spread over a `multiprocess` pool.

    `map()` stages are chained lazily and all execute inside the single pool
    opened by `run()`. Results always come back in input order regardless of
    which worker finishes first. Functions are shipped to workers with
    `dill`, so closures and lambdas are fine.

    With one process (``processes=1``) no pool is created and everything runs
    in the calling process, which keeps tests and small sweeps cheap.
    """

    def __init__(self, run: EvalWithPool[A]):
        self._run: EvalWithPool[A] = run

    def __repr__(self) -> str:
        return 'ParList(%s)' % self._run

    @staticmethod
    def from_iterable(it: typing.Iterable[A]) -> 'ParList[A]':
        values = list(it)
        return ParList(lambda pool: values)

    def map(self, f: F1[A, B]) -> 'ParList[B]':
        """
        Lazily applies `f` to every value.

        Args:
            f (F1[A, B]): the function to apply

        Returns:
            ParList[B]: the staged computation
        """
        def go(pool: Optional[Pool]) -> typing.List[B]:
            values = self._run(pool)
            if pool is None:
                return [f(a) for a in values]
            return pool.map(f, values, chunksize=pool.chunksize)

        return ParList(go)

    def run(self, **pool_settings) -> typing.List[A]:
        """
        Executes the staged computation.

        Args:
            pool_settings: overrides for `default_pool_settings`, i.e.
                `processes` and `chunksize`

        Returns:
            typing.List[A]: the values, in input order
        """
        settings = dict(default_pool_settings)
        settings.update(pool_settings)
        chunksize = settings.pop('chunksize')
        if (settings.get('processes') or 1) <= 1:
            return list(self._run(None))
        logger.debug('running on a pool of %d processes',
                     settings['processes'])
        with Pool(**settings) as pool:
            pool.__setattr__('chunksize', chunksize)
            values = list(self._run(pool))
        return values


def par_map(f: F1[A, B],
            values: typing.Iterable[A],
            jobs: Optional[int] = None) -> typing.List[B]:
    """
    Maps `f` over `values` on a process pool, preserving order.

    Args:
        f (F1[A, B]): the function to apply
        values (Iterable[A]): the inputs
        jobs (Optional[int]): worker count, defaults to `SUBRADIUS_JOBS`

    Returns:
        typing.List[B]: `[f(v) for v in values]`
    """
    settings = {} if jobs is None else {'processes': jobs}
    return ParList.from_iterable(values).map(f).run(**settings)

"""
Candidates for spectrum-lowest products, and a brute-force lower-bound oracle.
"""
import enum
import itertools
import logging

from subradius.antinorm import PolytopeAntinorm, eval_matrix
from subradius.errors import EnumerationCapError, InvalidInputError
from subradius.family import (MatrixFamily, ProductNode, extend_product,
                              materialize)
from subradius.lsr import ATTAIN_RTOL, SolverReport
from subradius.mytypes import *
from subradius.settings import ENUMERATION_CAP
from subradius.spectral import spectral_radius
from subradius.util import canonical_rotation

__all__ = ['SlpMode', 'alpha_k_oracle', 'identify_slp_candidates',
           'iter_products']

logger = logging.getLogger(__name__)


class SlpMode(enum.Enum):
    ENUMERATE_ALL = 'enumerate'
    FROM_ACTIVE = 'active'
    AUTO = 'auto'


def _check_cap(m: int, k: int, cap: int):
    count = float(m) ** k
    if count > cap:
        raise EnumerationCapError(count, cap)


def iter_products(family: MatrixFamily, k: int) -> Iterator[ProductNode]:
    """
    Yields every product of degree `k`, in lexicographic word order, sharing
    prefixes between consecutive products.

    Args:
        family (MatrixFamily): the family
        k (int): the degree, at least 1

    Returns:
        Iterator[ProductNode]: the m^k products
    """
    if k < 1:
        raise InvalidInputError('degree must be at least 1')
    stack = [family.identity_node()]
    for word in itertools.product(range(len(family)), repeat=k):
        # keep the longest common prefix with the previous word
        common = 0
        while (common < len(stack) - 1
               and stack[common + 1].word[-1] == word[common]):
            common += 1
        del stack[common + 1:]
        for i in word[common:]:
            stack.append(extend_product(family, stack[-1], i))
        yield stack[-1]


def _minimizers(scored: Iterable[Tuple[Word, float]]) -> List[Word]:
    scored = list(scored)
    if not scored:
        return []
    best = min(r for _, r in scored)
    words = {canonical_rotation(w)
             for w, r in scored if r <= best * (1 + ATTAIN_RTOL)}
    return sorted(words)


def identify_slp_candidates(family: MatrixFamily,
                            report: SolverReport,
                            mode: Union[SlpMode, str] = SlpMode.AUTO,
                            cap: int = ENUMERATION_CAP) -> List[Word]:
    """
    Finds the products of degree l_slp with the smallest ``rho^(1/l_slp)``.

    Args:
        family (MatrixFamily): the family the report was computed for
        report (SolverReport): a finished run
        mode (Union[SlpMode, str]): ``enumerate`` searches all m^l_slp
            products, ``active`` only those the run evaluated and found
            attaining its upper bound, ``auto`` enumerates when under `cap`
        cap (int): the largest enumeration allowed

    Returns:
        List[Word]: the minimizers, one canonical rotation per cyclic class,
            sorted

    Raises:
        EnumerationCapError: in ``enumerate`` mode, if m^l_slp exceeds `cap`
    """
    mode = SlpMode(mode)
    k = report.metrics.l_slp
    if mode is SlpMode.AUTO:
        mode = (SlpMode.ENUMERATE_ALL if float(len(family)) ** k <= cap
                else SlpMode.FROM_ACTIVE)
    if mode is SlpMode.FROM_ACTIVE:
        scored = ((w, spectral_radius(
                      materialize(family, w).matrix).rho ** (1.0 / k))
                  for w in report.slp_pool)
    else:
        _check_cap(len(family), k, cap)
        scored = ((node.word, spectral_radius(node.matrix).rho ** (1.0 / k))
                  for node in iter_products(family, k))
    candidates = _minimizers(scored)
    logger.info('%d s.l.p. candidate(s) of degree %d', len(candidates), k)
    return candidates


def alpha_k_oracle(family: MatrixFamily,
                   a: PolytopeAntinorm,
                   k: int,
                   cap: int = ENUMERATION_CAP) -> float:
    """
    Returns ``min over all products P of degree k of a(P)^(1/k)``, a lower
    bound on the LSR computed by plain enumeration.

    Raises:
        EnumerationCapError: if m^k exceeds `cap`
    """
    _check_cap(len(family), k, cap)
    return float(min(eval_matrix(a, node.matrix).value
                     for node in iter_products(family, k)) ** (1.0 / k))

"""
Deterministic constructors for the benchmark families, and seeded random
families.

Random families use numpy's PCG64 bit generator (``numpy.random.PCG64``),
seeded with the integer seed as given. Matrices are drawn one after the
other; for each matrix, first the d x d sparsity mask
(``rng.random((d, d)) < density``, row-major), then the d x d values
``1 - rng.random((d, d))``, which lie in (0, 1]. Masked-out entries are 0.
"""
from dataclasses import dataclass, field
import enum
import logging

import numpy as np

from subradius.errors import InvalidInputError
from subradius.family import MatrixFamily, rescale_family, transpose_family
from subradius.mytypes import *

__all__ = ['FamilyKind', 'FamilySpec', 'build_family', 'critical_family',
           'euler_family', 'illustrative_family', 'jsr_example_family',
           'pascal_rhombus_family', 'random_family']

logger = logging.getLogger(__name__)


class FamilyKind(enum.Enum):
    EXPLICIT = 'explicit'
    EULER = 'euler'
    PASCAL_RHOMBUS = 'pascal_rhombus'
    ILLUSTRATIVE = 'illustrative'
    CRITICAL = 'critical'
    JSR_EXAMPLE = 'jsr_example'
    RANDOM = 'random'


def euler_family(r: int) -> MatrixFamily:
    """
    The pair of (r - 1) x (r - 1) 0/1 matrices whose LSR governs the growth
    of binary partition functions of order r:
    ``(A_s)_ij = 1`` iff ``i + 2 - s <= 2 j <= i + r - s + 1`` (1-based).

    Args:
        r (int): an odd integer, at least 3

    Returns:
        MatrixFamily: ``{A_1, A_2}``

    Raises:
        InvalidInputError: if `r` is even or below 3
    """
    if isinstance(r, bool) or int(r) != r or r < 3 or r % 2 == 0:
        raise InvalidInputError('the Euler family needs an odd r >= 3, got %r'
                                % (r,))
    r = int(r)
    i = np.arange(1, r)[:, None]
    j = np.arange(1, r)[None, :]
    members = [((i + 2 - s <= 2 * j) & (2 * j <= i + r - s + 1)).astype(float)
               for s in (1, 2)]
    return MatrixFamily(tuple(members), labels=('A1', 'A2'))


def pascal_rhombus_family() -> MatrixFamily:
    return MatrixFamily.of(
        [[0, 1, 0, 0, 0],
         [1, 0, 2, 0, 0],
         [0, 0, 0, 0, 0],
         [0, 1, 0, 0, 1],
         [0, 0, 0, 2, 1]],
        [[1, 0, 2, 0, 0],
         [0, 0, 0, 2, 1],
         [1, 1, 0, 0, 0],
         [0, 0, 0, 0, 0],
         [0, 1, 0, 0, 0]])


def illustrative_family() -> MatrixFamily:
    """
    A 2 x 2 pair whose s.l.p. ``A_1 A_2 (A_1^2 A_2)^2`` has degree 8, so the
    LSR is ``(4 (213803 + sqrt(44666192953)))^(1/8)``.
    """
    return MatrixFamily.of([[7, 0], [2, 3]], [[2, 4], [0, 8]])


def critical_family() -> MatrixFamily:
    """
    Two upper triangular 4 x 4 matrices with LSR 3, attained by
    ``A_1^3 A_2^4``. No product has a simple dominant eigenvalue on the
    optimal branch, which makes the bounds converge slowly.
    """
    return MatrixFamily.of(
        [[5, 1, 0, 0],
         [0, 5, 2, 0],
         [0, 0, 3, 1],
         [0, 0, 0, 2]],
        [[1, 2, 3, 4],
         [0, 2, 5, 6],
         [0, 0, 3, 7],
         [0, 0, 0, 4]])


def jsr_example_family() -> MatrixFamily:
    """
    The signed pair ``(1/5) {[[3, 0], [1, 3]], [[3, -3], [0, -1]]}``, with JSR
    close to 0.65968.
    """
    return MatrixFamily.of(np.array([[3, 0], [1, 3]]) / 5.0,
                           np.array([[3, -3], [0, -1]]) / 5.0)


def random_family(d: int, m: int, density: float, seed: int) -> MatrixFamily:
    """
    Draws `m` nonnegative d x d matrices with entrywise i.i.d. sparsity.

    Args:
        d (int): the dimension, at least 1
        m (int): the number of matrices, at least 1
        density (float): probability that an entry is nonzero, in (0, 1]
        seed (int): the PCG64 seed

    Returns:
        MatrixFamily: the family; with ``density = 1`` every entry is
            strictly positive

    Raises:
        InvalidInputError: if a parameter is out of range
    """
    if d < 1 or m < 1:
        raise InvalidInputError('d and m must be at least 1')
    if not 0 < density <= 1:
        raise InvalidInputError('density must be in (0, 1], got %r'
                                % (density,))
    rng = np.random.Generator(np.random.PCG64(seed))
    members = []
    for _ in range(m):
        mask = rng.random((d, d)) < density
        values = 1.0 - rng.random((d, d))
        members.append(np.where(mask, values, 0.0))
    return MatrixFamily(tuple(members))


@dataclass(frozen=True)
class FamilySpec:
    """
    A recipe for a family, as named on the command line or in a sweep.

    Attributes:
        kind (FamilyKind): the constructor
        params (Mapping[str, Any]): constructor arguments: ``r`` for euler;
            ``d``, ``m``, ``density``, ``seed`` for random; ``members`` for
            explicit
        transpose (bool): transpose every member afterwards
        rescale (float): multiply every member by this positive factor
    """
    kind: FamilyKind
    params: Mapping[str, Any] = field(default_factory=dict)
    transpose: bool = False
    rescale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'kind', FamilyKind(self.kind))


_FIXED = {FamilyKind.PASCAL_RHOMBUS: pascal_rhombus_family,
          FamilyKind.ILLUSTRATIVE: illustrative_family,
          FamilyKind.CRITICAL: critical_family,
          FamilyKind.JSR_EXAMPLE: jsr_example_family}


def build_family(spec: FamilySpec) -> MatrixFamily:
    """
    Builds the family a `FamilySpec` describes.

    Raises:
        InvalidInputError: on missing or out-of-range parameters
    """
    try:
        if spec.kind is FamilyKind.EULER:
            family = euler_family(spec.params['r'])
        elif spec.kind is FamilyKind.RANDOM:
            p = spec.params
            family = random_family(int(p['d']), int(p['m']),
                                   float(p['density']), int(p['seed']))
        elif spec.kind is FamilyKind.EXPLICIT:
            family = MatrixFamily(tuple(spec.params['members']),
                                  labels=tuple(spec.params.get('labels', ())))
        else:
            family = _FIXED[spec.kind]()
    except KeyError as ex:
        raise InvalidInputError('%s family needs parameter %s'
                                % (spec.kind.value, ex))
    if spec.transpose:
        family = transpose_family(family)
    return rescale_family(family, spec.rescale)

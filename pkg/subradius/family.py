"""
Matrix families and the product bookkeeping shared by all solvers.

Products are always built left to right, ``X_k A_i``, so every node of
degree n is a one-step extension of a node of degree n - 1.
"""
from dataclasses import dataclass, field, replace
import logging

import numpy as np

from subradius.errors import InvalidInputError, ProductOverflowError
from subradius.mytypes import *
from subradius.settings import OVERFLOW_LIMIT
from subradius.util import as_matrix, require_nonnegative

__all__ = ['MatrixFamily', 'ProductNode', 'extend_product', 'frontier_minimum',
           'materialize', 'rescale_family', 'transpose_family']

logger = logging.getLogger(__name__)


def _frozen(m: Matrix) -> Matrix:
    m = np.array(m, dtype=float)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class MatrixFamily:
    """
    An ordered, immutable family of square matrices of one dimension.

    Attributes:
        members (Tuple[Matrix, ...]): the matrices A_1..A_m (index 0..m-1)
        rescale (float): the multiplicative factor already applied to the
            user's input; bounds of this family divided by `rescale` are
            bounds of the original one
        transposed (bool): whether the members are the transposes of the
            user's input
        labels (Tuple[str, ...]): display names, one per member
    """
    members: Tuple[Matrix, ...]
    rescale: float = 1.0
    transposed: bool = False
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.members) < 1:
            raise InvalidInputError('a matrix family needs at least one member')
        members = tuple(_frozen(as_matrix(a, 'member %d' % (i + 1)))
                        for i, a in enumerate(self.members))
        d = members[0].shape[0]
        for i, a in enumerate(members):
            if a.shape != (d, d):
                raise InvalidInputError(
                    'member %d has shape %s, expected %s'
                    % (i + 1, a.shape, (d, d)))
        if not (self.rescale > 0 and np.isfinite(self.rescale)):
            raise InvalidInputError('rescale must be a positive real')
        labels = tuple(self.labels) or tuple('A%d' % (i + 1)
                                             for i in range(len(members)))
        if len(labels) != len(members):
            raise InvalidInputError('expected %d labels, got %d'
                                    % (len(members), len(labels)))
        object.__setattr__(self, 'members', members)
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'rescale', float(self.rescale))

    def __eq__(self, other: 'MatrixFamily') -> bool:
        return (isinstance(other, MatrixFamily)
                and len(self) == len(other)
                and self.rescale == other.rescale
                and self.transposed == other.transposed
                and all(np.array_equal(a, b)
                        for a, b in zip(self.members, other.members)))

    def __getitem__(self, i: int) -> Matrix:
        return self.members[i]

    def __iter__(self) -> Iterator[Matrix]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        return ('MatrixFamily(m=%d, dim=%d, rescale=%.6g, transposed=%s)'
                % (len(self), self.dim, self.rescale, self.transposed))

    @property
    def dim(self) -> int:
        return self.members[0].shape[0]

    @staticmethod
    def of(*matrices, labels: Sequence[str] = ()) -> 'MatrixFamily':
        """
        Builds a family from array-likes.

        Args:
            matrices (array_like): the members, in order
            labels (Sequence[str]): optional member names

        Returns:
            MatrixFamily: the family
        """
        return MatrixFamily(tuple(matrices), labels=tuple(labels))

    def is_nonnegative(self) -> bool:
        return all(np.all(a >= 0) for a in self.members)

    def require_nonnegative(self) -> 'MatrixFamily':
        """
        Returns:
            MatrixFamily: `self`

        Raises:
            InvalidInputError: if some member has a negative entry
        """
        for i, a in enumerate(self.members):
            require_nonnegative(a, 'member %d' % (i + 1))
        return self

    def identity_node(self) -> 'ProductNode':
        return ProductNode((), _frozen(np.eye(self.dim)))

    def member_node(self, i: int) -> 'ProductNode':
        return ProductNode((i,), self.members[i])


@dataclass(frozen=True, eq=False)
class ProductNode:
    """
    A product of family members along `word`.

    Attributes:
        word (Word): 0-based member indices, multiplied left to right
        matrix (Matrix): the product itself
        q_cached (float): the prefix score carried by the solver
    """
    word: Word
    matrix: Matrix = field(repr=False)
    q_cached: float = 0.0

    @property
    def degree(self) -> int:
        return len(self.word)

    def with_score(self, q: float) -> 'ProductNode':
        return replace(self, q_cached=float(q))


def extend_product(family: MatrixFamily,
                   node: ProductNode,
                   i: int) -> ProductNode:
    """
    Multiplies `node` on the right by member `i`.

    The prefix score is carried over unchanged; updating it is up to the
    solver.

    Args:
        family (MatrixFamily): the family
        node (ProductNode): the prefix ``X``
        i (int): 0-based member index

    Returns:
        ProductNode: the node for ``X A_i``

    Raises:
        InvalidInputError: if `i` is out of range
        ProductOverflowError: if an entry of the product exceeds 1e150
    """
    if not 0 <= i < len(family):
        raise InvalidInputError('member index %d out of range 0..%d'
                                % (i, len(family) - 1))
    y = node.matrix @ family[i]
    word = node.word + (i,)
    peak = float(np.max(np.abs(y))) if y.size else 0.0
    if not np.isfinite(peak) or peak > OVERFLOW_LIMIT:
        raise ProductOverflowError(word, peak)
    return ProductNode(word, _frozen(y), node.q_cached)


def frontier_minimum(family: MatrixFamily,
                     expanded: AbstractSet[Word],
                     score: F1[ProductNode, Optional[float]],
                     cutoff: float,
                     root: float = 0.0) -> Tuple[float, int]:
    """
    The smallest prefix score over the leaves of an explored product tree.

    The tree grows from the members; a node whose word is in `expanded`
    has all ``m`` one-step extensions as children, any other node is a
    leaf. Prefix scores follow ``q(Y) = max(q(X), score(Y))``, where a
    `None` score keeps the parent's value. Subtrees whose prefix score
    already reaches the running minimum are skipped, so the walk only
    touches nodes below `cutoff`.

    Args:
        family (MatrixFamily): the family
        expanded (AbstractSet[Word]): words of the extended products
        score (F1[ProductNode, Optional[float]]): the score of one product
        cutoff (float): the value returned when no leaf scores lower
        root (float): the prefix score of the empty product

    Returns:
        Tuple[float, int]: ``min(cutoff, smallest leaf score)`` and the
            number of products scored
    """
    m = len(family)
    best, scored = cutoff, 0
    stack = [(family.member_node(i), root) for i in reversed(range(m))]
    while stack:
        node, prefix = stack.pop()
        value = score(node)
        scored += 1
        q = prefix if value is None else max(prefix, value)
        if q >= best:
            continue
        if node.word in expanded:
            stack.extend((extend_product(family, node, i), q)
                         for i in reversed(range(m)))
        else:
            best = q
    return best, scored


def materialize(family: MatrixFamily, word: Sequence[int]) -> ProductNode:
    """
    Builds the product along `word` from the identity, one member at a time.
    """
    node = family.identity_node()
    for i in word:
        node = extend_product(family, node, i)
    return node


def rescale_family(family: MatrixFamily, c: float) -> MatrixFamily:
    """
    Multiplies every member by `c`.

    Bounds of the result equal `c` times the bounds of `family`; the factor
    is accumulated in `rescale`.

    Args:
        family (MatrixFamily): the family
        c (float): the positive factor

    Returns:
        MatrixFamily: the rescaled family

    Raises:
        InvalidInputError: if `c` is not a positive real
    """
    if not (np.isfinite(c) and c > 0):
        raise InvalidInputError('rescale factor must be positive, got %r' % c)
    if c == 1:
        return family
    logger.debug('rescaling family by %.15g', c)
    return replace(family,
                   members=tuple(c * a for a in family.members),
                   rescale=family.rescale * c)


def transpose_family(family: MatrixFamily) -> MatrixFamily:
    return replace(family,
                   members=tuple(a.T for a in family.members),
                   transposed=not family.transposed)

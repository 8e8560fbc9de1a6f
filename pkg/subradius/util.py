from types import LambdaType
import inspect

import numpy as np

from subradius.errors import InvalidInputError
from subradius.mytypes import *

__all__ = ['as_matrix', 'as_vector', 'canonical_rotation', 'format_real',
           'is_thunk', 'normalize_l1', 'require_nonnegative', 'rotations']


def is_thunk(f):
    """
    Checks if function `f` is a thunk, that is a lambda expression of arity zero.

    Args:
        f (Callable[..., B]): the function to check

    Returns:
        bool: True if `f` is a thunk, False otherwise
    """
    return (isinstance(f, LambdaType)
            and len(inspect.signature(f).parameters) == 0)


def as_matrix(a, what: str = 'matrix') -> Matrix:
    """
    Converts `a` into a finite, square float64 array.

    Args:
        a (array_like): the matrix
        what (str): a name for error messages

    Returns:
        Matrix: a float64 copy of `a`

    Raises:
        InvalidInputError: if `a` is not square or has non-finite entries
    """
    m = np.array(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise InvalidInputError('%s must be a non-empty square matrix, got '
                                'shape %s' % (what, m.shape))
    if not np.all(np.isfinite(m)):
        raise InvalidInputError('%s has non-finite entries' % what)
    return m


def as_vector(z, dim: Optional[int] = None, what: str = 'vector') -> Vector:
    v = np.array(z, dtype=float).reshape(-1)
    if dim is not None and v.shape[0] != dim:
        raise InvalidInputError('%s must have %d entries, got %d'
                                % (what, dim, v.shape[0]))
    if not np.all(np.isfinite(v)):
        raise InvalidInputError('%s has non-finite entries' % what)
    return v


def require_nonnegative(a: np.ndarray, what: str = 'matrix') -> np.ndarray:
    """
    Raises:
        InvalidInputError: if any entry of `a` is negative
    """
    if np.any(a < 0):
        raise InvalidInputError('%s must be entrywise nonnegative' % what)
    return a


def normalize_l1(v: Vector) -> Vector:
    s = np.abs(v).sum()
    return v / s if s > 0 else v


def rotations(word: Sequence[int]) -> List[Word]:
    w = tuple(word)
    return [w[i:] + w[:i] for i in range(len(w))] if w else [w]


def canonical_rotation(word: Sequence[int]) -> Word:
    """
    Returns the lexicographically smallest cyclic rotation of `word`.

    Products whose words are rotations of each other share the same
    spectrum, so this is the representative reported for s.l.p. candidates.

    Args:
        word (Sequence[int]): the index word

    Returns:
        Word: the canonical rotation
    """
    return min(rotations(word))


def format_real(x: float) -> str:
    """
    Formats a real with 15 significant digits, the precision used by every
    report and family file.
    """
    if np.isnan(x):
        return 'nan'
    if np.isinf(x):
        return 'inf' if x > 0 else '-inf'
    return '%.15g' % x

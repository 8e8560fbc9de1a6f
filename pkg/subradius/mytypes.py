from typing import *

import numpy as np

__all__ = ['AbstractSet', 'Any', 'Callable', 'Dict', 'Generic', 'Iterable',
           'Iterator', 'List', 'Mapping', 'Optional', 'Sequence', 'Set',
           'TextIO', 'Tuple', 'Type', 'TypeVar', 'Union',
           'T', 'A', 'B', 'C', 'F0', 'F1', 'F2', 'Predicate', 'Thunk',
           'Matrix', 'Vector', 'Word']

T = TypeVar('T')
A = TypeVar('A')
B = TypeVar('B')
C = TypeVar('C')

F0 = Callable[[], A]
F1 = Callable[[A], B]
F2 = Callable[[A, B], C]

Predicate = F1[T, bool]
Thunk = F0[T]

# dense float64 arrays; a Matrix is d x d (or d x p for vertex sets)
Matrix = np.ndarray
Vector = np.ndarray

# 0-based member indices, applied left to right
Word = Tuple[int, ...]

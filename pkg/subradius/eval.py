from subradius.mytypes import *
from subradius.option import Some, Nothing, Option
from subradius.util import is_thunk

__all__ = ['Eval', 'Later', 'later']


# noinspection PyMissingConstructor
class Eval(Generic[A]):
    """
    A computation whose evaluation strategy is part of its type.

    Spectral data uses `Later` so that leading eigenvectors are only computed
    for the products that actually need one.
    """

    def __init__(self, *args, **kwargs):
        raise ValueError(
            """Tried to call the constructor of abstract base class Eval.
            Use the later() function instead."""
        )

    def get(self) -> A:
        raise NotImplementedError

    def is_evaluated(self) -> bool:
        raise NotImplementedError


# noinspection PyMissingConstructor
class Later(Eval[A]):
    """
    A lazy computation that is evaluated once and memoized.

    Upon its evaluation, the closure containing the computation is cleared so
    captured matrices can be garbage collected.
    """

    def __init__(self, thunk: Thunk[A]):
        self._thunk: Optional[Thunk[A]] = thunk
        self._value: Option[A] = Nothing()

    def __repr__(self) -> str:
        return 'Later(%s)' % self._value.map(repr).get_or_else('<thunk>')

    def get(self) -> A:
        if self._value.is_empty():
            self._value = Some(self._thunk())
            self._thunk = None  # clear the closure after evaluation
        return self._value.get()

    def is_evaluated(self) -> bool:
        return self._value.is_defined()


def later(thunk: Thunk[A]) -> Later[A]:
    """
    Lazily evaluates a computation in the `Eval` container.

    Args:
        thunk (Thunk[A]): the computation

    Returns:
        Later[A]: the resulting `Later`

    Raises:
        ValueError: if the argument is not a zero arity lambda function
    """
    if not is_thunk(thunk):
        raise ValueError('Later(%s) requires a thunk as an argument!' % thunk)
    else:
        return Later(thunk)

import logging

from subradius.mytypes import *
from subradius.option import Option, Some, Nothing
from subradius.util import is_thunk

__all__ = ['Failure', 'Success', 'Try', 'mtry']


class Try(Generic[A]):
    """
    The outcome of a failable computation: either `Success` holding a value
    or `Failure` holding the exception that was raised.

    The solvers wrap LP-backed evaluations in `mtry()` so a single failed
    solve can be logged, counted, and recovered into a conservative branch
    without unwinding a whole run.
    """

    def __init__(self, *args, **kwargs):
        raise ValueError(
            """Tried to call the constructor of abstract base class Try.
            Use the mtry() function instead."""
        )

    def __bool__(self) -> bool:
        return self.is_success()

    def __eq__(self, other: 'Try[A]') -> bool:
        """
        Args:
            other (Try[A]): the value to compare against

        Returns:
            bool: `True` if inner values are equivalent, `False` otherwise
        """
        return (type(self) == type(other) and
                self.get() is other.get())

    def flat_map(self, f: F1[A, 'Try[B]']) -> 'Try[B]':
        return f(self.get()) if self.is_success() else self

    def get(self) -> Union[A, Exception]:
        raise NotImplementedError

    def get_or_else(self, default: B) -> Union[A, B]:
        return self.get() if self.is_success() else default

    def is_failure(self) -> bool:
        return isinstance(self, Failure)

    def is_success(self) -> bool:
        return isinstance(self, Success)

    def log_failure(self,
                    logger: logging.Logger,
                    message: str,
                    *args) -> 'Try[A]':
        """
        Emits a warning through `logger` if this is a `Failure`.

        The exception is appended to the message, so `message` should read
        as a prefix, e.g. ``'LP failed for vertex %d'``.

        Args:
            logger (logging.Logger): the module logger of the caller
            message (str): a %-style format string
            args: the format arguments

        Returns:
            Try[A]: `self`, to allow chaining
        """
        if self.is_failure():
            logger.warning(message + ': %s', *args, self.get())
        return self

    def map(self, f: F1[A, B]) -> 'Try[B]':
        """
        Applies a function to the inner value of a `Success`; exceptions
        raised by `f` become a `Failure`.

        Args:
            f (F1[A, B]): the function to apply

        Returns:
            Try[B]: the resulting `Try`
        """
        return self.flat_map(lambda a: mtry(lambda: f(a)))

    def to_option(self) -> Option[A]:
        """
        Converts the `Try` into an `Option`, dropping the exception.

        Returns:
            Option[A]: `Some` for a `Success`, `Nothing` for a `Failure`
        """
        return Some(self.get()) if self.is_success() else Nothing()


def mtry(thunk: Thunk[A]) -> Try[A]:
    """
    Evaluates a failable computation in the `Try` container.

    Only `Exception` subclasses are captured; `KeyboardInterrupt` and
    friends propagate.

    Args:
        thunk (Thunk[A]): the computation

    Returns:
        Try[A]: the resulting `Try`

    Raises:
        ValueError: if the argument is not a zero arity lambda function
    """
    if not is_thunk(thunk):
        raise ValueError(
            'mtry(%s) requires a thunk as an argument!' % thunk)
    try:
        return Success(thunk())
    except Exception as ex:
        return Failure(ex)


# noinspection PyMissingConstructor
class Success(Try[A]):
    def __init__(self, value: A):
        self._value: A = value

    def __repr__(self) -> str:
        return 'Success(%s)' % repr(self.get())

    def get(self) -> A:
        return self._value


# noinspection PyMissingConstructor
class Failure(Try):
    def __init__(self, ex: Exception):
        self._value: Exception = ex

    def __repr__(self) -> str:
        return 'Failure(%s)' % repr(self.get())

    def get(self) -> Exception:
        return self._value

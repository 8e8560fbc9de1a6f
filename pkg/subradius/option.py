from subradius.mytypes import *

__all__ = ['Nothing', 'Option', 'Some']


class Option(Generic[A]):
    """
    A value that may be absent: either `Some` or `Nothing`.

    Used where an operation has a rejection signal that is not an error,
    such as an eigenvector the current antinorm cannot see.
    """

    def __init__(self, *args, **kwargs):
        raise ValueError(
            """Tried to call the constructor of abstract base class Option.
               Use Some() or Nothing() instead."""
        )

    def __bool__(self) -> bool:
        return self.is_defined()

    def __eq__(self, other: 'Option[A]') -> bool:
        """
        Args:
            other (Option[A]): the value to compare against

        Returns:
            bool: `True` if both are `Nothing`, or both are `Some` wrapping
                  the same object, `False` otherwise
        """
        if type(self) != type(other):
            return False
        elif self.is_defined() and other.is_defined():
            return self.get() is other.get()
        else:
            return True

    def filter(self, p: Predicate[A]) -> 'Option[A]':
        return self if self.is_defined() and p(self.get()) else Nothing()

    def get(self) -> A:
        raise NotImplementedError

    def get_or_else(self, default: B) -> Union[A, B]:
        return self.get() if self.is_defined() else default

    def is_defined(self) -> bool:
        return isinstance(self, Some)

    def is_empty(self) -> bool:
        return not self.is_defined()

    def map(self, f: F1[A, B]) -> 'Option[B]':
        return Some(f(self.get())) if self.is_defined() else self


# noinspection PyMissingConstructor
class Some(Option[A]):
    def __init__(self, value: A):
        self._value = value

    def __repr__(self) -> str:
        return 'Some(%s)' % repr(self.get())

    def get(self) -> A:
        return self._value


# noinspection PyMissingConstructor
class Nothing(Option[A]):
    def __init__(self):
        pass

    def __repr__(self) -> str:
        return 'Nothing'

    def get(self) -> A:
        """
        Raises:
            ValueError: always, `Nothing` has no inner value
        """
        raise ValueError('Nothing has no value to get')

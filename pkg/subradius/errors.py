"""
Exception hierarchy shared by every solver in the package.

Each exception carries a short machine-readable `reason` code, which the
command-line front end copies into its JSON diagnostics.
"""
from subradius.mytypes import *

__all__ = ['EnumerationCapError', 'FamilyFormatError', 'InvalidInputError',
           'NumericalFailure', 'ProductOverflowError', 'SubradiusError']


class SubradiusError(Exception):
    """
    Base class for all errors raised by subradius.
    """
    reason = 'error'

    def __init__(self, message: str, reason: Optional[str] = None):
        super().__init__(message)
        if reason is not None:
            self.reason = reason

    def to_dict(self) -> Dict[str, Any]:
        """
        Returns:
            Dict[str, Any]: a JSON-ready diagnostic for this error
        """
        return {'error': type(self).__name__,
                'reason': self.reason,
                'message': str(self)}


class InvalidInputError(SubradiusError, ValueError):
    reason = 'invalid-input'


class FamilyFormatError(InvalidInputError):
    reason = 'bad-family-file'


class NumericalFailure(SubradiusError):
    """
    Raised when an eigen-solver or LP solve does not converge.

    Args:
        message (str): the description of the failure
        iterations (int): iterations performed before giving up
        context (Mapping[str, Any]): where the failure happened, e.g. the
            vertex index of an antinorm evaluation or the product word
    """
    reason = 'numerical-failure'

    def __init__(self,
                 message: str,
                 iterations: int = 0,
                 context: Optional[Mapping[str, Any]] = None):
        super().__init__(message)
        self.iterations = iterations
        self.context = dict(context or {})

    def to_dict(self) -> Dict[str, Any]:
        d = super().to_dict()
        d['iterations'] = self.iterations
        if self.context:
            d['context'] = {k: str(v) for k, v in self.context.items()}
        return d


class ProductOverflowError(SubradiusError, ArithmeticError):
    reason = 'product-overflow'

    def __init__(self, word: Sequence[int], magnitude: float):
        super().__init__(
            'product %s has an entry of magnitude %.3g; rescale the family '
            '(e.g. by 1/L from a short preliminary run) before exploring '
            'longer products' % (list(word), magnitude))
        self.word = tuple(word)
        self.magnitude = magnitude


class EnumerationCapError(SubradiusError):
    reason = 'enumeration-cap'

    def __init__(self, count: float, cap: int):
        super().__init__(
            'enumerating %.3g products exceeds the cap of %d; use the '
            'from_active mode instead' % (count, cap))
        self.count = count
        self.cap = cap

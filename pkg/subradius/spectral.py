"""
Spectral radius, leading eigenvectors and related per-matrix checks.

Eigenvalues come from LAPACK through `scipy.linalg.eigvals` (Hessenberg
reduction followed by shifted QR), which covers the signed families of the
JSR solver. For nonnegative matrices the leading vector is taken from a
Perron power iteration and only falls back to a full eigendecomposition
when the iteration stagnates.
"""
from dataclasses import dataclass, field
import logging

import numpy as np
import scipy.linalg

from subradius.errors import InvalidInputError, NumericalFailure
from subradius.eval import Eval, later
from subradius.mytypes import *
from subradius.settings import GAP_TOL
from subradius.util import as_matrix, normalize_l1

__all__ = ['SpectralInfo', 'embedded_cone_constant',
           'is_asymptotically_rank_one', 'perron_iteration',
           'spectral_radius']

logger = logging.getLogger(__name__)

# Perron vector entries below this fraction of the largest are set to 0
CLIP_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralInfo:
    """
    Attributes:
        rho (float): the spectral radius
        eigenvalues (np.ndarray): all eigenvalues, as returned by LAPACK
        simple_dominant (bool): whether +rho or -rho is a simple eigenvalue
            and every other eigenvalue is strictly smaller in modulus
    """
    rho: float
    eigenvalues: np.ndarray = field(repr=False)
    simple_dominant: bool
    _leading: Eval = field(repr=False)

    @property
    def leading_vector(self) -> Vector:
        """
        The leading eigenvector with unit 1-norm, nonnegative when the matrix
        is; then entries below `CLIP_RTOL` of the largest are exactly 0.
        Computed on first access.
        """
        return self._leading.get()


def _check_finite(a) -> Matrix:
    return as_matrix(a, 'matrix')


def _eigvals(a: Matrix) -> np.ndarray:
    try:
        return scipy.linalg.eigvals(a, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as ex:
        raise NumericalFailure('eigenvalue iteration did not converge: %s'
                               % ex, iterations=30 * a.shape[0])


def _simple_dominant(eigenvalues: np.ndarray,
                     rho: float,
                     gap_tol: float = GAP_TOL) -> bool:
    if rho <= 0:
        return False
    near = np.abs(eigenvalues) >= rho * (1 - gap_tol)
    if np.count_nonzero(near) != 1:
        return False
    lead = eigenvalues[near][0]
    return abs(lead.imag) <= gap_tol * rho


def perron_iteration(a: Matrix,
                     tol: float = 1e-12,
                     max_iter: int = 10000
                     ) -> Tuple[float, Vector, int]:
    """
    Power iteration for a nonnegative matrix, started from the uniform vector.

    Stops once the Rayleigh quotient changes by less than `tol` relative and
    the eigen-residual is small. Periodic (imprimitive) matrices typically
    do not converge and end in a `NumericalFailure`.

    Args:
        a (Matrix): a nonnegative square matrix
        tol (float): relative stopping tolerance
        max_iter (int): iteration cap

    Returns:
        Tuple[float, Vector, int]: the Perron root, the unit 1-norm Perron
            vector and the number of iterations

    Raises:
        InvalidInputError: if `a` has negative or non-finite entries
        NumericalFailure: if the iteration does not settle within `max_iter`
    """
    a = _check_finite(a)
    if np.any(a < 0):
        raise InvalidInputError('Perron iteration needs a nonnegative matrix')
    d = a.shape[0]
    scale = float(np.abs(a).sum(axis=0).max())
    v = np.full(d, 1.0 / d)
    lam = None
    for it in range(1, max_iter + 1):
        w = a @ v
        s = w.sum()
        if s <= 0:
            return 0.0, v, it
        lam_new = float(v @ w / (v @ v))
        w /= s
        if lam is not None and abs(lam_new - lam) <= tol * abs(lam_new):
            residual = np.abs(a @ w - lam_new * w).sum()
            if residual <= 1e-8 * max(scale, 1e-300):
                return lam_new, w, it
        lam, v = lam_new, w
    raise NumericalFailure('Perron iteration did not converge',
                           iterations=max_iter)


def _dominant_eigenvector(a: Matrix, nonnegative: bool) -> Vector:
    try:
        w, vr = scipy.linalg.eig(a, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as ex:
        raise NumericalFailure('eigenvector computation failed: %s' % ex,
                               iterations=30 * a.shape[0])
    moduli = np.abs(w)
    # among eigenvalues of maximal modulus prefer +rho
    ties = np.flatnonzero(moduli >= moduli.max() * (1 - 1e-12))
    v = vr[:, ties[np.argmax(w[ties].real)]]
    v = v.real if np.abs(v.imag).max(initial=0.0) <= 1e-12 else v.real + v.imag
    if nonnegative:
        v = v if v.sum() >= 0 else -v
        v = np.where(v < 0, 0.0, v)
    elif v[np.argmax(np.abs(v))] < 0:
        v = -v
    return normalize_l1(v)


def _clip_roundoff(v: Vector) -> Vector:
    # coordinates outside the Perron support only ever hold round-off
    return normalize_l1(np.where(v <= CLIP_RTOL * v.max(), 0.0, v))


def _leading_vector(a: Matrix, nonnegative: bool) -> Vector:
    if nonnegative:
        try:
            return _clip_roundoff(perron_iteration(a)[1])
        except NumericalFailure as ex:
            logger.debug('falling back to eig for the leading vector '
                         'after %d power iterations', ex.iterations)
        return _clip_roundoff(_dominant_eigenvector(a, nonnegative))
    return _dominant_eigenvector(a, nonnegative)


def spectral_radius(a, nonnegative: Optional[bool] = None) -> SpectralInfo:
    """
    Computes the spectral radius of `a` and whether its leading eigenvalue is
    simple and strictly dominant.

    Args:
        a (array_like): the square matrix
        nonnegative (Optional[bool]): skip the sign scan when known

    Returns:
        SpectralInfo: the spectral data; the leading vector is lazy

    Raises:
        InvalidInputError: if `a` has non-finite entries
        NumericalFailure: if LAPACK does not converge
    """
    a = _check_finite(a)
    if nonnegative is None:
        nonnegative = bool(np.all(a >= 0))
    eigenvalues = _eigvals(a)
    rho = float(np.abs(eigenvalues).max())
    return SpectralInfo(rho=rho,
                        eigenvalues=eigenvalues,
                        simple_dominant=_simple_dominant(eigenvalues, rho),
                        _leading=later(lambda: _leading_vector(a, nonnegative)))


def is_asymptotically_rank_one(a) -> bool:
    return spectral_radius(a).simple_dominant


def embedded_cone_constant(a) -> float:
    """
    Returns ``max_j (max_i a_ij / min_i a_ij)`` for a strictly positive
    matrix, the aperture constant of the cone it maps the orthant into.

    Args:
        a (array_like): a strictly positive square matrix

    Returns:
        float: the constant, at least 1

    Raises:
        InvalidInputError: if some entry is not strictly positive
    """
    a = _check_finite(a)
    if np.any(a <= 0):
        raise InvalidInputError('the embedded cone constant needs a strictly '
                                'positive matrix')
    return float(np.max(a.max(axis=0) / a.min(axis=0)))

import numpy as np
import pytest

from subradius.families import (critical_family, illustrative_family,
                                jsr_example_family, pascal_rhombus_family)
from subradius.family import rescale_family, transpose_family
from subradius.slp import iter_products
from subradius.spectral import spectral_radius

# rho(A1 A2 (A1^2 A2)^2) of the illustrative pair, in closed form
ILLUSTRATIVE_RHO_PI = 4.0 * (213803.0 + np.sqrt(44666192953.0))
ILLUSTRATIVE_LSR = ILLUSTRATIVE_RHO_PI ** (1.0 / 8)


@pytest.fixture
def illustrative():
    return illustrative_family()


@pytest.fixture
def illustrative_lsr():
    return ILLUSTRATIVE_LSR


@pytest.fixture
def normalized_illustrative():
    """
    The transposed illustrative pair divided by its LSR, so its LSR is 1.
    """
    return rescale_family(transpose_family(illustrative_family()),
                          1.0 / ILLUSTRATIVE_LSR)


@pytest.fixture
def critical():
    return critical_family()


@pytest.fixture
def pascal():
    return pascal_rhombus_family()


@pytest.fixture
def jsr_example():
    return jsr_example_family()


@pytest.fixture
def rho_root_oracle():
    """
    ``(family, k, pick) -> pick over j <= k of pick over products P of
    degree j of rho(P)^(1/j)``, by plain enumeration.
    """
    def oracle(family, k, pick=min):
        return pick(pick(spectral_radius(node.matrix).rho ** (1.0 / j)
                         for node in iter_products(family, j))
                    for j in range(1, k + 1))

    return oracle


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240917))

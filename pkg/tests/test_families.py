import numpy as np
from numpy.testing import assert_array_equal
import pytest

from subradius.errors import InvalidInputError
from subradius.families import (FamilyKind, FamilySpec, build_family,
                                critical_family, euler_family,
                                illustrative_family, jsr_example_family,
                                pascal_rhombus_family, random_family)
from subradius.spectral import spectral_radius


def test_euler_three():
    family = euler_family(3)
    assert_array_equal(family[0], [[1, 1], [0, 1]])
    assert_array_equal(family[1], [[1, 0], [1, 1]])
    assert family.labels == ('A1', 'A2')


@pytest.mark.parametrize('r', [5, 7, 9, 11])
def test_euler_shapes(r):
    family = euler_family(r)
    assert family.dim == r - 1
    assert len(family) == 2
    for a in family:
        assert set(np.unique(a)) <= {0.0, 1.0}


@pytest.mark.parametrize('r', [1, 2, 4, 8, 3.5, True])
def test_euler_rejects_bad_order(r):
    with pytest.raises(InvalidInputError):
        euler_family(r)


def test_fixed_families():
    pascal = pascal_rhombus_family()
    assert pascal.dim == 5
    assert pascal[0][1, 2] == 2.0
    assert pascal[1][4, 1] == 1.0
    assert pascal.is_nonnegative()
    assert illustrative_family().dim == 2
    assert not jsr_example_family().is_nonnegative()


def test_critical_product_attains_three():
    family = critical_family()
    p = (np.linalg.matrix_power(family[0], 3)
         @ np.linalg.matrix_power(family[1], 4))
    assert spectral_radius(p).rho ** (1.0 / 7) == pytest.approx(3.0)
    # any order of the same factors is triangular with the same diagonal
    q = (family[1] @ family[0] @ family[1] @ family[0] @ family[1]
         @ family[0] @ family[1])
    assert spectral_radius(q).rho ** (1.0 / 7) == pytest.approx(3.0)


def test_random_family_is_reproducible():
    a = random_family(4, 3, 0.5, seed=11)
    b = random_family(4, 3, 0.5, seed=11)
    assert a == b
    assert not a == random_family(4, 3, 0.5, seed=12)


def test_random_family_density_one_is_positive():
    family = random_family(3, 2, 1.0, seed=0)
    for a in family:
        assert np.all(a > 0)
        assert np.all(a <= 1)


def test_random_family_draw_order():
    rng = np.random.Generator(np.random.PCG64(5))
    mask = rng.random((2, 2)) < 0.6
    values = 1.0 - rng.random((2, 2))
    assert_array_equal(random_family(2, 1, 0.6, seed=5)[0],
                       np.where(mask, values, 0.0))


@pytest.mark.parametrize('d,m,density', [(0, 2, 0.5), (2, 0, 0.5),
                                         (2, 2, 0.0), (2, 2, 1.5)])
def test_random_family_validation(d, m, density):
    with pytest.raises(InvalidInputError):
        random_family(d, m, density, seed=0)


def test_build_family():
    spec = FamilySpec('random', {'d': 3, 'm': 2, 'density': 0.8, 'seed': 4})
    assert spec.kind is FamilyKind.RANDOM
    assert build_family(spec) == random_family(3, 2, 0.8, 4)
    euler = build_family(FamilySpec(FamilyKind.EULER, {'r': 5},
                                    transpose=True, rescale=0.5))
    assert euler.transposed
    assert euler.rescale == 0.5
    assert_array_equal(euler[0], 0.5 * euler_family(5)[0].T)
    explicit = build_family(FamilySpec('explicit',
                                       {'members': [np.eye(2)],
                                        'labels': ['I']}))
    assert explicit.labels == ('I',)


def test_build_family_missing_parameter():
    with pytest.raises(InvalidInputError):
        build_family(FamilySpec('euler'))
    with pytest.raises(ValueError):
        FamilySpec('circulant')

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
import pytest

from subradius.driver import (iterative_rescaling_driver,
                              perturbation_matrices, perturbed_family,
                              preliminary_factor, regularized_lsr,
                              run_rescaled)
from subradius.errors import InvalidInputError
from subradius.families import euler_family
from subradius.family import rescale_family
from subradius.lsr import SolverConfig, run_lsr
from subradius.slp import identify_slp_candidates
from subradius.spectral import spectral_radius
from subradius.util import canonical_rotation


def test_run_rescaled_maps_bounds_back(illustrative):
    cfg = SolverConfig(max_evals=40)
    direct = run_lsr(rescale_family(illustrative, 0.25), cfg, 'a')
    report = run_rescaled(illustrative, cfg, 'a', rescale=0.25)
    assert report.lower == pytest.approx(direct.lower / 0.25)
    assert report.upper == pytest.approx(direct.upper / 0.25)
    assert report.rescale == 0.25


def test_run_rescaled_identity_factor(illustrative):
    cfg = SolverConfig(max_evals=20)
    report = run_rescaled(illustrative, cfg, 's')
    plain = run_lsr(illustrative, cfg, 's')
    assert (report.lower, report.upper) == (plain.lower, plain.upper)


def test_run_rescaled_auto(illustrative, illustrative_lsr):
    report = run_rescaled(illustrative, SolverConfig(max_evals=100), 'a',
                          rescale='auto')
    assert report.lower <= illustrative_lsr * (1 + 1e-9)
    assert report.upper >= illustrative_lsr * (1 - 1e-9)
    assert report.rescale != 1.0


def test_run_rescaled_rejects_unknown_mode(illustrative):
    with pytest.raises(InvalidInputError):
        run_rescaled(illustrative, SolverConfig(), rescale='sometimes')


def test_preliminary_factor_is_reciprocal_lower(illustrative):
    cfg = SolverConfig()
    c = preliminary_factor(illustrative, cfg, 's', evals=10)
    prelim = run_lsr(illustrative, SolverConfig(max_evals=10), 's')
    assert c == pytest.approx(1.0 / prelim.lower)


def test_driver_validation(illustrative):
    with pytest.raises(InvalidInputError):
        iterative_rescaling_driver(illustrative, SolverConfig(), max_iter=0)
    with pytest.raises(InvalidInputError):
        iterative_rescaling_driver(illustrative, SolverConfig(), variant='s')


def test_driver_on_illustrative_pair(illustrative, illustrative_lsr):
    report = iterative_rescaling_driver(
        illustrative, SolverConfig(delta=1e-6, max_evals=100), max_iter=5)
    assert 1 <= report.driver_iterations <= 5
    assert report.lower <= illustrative_lsr * (1 + 1e-9)
    assert report.upper >= illustrative_lsr * (1 - 1e-9)
    assert report.lower <= report.upper


def test_driver_normalizes_by_the_upper_bound(illustrative):
    cfg = SolverConfig(delta=1e-6, max_evals=60)
    prelim = run_lsr(illustrative, SolverConfig(delta=1e-6, max_evals=10),
                     'a')
    report = iterative_rescaling_driver(illustrative, cfg, max_iter=1)
    assert report.driver_iterations == 1
    assert report.rescale == pytest.approx(1.0 / prelim.upper)


@pytest.mark.slow
def test_driver_on_pascal_rhombus(pascal):
    report = iterative_rescaling_driver(
        pascal, SolverConfig(delta=1e-6, max_evals=500, init='eig:1'),
        max_iter=20)
    expected = spectral_radius(
        np.linalg.matrix_power(pascal[0], 3)
        @ np.linalg.matrix_power(pascal[1], 3)).rho ** (1.0 / 6)
    assert report.metrics.l_slp == 6
    assert report.upper == pytest.approx(expected, rel=1e-9)
    assert report.lower <= expected * (1 + 1e-9)
    assert report.gap <= 1e-5 * expected
    candidates = identify_slp_candidates(pascal, report)
    assert candidates == [canonical_rotation((0, 0, 0, 1, 1, 1))]


@pytest.mark.slow
def test_driver_on_euler_seven():
    report = iterative_rescaling_driver(
        euler_family(7), SolverConfig(delta=1e-6, max_evals=100,
                                      init='eig:1'),
        max_iter=20)
    # the LSR is 3.491891 to six digits
    assert 3.4 < report.lower <= 3.4918915
    assert report.upper >= 3.4918905
    assert report.upper == pytest.approx(3.491891, abs=1e-4)


@pytest.mark.slow
@pytest.mark.parametrize('r,upper', [(9, 4.494493), (11, 5.497043)])
def test_driver_upper_bounds_larger_euler(r, upper):
    report = iterative_rescaling_driver(
        euler_family(r), SolverConfig(delta=1e-6, max_evals=100,
                                      init='eig:1'),
        max_iter=20)
    assert report.upper <= upper + 1e-4
    assert report.lower <= report.upper


def test_perturbation_matrices_are_deterministic():
    first = perturbation_matrices(3, 2, seed=7)
    second = perturbation_matrices(3, 2, seed=7)
    for a, b in zip(first, second):
        assert_array_equal(a, b)
        assert np.all(a > 0)
        assert np.linalg.norm(a, 'fro') == pytest.approx(1.0)
    other = perturbation_matrices(3, 2, seed=8)
    assert not np.array_equal(first[0], other[0])


def test_zero_epsilon_keeps_family(illustrative):
    directions = perturbation_matrices(2, 2, seed=0)
    assert perturbed_family(illustrative, directions, 0.0) is illustrative
    shifted = perturbed_family(illustrative, directions, 0.5)
    assert_allclose(shifted[1], illustrative[1] + 0.5 * directions[1])


@pytest.mark.parametrize('epsilons', [[0.1, -0.1], [0.01, 0.1],
                                      [np.inf]])
def test_regularized_ladder_validation(illustrative, epsilons):
    with pytest.raises(InvalidInputError):
        regularized_lsr(illustrative, SolverConfig(), epsilons)


def test_regularized_ladder(normalized_illustrative):
    cfg = SolverConfig(delta=1e-4, max_evals=60)
    reports = regularized_lsr(normalized_illustrative, cfg,
                              [0.1, 0.01, 0.0], perturbation_seed=3)
    assert len(reports) == 3
    plain = run_lsr(normalized_illustrative, cfg)
    assert reports[-1].lower == plain.lower
    assert reports[-1].upper == plain.upper
    # positive perturbations can only raise the LSR
    for report in reports:
        assert report.upper >= 1.0 - 1e-9
    assert reports[-1].upper <= reports[0].upper + cfg.delta


@pytest.mark.slow
def test_regularized_ladder_on_critical_family(critical):
    # the rescaled critical family has LSR 1, attained at degree 7
    epsilons = [1e-3, 1e-5, 1e-7]
    reports = regularized_lsr(rescale_family(critical, 1.0 / 3.0),
                              SolverConfig(delta=1e-6, max_evals=500),
                              epsilons, jobs=2)
    excess = [r.upper - 1.0 for r in reports]
    for report in reports:
        # positive perturbations can only raise the LSR
        assert report.upper >= 1.0 - 1e-9
        assert report.lower <= report.upper
    assert excess[0] > excess[1] > excess[2]
    assert excess[2] < excess[0] / 10
    assert excess[2] < 2e-2

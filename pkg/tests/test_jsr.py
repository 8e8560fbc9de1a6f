from dataclasses import replace

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
import pytest

from subradius.errors import InvalidInputError
from subradius.family import MatrixFamily, rescale_family
from subradius.jsr import (JsrConfig, PolytopeNorm, adaptive_gripenberg_jsr,
                           gripenberg_jsr, norm_lp, polytope_norm_matrix,
                           polytope_norm_vector, prune_norm,
                           try_insert_norm_vertex)
from subradius.lp import LpOptions, solve_lp
from subradius.lsr import Termination

JSR_EXAMPLE_RANGE = (0.6596789, 0.6596924)


def _random_norm(rng, d=2, p=3):
    return PolytopeNorm(rng.standard_normal((d, p)))


def test_one_norm_closed_form():
    nrm = PolytopeNorm.identity(2)
    assert nrm.is_identity
    assert polytope_norm_vector(nrm, [3.0, -4.0]) == 7.0
    value = polytope_norm_matrix(nrm, [[1.0, -2.0], [3.0, 4.0]])
    assert value.value == 6.0
    assert value.argmax_vertex_index == 1
    assert_array_equal(value.candidate, [-2.0, 4.0])


def test_lp_path():
    nrm = PolytopeNorm.from_vertices([[1.0, 1.0], [1.0, -1.0]])
    assert not nrm.is_identity
    assert polytope_norm_vector(nrm, [2.0, 0.0]) == pytest.approx(2.0)
    assert polytope_norm_vector(nrm, [0.0, 0.0]) == 0.0
    out = solve_lp(norm_lp(nrm.vertices, np.array([2.0, 0.0])), LpOptions())
    assert out.objective_value == pytest.approx(2.0)


def test_scaled_identity_matrix_norm():
    nrm = PolytopeNorm.from_vertices([[2.0, 0.0], [0.0, 0.5]])
    for alpha in (0.5, -3.0):
        value = polytope_norm_matrix(nrm, alpha * np.eye(2))
        assert value.value == pytest.approx(abs(alpha))


def test_rank_validation():
    with pytest.raises(InvalidInputError):
        PolytopeNorm(np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(InvalidInputError):
        PolytopeNorm(np.array([[1.0, np.nan], [0.0, 1.0]]))
    with pytest.raises(InvalidInputError):
        PolytopeNorm(np.zeros((2, 0)))


def test_norm_axioms(rng):
    nrm = _random_norm(rng)
    for _ in range(20):
        x, y = rng.standard_normal(2), rng.standard_normal(2)
        lam = rng.standard_normal()
        nx = polytope_norm_vector(nrm, x)
        assert nx > 0
        assert_allclose(polytope_norm_vector(nrm, lam * x), abs(lam) * nx,
                        rtol=1e-8)
        assert (polytope_norm_vector(nrm, x + y)
                <= nx + polytope_norm_vector(nrm, y) + 1e-8)


def test_submultiplicativity(rng):
    nrm = _random_norm(rng)
    for _ in range(10):
        a, b = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))
        lhs = polytope_norm_matrix(nrm, a @ b).value
        rhs = (polytope_norm_matrix(nrm, a).value
               * polytope_norm_matrix(nrm, b).value)
        assert lhs <= rhs * (1 + 1e-8) + 1e-12


def test_insertion_rule():
    nrm = PolytopeNorm.identity(2)
    same, accepted = try_insert_norm_vertex(nrm, [0.3, 0.3])
    assert not accepted
    assert same is nrm
    grown, accepted = try_insert_norm_vertex(nrm, [1.0, 1.0])
    assert accepted
    assert grown.size == 3
    assert try_insert_norm_vertex(nrm, [0.0, 0.0]) == (nrm, False)


def test_prune_removes_interior_vertices():
    nrm = PolytopeNorm(np.array([[1.0, 0.0, 0.3], [0.0, 1.0, 0.3]]))
    assert_array_equal(prune_norm(nrm).vertices, np.eye(2))


def test_prune_keeps_rank():
    nrm = PolytopeNorm(np.array([[1.0, 0.5, 0.0], [0.0, 0.0, 1.0]]))
    pruned = prune_norm(nrm)
    assert_array_equal(pruned.vertices, np.eye(2))
    assert prune_norm(PolytopeNorm.identity(3)).size == 3


@pytest.mark.parametrize('kwargs', [
    {'delta': 0.0},
    {'max_evals': 1},
    {'tol': -1.0},
    {'rescale': 'sometimes'},
    {'rescale': -2.0},
    {'max_vertex_growth': 1.0},
])
def test_config_validation(jsr_example, kwargs):
    with pytest.raises(InvalidInputError):
        gripenberg_jsr(jsr_example, JsrConfig(**kwargs))


@pytest.mark.parametrize('init', ['eig:1', np.eye(3)])
def test_bad_initial_norm(jsr_example, init):
    with pytest.raises(InvalidInputError):
        JsrConfig(init=init).initial_norm(jsr_example)


def test_single_matrix_is_exact():
    report = gripenberg_jsr(MatrixFamily.of(-2.0 * np.eye(2)), JsrConfig())
    assert report.lower == pytest.approx(2.0)
    assert report.upper == pytest.approx(2.0)
    assert report.terminated_by is Termination.ACCURACY
    assert report.final_vertices is None
    assert report.vertex_count == 0


def test_identical_identities():
    report = adaptive_gripenberg_jsr(MatrixFamily.of(np.eye(2), np.eye(2)),
                                     JsrConfig())
    assert report.lower == pytest.approx(1.0)
    assert report.upper == pytest.approx(1.0)
    assert report.adaptive


def test_explicit_rescale_maps_back(jsr_example):
    cfg = JsrConfig(max_evals=40)
    scaled = gripenberg_jsr(jsr_example, JsrConfig(max_evals=40, rescale=2.0))
    direct = gripenberg_jsr(rescale_family(jsr_example, 2.0), cfg)
    assert scaled.lower == pytest.approx(direct.lower / 2.0)
    assert scaled.upper == pytest.approx(direct.upper / 2.0)
    assert scaled.rescale == 2.0


@pytest.mark.parametrize('seed', range(8))
def test_signed_random_families_are_bracketed(seed, rho_root_oracle):
    rng = np.random.Generator(np.random.PCG64(seed))
    family = MatrixFamily.of(*rng.standard_normal((2, 2, 2)))
    for adaptive in (False, True):
        cfg = JsrConfig(delta=1e-4, max_evals=150)
        report = (adaptive_gripenberg_jsr if adaptive
                  else gripenberg_jsr)(family, cfg)
        assert report.lower <= report.upper + 1e-12
        assert report.upper >= rho_root_oracle(family, 5, max) - 1e-9
        assert report.lower >= max(np.abs(np.linalg.eigvals(a)).max()
                                   for a in family) - 1e-12


def test_history_is_monotone(jsr_example):
    report = adaptive_gripenberg_jsr(jsr_example, JsrConfig(max_evals=60))
    lowers = [h.lower for h in report.history]
    uppers = [h.upper for h in report.history]
    assert lowers == sorted(lowers)
    assert uppers == sorted(uppers, reverse=True)


def test_auto_factor_uses_the_best_product(jsr_example):
    report = adaptive_gripenberg_jsr(
        jsr_example, JsrConfig(max_evals=250, rescale='auto'))
    classic = gripenberg_jsr(jsr_example, JsrConfig(max_evals=250))
    # normalized by the preliminary lower bound, not by rho(A1) = 0.6
    assert report.rescale == pytest.approx(1.0 / classic.lower)


def test_unnormalized_growth_is_capped():
    family = MatrixFamily.of([[2.0, 1.0], [0.0, 2.0]],
                             [[2.0, 0.0], [1.0, 2.0]])
    report = adaptive_gripenberg_jsr(
        family, JsrConfig(max_evals=60, max_vertex_growth=10.0))
    assert report.rejected_vertices > 0
    assert np.abs(report.final_vertices).max() <= 10.0
    assert report.lower <= report.upper


@pytest.mark.slow
def test_signed_example(jsr_example):
    low, high = JSR_EXAMPLE_RANGE
    cfg = JsrConfig(delta=1e-6, max_evals=250)
    classic = gripenberg_jsr(jsr_example, cfg)
    report = adaptive_gripenberg_jsr(jsr_example,
                                     replace(cfg, rescale='auto'))
    assert report.lower >= 0.6596788
    assert report.lower <= high + 1e-9
    assert report.upper >= low - 1e-9
    assert report.upper <= classic.upper + 1e-12
    assert report.upper < 0.66
    assert report.vertices_added > 0

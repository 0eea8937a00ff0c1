"""Tests for the built-in problems, the optimum oracle and instance files."""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from compopt.core.oracles import composition_value, full_gradient, inner_value, objective
from compopt.exceptions import ConfigurationError
from compopt.models.schemas import ProblemSpec
from compopt.problems import (
    BellmanToyProblem,
    MeanVarianceProblem,
    SplitQuadraticProblem,
    build_problem,
    generate_bellman_toy,
    generate_mean_variance,
    generate_split_quadratic,
    load_problem,
    newton_polish,
    optimum_oracle,
    save_problem,
)
from compopt.problems.mean_variance import covariance_with_condition
from compopt.services.prng import PrngStream


def test_mean_variance_composition_matches_direct_formula(small_mean_variance, rng):
    for _ in range(5):
        x = rng.standard_normal(small_mean_variance.dim_x)
        assert objective(small_mean_variance, x) == pytest.approx(small_mean_variance.direct_objective(x), rel=1e-12)


def test_unregularized_shift_cancels_the_regulariser(rng):
    rewards = rng.standard_normal((8, 3))
    shifted = MeanVarianceProblem(rewards, lam=0.7, unregularized_shift=True)
    plain = MeanVarianceProblem(rewards, lam=0.0)
    x = rng.standard_normal(3)
    assert objective(shifted, x) == pytest.approx(objective(plain, x), rel=1e-12, abs=1e-12)
    assert shifted.direct_objective(x) == pytest.approx(objective(plain, x), rel=1e-12, abs=1e-12)


def test_two_reward_toy_values(two_reward_toy):
    # G(x) = [x, 2x]; F_i = -r_i x + (r_i x - 2x)^2, so F(G(x)) = -2x + x^2
    assert composition_value(two_reward_toy, np.array([1.5])) == pytest.approx(-3.0 + 2.25)


def test_two_reward_toy_without_regulariser():
    toy = MeanVarianceProblem([[1.0], [3.0]], lam=0.0)
    assert_allclose(inner_value(toy, np.array([2.0])), [2.0, 4.0])
    assert_allclose(full_gradient(toy, np.array([0.0])), [-2.0])
    assert objective(toy, np.array([1.0])) == pytest.approx(-1.0)
    x_star, p_star = optimum_oracle(toy)
    assert_allclose(x_star, [1.0], atol=1e-12)
    assert p_star == pytest.approx(-1.0)


def test_bellman_optimum_beats_every_nearby_point(bellman_toy):
    x_star, p_star = optimum_oracle(bellman_toy)
    stream = PrngStream(17, "bellman-perturbation")
    for _ in range(100):
        delta = stream.standard_normal(bellman_toy.dim_x)
        delta *= 1e-3 / np.linalg.norm(delta)
        assert p_star <= objective(bellman_toy, x_star + delta)


@pytest.mark.parametrize("kappa", [1.0, 10.0, 50.0])
def test_covariance_has_requested_condition_number(kappa):
    cov, _, spectrum = covariance_with_condition(6, kappa, PrngStream(3, "cov"))
    eig = np.linalg.eigvalsh(cov)
    assert eig.max() / eig.min() == pytest.approx(kappa, rel=1e-8)
    assert_allclose(np.sort(eig), spectrum, rtol=1e-8)


def test_generate_mean_variance_is_deterministic():
    a = generate_mean_variance(n=20, N=5, kappa=30.0, seed=4)
    b = generate_mean_variance(n=20, N=5, kappa=30.0, seed=4)
    c = generate_mean_variance(n=20, N=5, kappa=30.0, seed=5)
    assert np.array_equal(a.rewards, b.rewards)
    assert not np.array_equal(a.rewards, c.rewards)


@pytest.mark.parametrize(
    "kwargs",
    [dict(n=1, N=3, kappa=10.0), dict(n=10, N=3, kappa=0.5), dict(n=10, N=1, kappa=10.0)],
)
def test_generate_mean_variance_rejects_bad_arguments(kwargs):
    with pytest.raises(ConfigurationError):
        generate_mean_variance(seed=0, **kwargs)


@pytest.mark.parametrize("fixture", ["small_mean_variance", "small_bellman", "small_split_quadratic"])
def test_closed_form_optimum_is_stationary(fixture, request):
    problem = request.getfixturevalue(fixture)
    x_star = problem.closed_form_optimum()
    assert np.linalg.norm(full_gradient(problem, x_star)) < 1e-10


def test_newton_polish_agrees_with_closed_form(small_bellman):
    assert_allclose(newton_polish(small_bellman), small_bellman.closed_form_optimum(), atol=1e-9)


def test_optimum_oracle_is_cached_and_read_only(small_bellman):
    x_star, p_star = optimum_oracle(small_bellman)
    again = optimum_oracle(small_bellman)
    assert again[0] is x_star and again[1] == p_star
    assert p_star == pytest.approx(objective(small_bellman, x_star))
    with pytest.raises(ValueError):
        x_star[0] = 1.0


def test_bellman_generator_shapes_and_n():
    problem = generate_bellman_toy(m=4, M=5, N=3, lam=0.2, seed=1)
    assert isinstance(problem, BellmanToyProblem)
    assert (problem.n, problem.m, problem.dim_y, problem.dim_x) == (1, 4, 5, 3)
    with pytest.raises(ConfigurationError):
        generate_bellman_toy(m=0, M=2, N=2, lam=0.1, seed=0)


def test_split_quadratic_has_a_concave_component(small_split_quadratic):
    problem = small_split_quadratic
    y = np.ones(problem.dim_y)
    # F_2 is concave: its gradient map has negative curvature along y
    assert (problem.grad_f(1, y) - problem.grad_f(1, np.zeros(problem.dim_y))) @ y < 0
    with pytest.raises(ConfigurationError):
        generate_split_quadratic(m=2, M=2, N=2, alpha=1.0, lam=0.0, seed=0)


def test_save_and_load_round_trip(tmp_path, small_mean_variance):
    path = save_problem(small_mean_variance, tmp_path / "instance.txt")
    assert path.read_text().splitlines()[0] == f"12 4 {small_mean_variance.lam!r}"
    loaded = load_problem(path)
    assert np.array_equal(loaded.rewards, small_mean_variance.rewards)
    assert loaded.lam == small_mean_variance.lam


def test_save_rejects_other_families(tmp_path, small_bellman):
    with pytest.raises(ConfigurationError):
        save_problem(small_bellman, tmp_path / "b.txt")


def test_load_rejects_malformed_header(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3 2\n1 2\n3 4\n5 6\n")
    with pytest.raises(ConfigurationError):
        load_problem(path)


def test_build_problem_covers_every_family():
    assert isinstance(build_problem(ProblemSpec(family="mean-variance", n=10, N=3, seed=1)), MeanVarianceProblem)
    bellman = build_problem(ProblemSpec(family="bellman", m=4, N=3, seed=1))
    assert isinstance(bellman, BellmanToyProblem) and bellman.dim_y == 3
    split = build_problem(ProblemSpec(family="split-quadratic", m=4, N=3, M=2, seed=1, lam=0.5))
    assert isinstance(split, SplitQuadraticProblem) and split.dim_y == 2


def test_newton_polish_reaches_the_absolute_floor_from_far_away(small_bellman):
    x0 = np.full(small_bellman.dim_x, 1e3)
    # relative target alone would stop near 1e-12 * ||grad P(x0)||, well above 1e-11
    assert np.linalg.norm(full_gradient(small_bellman, x0)) > 1e2
    x = newton_polish(small_bellman, x0)
    assert np.linalg.norm(full_gradient(small_bellman, x)) < 1e-11

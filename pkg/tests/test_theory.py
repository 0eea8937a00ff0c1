"""Tests for the constant estimates and the step/batch bounds."""
import itertools
import math

import numpy as np
import pytest

from compopt.algorithms import run_scdf_svrg
from compopt.core.oracles import inner_value
from compopt.estimators import MiniBatch, svrg_estimate, take_snapshot
from compopt.exceptions import ConfigurationError
from compopt.models.schemas import RunConfig
from compopt.models.theory_schemas import ProblemConstants
from compopt.problems import BellmanToyProblem, optimum_oracle
from compopt.services.prng import PrngStream
from compopt.theory import (
    corollary_bounds,
    estimate_constants,
    saga_bounds,
    saga_deviation_bound,
    spectral_norms,
    svrg_contraction_factor,
    svrg_inner_variance,
    svrg_step_bound,
    theoretical_step,
)

ONES = ProblemConstants(B_F=1.0, L_F=1.0, B_G=1.0, L_G=1.0, L_f=1.0, R_x=1.0)
NO_RADIUS = ONES.model_copy(update={"R_x": 0.0})


# --- SCDF-SVRG bounds ----------------------------------------------------------


def test_svrg_nonconvex_worked_example():
    bound = svrg_step_bound(ONES, lam=1.0, n=10, A=100)
    assert not bound.vacuous
    assert bound.eta_max == pytest.approx(0.46 / 4.76, rel=1e-12)
    assert bound.q == pytest.approx(25.0)
    assert bound.A_min == pytest.approx(8.0)
    # at the largest step the admissible a/b interval shrinks to a point
    assert bound.ab_lower == pytest.approx(bound.ab_upper, rel=1e-9)


@pytest.mark.parametrize("A", [2, 5, 8])
def test_svrg_nonconvex_bound_is_vacuous_for_small_batches(A):
    bound = svrg_step_bound(ONES, lam=1.0, n=10, A=A)
    assert bound.vacuous
    assert bound.eta_max is None
    assert "8c/lambda^2" in bound.message


def test_svrg_step_grows_with_batch():
    etas = [
        svrg_step_bound(ONES, lam=1.0, n=10, A=A).eta_max
        for A in (9, 10, 12, 15, 20, 50, 100, 1_000, 10_000, 100_000)
    ]
    assert all(b > a for a, b in zip(etas, etas[1:]))
    # large batches approach the regulariser-only limit (lambda^2/2) / (lambda^3 n / 2) = 1/(lambda n)
    assert etas[-1] < 0.1
    assert etas[-1] == pytest.approx(0.1, rel=1e-2)


def test_svrg_convex_branch():
    bound = svrg_step_bound(ONES, lam=1.0, n=10, A=100, convex_outer=True, d=0.5)
    assert bound.branch == "convex"
    assert bound.eta_max == pytest.approx(1.0 / 14.0)
    assert bound.A_min == pytest.approx(4.0)
    assert bound.d_upper == pytest.approx(0.04 / 1.03)
    too_small = svrg_step_bound(ONES, lam=1.0, n=10, A=2, convex_outer=True, d=0.5)
    assert too_small.vacuous and too_small.eta_max is None


@pytest.mark.parametrize("kwargs", [dict(lam=0.0), dict(n=0), dict(A=0)])
def test_svrg_bound_rejects_bad_arguments(kwargs):
    args = dict(lam=1.0, n=10, A=100)
    args.update(kwargs)
    with pytest.raises(ConfigurationError):
        svrg_step_bound(ONES, **args)


@pytest.mark.parametrize("d", [None, 0.0, 1.0])
def test_convex_branch_needs_margin_in_unit_interval(d):
    with pytest.raises(ConfigurationError):
        svrg_step_bound(ONES, lam=1.0, n=10, A=100, convex_outer=True, d=d)


# --- contraction factor -------------------------------------------------------------


def test_contraction_factor_both_forms():
    eta = 0.5 * svrg_step_bound(ONES, lam=1.0, n=10, A=100).eta_max
    lemma = svrg_contraction_factor(ONES, lam=1.0, n=10, K=1000, A=100, eta=eta, d2_form="lemma")
    theorem = svrg_contraction_factor(ONES, lam=1.0, n=10, K=1000, A=100, eta=eta)
    assert lemma.factor == pytest.approx(0.8976, abs=1e-3)
    assert lemma.contractive
    assert theorem.factor == pytest.approx(1.9985, abs=1e-3)
    assert not theorem.contractive
    assert lemma.a_over_b == pytest.approx(0.5 * (8.0 / 0.98 + 1.0 / eta - 10.0))


def test_contraction_factor_tends_to_its_tail_for_long_epochs():
    eta = 0.5 * svrg_step_bound(ONES, lam=1.0, n=10, A=100).eta_max
    short = svrg_contraction_factor(ONES, lam=1.0, n=10, K=1000, A=100, eta=eta, d2_form="lemma")
    long = svrg_contraction_factor(ONES, lam=1.0, n=10, K=10 ** 12, A=100, eta=eta, d2_form="lemma")
    assert long.factor < short.factor
    assert long.factor == pytest.approx(long.tail / (long.a_over_b * eta), rel=1e-9)


def test_contraction_factor_reports_empty_interval():
    # a step at 1/(lambda n) leaves no room above the lower end
    result = svrg_contraction_factor(ONES, lam=1.0, n=10, K=1000, A=100, eta=0.1)
    assert not result.feasible
    assert result.factor is None


def test_contraction_factor_convex_branch():
    result = svrg_contraction_factor(ONES, lam=1.0, n=10, K=1000, A=100, eta=1.0 / 28.0, convex_outer=True, d=0.5)
    assert result.branch == "convex"
    assert result.feasible
    assert result.factor > 0


def test_contraction_factor_rejects_bad_loop_sizes():
    with pytest.raises(ConfigurationError):
        svrg_contraction_factor(ONES, lam=1.0, n=10, K=0, A=100, eta=0.01)
    with pytest.raises(ConfigurationError):
        svrg_contraction_factor(ONES, lam=1.0, n=10, K=10, A=100, eta=0.0)


# --- SCDF-SAGA bounds ----------------------------------------------------------------


def test_saga_batch_for_given_step():
    bounds = saga_bounds(ONES, lam=1.0, n=10, eta=0.001)
    assert bounds.A_min == pytest.approx(16.005 + 0.5 * math.sqrt(0.01 ** 2 + 32.0 ** 2), rel=1e-12)
    assert bounds.A_min == pytest.approx(32.005, abs=1e-3)


def test_saga_batch_without_radius_is_lambda_eta_n():
    bounds = saga_bounds(NO_RADIUS, lam=1.0, n=10, eta=0.001)
    assert bounds.A_min == pytest.approx(0.01)


def test_saga_step_fixed_point():
    bounds = saga_bounds(NO_RADIUS, lam=1.0, n=10, A=100)
    assert bounds.feasible
    assert bounds.eta_max == pytest.approx(0.083055, rel=1e-4)
    assert bounds.eta_max < 0.1
    assert 1 < bounds.iterations < 1000
    assert bounds.Y2 == pytest.approx(1.01)


def test_saga_step_infeasible_when_first_iterate_exceeds_ceiling():
    bounds = saga_bounds(ONES, lam=1.0, n=10, A=100)
    assert not bounds.feasible
    assert bounds.eta_max is None
    assert bounds.iterations == 1
    assert "1/(lambda n)" in bounds.message


def test_saga_checks_a_given_pair():
    good = saga_bounds(NO_RADIUS, lam=1.0, n=10, A=100, eta=0.05)
    assert good.feasible
    bad = saga_bounds(NO_RADIUS, lam=1.0, n=10, A=100, eta=0.09)
    assert not bad.feasible


def test_saga_convex_branch():
    step_only = saga_bounds(ONES, lam=1.0, n=10, eta=1.0 / 14.0, convex_outer=True, d=0.5)
    assert step_only.eta_max == pytest.approx(1.0 / 14.0)
    assert step_only.A_min == pytest.approx((2.0 + math.sqrt(2.0)) * (10.0 / 14.0 + 64.0))
    batch_only = saga_bounds(ONES, lam=1.0, n=10, A=1000, convex_outer=True, d=0.5)
    assert batch_only.feasible
    assert batch_only.eta_max == pytest.approx(1.0 / 14.0)
    assert not saga_bounds(ONES, lam=1.0, n=10, A=100, convex_outer=True, d=0.5).feasible


def test_saga_bounds_need_batch_or_step():
    with pytest.raises(ConfigurationError):
        saga_bounds(ONES, lam=1.0, n=10)
    with pytest.raises(ConfigurationError):
        saga_bounds(ONES, lam=0.0, n=10, A=100)
    with pytest.raises(ConfigurationError):
        saga_bounds(ONES, lam=1.0, n=10, eta=-1.0)


# --- diagnostics ---------------------------------------------------------------------


def test_deviation_and_corollary_values():
    assert saga_deviation_bound(ONES, 2, [1.0, 2.0]) == pytest.approx(5.0)
    bounds = corollary_bounds(ONES, 2, x_snapshot_sq=1.0, snapshot_opt_sq=1.0, x_opt_sq=1.0,
                              phi_opt_sq=[1.0, 1.0], dual_dev_sq=1.0)
    assert bounds.svrg == pytest.approx(13.0)
    assert bounds.saga == pytest.approx(10.0)


@pytest.mark.parametrize("A", [1, 2])
def test_svrg_inner_variance_matches_enumeration(small_bellman, A):
    problem = small_bellman
    snapshot = take_snapshot(problem, np.array([0.5, -0.2, 0.1]))
    x = np.array([1.0, 0.3, -0.4])
    B_G = max(np.linalg.norm(op, 2) for op in problem.operators)
    constants = ONES.model_copy(update={"B_G": float(B_G)})
    check = svrg_inner_variance(problem, snapshot, x, A, constants)
    g = inner_value(problem, x)
    errors = [
        float(np.sum((svrg_estimate(snapshot, problem, x, MiniBatch(list(b), problem.m))[0] - g) ** 2))
        for b in itertools.product(range(problem.m), repeat=A)
    ]
    assert check.variance == pytest.approx(np.mean(errors), rel=1e-10)
    assert check.within_bound


@pytest.mark.parametrize("fixture", ["small_bellman", "small_mean_variance", "small_split_quadratic"])
@pytest.mark.parametrize("A", [1, 3])
def test_svrg_inner_variance_within_estimated_bound(fixture, A, request):
    problem = request.getfixturevalue(fixture)
    stream = PrngStream(8, f"variance-{fixture}")
    points = [np.zeros(problem.dim_x)] + [stream.standard_normal(problem.dim_x) for _ in range(3)]
    constants = estimate_constants(problem, points, pairs=8, seed=0)
    for _ in range(5):
        snapshot = take_snapshot(problem, stream.standard_normal(problem.dim_x))
        x = snapshot.x_tilde + stream.standard_normal(problem.dim_x)
        check = svrg_inner_variance(problem, snapshot, x, A, constants)
        assert check.within_bound


def test_svrg_converges_at_the_estimated_step_bound():
    stream = PrngStream(21, "contractive-bellman")
    operators = 0.5 * np.eye(3) + 0.05 * stream.standard_normal((10, 3, 3))
    problem = BellmanToyProblem(operators, stream.standard_normal((10, 3)), lam=1.0)
    points = [np.zeros(3)] + [stream.standard_normal(3) for _ in range(3)]
    constants = estimate_constants(problem, points, pairs=16, seed=0)
    A = max(2, math.ceil(16.0 * constants.c / problem.lam ** 2))
    bound = svrg_step_bound(constants, lam=problem.lam, n=problem.n, A=A)
    assert not bound.vacuous
    K = 20
    cfg = RunConfig(eta=bound.eta_max, epochs=4, inner_iters=K, batch=A, record_every=K, seed=2, timing=False)
    result = run_scdf_svrg(problem, np.zeros(3), cfg, optimum=optimum_oracle(problem))
    epoch_ends = result.trace.gaps[result.trace.iterations % K == 0]
    assert len(epoch_ends) == 5
    assert all(later < earlier for earlier, later in zip(epoch_ends[1:], epoch_ends[2:]))
    assert epoch_ends[-1] < 1e-3 * epoch_ends[1]


# --- constants -----------------------------------------------------------------------


def test_spectral_norms_by_power_iteration():
    mats = np.array([[[3.0, 0.0], [0.0, 1.0]], [[0.0, 2.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]])
    np.testing.assert_allclose(spectral_norms(mats, PrngStream(0, "power")), [3.0, 2.0, 0.0], rtol=1e-8)


def test_outer_smoothness_on_two_reward_toy(two_reward_toy):
    points = [np.array([0.0]), np.array([1.0]), np.array([-0.5]), np.array([2.0])]
    constants = estimate_constants(two_reward_toy, points, pairs=200, seed=0)
    # the Hessian of F_i is 2 (r_i, -1)(r_i, -1)^T, largest for r = 3
    assert 19.0 <= constants.L_F <= 20.0 * (1 + 1e-9)
    assert constants.B_G == pytest.approx(math.sqrt(10.0), rel=1e-8)
    assert constants.L_G == 0.0
    # F(G(x)) = x^2 - 2x has sublevel set [0, 2] at x0 = 0 and x* = 2/3
    assert constants.R_x == pytest.approx(16.0 / 9.0, rel=1e-9)


def test_affine_inner_maps_have_zero_jacobian_lipschitz(small_mean_variance, small_bellman, rng):
    for problem in (small_mean_variance, small_bellman):
        points = [rng.standard_normal(problem.dim_x) for _ in range(3)]
        constants = estimate_constants(problem, points, pairs=10, seed=1)
        assert constants.L_G == 0.0
        assert constants.B_G > 0
    # each mean-variance Jacobian stacks an identity block
    assert estimate_constants(small_mean_variance, points[:2], pairs=2, seed=1).B_G >= 1.0


def test_composition_smoothness_bounded_by_operator_norm(small_bellman, rng):
    points = [rng.standard_normal(3) for _ in range(4)]
    constants = estimate_constants(small_bellman, points, pairs=20, seed=2)
    op_norm = np.linalg.norm(small_bellman.mean_operator, 2)
    assert 0 < constants.L_f <= 2.0 * op_norm ** 2 * (1 + 1e-9)


def test_estimates_are_deterministic(small_split_quadratic, rng):
    points = [rng.standard_normal(3) for _ in range(3)]
    first = estimate_constants(small_split_quadratic, points, pairs=8, seed=5)
    second = estimate_constants(small_split_quadratic, points, pairs=8, seed=5)
    assert first == second
    curvature = np.linalg.norm(2.0 * small_split_quadratic.hessian + 2.0 * np.eye(3), 2)
    assert 0 < first.L_F <= curvature * (1 + 1e-9)


def test_estimate_constants_argument_errors(two_reward_toy):
    with pytest.raises(ConfigurationError):
        estimate_constants(two_reward_toy, [np.zeros(1)], pairs=4, seed=0)
    with pytest.raises(ConfigurationError):
        estimate_constants(two_reward_toy, [np.zeros(1), np.ones(1)], pairs=0, seed=0)


# --- theoretical default step ------------------------------------------------------------


def test_theoretical_step_is_refused_when_the_bound_is_vacuous(bellman_toy):
    with pytest.raises(ConfigurationError, match="set eta"):
        theoretical_step(bellman_toy, "scdf-svrg", batch=5, safety_factor=2.0, seed=0)


def test_theoretical_step_for_a_huge_batch(two_reward_toy):
    eta = theoretical_step(two_reward_toy, "scdf-svrg", batch=10 ** 6, safety_factor=1.0, seed=0)
    assert 0 < eta < 1.0 / (two_reward_toy.lam * two_reward_toy.n)


def test_theoretical_step_only_for_variance_reduced_methods(two_reward_toy):
    with pytest.raises(ConfigurationError):
        theoretical_step(two_reward_toy, "c-svrg", batch=10, safety_factor=1.0, seed=0)

"""Shared problem instances for the test suite."""
import numpy as np
import pytest

from compopt.problems import (
    MeanVarianceProblem,
    generate_bellman_toy,
    generate_mean_variance,
    generate_split_quadratic,
)


@pytest.fixture
def two_reward_toy():
    """Mean-variance with N = 1 and rewards 1 and 3."""
    return MeanVarianceProblem([[1.0], [3.0]], lam=1.0)


@pytest.fixture
def bias_toy():
    """Rewards 0 and 2, lambda = 1: x* = 1/3 while single-sample SGD settles at 1/5."""
    return MeanVarianceProblem([[0.0], [2.0]], lam=1.0)


@pytest.fixture
def small_bellman():
    return generate_bellman_toy(m=6, M=3, N=3, lam=0.1, seed=11)


@pytest.fixture
def bellman_toy():
    return generate_bellman_toy(m=20, M=10, N=10, lam=0.1, seed=5)


@pytest.fixture
def small_mean_variance():
    return generate_mean_variance(n=12, N=4, kappa=10.0, seed=3, lam=0.1)


@pytest.fixture
def small_split_quadratic():
    return generate_split_quadratic(m=5, M=3, N=3, alpha=2.0, lam=1.0, seed=9)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)

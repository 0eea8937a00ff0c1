"""Exact full-batch oracles of a composition problem.

Every function takes an optional QueryCounter; when given, it is charged one query
per individual G_j, dG_j, grad F_i or F_i evaluation.
"""
from typing import Optional

import numpy as np

from compopt.core.problem import CompositionProblem, QueryCounter


def inner_value(
    problem: CompositionProblem, x, counter: Optional[QueryCounter] = None
) -> np.ndarray:
    """G(x) = (1/m) sum_j G_j(x)."""
    x = problem.check_x(x)
    if counter is not None:
        counter.g_evals += problem.m
    return problem.eval_g_sum(range(problem.m), x) / problem.m


def inner_jacobian(
    problem: CompositionProblem, x, counter: Optional[QueryCounter] = None
) -> np.ndarray:
    """dG(x) = (1/m) sum_j dG_j(x), shape (dim_y, dim_x)."""
    x = problem.check_x(x)
    if counter is not None:
        counter.g_jacs += problem.m
    return problem.jac_g_sum(range(problem.m), x) / problem.m


def outer_gradient(
    problem: CompositionProblem, y, counter: Optional[QueryCounter] = None
) -> np.ndarray:
    """grad F(y) = (1/n) sum_i grad F_i(y)."""
    y = problem.check_y(y)
    if counter is not None:
        counter.f_grads += problem.n
    return problem.grad_f_batch(range(problem.n), y).mean(axis=0)


def outer_value(
    problem: CompositionProblem, y, counter: Optional[QueryCounter] = None
) -> float:
    """F(y) = (1/n) sum_i F_i(y)."""
    y = problem.check_y(y)
    if counter is not None:
        counter.f_evals += problem.n
    return float(problem.eval_f_batch(range(problem.n), y).mean())


def full_gradient(
    problem: CompositionProblem, x, counter: Optional[QueryCounter] = None
) -> np.ndarray:
    """grad P(x) = dG(x)^T grad F(G(x)) + lambda x."""
    x = problem.check_x(x)
    y = inner_value(problem, x, counter)
    jac = inner_jacobian(problem, x, counter)
    return jac.T @ outer_gradient(problem, y, counter) + problem.lam * x


def composition_value(
    problem: CompositionProblem, x, counter: Optional[QueryCounter] = None
) -> float:
    """F(G(x)) without the regulariser."""
    return outer_value(problem, inner_value(problem, x, counter), counter)


def objective(
    problem: CompositionProblem, x, counter: Optional[QueryCounter] = None
) -> float:
    """P(x) = (1/n) sum_i F_i(G(x)) + (lambda/2)||x||^2."""
    x = problem.check_x(x)
    return composition_value(problem, x, counter) + 0.5 * problem.lam * float(x @ x)


def component_gradient(problem: CompositionProblem, i: int, y, jac) -> np.ndarray:
    """(dG)^T grad F_i(y) for a given inner value and Jacobian (no metering)."""
    return jac.T @ problem.grad_f(i, y)

"""Problem abstraction, exact oracles, gradient checks and query metering."""
from compopt.core.gradcheck import check_gradients, random_trial_points
from compopt.core.oracles import (
    component_gradient,
    composition_value,
    full_gradient,
    inner_jacobian,
    inner_value,
    objective,
    outer_gradient,
    outer_value,
)
from compopt.core.problem import CompositionProblem, QueryCounter
from compopt.core.trace import Trace

__all__ = [
    "CompositionProblem",
    "QueryCounter",
    "Trace",
    "check_gradients",
    "component_gradient",
    "composition_value",
    "full_gradient",
    "inner_jacobian",
    "inner_value",
    "objective",
    "outer_gradient",
    "outer_value",
    "random_trial_points",
]

"""Variance-reduced estimators of the inner map G and its Jacobian."""
from compopt.estimators.minibatch import MiniBatch, full_minibatch, sample_minibatch
from compopt.estimators.saga import SagaTable, saga_estimate, saga_update_table
from compopt.estimators.svrg import SvrgSnapshot, svrg_estimate, take_snapshot

__all__ = [
    "MiniBatch",
    "SagaTable",
    "SvrgSnapshot",
    "full_minibatch",
    "sample_minibatch",
    "saga_estimate",
    "saga_update_table",
    "svrg_estimate",
    "take_snapshot",
]

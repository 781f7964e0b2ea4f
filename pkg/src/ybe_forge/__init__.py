"""Numerical forge for vertex and face R-matrices.

q-special functions, the six-vertex / eight-vertex / face R-matrices with
their dynamical twist, and the vertex-face gauge transformation, all
verified by machine-precision residual suites.
"""

from .qspecial import (QValue, TruncationPolicy, basic_hypergeometric,
                       exp_q, exp_q_inv, phi21, qnum, qpoch_finite,
                       qpoch_inf, theta_q)
from .tensor import DynamicalOperator, embed, kron, rel_residual, shift_leg

__all__ = [
    "QValue", "TruncationPolicy", "basic_hypergeometric", "exp_q",
    "exp_q_inv", "phi21", "qnum", "qpoch_finite", "qpoch_inf", "theta_q",
    "DynamicalOperator", "embed", "kron", "rel_residual", "shift_leg",
]

__version__ = "0.1.0"

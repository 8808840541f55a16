"""Numerics for q-Meixner Markov processes: transition measures, generators, paths."""

from .errors import InvalidTime, InvalidTimeOrder, NoConvergence, NonPositiveRecurrence, QMeixnerError
from .markov import (
    SmoothFn,
    apply_transition_poly,
    apply_transition_quad,
    c_operator,
    cauchy,
    check_chapman_kolmogorov,
    generator_fd,
    generator_martingale,
    generator_poly,
    generator_poly_basis,
    generator_smooth,
    h_operator,
    rescaled_second_diff_measure,
)
from .poly import Poly
from .qnum import ProcessParams, q_binomial, q_bracket, q_factorial
from .recurrence import (
    RecurrenceCoeffs,
    check_qqq_qm,
    eval_family,
    family_poly,
    from_martingale_basis,
    martingale_poly,
    martingale_poly_dt,
    nu_recurrence,
    to_martingale_basis,
    transition_recurrence,
)
from .simulate import PathSample, empirical_stats, sample_from_measure, simulate_paths
from .spectra import (
    DiscreteMeasure,
    JacobiMatrix,
    jacobi_matrix,
    nu_measure,
    quadrature,
    semicircle_measure,
    transition_measure,
    tridiag_eigen,
)

__version__ = "0.1.0"

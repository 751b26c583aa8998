"""Bounds on P_XY(E) in terms of P_X P_Y(E) and a dependence measure of (X, Y)."""
from ._backend import BACKEND
from .bounds import (
    BoundReport,
    Method,
    cor1_closed_form,
    dv_bound,
    ell_star,
    ell_star_inverse_bound,
    evaluate_all,
    expectation_gap_bound,
    invert_binary_kl,
    jinf_bound,
    lautum_bound,
    lautum_dv_bound,
    leakage_bound,
    literature_bound,
    subgaussian_bound,
)
from .dist import (
    EventMask,
    Joint,
    Pmf,
    conditional_y_given_x,
    event_probability,
    event_slice,
    marginals,
    product_of_marginals,
    validate,
)
from .harness import InstanceSpec, random_instance, run_suite, tightness_witness, verify_instance
from .measures import (
    MeasureSet,
    all_measures,
    binary_entropy,
    binary_kl,
    d_infinity,
    j_infinity,
    kl_divergence,
    lautum_information,
    max_leakage,
    mutual_information,
)

__version__ = "0.1.0"

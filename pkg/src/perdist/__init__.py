"""Periodic distributions as truncated Fourier coefficient fields.

Products of coefficient fields, compatible coefficient estimates over lattice
cones, discrete Sobolev wave-front estimates and products in shift-invariant
spaces.
"""
from .cones import LatticeCone, check_disjoint, count_growth_fit, disjoint_after_negation, intersection_count
from .compat import check_compatibility, cone_sum, estimate_decay_exponents
from .distributions import (ClosedFormSpec, CoefficientField, LocalizationWindow, corpus, from_closed_form,
                            order_estimate, periodize_localized)
from .lattice import bracket, peetre_bound, weighted_norm
from .product import (cauchy_product, cauchy_product_direct, cauchy_product_fft, product_order_bound,
                      sobolev_product_exponent)
from .traces import InconclusiveError, PartialSumTrace, Verdict

__version__ = "0.1.0"

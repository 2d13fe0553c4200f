"""Cauchy products of coefficient fields and the order bookkeeping for products.

The product of ``f1 = sum a_n e_n`` and ``f2 = sum b_n e_n`` has coefficients
``c_n = sum_j a_{n-j} b_j``.  Truncated inputs of radii ``N1`` and ``N2`` give an
exactly representable output of radius ``N1 + N2``.
"""
from __future__ import annotations

import numpy as np
import scipy.fft

from .distributions import CoefficientField
from .lattice import bracket_from_sq, squared_norms
from .traces import PartialSumTrace, dyadic_radii, trace_from_sums


class HypothesisError(ValueError):
    """An exponent hypothesis of the product theorem does not hold."""


def _check_pair(f1: CoefficientField, f2: CoefficientField) -> None:
    if f1.dim != f2.dim:
        raise ValueError(f"dimension mismatch: {f1.dim} vs {f2.dim}")


def cauchy_product_direct(f1: CoefficientField, f2: CoefficientField) -> CoefficientField:
    """Cauchy product by explicit shifted accumulation.

    For each nonzero ``b_j`` of the sparser factor the shifted copy
    ``b_j a_{. - j}`` is added into the output; this is the defining sum with no
    transform involved, so tiny coefficients keep their relative accuracy.
    """
    _check_pair(f1, f2)
    if np.count_nonzero(f2.data) > np.count_nonzero(f1.data):
        f1, f2 = f2, f1
    n1, n2 = f1.radius, f2.radius
    d = f1.dim
    out = np.zeros((2 * (n1 + n2) + 1,) * d, dtype=np.complex128)
    span = 2 * n1 + 1
    for pos in map(tuple, np.argwhere(f2.data != 0)):
        b = f2.data[pos]
        # j = pos - n2, output index n = m + j sits at m + j + n1 + n2 = m + n1 + pos
        sl = tuple(slice(p, p + span) for p in pos)
        out[sl] += b * f1.data
    return CoefficientField(out)


def cauchy_product_fft(f1: CoefficientField, f2: CoefficientField) -> CoefficientField:
    """Cauchy product by zero-padded FFT convolution (same contract as the direct path)."""
    _check_pair(f1, f2)
    size = 2 * (f1.radius + f2.radius) + 1
    shape = (scipy.fft.next_fast_len(size),) * f1.dim
    axes = tuple(range(f1.dim))
    spec = scipy.fft.fftn(f1.data, shape, axes=axes) * scipy.fft.fftn(f2.data, shape, axes=axes)
    full = scipy.fft.ifftn(spec, axes=axes)
    return CoefficientField(full[(slice(0, size),) * f1.dim])


def cauchy_product(f1: CoefficientField, f2: CoefficientField, method: str = "fft") -> CoefficientField:
    if method == "fft":
        return cauchy_product_fft(f1, f2)
    if method == "direct":
        return cauchy_product_direct(f1, f2)
    raise ValueError(f"unknown product method {method!r}; expected 'fft' or 'direct'")


def product_order_bound(alpha1: float, alpha2: float, beta1: float, beta2: float,
                        gamma: float, d: int) -> float:
    """Minimal order ``tau`` guaranteed for the product under compatible estimates.

    ``2 tau = max{4 gamma (alpha1 + alpha2) + 2 gamma + d + 1, 2 alpha1 + d + 1, 2 alpha2 + d + 1}``.

    Raises
    ------
    HypothesisError
        Naming the first violated inequality among ``alpha1 >= 0``, ``alpha2 >= 0``,
        ``beta1 >= alpha2``, ``beta2 >= alpha1`` and ``gamma >= 1``.
    """
    vals = dict(alpha1=alpha1, alpha2=alpha2, beta1=beta1, beta2=beta2, gamma=gamma)
    for name, v in vals.items():
        if not np.isfinite(v):
            raise HypothesisError(f"{name} must be finite, got {v}")
    checks = [
        (alpha1 >= 0, f"alpha1 >= 0 fails (alpha1={alpha1})"),
        (alpha2 >= 0, f"alpha2 >= 0 fails (alpha2={alpha2})"),
        (beta1 >= alpha2, f"beta1 >= alpha2 fails (beta1={beta1}, alpha2={alpha2})"),
        (beta2 >= alpha1, f"beta2 >= alpha1 fails (beta2={beta2}, alpha1={alpha1})"),
        (gamma >= 1, f"gamma >= 1 fails (gamma={gamma})"),
    ]
    for ok, msg in checks:
        if not ok:
            raise HypothesisError(msg)
    if int(d) != d or d < 1:
        raise HypothesisError(f"dimension must be a positive integer, got {d}")
    two_tau = max(4 * gamma * (alpha1 + alpha2) + 2 * gamma + d + 1,
                  2 * alpha1 + d + 1,
                  2 * alpha2 + d + 1)
    return 0.5 * two_tau


def sobolev_product_exponent(s1: float, s2: float) -> float:
    """Largest ``s`` with ``H^{s1} x H^{s2} -> H^s``-type bookkeeping: ``min(s1, s2)``."""
    if s1 + s2 < 0:
        raise HypothesisError(f"s1 + s2 >= 0 fails (s1={s1}, s2={s2})")
    return float(min(s1, s2))


def product_order_trace(f1: CoefficientField, f2: CoefficientField, tau: float,
                        radii=None, absolute: bool = True) -> PartialSumTrace:
    """Trace of ``sum_n |c_n|^2 <n>^{-2 tau}`` for products of growing truncations.

    At each radius ``R`` both factors are cut to the ball ``|k| <= R`` and the
    full product sum is taken.  A truncated product cannot see coefficients the
    inputs do not store, so this is the finite-data analogue of asking whether
    the infinite product series has order ``tau``.  With ``absolute`` the factors
    are replaced by ``|a_k|`` and ``|b_k|``, which dominates every phase choice
    and makes the sums non-decreasing in ``R``.
    """
    _check_pair(f1, f2)
    top = min(f1.radius, f2.radius)
    if radii is None:
        radii = dyadic_radii(top)
    radii = [int(r) for r in radii]
    if radii[-1] > top:
        raise ValueError(f"trace radius {radii[-1]} exceeds factor radius {top}")
    a = CoefficientField(np.abs(f1.data)) if absolute else f1
    b = CoefficientField(np.abs(f2.data)) if absolute else f2

    def total(r: int) -> float:
        c = cauchy_product_fft(a.resized(r).ball_truncated(r), b.resized(r).ball_truncated(r))
        w = bracket_from_sq(squared_norms(c.dim, c.radius), -2.0 * tau)
        return float(np.sum(np.abs(c.data) ** 2 * w))

    sums = [total(r) for r in radii]
    half = total(radii[-1] // 2)
    return trace_from_sums(radii, sums, half)

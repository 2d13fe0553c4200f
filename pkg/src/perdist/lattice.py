"""Multi-index arithmetic, Japanese-bracket weights and weighted sequence norms.

Fields live on a centered box ``{-N..N}^d`` stored as a numpy array of shape
``(2N+1,)*d``; index ``k`` sits at array position ``k + N``.
"""
from __future__ import annotations

import functools

import numpy as np

SUPPORTED_DIMS = (1, 2, 3)


def check_dim(dim: int) -> int:
    dim = int(dim)
    if dim not in SUPPORTED_DIMS:
        raise ValueError(f"dimension must be one of {SUPPORTED_DIMS}, got {dim}")
    return dim


@functools.lru_cache(maxsize=64)
def box_coords(dim: int, radius: int) -> tuple[np.ndarray, ...]:
    """Integer coordinate arrays of the box ``{-N..N}^d`` (read-only, cached)."""
    check_dim(dim)
    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * dim), indexing="ij")
    for g in grids:
        g.setflags(write=False)
    return tuple(grids)


@functools.lru_cache(maxsize=64)
def squared_norms(dim: int, radius: int) -> np.ndarray:
    """Exact integer ``|k|^2`` over the box, accumulated in int64."""
    out = np.zeros((2 * radius + 1,) * dim, dtype=np.int64)
    for g in box_coords(dim, radius):
        out += g * g
    out.setflags(write=False)
    return out


def bracket_from_sq(ksq, s: float):
    """``(1 + |k|^2)^(s/2)`` given precomputed ``|k|^2``."""
    return np.power(1.0 + np.asarray(ksq, dtype=np.float64), 0.5 * s)


def bracket(k, s: float = 1.0) -> float:
    """Japanese bracket weight ``<k>^s = (1 + |k|^2)^(s/2)``.

    ``k`` may be an integer multi-index (exact ``|k|^2``) or a real vector.

    >>> bracket((3, 4), 2)
    26.0
    """
    k = np.atleast_1d(np.asarray(k))
    if np.issubdtype(k.dtype, np.integer):
        ksq = int(sum(int(x) * int(x) for x in k))
    else:
        ksq = float(np.dot(k, k))
    return float((1.0 + ksq) ** (0.5 * s))


def weighted_norm(a, s: float, p: float = 2) -> float:
    """``(sum_k |a_k|^p <k>^{p s})^{1/p}`` over the stored box.

    Parameters
    ----------
    a : CoefficientField or ndarray
        Coefficients on a centered box of shape ``(2N+1,)*d``.
    s : float
        Smoothness exponent.
    p : {1, 2}
        Sequence-space exponent.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if p not in (1, 2):
        raise ValueError(f"only p in (1, 2) is supported, got {p}")
    data = np.asarray(getattr(a, "data", a))
    radius = (data.shape[0] - 1) // 2
    ksq = squared_norms(data.ndim, radius)
    terms = np.abs(data) ** p * bracket_from_sq(ksq, p * s)
    return float(np.sum(terms) ** (1.0 / p))


def peetre_bound(x, y, r: float) -> tuple[float, float]:
    """Both sides of ``<y>^r <= 2^{|r|/2} <x>^r <y-x>^{|r|}``.

    Returns
    -------
    lhs, rhs : float
        ``lhs <= rhs`` holds for every real ``x, y, r``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    lhs = bracket(y, r)
    rhs = 2.0 ** (abs(r) / 2.0) * bracket(x, r) * bracket(y - x, abs(r))
    return lhs, rhs


def peetre_bound_many(x: np.ndarray, y: np.ndarray, r: np.ndarray):
    """Vectorized :func:`peetre_bound` over rows of ``x, y`` (shape ``(n, d)``)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    bx = 1.0 + np.sum(x * x, axis=-1)
    by = 1.0 + np.sum(y * y, axis=-1)
    byx = 1.0 + np.sum((y - x) ** 2, axis=-1)
    lhs = by ** (0.5 * r)
    rhs = 2.0 ** (0.5 * np.abs(r)) * bx ** (0.5 * r) * byx ** (0.5 * np.abs(r))
    return lhs, rhs

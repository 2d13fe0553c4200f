"""Partial-sum traces and the convergence classifier.

A truncated coefficient field cannot prove that an infinite weighted sum is
finite.  Instead the cumulative sums ``S(R)`` over Euclidean balls ``|k| <= R``
are recorded at a few (normally dyadic) radii and classified:

* ``convergent``  if ``S(Rmax)/S(Rmax/2) - 1 < 0.05`` and the tail slope < 0.05
* ``divergent``   if the tail slope > 0.2
* ``inconclusive`` otherwise.

The tail slope is the least-squares slope of ``log(dS/dlog R)`` against
``log R`` over the last three shells.  Power-law terms summing to ``R^q`` give
slope ``q``; logarithmic growth gives slope 0 and is caught by the ratio test.
"""
from __future__ import annotations

import enum
import io
from dataclasses import dataclass

import numpy as np

RATIO_TOL = 0.05
CONVERGENT_SLOPE = 0.05
DIVERGENT_SLOPE = 0.2
TAIL_SHELLS = 3
# increments below this fraction of the total count as exactly zero
ZERO_INCREMENT = 1e-13


class Verdict(str, enum.Enum):
    CONVERGENT = "convergent"
    DIVERGENT = "divergent"
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:
        return self.value


class InconclusiveError(RuntimeError):
    """A decision needed a definite verdict but the trace sat in the dead band."""


@dataclass(frozen=True)
class PartialSumTrace:
    """Cumulative weighted sums at increasing radii plus their classification."""

    radii: np.ndarray
    sums: np.ndarray
    slope: float
    ratio: float
    verdict: Verdict
    local_slopes: np.ndarray

    @property
    def convergent(self) -> bool:
        return self.verdict is Verdict.CONVERGENT

    @property
    def divergent(self) -> bool:
        return self.verdict is Verdict.DIVERGENT

    def to_dict(self) -> dict:
        return {
            "radii": [int(r) for r in self.radii],
            "sums": [float(x) for x in self.sums],
            "slope": _finite_or_none(self.slope),
            "ratio": _finite_or_none(self.ratio),
            "verdict": self.verdict.value,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("radius,sum,slope\n")
        for r, s, sl in zip(self.radii, self.sums, self.local_slopes):
            buf.write(f"{int(r)},{float(s):.17g},{float(sl):.17g}\n")
        return buf.getvalue()


def _finite_or_none(x: float):
    x = float(x)
    return x if np.isfinite(x) else None


def dyadic_radii(radius: int, smallest: int = 4) -> list[int]:
    """Powers of two from ``smallest`` up to ``radius`` (``radius`` appended)."""
    if radius < smallest:
        raise ValueError(f"radius {radius} below smallest trace radius {smallest}")
    out = []
    r = smallest
    while r <= radius:
        out.append(r)
        r *= 2
    if out[-1] != radius:
        out.append(radius)
    return out


def cumulative_by_radius(terms: np.ndarray, ksq: np.ndarray) -> np.ndarray:
    """``C[q] = sum of terms with |k|^2 <= q`` for every integer ``q``."""
    binned = np.bincount(ksq.ravel(), weights=np.asarray(terms, dtype=np.float64).ravel())
    return np.cumsum(binned)


def _sum_at(cum: np.ndarray, r: int) -> float:
    return float(cum[min(r * r, cum.size - 1)])


def classify(radii, sums, half_sum: float) -> tuple[float, float, Verdict, np.ndarray]:
    """Classify a cumulative trace.

    Parameters
    ----------
    radii, sums : sequence
        Increasing radii and the cumulative sums there.
    half_sum : float
        ``S(Rmax // 2)``, used by the tail increment ratio.

    Returns
    -------
    slope, ratio, verdict, local_slopes
    """
    radii = np.asarray(radii, dtype=np.float64)
    sums = np.asarray(sums, dtype=np.float64)
    total = sums[-1]
    local = np.full(radii.shape, np.nan)
    if total <= 0.0:
        return -np.inf, 0.0, Verdict.CONVERGENT, local

    ratio = total / half_sum - 1.0 if half_sum > 0.0 else np.inf
    inc = np.diff(sums)
    inc = np.where(inc <= ZERO_INCREMENT * total, 0.0, inc)
    density = inc / np.diff(np.log(radii))
    with np.errstate(divide="ignore"):
        logd = np.log(density)
    logr = np.log(radii[1:])
    if logd.size >= 2:
        with np.errstate(invalid="ignore"):
            local[2:] = np.diff(logd) / np.diff(logr)

    tail_d = density[-TAIL_SHELLS:]
    tail_logd = logd[-TAIL_SHELLS:]
    tail_logr = logr[-TAIL_SHELLS:]
    if tail_d.size == 0 or tail_d[-1] == 0.0:
        slope = -np.inf
    else:
        keep = tail_d > 0.0
        if np.count_nonzero(keep) >= 2:
            slope = float(np.polyfit(tail_logr[keep], tail_logd[keep], 1)[0])
        else:
            slope = np.nan

    slope_ok = np.isnan(slope) or slope < CONVERGENT_SLOPE
    if ratio < RATIO_TOL and slope_ok:
        verdict = Verdict.CONVERGENT
    elif not np.isnan(slope) and slope > DIVERGENT_SLOPE:
        verdict = Verdict.DIVERGENT
    else:
        verdict = Verdict.INCONCLUSIVE
    return float(slope), float(ratio), verdict, local


def trace_from_terms(terms: np.ndarray, ksq: np.ndarray, radii) -> PartialSumTrace:
    """Build and classify the trace of nonnegative ``terms`` indexed by ``|k|^2``."""
    radii = [int(r) for r in radii]
    if len(radii) < 2 or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError(f"radii must be increasing with at least two entries: {radii}")
    cum = cumulative_by_radius(terms, ksq)
    sums = np.array([_sum_at(cum, r) for r in radii])
    half = _sum_at(cum, radii[-1] // 2)
    slope, ratio, verdict, local = classify(radii, sums, half)
    return PartialSumTrace(np.array(radii), sums, slope, ratio, verdict, local)


def trace_from_sums(radii, sums, half_sum: float) -> PartialSumTrace:
    """Classify sums that were accumulated elsewhere (e.g. by growing truncations)."""
    radii = np.asarray([int(r) for r in radii])
    sums = np.asarray(sums, dtype=np.float64)
    slope, ratio, verdict, local = classify(radii, sums, half_sum)
    return PartialSumTrace(radii, sums, slope, ratio, verdict, local)

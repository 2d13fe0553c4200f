"""Discrete Sobolev wave-front estimation from localized coefficient decay.

A point ``(x0, xi0)`` is H^s-regular for ``f`` when, for a window ``psi``
around ``x0`` and an open cone ``Gamma`` around ``xi0``, the coefficients
``a_n`` of ``(f psi)_per`` satisfy ``sum_{n in Gamma} |a_n|^2 <n>^{2s} < inf``.
Here the sum is replaced by a :class:`~perdist.traces.PartialSumTrace` and
round cones by the polyhedral cones of :meth:`LatticeCone.circular`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .compat import cone_sum
from .cones import LatticeCone, angular_margin, uniform_directions
from .distributions import (CoefficientField, LocalizationWindow, default_radii,
                            periodize_localized)
from .product import cauchy_product_fft
from .traces import PartialSumTrace, Verdict

S_MIN, S_MAX, S_STEP = -6.0, 6.0, 0.05
DEFAULT_APERTURE = 20.0
# above this many multiply-adds the localization falls back to FFT convolution
DIRECT_BUDGET = 3 * 10**8


class PreconditionError(ValueError):
    """The hypothesis of a regularity check is not met by the data."""


def direction_cone(xi0, theta_deg: float = DEFAULT_APERTURE) -> LatticeCone:
    """Polyhedral cone of half-angle ``theta_deg`` about ``xi0`` (a half-line in d=1)."""
    xi0 = np.atleast_1d(np.asarray(xi0, dtype=np.float64))
    if not 0.0 < theta_deg < 90.0:
        raise ValueError("aperture must lie in (0, 90) degrees")
    if not np.any(xi0):
        raise ValueError("direction must be nonzero")
    return LatticeCone.circular(xi0, theta_deg)


def _window_for(x0, window: LocalizationWindow | None, dim: int) -> LocalizationWindow:
    x0 = tuple(float(v) for v in np.atleast_1d(x0))
    if len(x0) != dim:
        raise ValueError(f"base point {x0} does not match dimension {dim}")
    if window is None:
        return LocalizationWindow(x0)
    if not np.allclose(window.center, x0):
        raise ValueError(f"window centered at {window.center}, expected {x0}")
    return window


def localize_field(f, window: LocalizationWindow, radius: int) -> CoefficientField:
    """Coefficients of ``(f psi)_per`` on the box of the given radius.

    ``f`` may be grid samples (FFT quadrature, see
    :func:`~perdist.distributions.periodize_localized`) or a coefficient field.
    For a field, a sparse direct sum against the closed-form window
    coefficients is used when affordable; it keeps small coefficients accurate
    to relative rounding, which matters when weights ``<n>^{2s}`` are large.
    Dense fields go through FFT convolution with absolute error near 1e-16.
    """
    if isinstance(f, np.ndarray):
        return periodize_localized(f, window, radius)
    if f.dim != window.dim:
        raise ValueError(f"window dimension {window.dim} does not match field dimension {f.dim}")
    if f.radius < radius:
        raise ValueError(f"field radius {f.radius} below localization radius {radius}")
    d, rf = f.dim, f.radius
    wc = window.coefficients(rf + radius).data
    nz = np.argwhere(f.data != 0)
    if nz.shape[0] * (2 * radius + 1) ** d <= DIRECT_BUDGET:
        out = np.zeros((2 * radius + 1,) * d, dtype=np.complex128)
        span = 2 * radius + 1
        for pos in map(tuple, nz):
            start = [2 * rf - p for p in pos]
            out += f.data[pos] * wc[tuple(slice(s, s + span) for s in start)]
        return CoefficientField(out)
    return cauchy_product_fft(f, CoefficientField(wc)).resized(radius)


def _default_radius(f) -> int:
    if isinstance(f, np.ndarray):
        return f.shape[0] // 4
    return f.radius // 2


def _prepare(f, x0, window, radius):
    dim = f.ndim if isinstance(f, np.ndarray) else f.dim
    window = _window_for(x0, window, dim)
    radius = _default_radius(f) if radius is None else int(radius)
    return localize_field(f, window, radius)


def regularity_trace(f, x0, xi0, s: float, theta_deg: float = DEFAULT_APERTURE,
                     window: LocalizationWindow | None = None, radius: int | None = None) -> PartialSumTrace:
    """Cone trace of the localized coefficients at exponent ``+s``."""
    loc = _prepare(f, x0, window, radius)
    return cone_sum(loc, direction_cone(xi0, theta_deg), s, default_radii(loc.radius))


def is_regular_at(f, x0, xi0, s: float, theta_deg: float = DEFAULT_APERTURE,
                  window: LocalizationWindow | None = None, radius: int | None = None) -> Verdict:
    """``convergent`` means ``(x0, xi0)`` is judged outside ``WF_s(f)``.

    ``divergent`` puts it inside; ``inconclusive`` is returned as is.
    """
    return regularity_trace(f, x0, xi0, s, theta_deg, window, radius).verdict


@dataclass(frozen=True)
class Threshold:
    """Critical exponent of a cone trace.

    ``lower`` is the largest grid ``s`` judged convergent and ``upper`` the
    smallest judged divergent; the dead band between them is inconclusive.
    ``s_star`` is their midpoint, ``+inf`` when every tested ``s`` is
    regular, ``-inf`` when none is, and ``nan`` when one side of the band is
    missing.
    """

    s_star: float
    lower: float
    upper: float

    @property
    def interval(self) -> tuple[float, float]:
        return (self.lower, self.upper)

    def to_dict(self) -> dict:
        conv = lambda x: x if np.isfinite(x) else (None if np.isnan(x) else ("inf" if x > 0 else "-inf"))
        return {"s_star": conv(self.s_star), "lower": conv(self.lower), "upper": conv(self.upper)}


def _grid() -> np.ndarray:
    n = int(round((S_MAX - S_MIN) / S_STEP))
    return np.round(S_MIN + S_STEP * np.arange(n + 1), 10)


def _first_true(pred, grid) -> int:
    """Smallest index with ``pred`` true, assuming monotonicity; ``len(grid)`` if none."""
    lo, hi = 0, len(grid)
    while lo < hi:
        mid = (lo + hi) // 2
        if pred(grid[mid]):
            hi = mid
        else:
            lo = mid + 1
    return lo


def threshold_of(loc: CoefficientField, cone: LatticeCone) -> Threshold:
    """Bisect the 0.05 grid on ``[-6, 6]`` for both edges of the dead band."""
    grid = _grid()
    radii = default_radii(loc.radius)
    cache = {}

    def verdict(s):
        if s not in cache:
            cache[s] = cone_sum(loc, cone, s, radii).verdict
        return cache[s]

    i_not_conv = _first_true(lambda s: verdict(s) is not Verdict.CONVERGENT, grid)
    i_div = _first_true(lambda s: verdict(s) is Verdict.DIVERGENT, grid)
    lower = grid[i_not_conv - 1] if i_not_conv > 0 else -math.inf
    upper = grid[i_div] if i_div < len(grid) else math.inf
    if i_not_conv == len(grid):
        return Threshold(math.inf, lower, upper)
    if i_div == 0:
        return Threshold(-math.inf, lower, upper)
    if np.isfinite(lower) and np.isfinite(upper):
        return Threshold(0.5 * (lower + upper), lower, upper)
    return Threshold(math.nan, lower, upper)


def sobolev_threshold(f, x0, xi0, theta_deg: float = DEFAULT_APERTURE,
                      window: LocalizationWindow | None = None, radius: int | None = None) -> Threshold:
    """Critical Sobolev exponent of ``f`` at ``(x0, xi0)``."""
    loc = _prepare(f, x0, window, radius)
    return threshold_of(loc, direction_cone(xi0, theta_deg))


@dataclass
class DirectionResult:
    direction: np.ndarray
    aperture_deg: float
    verdicts: dict
    trace: PartialSumTrace
    threshold: Threshold | None = None

    def to_dict(self) -> dict:
        return {
            "direction": [float(x) for x in self.direction],
            "aperture_deg": float(self.aperture_deg),
            "verdicts": {f"{s:g}": v.value for s, v in self.verdicts.items()},
            "threshold": None if self.threshold is None else self.threshold.to_dict(),
            "trace": self.trace.to_dict(),
        }


@dataclass
class WavefrontReport:
    """Per-direction verdicts at a base point and the arcs covering the singular ones."""

    x0: tuple
    s: float
    aperture_deg: float
    directions: list
    cover: list = field(default_factory=list)

    @property
    def non_regular(self) -> list[np.ndarray]:
        """Directions whose trace at ``s`` is not convergent (divergent or inconclusive)."""
        return [r.direction for r in self.directions if r.verdicts[self.s] is not Verdict.CONVERGENT]

    @property
    def singular(self) -> list[np.ndarray]:
        """Directions classified divergent at ``s``."""
        return [r.direction for r in self.directions if r.verdicts[self.s] is Verdict.DIVERGENT]

    def to_dict(self) -> dict:
        return {
            "x0": [float(v) for v in self.x0],
            "s": float(self.s),
            "aperture_deg": float(self.aperture_deg),
            "non_regular": [[float(x) for x in d] for d in self.non_regular],
            "cover": self.cover,
            "directions": [r.to_dict() for r in self.directions],
        }

    def to_csv(self) -> str:
        """One row per direction: angle (d=2) or components, verdict and the top trace sum."""
        lines = ["direction,angle_deg,verdict,slope,ratio,sum"]
        for r in self.directions:
            ang = math.degrees(math.atan2(r.direction[1], r.direction[0])) if r.direction.size == 2 else float("nan")
            comp = " ".join(f"{float(x):.17g}" for x in r.direction)
            t = r.trace
            lines.append(f"{comp},{ang:.17g},{r.verdicts[self.s].value},"
                         f"{t.slope:.17g},{t.ratio:.17g},{t.sums[-1]:.17g}")
        return "\n".join(lines) + "\n"


def _cover_arcs(dirs: np.ndarray, bad: np.ndarray, theta_deg: float) -> list[dict]:
    """Group circularly consecutive flagged d=2 directions into arcs widened by the aperture."""
    n = len(dirs)
    if not bad.any():
        return []
    angles = np.degrees(np.arctan2(dirs[:, 1], dirs[:, 0]))
    if bad.all():
        return [{"center_deg": 0.0, "half_angle_deg": 180.0, "direction": [1.0, 0.0]}]
    start = int(np.flatnonzero(~bad)[0])
    arcs, run = [], []
    for step in range(1, n + 1):
        i = (start + step) % n
        if bad[i]:
            run.append(i)
        elif run:
            arcs.append(run)
            run = []
    if run:
        arcs.append(run)
    out = []
    for run in arcs:
        a0 = angles[run[0]]
        span = (angles[run[-1]] - a0) % 360.0
        center = a0 + span / 2
        c = math.radians(center)
        out.append({"center_deg": float((center + 180.0) % 360.0 - 180.0),
                    "half_angle_deg": float(span / 2 + theta_deg),
                    "direction": [math.cos(c), math.sin(c)]})
    return out


def wavefront_scan(f, x0, s: float, n_directions: int = 16, theta_deg: float = DEFAULT_APERTURE,
                   window: LocalizationWindow | None = None, radius: int | None = None,
                   s_grid=None, thresholds: bool = False) -> WavefrontReport:
    """Regularity verdicts over a uniform direction grid at base point ``x0``.

    Parameters
    ----------
    s : float
        Exponent at which the non-regular set is reported.
    s_grid : sequence of float, optional
        Further exponents at which verdicts are recorded.
    thresholds : bool
        Also bisect the critical exponent per direction.
    """
    loc = _prepare(f, x0, window, radius)
    d = loc.dim
    if d == 2 and n_directions < 8:
        raise ValueError("a d=2 scan needs at least 8 directions")
    dirs = uniform_directions(d, n_directions)
    radii = default_radii(loc.radius)
    svals = sorted({float(s), *(float(v) for v in (s_grid or ()))})
    results = []
    for u in dirs:
        cone = direction_cone(u, theta_deg)
        verdicts, trace = {}, None
        for sv in svals:
            t = cone_sum(loc, cone, sv, radii)
            verdicts[sv] = t.verdict
            if sv == float(s):
                trace = t
        thr = threshold_of(loc, cone) if thresholds else None
        results.append(DirectionResult(u, theta_deg, verdicts, trace, thr))
    bad = np.array([r.verdicts[float(s)] is not Verdict.CONVERGENT for r in results])
    if d == 2:
        cover = _cover_arcs(dirs, bad, theta_deg)
    else:
        cover = [{"direction": [float(x) for x in u], "half_angle_deg": float(theta_deg)}
                 for u, b in zip(dirs, bad) if b]
    x0t = tuple(float(v) for v in np.atleast_1d(x0))
    return WavefrontReport(x0t, float(s), float(theta_deg), results, cover)


def converse_regularity_check(a: CoefficientField, cone: LatticeCone, s: float, subcone: LatticeCone,
                              window: LocalizationWindow | None = None, x0=None,
                              radius: int | None = None) -> bool:
    """Does cone-summability of global coefficients survive localization?

    Requires ``sum_{n in cone} |a_n|^2 <n>^{2s}`` to classify convergent and
    ``subcone`` to sit strictly inside ``cone``.  Returns whether the
    ``subcone`` trace of ``(a psi)_per`` at exponent ``s`` is convergent.

    Raises
    ------
    PreconditionError
        If the global cone trace is not convergent.
    ValueError
        If ``subcone`` is not compactly contained in ``cone``.
    """
    if angular_margin(subcone, cone) <= 0:
        raise ValueError("subcone must be compactly contained in the cone (angular margin <= 0)")
    pre = cone_sum(a, cone, s, default_radii(a.radius))
    if not pre.convergent:
        raise PreconditionError(
            f"global cone trace at s={s} is {pre.verdict.value} (slope {pre.slope:.3g}, ratio {pre.ratio:.3g})")
    if x0 is None:
        x0 = window.center if window is not None else (0.0,) * a.dim
    loc = _prepare(a, x0, window, radius)
    return cone_sum(loc, subcone, s, default_radii(loc.radius)).convergent

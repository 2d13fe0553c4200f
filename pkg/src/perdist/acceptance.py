"""Acceptance checks, one function per criterion, plus a table runner."""
from __future__ import annotations

import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io
from .compat import check_compatibility, cone_sum, estimate_decay_exponents
from .cones import (LatticeCone, cone_separation_constant, count_brute_force, count_growth_fit,
                    intersection_count, standard_pair)
from .distributions import ClosedFormSpec, CoefficientField, LocalizationWindow, corpus, from_closed_form
from .lattice import peetre_bound_many, weighted_norm
from .product import cauchy_product_direct, cauchy_product_fft, product_order_trace
from .shiftinv import (ShiftInvariantElement, amalgam_norm, bspline, fiberize, gaussian, hat,
                       si_product, synthesize)
from .traces import Verdict
from .wavefront import localize_field, sobolev_threshold, wavefront_scan, direction_cone


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number}. {self.name} ({self.seconds:.1f} s): {self.detail}"


def _random_field(rng, dim: int, radius: int) -> CoefficientField:
    shape = (2 * radius + 1,) * dim
    return CoefficientField(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def _quadrature_product(f1: CoefficientField, f2: CoefficientField) -> np.ndarray:
    """Coefficients of the pointwise product of two 1D partial sums, by sampling."""
    n = f1.radius + f2.radius
    grid = 2 * n + 2
    vals = f1.evaluate(grid) * f2.evaluate(grid)
    spec = np.fft.fft(vals) / grid
    return spec[np.arange(-n, n + 1) % grid]


def criterion_1(seed: int = 0) -> CriterionResult:
    """FFT and direct Cauchy products agree; d=1 also matches quadrature of partial-sum products."""
    rng = np.random.default_rng(seed)
    worst_fft = worst_quad = 0.0
    for _ in range(50):
        d = int(rng.integers(1, 3))
        f1 = _random_field(rng, d, int(rng.integers(1, 33)))
        f2 = _random_field(rng, d, int(rng.integers(1, 33)))
        direct = cauchy_product_direct(f1, f2).data
        worst_fft = max(worst_fft, float(np.max(np.abs(cauchy_product_fft(f1, f2).data - direct))))
        if d == 1:
            worst_quad = max(worst_quad, float(np.max(np.abs(_quadrature_product(f1, f2) - direct))))
    ok = worst_fft <= 1e-10 and worst_quad <= 1e-10
    return ok, f"max |fft - direct| = {worst_fft:.2e}, max |quadrature - direct| = {worst_quad:.2e}"


def compat_pairs(seed: int = 0, radius: int = 128):
    """Ten cone_supported pairs on the standard cone pair with varied exponents and phases."""
    g1, g2 = standard_pair()
    rng = np.random.default_rng(seed)
    inside = [0.0, 0.25, 0.5, 0.0, 0.5, 0.25, 0.0, 0.5, 0.25, 0.0]
    outside = [-10.0, -8.0, -12.0, -8.0, -10.0, -12.0, -12.0, -8.0, -10.0, -9.0]
    pairs = []
    for i in range(10):
        s1, s2 = (int(x) for x in rng.integers(0, 2**31, size=2))
        f1 = from_closed_form(ClosedFormSpec("cone_supported", cone=g1, inside_exp=inside[i],
                                             outside_exp=outside[i], phase_seed=s1), radius)
        f2 = from_closed_form(ClosedFormSpec("cone_supported", cone=g2, inside_exp=inside[(i + 3) % 10],
                                             outside_exp=outside[(i + 5) % 10], phase_seed=s2), radius)
        pairs.append((f1, f2))
    return g1, g2, pairs


def criterion_2(seed: int = 0) -> CriterionResult:
    """Compatible pairs pass and their products converge at the reported order; comb x comb diverges."""
    g1, g2, pairs = compat_pairs(seed)
    fails, ratios, taus = [], [], []
    for i, (f1, f2) in enumerate(pairs):
        rep = check_compatibility(f1, [g1], f2, [g2])
        if not rep.verdict:
            fails.append(f"pair {i}: report false ({'; '.join(rep.diagnostics)})")
            continue
        tr = product_order_trace(f1, f2, rep.tau)
        taus.append(rep.tau)
        ratios.append(tr.ratio)
        if not (tr.convergent and tr.ratio < 0.05):
            fails.append(f"pair {i}: product trace {tr.verdict.value} (ratio {tr.ratio:.3g})")
    comb = corpus("dirac_comb", dim=2, radius=128)
    neg = product_order_trace(comb, comb, 12.0)
    if not (neg.divergent and neg.slope > 0.2):
        fails.append(f"comb x comb at tau=12: {neg.verdict.value} (slope {neg.slope:.3g})")
    detail = (f"{len(pairs) - sum(f.startswith('pair') for f in fails)}/10 pairs sound, "
              f"tau in [{min(taus, default=math.nan):g}, {max(taus, default=math.nan):g}], "
              f"max ratio {max(ratios, default=math.nan):.2e}; comb x comb slope {neg.slope:.2f}")
    if fails:
        detail += "; " + "; ".join(fails)
    return not fails, detail


def criterion_3(seed: int = 0) -> CriterionResult:
    """Counting growth for the standard pair: gamma <= 2.1, stable c/|n|^2, brute-force agreement."""
    g1, g2 = standard_pair()
    radii = (8, 16, 32, 64, 128)
    fit = count_growth_fit(g1, g2, radii=radii, n_directions=16)
    mismatches = 0
    for n, c in zip(fit.points, fit.counts):
        if count_brute_force(g1, g2, n) != c:
            mismatches += 1
    per_radius = {}
    for n, r, c in zip(fit.points, fit.norms, fit.counts):
        key = min(radii, key=lambda q: abs(q - r))
        per_radius[key] = max(per_radius.get(key, 0.0), c / r**2)
    top, prev = per_radius[128], per_radius[64]
    spread = abs(top - prev) / max(top, prev)
    ok = fit.gamma <= 2.1 and spread <= 0.25 and mismatches == 0
    return ok, (f"gamma_hat = {fit.gamma:.3f}, max c/|n|^2 = {prev:.3f} (r=64), {top:.3f} (r=128), "
                f"spread {spread:.1%}, brute-force mismatches {mismatches}/{len(fit.counts)}")


def criterion_4(seed: int = 0) -> CriterionResult:
    """Critical exponents of jump discontinuities and the direction scan of a 2D step."""
    sq = corpus("square_wave", radius=2048)
    st = corpus("sawtooth", radius=2048)
    t_sq = sobolev_threshold(sq, (0.0,), (1.0,))
    t_st = sobolev_threshold(st, (0.0,), (-1.0,))
    sq2 = corpus("tensor", radius=512, factors=("square_wave", "constant"))
    x0 = (0.0, 0.3)
    rep = wavefront_scan(sq2, x0, 1.0, n_directions=16, theta_deg=20.0)
    axis = np.array([1.0, 0.0])
    offaxis = [math.degrees(math.acos(min(1.0, abs(float(u @ axis))))) for u in rep.non_regular]
    scan_ok = bool(rep.non_regular) and all(a <= 25.0 for a in offaxis)
    t_2d = sobolev_threshold(sq2, x0, (1.0, 0.0))
    ok = (abs(t_sq.s_star - 0.5) <= 0.1 and abs(t_st.s_star - 0.5) <= 0.1
          and scan_ok and abs(t_2d.s_star - 0.5) <= 0.15)
    return ok, (f"s* square {t_sq.s_star:.3f}, sawtooth {t_st.s_star:.3f}, 2D step {t_2d.s_star:.3f}; "
                f"non-regular directions at s=1: {len(rep.non_regular)} within "
                f"{max(offaxis, default=0):.1f} deg of the x-axis")


def criterion_5(seed: int = 0) -> CriterionResult:
    """Peetre inequality on random triples and the cone separation constant."""
    rng = np.random.default_rng(seed)
    n = 100_000
    d = rng.integers(1, 4, size=n)
    x = rng.uniform(-100, 100, size=(n, 3))
    y = rng.uniform(-100, 100, size=(n, 3))
    mask = np.arange(3)[None, :] < d[:, None]
    x, y = x * mask, y * mask
    r = rng.uniform(-6, 6, size=n)
    lhs, rhs = peetre_bound_many(x, y, r)
    violations = int(np.count_nonzero(lhs > rhs))
    inner = LatticeCone.circular((1, 0), 15)
    outer = LatticeCone.circular((1, 0), 30)
    c100 = cone_separation_constant(inner, outer, 100)
    c200 = cone_separation_constant(inner, outer, 200)
    rel = abs(c200 - c100) / c100
    ok = violations == 0 and c100 > 0 and c200 > 0 and rel <= 0.10
    return ok, f"{violations} violations in {n} triples; separation {c100:.5f} (R=100), {c200:.5f} (R=200), change {rel:.2%}"


def gaussian_corpus():
    return [gaussian(0.5, M=256), gaussian(0.75, M=256), gaussian(1.0, M=256)]


def gaussian_hs_norm(width: float, s: float) -> float:
    from scipy.integrate import quad
    f = lambda x: width**2 * np.exp(-2 * np.pi * width**2 * x * x) * (1 + x * x) ** s
    return math.sqrt(2 * quad(f, 0, np.inf, epsabs=0, epsrel=1e-13, limit=200)[0])


def criterion_6(seed: int = 0) -> CriterionResult:
    """Fiberization is an isometry and commutes with integer shifts."""
    worst_iso = worst_shift = 0.0
    for g, w in zip(gaussian_corpus(), (0.5, 0.75, 1.0)):
        for s in (-1, 0, 1, 2):
            F = fiberize(g, s, 32)
            exact = gaussian_hs_norm(w, s)
            worst_iso = max(worst_iso, abs(F.norm() - exact) / exact)
        base = fiberize(g, 1, 32)
        for j in range(-2, 3):
            Fj = fiberize(g.shifted(j), 1, 32)
            phase = np.exp(-2j * np.pi * j * base.t)[:, None]
            worst_shift = max(worst_shift, float(np.max(np.abs(Fj.entries - phase * base.entries))))
    ok = worst_iso <= 1e-5 and worst_shift <= 1e-8
    return ok, f"max relative isometry defect {worst_iso:.2e}; max shift-identity defect {worst_shift:.2e}"


def direct_convolution(g1, g2):
    """Plain ``np.convolve`` of two grid functions with the 1/M quadrature weight."""
    from .shiftinv import GridFunction
    return GridFunction(np.convolve(g1.values, g2.values) / g1.M, g1.offset + g2.offset, g1.M)


def criterion_7(seed: int = 0) -> CriterionResult:
    """Synthesis of the product element equals the grid convolution of syntheses."""
    rng = np.random.default_rng(seed)
    M = 32
    gens = [hat(M), bspline(3, M), bspline(4, M)]
    worst = 0.0
    for i in range(20):
        p1, p2 = gens[i % 3], gens[(i // 3) % 3]
        a1 = CoefficientField(rng.standard_normal(2 * int(rng.integers(1, 9)) + 1))
        a2 = CoefficientField(rng.standard_normal(2 * int(rng.integers(1, 9)) + 1))
        e1 = ShiftInvariantElement([p1], [a1], 1.0)
        e2 = ShiftInvariantElement([p2], [a2], 1.0)
        prod = synthesize(si_product(e1, e2))
        ref = direct_convolution(synthesize(e1), synthesize(e2))
        start, stop = min(prod.offset, ref.offset), max(prod.stop, ref.stop)
        diff = prod.on_range(start, stop) - ref.on_range(start, stop)
        worst = max(worst, float(np.linalg.norm(diff) / np.linalg.norm(ref.values)))
    return worst <= 1e-6, f"max relative L2 defect {worst:.2e} over 20 random pairs"


def criterion_8(seed: int = 0) -> CriterionResult:
    """Invariant suites: partition sums, monotonicity, scaling, round-trips."""
    rng = np.random.default_rng(seed)
    fails = []

    # partition sums
    e = ShiftInvariantElement([hat(32)], [CoefficientField(np.ones(21))])
    f = synthesize(e)
    interior = f.values[(f.t >= -8) & (f.t <= 8)]
    if np.max(np.abs(interior - 1.0)) > 1e-12 or abs(amalgam_norm(hat(32)) - 1.0) > 1e-12:
        fails.append("hat partition of unity")
    a = _random_field(rng, 2, 24)
    g1, _ = standard_pair()
    for s in (-1.0, 0.0, 1.5):
        tin = cone_sum(a, g1, s, [4, 8, 16, 24])
        tout = cone_sum(a, g1, s, [4, 8, 16, 24], complement=True)
        full = weighted_norm(a.resized(24).ball_truncated(24), s) ** 2
        if abs(tin.sums[-1] + tout.sums[-1] - full) > 1e-10 * full:
            fails.append(f"cone partition at s={s}")

    # monotonicity in s and aperture
    sq2 = corpus("tensor", radius=256, factors=("square_wave", "constant"))
    loc = localize_field(sq2, LocalizationWindow((0.0, 0.3)), 128)
    rank = {Verdict.CONVERGENT: 0, Verdict.INCONCLUSIVE: 1, Verdict.DIVERGENT: 2}
    for u in ((1.0, 0.0), (np.cos(0.3), np.sin(0.3)), (0.0, 1.0)):
        prev = -1
        for s in np.arange(-1.0, 3.01, 0.25):
            v = rank[cone_sum(loc, direction_cone(u, 20.0), s).verdict]
            if v < prev:
                fails.append(f"verdict not monotone in s at direction {u}")
                break
            prev = v
        prev = 3
        for theta in (30.0, 20.0, 10.0, 5.0):
            v = rank[cone_sum(loc, direction_cone(u, theta), 1.0).verdict]
            if v > prev:
                fails.append(f"verdict not monotone in aperture at direction {u}")
                break
            prev = v

    # scaling
    g1, g2 = standard_pair()
    fc = from_closed_form(ClosedFormSpec("cone_supported", cone=g1, inside_exp=0.0, outside_exp=-10.0), 64)
    base = estimate_decay_exponents(fc, g1)
    for c in (1e-6, -3.0, 2.5j):
        p = estimate_decay_exponents(c * fc, g1)
        if (p.alpha, p.beta) != (base.alpha, base.beta):
            fails.append(f"exponents change under scaling by {c}")

    # round-trips
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        for dim, rad in ((1, 17), (2, 9), (3, 4)):
            fld = _random_field(rng, dim, rad) * 10.0 ** rng.uniform(-300, 300)
            io.write_field(fld, tmp / "f.json")
            back = io.read_field(tmp / "f.json")
            if back.data.tobytes() != fld.data.tobytes():
                fails.append(f"field round-trip d={dim}")
        io.write_cone(g2, tmp / "c.json")
        if io.read_cone(tmp / "c.json") != g2:
            fails.append("cone round-trip")
        gen = bspline(4, 32)
        io.write_generator(gen, tmp / "g.csv")
        back = io.read_generator(tmp / "g.csv")
        if back.values.tobytes() != gen.values.tobytes() or (back.offset, back.M) != (gen.offset, gen.M):
            fails.append("generator round-trip")
    return not fails, "all invariants hold" if not fails else "; ".join(fails)


CRITERIA = [
    (1, "product oracle equivalence", criterion_1),
    (2, "compatible products converge", criterion_2),
    (3, "cone counting growth", criterion_3),
    (4, "jump thresholds and direction scan", criterion_4),
    (5, "Peetre inequality and cone separation", criterion_5),
    (6, "fiberization isometry and shifts", criterion_6),
    (7, "shift-invariant product synthesis", criterion_7),
    (8, "invariant suites", criterion_8),
]

TIME_LIMITS = {1: 30.0, 3: 60.0}
TOTAL_LIMIT = 600.0


def run_criterion(number: int, seed: int = 0) -> CriterionResult:
    num, name, func = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        ok, detail = func(seed)
    except Exception as exc:  # a crash is a failed criterion, reported in the table
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    limit = TIME_LIMITS.get(num)
    if limit is not None and dt > limit:
        ok, detail = False, f"{detail}; runtime {dt:.1f} s exceeds {limit:g} s"
    return CriterionResult(num, name, bool(ok), detail, dt)


def run_all(seed: int = 0, only=None, echo=None) -> list[CriterionResult]:
    results = []
    t0 = time.perf_counter()
    for num, _, _ in CRITERIA:
        if only and num not in only:
            continue
        res = run_criterion(num, seed)
        results.append(res)
        if echo is not None:
            echo(res.line())
    total = time.perf_counter() - t0
    if not only and results[-1].number == 8 and total > TOTAL_LIMIT:
        last = results[-1]
        results[-1] = CriterionResult(8, last.name, False,
                                      f"{last.detail}; full suite took {total:.0f} s > {TOTAL_LIMIT:g} s", last.seconds)
    return results


def format_table(results) -> str:
    return "\n".join(r.line() for r in results)

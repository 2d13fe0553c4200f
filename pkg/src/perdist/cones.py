"""Polyhedral lattice cones, negated-cone disjointness and intersection counting.

A cone is stored as a list of half-spaces ``<v_i, x - apex> >= 0`` (or ``> 0``
when the half-space is strict) with *integer* normals, so lattice membership
is decided exactly in integer arithmetic.  Real or rational normals are
rationalized on construction.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog, nnls

from .lattice import check_dim

# real normals are rounded to integers of at most this magnitude
RATIONAL_SCALE = 10**6
_LP_TOL = 1e-9


class UnboundedRegionError(ValueError):
    """``Gamma2 and (n - Gamma1)`` is unbounded, so its lattice count is infinite."""


class CertificateWarning(UserWarning):
    """Disjointness could only be decided by lattice probing."""


def _integer_normal(normal) -> tuple[int, ...]:
    """Primitive integer normal; real entries are scaled to ``RATIONAL_SCALE`` and rounded."""
    vals = list(normal)
    exact = all(isinstance(x, (int, np.integer, Fraction)) or float(x).is_integer() for x in vals)
    if exact:
        fracs = [x if isinstance(x, Fraction) else Fraction(int(x)) for x in vals]
        lcm = 1
        for f in fracs:
            lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
        ints = [int(f * lcm) for f in fracs]
    else:
        arr = np.asarray(vals, dtype=np.float64)
        peak = np.max(np.abs(arr))
        if peak == 0.0:
            ints = [0] * len(vals)
        else:
            ints = [int(v) for v in np.rint(arr * (RATIONAL_SCALE / peak))]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    if g == 0:
        raise ValueError(f"half-space normal must be nonzero, got {vals}")
    return tuple(v // g for v in ints)


@dataclass(frozen=True)
class LatticeCone:
    """Polyhedral cone ``{x : <v_i, x - apex> >= 0 (or > 0)}`` in ``R^d``.

    Use :meth:`from_halfspaces` or :meth:`circular` rather than the raw
    constructor unless the normals are already primitive integer vectors.
    """

    dim: int
    normals: tuple[tuple[int, ...], ...]
    strict: tuple[bool, ...]
    apex: tuple[int, ...] = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        check_dim(self.dim)
        if self.apex is None:
            object.__setattr__(self, "apex", (0,) * self.dim)
        object.__setattr__(self, "apex", tuple(int(a) for a in self.apex))
        object.__setattr__(self, "normals", tuple(_integer_normal(v) for v in self.normals))
        object.__setattr__(self, "strict", tuple(bool(s) for s in self.strict))
        if not self.normals:
            raise ValueError("a cone needs at least one half-space (R^d itself is excluded)")
        if len(self.strict) != len(self.normals):
            raise ValueError("one strict flag per half-space is required")
        if any(len(v) != self.dim for v in self.normals) or len(self.apex) != self.dim:
            raise ValueError("normals and apex must match the cone dimension")
        if _is_empty(self.normal_array, self.strict_array):
            raise ValueError(f"cone {self.label or self.normals} is empty")

    # construction -----------------------------------------------------------------
    @classmethod
    def from_halfspaces(cls, dim: int, halfspaces, apex=None, label: str = "") -> "LatticeCone":
        """Build from ``[(normal, strict), ...]`` pairs (normals may be real)."""
        normals, strict = [], []
        for h in halfspaces:
            if isinstance(h, dict):
                normals.append(h["normal"])
                strict.append(h.get("strict", False))
            else:
                normals.append(h[0])
                strict.append(h[1] if len(h) > 1 else False)
        return cls(dim, tuple(tuple(v) for v in normals), tuple(strict), apex, label)

    @classmethod
    def circular(cls, direction, half_angle_deg: float, facets: int = 16,
                 strict: bool = False, label: str = "") -> "LatticeCone":
        """Polyhedral stand-in for the round cone of directions within ``half_angle``.

        In ``d=1`` this is the half-line containing ``direction``; in ``d=2`` the
        sector bounded by the two rays at ``+-half_angle``; in ``d=3`` a cone
        over a regular ``facets``-gon circumscribing the circle of that angle.
        """
        u = np.asarray(direction, dtype=np.float64)
        dim = u.size
        u = u / np.linalg.norm(u)
        if dim == 1:
            return cls(1, ((1 if u[0] > 0 else -1,),), (True,), label=label)
        theta = math.radians(half_angle_deg)
        if not 0.0 < theta < math.pi / 2:
            raise ValueError("half angle must lie in (0, 90) degrees")
        if dim == 2:
            c, s = math.cos(theta), math.sin(theta)
            lo = np.array([c * u[0] + s * u[1], -s * u[0] + c * u[1]])
            hi = np.array([c * u[0] - s * u[1], s * u[0] + c * u[1]])
            normals = [(-lo[1], lo[0]), (hi[1], -hi[0])]
            return cls.from_halfspaces(2, [(n, strict) for n in normals], label=label)
        # d = 3: orthonormal frame (u, e1, e2); facet normals tilt toward -u
        helper = np.eye(3)[np.argmin(np.abs(u))]
        e1 = np.cross(u, helper)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(u, e1)
        normals = []
        for j in range(facets):
            phi = 2 * math.pi * j / facets
            w = math.cos(phi) * e1 + math.sin(phi) * e2
            normals.append(math.sin(theta) * u - math.cos(theta) * w)
        return cls.from_halfspaces(3, [(tuple(n), strict) for n in normals], label=label)

    # views ---------------------------------------------------------------------------
    @property
    def normal_array(self) -> np.ndarray:
        return np.array(self.normals, dtype=np.int64).reshape(-1, self.dim)

    @property
    def strict_array(self) -> np.ndarray:
        return np.array(self.strict, dtype=bool)

    @property
    def apex_array(self) -> np.ndarray:
        return np.array(self.apex, dtype=np.int64)

    def negated(self) -> "LatticeCone":
        """``-Gamma``: negated normals and apex, same strictness."""
        return LatticeCone(self.dim, tuple(tuple(-v for v in n) for n in self.normals),
                           self.strict, tuple(-a for a in self.apex),
                           label=f"-{self.label}" if self.label else "")

    def translated(self, shift) -> "LatticeCone":
        shift = tuple(int(x) for x in shift)
        return LatticeCone(self.dim, self.normals, self.strict,
                           tuple(a + b for a, b in zip(self.apex, shift)), label=self.label)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "halfspaces": [{"normal": list(n), "strict": s} for n, s in zip(self.normals, self.strict)],
            "apex": list(self.apex),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "LatticeCone":
        return cls.from_halfspaces(int(obj["dim"]), obj["halfspaces"], obj.get("apex"))

    # membership ----------------------------------------------------------------------
    def contains(self, k) -> bool:
        """Exact integer membership test for one lattice point."""
        k = [int(x) for x in np.atleast_1d(k)]
        if len(k) != self.dim:
            raise ValueError(f"point {k} does not match cone dimension {self.dim}")
        rel = [a - b for a, b in zip(k, self.apex)]
        for v, st in zip(self.normals, self.strict):
            val = sum(x * y for x, y in zip(v, rel))
            if val < 0 or (st and val == 0):
                return False
        return True

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized membership for integer points of shape ``(..., d)``."""
        pts = np.asarray(points, dtype=np.int64) - self.apex_array
        vals = pts @ self.normal_array.T
        ok = vals >= 0
        ok[..., self.strict_array] &= vals[..., self.strict_array] > 0
        return np.all(ok, axis=-1)

    def mask(self, radius: int) -> np.ndarray:
        """Membership of every point of the box ``{-N..N}^d``."""
        from .lattice import box_coords
        pts = np.stack(box_coords(self.dim, radius), axis=-1)
        return self.contains_many(pts)

    def extreme_rays(self) -> list[np.ndarray]:
        """Integer generators of the closed cone (apex at the origin).

        Candidates are null vectors of ``d-1`` normals; a candidate is kept when
        every constraint holds on it.  Assumes the closed cone is pointed.
        """
        return _extreme_rays(self.normal_array)


def _extreme_rays(normals: np.ndarray) -> list[np.ndarray]:
    d = normals.shape[1]
    rays: list[np.ndarray] = []
    if d == 1:
        cands = [np.array([1]), np.array([-1])]
    else:
        cands = []
        for combo in itertools.combinations(range(len(normals)), d - 1):
            sub = normals[list(combo)]
            r = _null_vector(sub)
            if r is not None:
                cands.extend([r, -r])
    seen = set()
    for r in cands:
        if np.all(normals @ r >= 0):
            g = math.gcd(*[abs(int(x)) for x in r]) if d > 1 else abs(int(r[0]))
            key = tuple(int(x) // g for x in r)
            if key not in seen:
                seen.add(key)
                rays.append(np.array(key, dtype=np.int64))
    return rays


def _null_vector(rows: np.ndarray):
    """Integer vector orthogonal to ``d-1`` integer rows (None if dependent)."""
    d = rows.shape[1]
    if d == 2:
        v = np.array([-rows[0, 1], rows[0, 0]], dtype=np.int64)
    else:
        a, b = [int(x) for x in rows[0]], [int(x) for x in rows[1]]
        v = np.array([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]],
                     dtype=np.int64)
    if not np.any(v):
        return None
    return v


def _satisfies(normals: np.ndarray, strict: np.ndarray, x: np.ndarray) -> bool:
    vals = normals @ x
    return bool(np.all(vals >= 0) and np.all(vals[strict] > 0) and np.any(x))


def _candidate_points(normals: np.ndarray) -> list[np.ndarray]:
    d = normals.shape[1]
    cands = [np.array(v, dtype=np.int64) for v in np.eye(d, dtype=np.int64)]
    cands += [-c for c in cands]
    cands += [np.array(v) for v in normals] + [-np.array(v) for v in normals]
    rays = _extreme_rays(normals)
    cands += rays
    for r1, r2 in itertools.combinations(rays, 2):
        cands.append(r1 + r2)
    if d == 3:
        for r1, r2, r3 in itertools.combinations(rays, 3):
            cands.append(r1 + r2 + r3)
    if rays:
        cands.append(np.sum(rays, axis=0))
    return cands


def _closed_is_trivial(normals: np.ndarray) -> bool:
    """True when ``{x : N x >= 0} = {0}``, decided by 2d box-constrained LPs."""
    d = normals.shape[1]
    for i in range(d):
        for sign in (1.0, -1.0):
            c = np.zeros(d)
            c[i] = -sign
            res = linprog(c, A_ub=-normals.astype(float), b_ub=np.zeros(len(normals)),
                          bounds=[(-1, 1)] * d, method="highs")
            if res.status != 0:
                raise RuntimeError(f"LP failed: {res.message}")
            if -res.fun > _LP_TOL:
                return False
    return True


def _strict_slack(normals: np.ndarray, strict: np.ndarray) -> float:
    """``max t`` with strict rows ``>= t``, others ``>= 0``, ``|x_i| <= 1``, ``t <= 1``."""
    d = normals.shape[1]
    a = -normals.astype(float)
    a = np.hstack([a, strict.astype(float)[:, None]])
    c = np.zeros(d + 1)
    c[-1] = -1.0
    res = linprog(c, A_ub=a, b_ub=np.zeros(len(normals)), bounds=[(-1, 1)] * d + [(None, 1)],
                  method="highs")
    if res.status != 0:
        raise RuntimeError(f"LP failed: {res.message}")
    return -res.fun


def _is_empty(normals: np.ndarray, strict: np.ndarray) -> bool:
    if not np.any(strict) or _witness(normals, strict) is not None:
        return False
    return _strict_slack(normals, strict) <= _LP_TOL


def _witness(normals: np.ndarray, strict: np.ndarray):
    """A nonzero integer point of the cone, or None if none is found."""
    for x in _candidate_points(normals):
        if _satisfies(normals, strict, x):
            return x
    return None


@dataclass(frozen=True)
class Disjointness:
    disjoint: bool
    certified: bool
    witness: tuple | None = None
    method: str = ""


def check_disjoint(c1: LatticeCone, c2: LatticeCone, probe_radius: int = 12) -> Disjointness:
    """Decide whether ``c1`` and ``-c2`` share a nonzero point.

    A shared integer point found among exact candidates certifies overlap.
    Otherwise the closed intersection is tested with LPs: if it is ``{0}``, or
    if no point makes every strict constraint positive, the cones are
    certifiably disjoint.  Degenerate LPs fall back to lattice probing.
    """
    if c1.dim != c2.dim:
        raise ValueError("cone dimensions differ")
    if any(c1.apex) or any(c2.apex):
        raise ValueError("disjointness is defined for cones with apex at the origin")
    neg = c2.negated()
    normals = np.vstack([c1.normal_array, neg.normal_array])
    strict = np.concatenate([c1.strict_array, neg.strict_array])

    w = _witness(normals, strict)
    if w is not None:
        return Disjointness(False, True, tuple(int(x) for x in w), "exact witness")

    probe_hit = _probe(c1, neg, probe_radius)
    try:
        if _closed_is_trivial(normals):
            result = Disjointness(True, True, None, "closed intersection is {0}")
        elif not np.any(strict):
            result = Disjointness(False, True, None, "closed intersection is nontrivial")
        else:
            slack = _strict_slack(normals, strict)
            if slack > 1e-7:
                result = Disjointness(False, True, None, "LP interior point")
            elif slack < _LP_TOL:
                result = Disjointness(True, True, None, "strict constraints cannot all be positive")
            else:
                raise RuntimeError("degenerate LP")
    except RuntimeError:
        warnings.warn("disjointness certificate unavailable; using lattice probe only",
                      CertificateWarning, stacklevel=2)
        return Disjointness(probe_hit is None, False, probe_hit, "probe")
    if result.disjoint and probe_hit is not None:
        # exact integer evidence outranks an LP tolerance decision
        return Disjointness(False, True, probe_hit, "probe witness")
    return result


def _probe(c1: LatticeCone, c2: LatticeCone, radius: int):
    from .lattice import box_coords
    pts = np.stack(box_coords(c1.dim, radius), axis=-1).reshape(-1, c1.dim)
    pts = pts[np.any(pts != 0, axis=1)]
    hit = c1.contains_many(pts) & c2.contains_many(pts)
    if np.any(hit):
        return tuple(int(x) for x in pts[np.argmax(hit)])
    return None


def disjoint_after_negation(c1: LatticeCone, c2: LatticeCone, probe_radius: int = 12) -> bool:
    """True iff ``c1`` and ``-c2`` have no nonzero point in common."""
    return check_disjoint(c1, c2, probe_radius).disjoint


# ------------------------------------------------------------------------------------
# counting

def _region_system(c1: LatticeCone, c2: LatticeCone, n) -> tuple[np.ndarray, np.ndarray]:
    """Rows ``G k >= h`` of the closed region ``{k in c2, n - k in c1}``."""
    n = np.asarray(n, dtype=np.int64)
    g2 = c2.normal_array
    h2 = g2 @ c2.apex_array
    g1 = -c1.normal_array
    h1 = c1.normal_array @ (c1.apex_array - n)
    return np.vstack([g2, g1]), np.concatenate([h2, h1])


def _bounding_box(c1: LatticeCone, c2: LatticeCone, n):
    """Integer coordinate bounds of the closed region, or None if it is empty."""
    g, h = _region_system(c1, c2, n)
    d = c1.dim
    if d == 3:
        lo, hi = [], []
        for i in range(d):
            bounds = []
            for sign in (1.0, -1.0):
                c = np.zeros(d)
                c[i] = sign
                res = linprog(c, A_ub=-g.astype(float), b_ub=-h.astype(float),
                              bounds=[(None, None)] * d, method="highs")
                if res.status == 2:
                    return None
                if res.status != 0:
                    raise RuntimeError(f"LP failed: {res.message}")
                bounds.append(sign * res.fun)
            lo.append(bounds[0])
            hi.append(bounds[1])
        return np.floor(np.array(lo) - 1e-7).astype(np.int64), np.ceil(np.array(hi) + 1e-7).astype(np.int64)
    # d <= 2: vertices are intersections of boundary lines
    verts = []
    gf, hf = g.astype(float), h.astype(float)
    for combo in itertools.combinations(range(len(g)), d):
        a = gf[list(combo)]
        if abs(np.linalg.det(a)) < 1e-12:
            continue
        x = np.linalg.solve(a, hf[list(combo)])
        scale = 1e-9 * (1.0 + np.abs(gf) @ np.abs(x) + np.abs(hf))
        if np.all(gf @ x - hf >= -scale):
            verts.append(x)
    if not verts:
        return None
    verts = np.array(verts)
    return (np.floor(verts.min(axis=0) - 1e-7).astype(np.int64),
            np.ceil(verts.max(axis=0) + 1e-7).astype(np.int64))


def split_acute(cone: LatticeCone) -> list[LatticeCone]:
    """Split a pointed ``d=2`` cone wider than 90 degrees into acute sub-cones.

    Sub-cones are closed; their union is the closure of ``cone``.
    """
    if cone.dim != 2:
        return [cone]
    rays = cone.extreme_rays()
    if len(rays) != 2:
        return [cone]
    a, b = (r.astype(float) for r in rays)
    cross = a[0] * b[1] - a[1] * b[0]
    if abs(cross) < 1e-12:
        # opposite rays of a half-plane: sweep through the side the normal points to
        v = cone.normal_array[0].astype(float)
        if np.array([-a[1], a[0]]) @ v < 0:
            a, b = b, a
    elif cross < 0:
        a, b = b, a
    angle = (math.atan2(b[1], b[0]) - math.atan2(a[1], a[0])) % (2 * math.pi)
    if angle < math.pi / 2:
        return [cone]
    pieces = int(angle // (math.pi / 2)) + 1
    start = math.atan2(a[1], a[0])
    bounds = [start + angle * j / pieces for j in range(pieces + 1)]
    out = []
    for lo, hi in zip(bounds, bounds[1:]):
        ulo = (math.cos(lo), math.sin(lo))
        uhi = (math.cos(hi), math.sin(hi))
        normals = [(-ulo[1], ulo[0]), (uhi[1], -uhi[0])]
        out.append(LatticeCone.from_halfspaces(2, [(nv, False) for nv in normals], apex=cone.apex))
    return out


def _check_bounded(c1: LatticeCone, c2: LatticeCone) -> None:
    rec = np.vstack([c2.normal_array, -c1.normal_array])
    if not _closed_is_trivial(rec):
        raise UnboundedRegionError(
            "c2 and (n - c1) have an unbounded intersection; c1 and -c2 share a closed ray")


def intersection_count(c1: LatticeCone, c2: LatticeCone, n) -> int:
    """``card{k in Z^d : k in c2 and n - k in c1}``, counted exactly.

    The enumeration box is the bounding box of the closed region (vertices in
    ``d<=2``, LP bounds in ``d=3``), so every lattice point is visited.
    """
    if c1.dim != c2.dim:
        raise ValueError("cone dimensions differ")
    n = np.atleast_1d(np.asarray(n, dtype=np.int64))
    _check_bounded(c1, c2)
    boxes = []
    if c1.dim == 2 and c2.dim == 2:
        for p1 in split_acute(c1):
            for p2 in split_acute(c2):
                b = _bounding_box(p1, p2, n)
                if b is not None:
                    boxes.append(b)
    else:
        b = _bounding_box(c1, c2, n)
        if b is not None:
            boxes.append(b)
    if not boxes:
        return 0
    lo = np.min([b[0] for b in boxes], axis=0)
    hi = np.max([b[1] for b in boxes], axis=0)
    return _count_in_box(c1, c2, n, lo, hi)


def _count_in_box(c1, c2, n, lo, hi) -> int:
    axes = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, c1.dim)
    ok = c2.contains_many(pts) & c1.contains_many(n - pts)
    return int(np.count_nonzero(ok))


def count_brute_force(c1: LatticeCone, c2: LatticeCone, n, half_width: int | None = None) -> int:
    """Naive count over ``|k|_inf <= half_width`` (default ``4|n|_inf + 8``)."""
    n = np.atleast_1d(np.asarray(n, dtype=np.int64))
    if half_width is None:
        half_width = 4 * int(np.max(np.abs(n))) + 8
    lo = np.full(c1.dim, -half_width)
    hi = np.full(c1.dim, half_width)
    return _count_in_box(c1, c2, n, lo, hi)


@dataclass
class CountGrowthFit:
    """Samples ``(|n|, c(n))`` and the fitted bound ``c(n) <= C |n|^gamma``."""

    points: np.ndarray
    norms: np.ndarray
    counts: np.ndarray
    gamma: float
    constant: float

    def to_dict(self) -> dict:
        return {"gamma": self.gamma, "constant": self.constant,
                "samples": [[*map(int, p), float(r), int(c)]
                            for p, r, c in zip(self.points, self.norms, self.counts)]}


def uniform_directions(dim: int, count: int) -> np.ndarray:
    """``count`` unit vectors: equiangular in ``d=2``, Fibonacci sphere in ``d=3``."""
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        phi = 2 * np.pi * np.arange(count) / count
        return np.stack([np.cos(phi), np.sin(phi)], axis=1)
    i = np.arange(count) + 0.5
    z = 1 - 2 * i / count
    rho = np.sqrt(1 - z * z)
    phi = np.pi * (1 + 5 ** 0.5) * i
    return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)


def count_growth_fit(c1: LatticeCone, c2: LatticeCone, directions=None,
                     radii=(8, 16, 32, 64, 128), n_directions: int = 16) -> CountGrowthFit:
    """Sample ``c(round(r u))`` and fit the growth exponent of the largest counts.

    For every radius the sample with the largest positive count is kept, and
    ``log c = gamma log|n| + b`` is fitted by least squares over those
    envelope pairs.  Thin regions near the boundary of ``c1 + c2`` grow like
    ``|n|^2`` only asymptotically; pooling them with the envelope would bias
    the exponent of the bound low.  ``constant`` is ``max c(n) / |n|^gamma``
    over all samples.  All-zero counts give ``gamma = 0``.
    """
    if directions is None:
        directions = uniform_directions(c1.dim, n_directions)
    directions = np.atleast_2d(np.asarray(directions, dtype=np.float64))
    pts, norms, counts, tags = [], [], [], []
    for r in radii:
        for u in directions:
            n = np.rint(r * u).astype(np.int64)
            if not np.any(n):
                continue
            pts.append(n)
            norms.append(float(np.linalg.norm(n)))
            counts.append(intersection_count(c1, c2, n))
            tags.append(r)
    pts = np.array(pts)
    norms = np.array(norms)
    counts = np.array(counts)
    tags = np.array(tags)
    pos = counts > 0
    if np.count_nonzero(pos) == 0:
        return CountGrowthFit(pts, norms, counts, 0.0, 0.0)
    env_x, env_y = [], []
    for r in radii:
        sel = np.flatnonzero((tags == r) & pos)
        if sel.size:
            best = sel[np.argmax(counts[sel])]
            env_x.append(np.log(norms[best]))
            env_y.append(np.log(counts[best]))
    if len(set(env_x)) < 2:
        gamma = 0.0
    else:
        gamma = float(np.polyfit(env_x, env_y, 1)[0])
    constant = float(np.max(counts[pos] / norms[pos] ** gamma))
    return CountGrowthFit(pts, norms, counts, gamma, constant)


# ------------------------------------------------------------------------------------
# separation of a compactly contained subcone

def angular_margin(inner: LatticeCone, outer: LatticeCone) -> float:
    """Smallest angle (radians) between an extreme ray of ``inner`` and a facet of ``outer``.

    Positive exactly when ``inner`` minus the apex lies in the interior of ``outer``.
    """
    rays = inner.extreme_rays()
    if not rays:
        raise ValueError("inner cone has no extreme rays (not pointed)")
    margin = np.inf
    for r in rays:
        rf = r.astype(float) / np.linalg.norm(r)
        for v in outer.normal_array:
            vf = v.astype(float) / np.linalg.norm(v)
            margin = min(margin, math.asin(np.clip(vf @ rf, -1, 1)))
    return float(margin)


def cone_separation_constant(inner: LatticeCone, outer: LatticeCone, radius: int) -> float:
    """``min <xi - n> / <n>`` over ``xi`` in ``inner`` and lattice ``n`` outside ``outer``.

    Lattice ``n`` ranges over ``0 < |n| <= radius``.  For each ``n`` the
    minimizing ``xi`` is the projection of ``n`` onto the closed inner cone,
    which has norm ``<= |n|`` so the ``|xi| <= radius`` cut never binds.
    """
    if inner.dim != outer.dim:
        raise ValueError("cone dimensions differ")
    if angular_margin(inner, outer) <= 0.0:
        raise ValueError("inner cone is not compactly contained in outer cone")
    from .lattice import box_coords
    d = inner.dim
    pts = np.stack(box_coords(d, radius), axis=-1).reshape(-1, d)
    nsq = np.sum(pts * pts, axis=1)
    keep = (nsq > 0) & (nsq <= radius * radius) & ~outer.contains_many(pts)
    pts = pts[keep]
    if pts.size == 0:
        raise ValueError("no lattice points outside the outer cone within radius")
    pf = pts.astype(float)
    rays = [r.astype(float) / np.linalg.norm(r) for r in inner.extreme_rays()]
    if d <= 2:
        dist2 = np.full(len(pf), np.inf)
        for r in rays:
            t = np.clip(pf @ r, 0.0, None)
            dist2 = np.minimum(dist2, np.sum((pf - t[:, None] * r) ** 2, axis=1))
    else:
        gens = np.array(rays).T
        dist2 = np.array([nnls(gens, p)[1] ** 2 for p in pf])
    ratio = np.sqrt((1.0 + dist2) / (1.0 + np.sum(pf * pf, axis=1)))
    return float(ratio.min())


def standard_pair() -> tuple[LatticeCone, LatticeCone]:
    """The disjoint ``d=2`` pair ``{t>0, |s|<=t/2}`` and ``{s>0, |t|<=s/2}``."""
    g1 = LatticeCone.from_halfspaces(2, [((1, 0), True), ((1, -2), False), ((1, 2), False)], label="G1")
    g2 = LatticeCone.from_halfspaces(2, [((0, 1), True), ((-2, 1), False), ((2, 1), False)], label="G2")
    return g1, g2

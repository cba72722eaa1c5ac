"""Sharp example constructions.

Two witnesses are built here. The Weyl example set places unit masses on
the cells where the unit-coefficient quadratic sum is large: x/sqrt(R)
congruent to k/q mod 1 and t/R = a/q with q ~ R^(1/6), (a,q)=1. The
convex-curve witness assembles all primitive lattice vectors (q, p) with
1 <= q <= k, 0 <= p <= q in slope order into a convex polygon; its
vertices give an integer-valued discretely convex table with ~N^(2/3)
entries, whose extension sum has modulus exactly |I| on the N-spaced
lattice, making the tube-weighted mass ratio grow like a positive power
of R."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, sqrt

import numpy as np

from .expsum import CoefficientVector
from .util import cexp
from .weights import Tube, Weight, eval_G

_LATTICE_VERIFY_SAMPLES = 2048


@dataclass(frozen=True)
class LatticePolygon:
    """Convex chain of integer vertices with strictly increasing edge slopes."""

    vertices: tuple

    def __post_init__(self):
        vs = self.vertices
        if len(vs) < 2:
            raise ValueError("polygon needs at least one edge")
        prev_slope = None
        for (x0, y0), (x1, y1) in zip(vs, vs[1:]):
            dx, dy = x1 - x0, y1 - y0
            if dx <= 0:
                raise ValueError("vertices must advance in x")
            if gcd(dx, abs(dy)) != 1:
                raise ValueError("edge vectors must be primitive")
            slope = Fraction(dy, dx)
            if prev_slope is not None and slope <= prev_slope:
                raise ValueError("edge slopes must strictly increase")
            prev_slope = slope


@dataclass(frozen=True)
class ConvexCurveTable:
    """Integer curve samples: value_map[n] = v_n means the curve passes
    through (n/N, v_n/N). Support may include 0; consecutive support
    slopes strictly increase (discrete convexity)."""

    n_max: int
    value_map: dict

    def __post_init__(self):
        if not self.value_map:
            raise ValueError("empty curve table")
        ns = self.support
        if ns[0] < 0 or ns[-1] > self.n_max:
            raise ValueError("support escapes [0, N]")
        slopes = [
            Fraction(self.value_map[b] - self.value_map[a], b - a)
            for a, b in zip(ns, ns[1:])
        ]
        if any(s2 <= s1 for s1, s2 in zip(slopes, slopes[1:])):
            raise ValueError("table is not discretely convex")

    @property
    def support(self) -> list[int]:
        return sorted(self.value_map)

    @property
    def size(self) -> int:
        return len(self.value_map)


def jarnik_curve(k: int) -> ConvexCurveTable:
    """Convex polygon through all primitive vectors (q, p), 1 <= q <= k,
    0 <= p <= q, sorted by slope; vertex x-coordinates form the support
    and N is the total x-extent."""
    if not 1 <= k <= 60:
        raise ValueError("k must lie in [1, 60]")
    vecs = []
    for q in range(1, k + 1):
        for p in range(q + 1):
            if gcd(p, q) == 1:
                vecs.append((q, p))
    vecs.sort(key=lambda v: Fraction(v[1], v[0]))
    x, y = 0, 0
    values = {0: 0}
    for q, p in vecs:
        x, y = x + q, y + p
        values[x] = y
    LatticePolygon(tuple((n, values[n]) for n in sorted(values)))
    return ConvexCurveTable(x, values)


def curve_extension_sum(table: ConvexCurveTable, points) -> np.ndarray:
    """E(x,t) = sum over support of e((n/N) x + (v_n/N) t) at ball points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    N = table.n_max
    ns = np.array(table.support, dtype=float)
    vs = np.array([table.value_map[n] for n in table.support], dtype=float)
    out = np.zeros(len(pts), dtype=complex)
    chunk = max(1, 1_000_000 // max(1, len(ns)))
    for i0 in range(0, len(pts), chunk):
        sl = slice(i0, i0 + chunk)
        phases = np.outer(pts[sl, 0], ns / N) + np.outer(pts[sl, 1], vs / N)
        out[sl] = cexp(phases).sum(axis=1)
    return out


def lattice_weight(n_max: int) -> Weight:
    """Unit masses on the N-spaced lattice {(mN, lN): 0 <= m, l < N} in B_R."""
    N = n_max
    gx, gy = np.meshgrid(np.arange(N) * N, np.arange(N) * N, indexing="ij")
    return Weight(N * N, gx.ravel(), gy.ravel(), np.ones(N * N))


def lattice_tube_sup(n_max: int) -> tuple[Tube, float]:
    """Tube sup of the N-spaced lattice weight, exact for every scanned
    slope: a band of vertical thickness sqrt(R) = N catches exactly one
    lattice row above each of the N columns, so no tube holds more than N
    and interior horizontal tubes attain it."""
    return Tube(0.0, 0.0, "horizontal", 1), float(n_max)


def extension_l2_ball(table: ConvexCurveTable) -> float:
    """integral over B_R of |E|^2 via the closed-form 1D integrals; cross
    terms vanish because every frequency difference completes full periods
    over [0, R]."""
    N = table.n_max
    R = N * N
    ns = np.array(table.support, dtype=np.int64)
    vs = np.array([table.value_map[n] for n in table.support], dtype=np.int64)

    def axis_integrals(freq_ints: np.ndarray) -> np.ndarray:
        # integral_0^R e(d x / N) dx for all frequency differences d
        d = freq_ints[:, None] - freq_ints[None, :]
        out = np.empty(d.shape, dtype=complex)
        nz = d != 0
        out[~nz] = R
        # e(d R / N) = e(d N) = e(0) exactly: reduce the integer phase first
        out[nz] = (cexp((d[nz] * N) % 1) - 1.0) / (2j * np.pi * d[nz] / N)
        return out

    ix = axis_integrals(ns)
    it = axis_integrals(vs)
    return float(np.real(np.sum(ix * it)))


def counterexample_report(table: ConvexCurveTable, rng_seed: int = 0) -> dict:
    """The tube-weighted mass ratio of the curve witness.

    The weight is the N-spaced lattice; |E| = |I| exactly at its points
    (every phase is an integer there), which is re-verified on a sample
    before the closed-form sums are trusted."""
    N = table.n_max
    R = N * N
    size = table.size

    rng = np.random.default_rng(rng_seed)
    count = min(N * N, _LATTICE_VERIFY_SAMPLES)
    ms = rng.integers(0, N, size=count)
    ls = rng.integers(0, N, size=count)
    vals = curve_extension_sum(table, np.stack([ms * N, ls * N], axis=1).astype(float))
    if np.max(np.abs(np.abs(vals) - size)) > 1e-9 * size:
        raise AssertionError("lattice values must equal the support size")

    numerator = float(N * N) * size ** 2
    tube, sup = lattice_tube_sup(N)
    g_norm_sq = extension_l2_ball(table) / R
    c_norm = g_norm_sq / (R * size)
    ratio = numerator / (sqrt(sup) * g_norm_sq)
    return {
        "n_max": N,
        "r_scale": R,
        "support_size": size,
        "numerator": numerator,
        "tube_sup": sup,
        "tube": tube,
        "g_norm_sq": g_norm_sq,
        "c_norm": c_norm,
        "ratio": ratio,
    }


def counterexample_ratio(table: ConvexCurveTable) -> float:
    return counterexample_report(table)["ratio"]


def growth_exponent(ks=(8, 16, 32)) -> dict:
    """Least-squares slope of log(ratio) against log(R) across curve scales."""
    logs_r, logs_ratio, reports = [], [], []
    for k in ks:
        rep = counterexample_report(jarnik_curve(k))
        reports.append({"k": k, **{key: rep[key] for key in ("n_max", "r_scale", "support_size", "ratio")}})
        logs_r.append(np.log(rep["r_scale"]))
        logs_ratio.append(np.log(rep["ratio"]))
    slope = float(np.polyfit(logs_r, logs_ratio, 1)[0])
    return {"ks": list(ks), "slope": slope, "points": reports}


def weyl_example_set(r_scale: int) -> Weight:
    """Unit masses on the cells hosting the large values of the
    unit-coefficient G: x/sqrt(R) = k/q mod 1 and t/R = a/q with
    q in [R^(1/6), 2 R^(1/6)), (a,q)=1, 0 <= a,k < q."""
    R = int(r_scale)
    N = int(round(sqrt(R)))
    if N * N != R:
        raise ValueError("r_scale must be a perfect square")
    Q0 = R ** (1.0 / 6.0)
    if Q0 < 2.0:
        raise ValueError("need R^(1/6) >= 2")
    cells: dict = {}
    for q in range(int(np.ceil(Q0)), int(np.ceil(2 * Q0))):
        if not Q0 <= q < 2 * Q0:
            continue
        for a in range(q):
            if gcd(a, q) != 1:
                continue
            ty = int((a / q) * R)
            if ty >= R:
                continue
            for kk in range(q):
                for m in range(N):
                    x = (kk / q + m) * N
                    if x >= R:
                        continue
                    key = (int(x), ty)
                    cells[key] = cells.get(key, 0.0) + 1.0
    return Weight.from_cells(R, cells)


def weyl_weight_scaled(r_scale: int) -> Weight:
    """The example set rescaled to total mass exactly R, as the ratio
    battery's hypothesis requires."""
    w = weyl_example_set(r_scale)
    return Weight(r_scale, w.cx, w.cy, w.mass * (r_scale / w.total))


def weyl_median_size(r_scale: int) -> float:
    """Median of |G| (unit coefficients) over the example set's cell centers."""
    w = weyl_example_set(r_scale)
    N = int(round(sqrt(r_scale)))
    coeffs = CoefficientVector(np.ones(N))
    G = eval_G(coeffs, w.cx + 0.5, w.cy + 0.5, r_scale)
    return float(np.median(np.abs(G)))

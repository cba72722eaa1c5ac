"""Incidence counting between points in 1/N strips and rationals of a
dyadic denominator layer.

An incidence is an ordered triple (i, j, a/q) with q in [Q, 2Q), (a,q)=1,
whose difference t_i - t_j lies within tol of a/q mod 1. Fractions are
taken per residue class mod 1 (canonical representative 0 <= a < q), since
congruent fractions define the same torus condition. The fast counter
sorts the pair differences once and binary-searches each fraction's
window; every candidate is then re-checked with the same scalar predicate
the brute-force oracle uses, so the two agree exactly."""

from __future__ import annotations

from dataclasses import dataclass
from math import log
from typing import Mapping

import numpy as np

from .rationals import ReducedFraction, canonical_layer_fractions

_WINDOW_SLACK = 1e-12
# absolute grace on the membership comparison: rational families produce
# differences exactly at the tolerance boundary, and a few ulps of rounding
# must not decide the count
_GRACE = 1e-13


@dataclass(frozen=True)
class PointFamily:
    """One point per chosen strip: members maps j to t_j in
    [(j-1)/N, j/N]."""

    n_max: int
    members: Mapping[int, float]

    def __post_init__(self):
        N = self.n_max
        if not 1 <= len(self.members) <= N:
            raise ValueError("family size must lie in [1, N]")
        for j, t in self.members.items():
            if not 1 <= j <= N:
                raise ValueError(f"strip index {j} out of range")
            if not (j - 1) / N <= t <= j / N:
                raise ValueError(f"t_{j}={t} escapes its strip")

    @property
    def size(self) -> int:
        return len(self.members)

    def ordered(self) -> tuple[np.ndarray, np.ndarray]:
        js = np.array(sorted(self.members))
        return js, np.array([self.members[int(j)] for j in js])


@dataclass(frozen=True)
class IncidenceRecord:
    i: int
    j: int
    frac: ReducedFraction


def _hits(diff, frac_value, tol):
    """Torus membership |diff - frac| <= tol; the single predicate shared
    by the oracle and the fast path."""
    u = np.mod(diff - frac_value, 1.0)
    return np.minimum(u, 1.0 - u) <= tol + _GRACE


def count_incidences(
    points: PointFamily,
    Q: int,
    tol_mult: float = 1.0,
    collect: bool = False,
):
    """Number of ordered incidence triples at layer Q with
    tol = tol_mult / (Q * N); optionally also the record list."""
    if tol_mult <= 0:
        raise ValueError("tol_mult must be positive")
    N = points.n_max
    tol = tol_mult / (Q * N)
    js, ts = points.ordered()
    M = len(ts)
    diffs = (ts[:, None] - ts[None, :]).ravel()
    g = np.mod(diffs, 1.0)
    g[g >= 1.0] = 0.0  # np.mod may round tiny negatives up to exactly 1.0
    order = np.argsort(g, kind="stable")
    gs = g[order]

    fracs = canonical_layer_fractions(Q)
    cvals = np.array([f.num / f.den for f in fracs])
    width = tol + _WINDOW_SLACK

    if width >= 0.5:
        # windows cover the whole circle: check every pair directly
        ok_full = _hits(diffs[:, None], cvals[None, :], tol)
        count = int(ok_full.sum())
        if not collect:
            return count
        pi, fi = np.nonzero(ok_full)
        pair_idx, fid = pi, fi
        ok = np.ones(len(pi), dtype=bool)
    else:
        # each circular window [c-width, c+width] splits into a core range
        # plus one wrapped range inside [0, 1)
        one_minus = np.nextafter(1.0, 0.0)
        lo = cvals - width
        hi = cvals + width
        loA = np.maximum(lo, 0.0)
        hiA = np.minimum(hi, one_minus)
        loB = np.full_like(cvals, 1.5)  # empty by default
        hiB = np.full_like(cvals, -0.5)
        wrap_low = lo < 0
        loB[wrap_low] = lo[wrap_low] + 1.0
        hiB[wrap_low] = one_minus
        wrap_high = hi >= 1.0
        loB[wrap_high] = 0.0
        hiB[wrap_high] = hi[wrap_high] - 1.0

        def gather(lo_arr, hi_arr):
            lo_idx = np.searchsorted(gs, lo_arr, side="left")
            hi_idx = np.searchsorted(gs, hi_arr, side="right")
            lens = np.maximum(0, hi_idx - lo_idx)
            total = int(lens.sum())
            if total == 0:
                return np.zeros(0, dtype=int), np.zeros(0, dtype=int)
            fidx = np.repeat(np.arange(len(lo_arr)), lens)
            starts = np.repeat(lo_idx, lens)
            within = np.arange(total) - np.repeat(np.cumsum(lens) - lens, lens)
            return starts + within, fidx

        posA, fidA = gather(loA, hiA)
        posB, fidB = gather(loB, hiB)
        pos = np.concatenate([posA, posB])
        fid = np.concatenate([fidA, fidB])
        pair_idx = order[pos]
        ok = _hits(diffs[pair_idx], cvals[fid], tol)
        count = int(ok.sum())
    if not collect:
        return count
    recs = []
    for p, f in zip(pair_idx[ok], fid[ok]):
        i, j = divmod(int(p), M)
        recs.append(IncidenceRecord(int(js[i]), int(js[j]), fracs[int(f)]))
    recs.sort(key=lambda r: (r.i, r.j, r.frac.value))
    return count, recs


def count_incidences_bruteforce(points: PointFamily, Q: int, tol_mult: float = 1.0) -> int:
    """O(M^2 * |S_Q|) reference counter: explicit pair loop, every fraction
    checked with the shared predicate."""
    if tol_mult <= 0:
        raise ValueError("tol_mult must be positive")
    N = points.n_max
    tol = tol_mult / (Q * N)
    _, ts = points.ordered()
    cvals = np.array([f.num / f.den for f in canonical_layer_fractions(Q)])
    count = 0
    for ti in ts:
        for tj in ts:
            count += int(_hits(ti - tj, cvals, tol).sum())
    return count


def incidence_bound_ratio(points: PointFamily, Q: int, tol_mult: float = 1.0) -> float:
    """count / (Q * M * log(N+1)): the incidence bound asserts this stays
    below an absolute constant."""
    count = count_incidences(points, Q, tol_mult)
    return count / (Q * points.size * log(points.n_max + 1))


def sharpness_configuration(q: int, M: int, n_max: int) -> PointFamily:
    """The tight family: rows m/N + k/q for 0 <= m < floor(M/(10q)) and
    0 <= k < q, one point per strip."""
    N = n_max
    if not 10 * q <= M <= N:
        raise ValueError("need 10*q <= M <= n_max")
    rows = M // (10 * q)
    for attempt in range(4):
        shift = attempt / (4.0 * N)
        members: dict[int, float] = {}
        ok = True
        for m in range(rows):
            for k in range(q):
                t = m / N + k / q + shift
                if t >= 1.0:
                    ok = False
                    break
                j = int(np.floor(t * N)) + 1
                if j in members:
                    ok = False
                    break
                members[j] = t
            if not ok:
                break
        if ok:
            return PointFamily(N, members)
    raise ValueError("could not place the configuration without collisions")


def random_family(n_max: int, M: int, seed: int) -> PointFamily:
    """M strips chosen at random, one uniform point per strip."""
    rng = np.random.default_rng(seed)
    js = rng.choice(n_max, size=M, replace=False) + 1
    members = {int(j): (int(j) - 1 + rng.random()) / n_max for j in sorted(js)}
    return PointFamily(n_max, members)

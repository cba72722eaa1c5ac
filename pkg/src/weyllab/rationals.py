"""Exact rational arithmetic: reduced fractions, Farey layers by dyadic
denominator scale, continued-fraction Dirichlet approximation, Mobius /
totient sieves, Ramanujan sums, and arc membership around rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .util import is_power_of_two, torus_dist


@dataclass(frozen=True)
class ReducedFraction:
    num: int
    den: int

    def __post_init__(self):
        if self.den < 1:
            raise ValueError("denominator must be positive")
        if gcd(abs(self.num), self.den) != 1:
            raise ValueError(f"{self.num}/{self.den} is not reduced")

    @property
    def value(self) -> float:
        return self.num / self.den

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


# ---------------------------------------------------------------------------
# Mobius / totient sieve, grown on demand and cached for concurrent reads.

_sieve_limit = 0
_mobius: np.ndarray | None = None
_totient: np.ndarray | None = None


def ensure_sieve(limit: int) -> None:
    global _sieve_limit, _mobius, _totient
    if limit <= _sieve_limit:
        return
    limit = max(limit, 2 * _sieve_limit, 1024)
    mu = np.ones(limit + 1, dtype=np.int64)
    phi = np.arange(limit + 1, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, limit + 1):
        if not is_prime[p]:
            continue
        is_prime[2 * p :: p] = False
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
        phi[p::p] -= phi[p::p] // p
    mu[0] = 0
    _mobius, _totient, _sieve_limit = mu, phi, limit


def mobius(q: int) -> int:
    ensure_sieve(q)
    return int(_mobius[q])


def totient(q: int) -> int:
    ensure_sieve(q)
    return int(_totient[q])


def sieve_arrays(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """(mobius, totient) tables for 0..limit, shared read-only views."""
    ensure_sieve(limit)
    return _mobius[: limit + 1], _totient[: limit + 1]


def ramanujan_sum(q: int, n: int) -> int:
    """c_q(n) = sum over reduced residues a mod q of e(-a n / q).

    Evaluated exactly as mu(q/g) * phi(q) / phi(q/g) with g = gcd(q, n).
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    g = gcd(q, abs(n))
    ensure_sieve(q)
    d = q // g
    return int(_mobius[d]) * int(_totient[q]) // int(_totient[d])


# ---------------------------------------------------------------------------
# Farey layers: reduced fractions in [-1, 1] with q in the dyadic window.


@dataclass(frozen=True)
class FareyLayer:
    """All reduced a/q in [-1, 1] with q in [q_scale, 2*q_scale), sorted."""

    q_scale: int
    fractions: tuple[ReducedFraction, ...]

    def values(self) -> np.ndarray:
        return np.array([f.num / f.den for f in self.fractions])

    def __len__(self) -> int:
        return len(self.fractions)


def farey_layer(Q: int) -> FareyLayer:
    if not is_power_of_two(Q):
        raise ValueError("Q must be a power of two")
    fracs = []
    for q in range(Q, 2 * Q):
        for a in range(-q, q + 1):
            if gcd(abs(a), q) == 1:
                fracs.append(ReducedFraction(a, q))
    fracs.sort(key=lambda f: f.num / f.den)
    return FareyLayer(Q, tuple(fracs))


def canonical_layer_fractions(Q: int) -> list[ReducedFraction]:
    """Reduced a/q with 0 <= a < q and q in [Q, 2Q): one fraction per
    residue class mod 1 of the full layer."""
    if not is_power_of_two(Q):
        raise ValueError("Q must be a power of two")
    out = []
    for q in range(Q, 2 * Q):
        for a in range(q):
            if gcd(a, q) == 1 or (a == 0 and q == 1):
                out.append(ReducedFraction(a, q))
    return out


# ---------------------------------------------------------------------------
# Dirichlet approximation by continued-fraction convergents.


def dirichlet_approx(t, n_max: int) -> ReducedFraction:
    """Reduced a/q with q <= n_max and |t - a/q| <= 1/(q*n_max).

    Returns the qualifying fraction of smallest q; works exactly (floats
    are converted to their exact binary rational). Smallest-q optimality
    holds because any qualifying q has a convergent of no larger
    denominator that also qualifies.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    target = Fraction(t) % 1
    # Walk convergent denominators in ascending order; any qualifying q is
    # dominated by a convergent denominator <= q, so the first hit is the
    # minimal q. At each denominator both neighboring numerators are tried
    # (they can tie at q = 1); smaller error wins, then smaller numerator.
    h_m2, h_m1 = 0, 1
    k_m2, k_m1 = 1, 0
    num, den = target.numerator, target.denominator
    seen = set()
    while den != 0:
        a = num // den
        k = a * k_m1 + k_m2
        if k > n_max:
            break
        if k not in seen:
            seen.add(k)
            lo = (target.numerator * k) // target.denominator
            best = None
            for cand in (lo, lo + 1):
                if gcd(abs(cand), k) != 1:
                    continue
                err = abs(target - Fraction(cand, k))
                if err * k * n_max <= 1 and (best is None or err < best[0]):
                    best = (err, cand)
            if best is not None:
                return ReducedFraction(best[1], k)
        num, den = den, num - a * den
        h_m2, h_m1 = h_m1, a * h_m1 + h_m2
        k_m2, k_m1 = k_m1, k
    raise AssertionError("a qualifying convergent must exist")


def major_arc_membership(t: float, Q: int, n_max: int) -> ReducedFraction | None:
    """The unique a/q with q in [Q, 2Q), (a,q)=1 and torus distance
    |t - a/q| <= 1/(Q*n_max), or None.

    Admissible Q: dyadic with 8*Q <= n_max, which keeps arcs of one layer
    pairwise disjoint and the answer unique.
    """
    if not is_power_of_two(Q):
        raise ValueError("Q must be a power of two")
    if 8 * Q > n_max:
        raise ValueError("arc layer needs 8*Q <= n_max for disjointness")
    t = float(t) % 1.0
    tol = 1.0 / (Q * n_max)
    for q in range(Q, 2 * Q):
        a = int(round(t * q)) % q
        if gcd(a, q) == 1 or (a == 0 and q == 1):
            if torus_dist(t - a / q) <= tol:
                return ReducedFraction(a, q)
    return None

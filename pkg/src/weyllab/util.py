"""Shared numeric helpers: complex exponentials, torus metric, dyadic ranges."""

from __future__ import annotations

import os

import numpy as np

TWO_PI = 2.0 * np.pi


def cexp(z):
    """e(z) = exp(2*pi*i*z), elementwise."""
    return np.exp(2j * np.pi * np.asarray(z))


def torus_dist(u):
    """Distance from u to the nearest integer, elementwise."""
    u = np.mod(np.asarray(u, dtype=float), 1.0)
    return np.minimum(u, 1.0 - u)


def is_power_of_two(q: int) -> bool:
    return q >= 1 and (q & (q - 1)) == 0


def dyadic_range(lo: float, hi: float) -> list[int]:
    """Powers of two v with lo <= v <= hi, ascending."""
    out = []
    v = 1
    while v <= hi:
        if v >= lo:
            out.append(v)
        v *= 2
    return out


def dyadic_window(value: float) -> int:
    """Exponent m with value in [2^m, 2^(m+1)). Requires value > 0."""
    if value <= 0:
        raise ValueError("dyadic window needs a positive value")
    return int(np.floor(np.log2(value)))


def thread_cap() -> int:
    """Worker cap from WEYLLAB_THREADS (default 1 = serial)."""
    raw = os.environ.get("WEYLLAB_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1

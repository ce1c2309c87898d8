"""Derivative-free root finding: sign-change scanning followed by bisection."""

from __future__ import annotations

from typing import Callable

import numpy as np

MAX_BISECT = 80
FTOL = 1e-12


def sign_change_brackets(ts, fs):
    """Index pairs (i, i+1) where ``fs`` changes sign; exact zeros become (i, i)."""
    fs = np.asarray(fs, dtype=float)
    s = np.sign(fs)
    out = []
    zeros = np.flatnonzero(s == 0)
    for i in zeros:
        out.append((int(i), int(i)))
    nz = np.flatnonzero(s != 0)
    if nz.size >= 2:
        a, b = nz[:-1], nz[1:]
        flip = s[a] * s[b] < 0
        for i, j in zip(a[flip], b[flip]):
            out.append((int(i), int(j)))
    out.sort()
    return out


def bisect(f: Callable[[float], float], lo: float, hi: float,
           flo: float | None = None, max_iter: int = MAX_BISECT, ftol: float = FTOL) -> float:
    """Bisect a bracketing interval [lo, hi] until |f| < ftol or ``max_iter`` halvings."""
    if flo is None:
        flo = f(lo)
    if flo == 0:
        return lo
    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        if abs(fm) < ftol:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return mid

"""Deterministic scalar root finding and golden-section search."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2


class DomainError(ValueError):
    """Arguments outside the open domain where a quantity is defined."""


@dataclass
class SolverInfo:
    iterations: int
    residual: float
    bracket: tuple[float, float]

    def to_dict(self) -> dict:
        return {"iterations": self.iterations, "residual": self.residual, "bracket": list(self.bracket)}


def bisect(f: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-13, maxiter: int = 200):
    """Root of ``f`` on [lo, hi] by bisection; ``f(lo)`` and ``f(hi)`` must differ in sign.

    Returns ``(x, SolverInfo)``.
    """
    lo, hi = float(lo), float(hi)
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo, SolverInfo(0, 0.0, (lo, hi))
    if fhi == 0:
        return hi, SolverInfo(0, 0.0, (lo, hi))
    if (flo > 0) == (fhi > 0):
        raise DomainError(f"no sign change on [{lo!r}, {hi!r}]: f={flo!r}, {fhi!r}")
    a, b = lo, hi
    it = 0
    while b - a > xtol and it < maxiter:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m)
        it += 1
        if fm == 0:
            a = b = m
            break
        if (fm > 0) == (flo > 0):
            a, flo = m, fm
        else:
            b = m
    x = 0.5 * (a + b)
    return x, SolverInfo(it, float(abs(f(x))), (a, b))


def bisect_vec(f: Callable[[np.ndarray], np.ndarray], lo: np.ndarray, hi: np.ndarray, iterations: int = 60) -> np.ndarray:
    """Elementwise bisection; assumes ``f(lo) < 0 < f(hi)`` or the reverse, per element."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    sign_lo = np.sign(f(lo))
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        same = np.sign(f(mid)) == sign_lo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def golden_section(f: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-9,
                   maximize: bool = False, maxiter: int = 500):
    """Golden-section search for an extremum of a unimodal ``f`` on [lo, hi].

    The endpoints are also compared, so a monotone ``f`` returns its boundary.
    Returns ``(x, fx, SolverInfo)``.
    """
    sign = -1.0 if maximize else 1.0
    lo, hi = float(lo), float(hi)

    def g(x):
        return sign * f(x)

    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    gc, gd = g(c), g(d)
    it = 0
    while b - a > xtol and it < maxiter:
        it += 1
        if gc < gd:
            b, d, gd = d, c, gc
            c = b - INV_PHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + INV_PHI * (b - a)
            gd = g(d)
    x, gx = (c, gc) if gc < gd else (d, gd)
    for xe in (lo, hi):
        ge = g(xe)
        if ge < gx:
            x, gx = xe, ge
    return x, float(sign * gx), SolverInfo(it, b - a, (a, b))

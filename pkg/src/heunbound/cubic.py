"""Real roots of a real cubic.

Closed forms (trigonometric or Cardano) only seed the roots; every seed is
then polished by Newton steps on the original polynomial, so near-degenerate
cubics do not inherit the cancellation of the closed-form expressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_DEGENERATE = 1e-12

@dataclass(frozen=True)
class CubicRoots:
    roots: tuple[float, ...]
    discriminant: float
    # discriminant of the derivative; negative means the cubic is monotone
    derivative_discriminant: float

    @property
    def monotone(self) -> bool:
        return self.derivative_discriminant < 0


def _polish(c, x, steps=50):
    c3, c2, c1, c0 = c
    for _ in range(steps):
        p = ((c3 * x + c2) * x + c1) * x + c0
        dp = (3 * c3 * x + 2 * c2) * x + c1
        if dp == 0 or p == 0:
            break
        dx = p / dp
        x_new = x - dx
        if abs(x_new - x) <= 4 * np.finfo(float).eps * max(abs(x_new), 1e-300):
            x = x_new
            break
        x = x_new
    return x


def real_cubic_roots(c3: float, c2: float, c1: float, c0: float) -> CubicRoots:
    """Sorted real roots of c3 x^3 + c2 x^2 + c1 x + c0 (c3 != 0)."""
    if c3 == 0:
        raise ValueError("leading coefficient must be nonzero")
    disc = (
        18 * c3 * c2 * c1 * c0
        - 4 * c2 ** 3 * c0
        + c2 ** 2 * c1 ** 2
        - 4 * c3 * c1 ** 3
        - 27 * c3 ** 2 * c0 ** 2
    )
    ddisc = 4 * c2 * c2 - 12 * c3 * c1

    # work with y = x / R, R a bound on the root magnitudes, so the
    # classification never under- or overflows
    b, c, d = c2 / c3, c1 / c3, c0 / c3
    R = max(abs(b), math.sqrt(abs(c)), abs(d) ** (1 / 3))
    if R == 0:
        return CubicRoots((0.0,), float(disc), float(ddisc))
    b, c, d = b / R, c / R / R, d / R / R / R

    # depressed cubic t^3 + p t + q, y = t - b/3
    p = c - b * b / 3
    q = 2 * b ** 3 / 27 - b * c / 3 + d
    shift = -b / 3
    # classify on the depressed discriminant relative to its own terms
    size = 4 * abs(p) ** 3 + 27 * q * q
    depressed_disc = -(4 * p ** 3 + 27 * q * q)
    near_double = abs(depressed_disc) <= _DEGENERATE * size
    if size == 0:
        seeds = [shift]
    elif p < 0 and (depressed_disc > 0 or near_double):
        r = 2 * math.sqrt(-p / 3)
        arg = max(-1.0, min(1.0, 3 * q / (p * r)))
        phi = math.acos(arg) / 3
        seeds = [r * math.cos(phi - 2 * math.pi * k / 3) + shift for k in range(3)]
    else:
        sq = math.sqrt(max(q * q / 4 + p ** 3 / 27, 0.0))
        u = math.copysign(abs(-q / 2 + sq) ** (1 / 3), -q / 2 + sq)
        v = math.copysign(abs(-q / 2 - sq) ** (1 / 3), -q / 2 - sq)
        seeds = [u + v + shift]
    ys = sorted(_polish((1.0, b, c, d), y) for y in seeds)
    if near_double:
        # both copies of a double root polish to (nearly) the same value
        merged = [ys[0]]
        for y in ys[1:]:
            if abs(y - merged[-1]) > 1e-7:
                merged.append(y)
        ys = merged
    roots = [R * y for y in ys]
    return CubicRoots(tuple(float(x) for x in roots), float(disc), float(ddisc))


def cubic_residual(c3, c2, c1, c0, x):
    return ((c3 * x + c2) * x + c1) * x + c0

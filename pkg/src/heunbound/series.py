"""Frobenius solution of the biconfluent Heun equation around the origin.

The equation handled is

    F'' + [(2|l|+1)/z - delta - 2z] F'
        + [mu_bar + delta^2/4 - 2|l| - 2 - (2 theta + delta (2|l|+1)) / (2z)] F = 0,

which covers both physical cases (delta = 0, theta = alpha for case A).

Sign conventions
----------------
Substituting the power series into the equation above gives a +2 theta
term in the recurrence (+alpha when delta = 0).  ``CONVENTION_HEUN``
(default) is that recurrence.  ``CONVENTION_FLIPPED`` uses -2 theta instead,
a form that circulates in the literature for the linear-potential case; it
is kept so the two can be compared.  Flipping the convention is the same as
flipping the sign of the Coulomb coupling, and for n = 1 without the linear
potential it changes nothing, since only alpha^2 enters there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConvergenceFailure, NotTruncated
from .params import HeunParams

CONVENTION_HEUN = "heun"
CONVENTION_FLIPPED = "flipped"
CONVENTIONS = (CONVENTION_HEUN, CONVENTION_FLIPPED)

DEFAULT_TOL = 1e-12
_TAIL_CHECK = 8


def coulomb_sign(convention: str) -> float:
    if convention == CONVENTION_HEUN:
        return 1.0
    if convention == CONVENTION_FLIPPED:
        return -1.0
    raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


@dataclass(frozen=True)
class SeriesSolution:
    coeffs: np.ndarray
    abs_l: int
    params: HeunParams
    truncated_at: int | None = None
    tail_max: float | None = None
    convention: str = CONVENTION_HEUN

    @property
    def is_polynomial(self) -> bool:
        return self.truncated_at is not None

    @property
    def polynomial(self) -> np.ndarray:
        """b_0..b_n for a truncated solution."""
        if self.truncated_at is None:
            raise NotTruncated("series does not terminate")
        return self.coeffs[: self.truncated_at + 1]


def _raw_coeffs(p: HeunParams, K: int, convention: str) -> np.ndarray:
    ct = 2.0 * coulomb_sign(convention) * p.alpha_or_theta
    out = _kernels.frobenius_batch(
        p.abs_l, np.array([ct]), np.array([p.delta]), np.array([p.eta]), K
    )
    return out[0]


def _eta_scale(p: HeunParams) -> float:
    return max(1.0, abs(p.mu_bar) + p.delta * p.delta / 4.0 + 2 * p.abs_l + 2)


def _coeff_scale(b: np.ndarray, n: int) -> float:
    return max(1.0, float(np.max(np.abs(b[: n + 1]))))


def frobenius_coeffs(
    p: HeunParams, K: int, convention: str = CONVENTION_HEUN, tol: float = DEFAULT_TOL
) -> SeriesSolution:
    """Coefficients b_0..b_K of F(z) = sum b_k z^k with b_0 = 1.

    Truncation metadata is filled in when eta = 2n for an integer n >= 0
    with n + 1 <= K and b_{n+1} vanishes to ``tol`` (coefficient-scaled).
    """
    if K < 2:
        raise ValueError("K must be >= 2")
    b = _raw_coeffs(p, K, convention)
    truncated_at = None
    tail_max = None
    n = int(round(p.eta / 2.0))
    if n >= 0 and n + 1 <= K and abs(p.eta - 2 * n) <= tol * _eta_scale(p):
        if abs(b[n + 1]) <= tol * _coeff_scale(b, n):
            truncated_at = n
            tail_max = float(np.max(np.abs(b[n + 1:])))
    return SeriesSolution(b, p.abs_l, p, truncated_at, tail_max, convention)


def check_truncation(
    p: HeunParams, n: int, tol: float = DEFAULT_TOL, convention: str = CONVENTION_HEUN
) -> bool:
    """True iff the series is a degree-n polynomial to within ``tol``.

    Checks eta = 2n, |b_{n+1}| <= tol * max(1, max_{k<=n} |b_k|), and that
    b_{n+2}..b_{n+8} stay below the same bound.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if abs(p.eta - 2 * n) > tol * _eta_scale(p):
        return False
    b = _raw_coeffs(p, n + _TAIL_CHECK, convention)
    bound = tol * _coeff_scale(b, n)
    return bool(np.all(np.abs(b[n + 1:]) <= bound))


def truncation_residual(
    p: HeunParams, n: int, convention: str = CONVENTION_HEUN
) -> float:
    """|b_{n+1}| relative to max(1, max_{k<=n} |b_k|)."""
    b = _raw_coeffs(p, max(n + 1, 2), convention)
    return float(abs(b[n + 1]) / _coeff_scale(b, n))


def _horner(c: np.ndarray, r: float) -> float:
    acc = 0.0
    for ck in c[::-1]:
        acc = acc * r + ck
    return acc


def eval_series(
    s: SeriesSolution, r: float, tol: float = DEFAULT_TOL, max_terms: int = 2000
) -> float:
    """F(r) for r >= 0.

    Polynomial solutions are evaluated exactly (Horner).  Otherwise terms
    are generated until the last ten increments decay geometrically and the
    extrapolated tail falls below ``tol`` relative to the partial sum.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    if s.truncated_at is not None:
        return _horner(s.polynomial, r)
    if r == 0:
        return float(s.coeffs[0])

    K = max(len(s.coeffs) - 1, 64)
    while True:
        b = s.coeffs if len(s.coeffs) - 1 >= K else _raw_coeffs(s.params, K, s.convention)
        with np.errstate(over="ignore", invalid="ignore"):
            terms = b[: K + 1] * r ** np.arange(K + 1, dtype=np.float64)
        if not np.all(np.isfinite(terms)):
            raise ConvergenceFailure(f"series terms overflow at r={r!r}")
        stop = _converged_at(terms, tol)
        if stop is not None:
            value = _horner(b[: stop + 1], r)
            peak = float(np.max(np.abs(terms[: stop + 1])))
            if peak * np.finfo(float).eps > tol * abs(value):
                raise ConvergenceFailure(
                    f"cancellation: largest term {peak:.3g} vs sum {value:.3g} at r={r!r}"
                )
            return value
        if K >= max_terms:
            raise ConvergenceFailure(f"series not converged in {max_terms} terms at r={r!r}")
        K = min(2 * K, max_terms)


def _converged_at(terms: np.ndarray, tol: float) -> int | None:
    # Envelope over adjacent pairs so vanishing odd (or even) terms do not
    # break the ratio test.
    mag = np.abs(terms)
    env = np.maximum(mag[1:], mag[:-1])
    partial = np.cumsum(terms)
    for k in range(10, len(env)):
        window = env[k - 10: k + 1]
        if window[-1] == 0.0:
            if np.all(window == 0.0):
                return k + 1
            continue
        if np.any(np.diff(window) > 0):
            continue
        q = (window[-1] / window[0]) ** 0.1
        if q >= 1.0:
            continue
        tail = 2.0 * window[-1] * q / (1.0 - q)
        if tail <= tol * abs(partial[k + 1]):
            return k + 1
    return None


def eval_radial(s: SeriesSolution, r: float, tol: float = DEFAULT_TOL) -> float:
    """f(r) = r^|l| exp(-r^2/2 - delta r/2) F(r)."""
    if r < 0:
        raise ValueError("r must be >= 0")
    envelope = math.exp(-0.5 * r * r - 0.5 * s.params.delta * r)
    if envelope == 0.0:
        return 0.0
    return r ** s.abs_l * envelope * eval_series(s, r, tol)


def eval_radial_grid(s: SeriesSolution, r: np.ndarray) -> np.ndarray:
    """Vectorised eval_radial for polynomial solutions."""
    c = s.polynomial
    r = np.asarray(r, dtype=np.float64)
    poly = np.zeros_like(r)
    for ck in c[::-1]:
        poly = poly * r + ck
    return r ** s.abs_l * np.exp(-0.5 * r * r - 0.5 * s.params.delta * r) * poly

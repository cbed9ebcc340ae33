"""Permitted oscillator frequencies from the polynomial truncation condition.

For a degree-n polynomial solution two things must hold at once: the
spectral parameter satisfies eta = 2n (this fixes the energy), and the
coefficient b_{n+1} vanishes (this constrains omega).  Every frequency
returned here is fed back through the recurrence and checked with
``check_truncation`` before it is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import _kernels
from .cubic import CubicRoots, cubic_residual, real_cubic_roots
from .errors import BracketExhausted, InvalidConfig, NoPhysicalRoot, ZeroCoupling
from .params import PhysicalConfig, truncated_params
from .series import (
    CONVENTION_HEUN,
    DEFAULT_TOL,
    check_truncation,
    coulomb_sign,
    truncation_residual,
)

CLOSED_FORM = "closed_form"
POLY_ROOT = "poly_root"
CUBIC_ROOT = "cubic_root"
SCAN_ROOT = "scan_root"


@dataclass(frozen=True)
class Root:
    omega: float
    provenance: str
    residual: float


@dataclass(frozen=True)
class QuantizationResult:
    case: str
    n: int
    l: int
    roots: tuple[Root, ...]
    convention: str = CONVENTION_HEUN
    diagnostic: str = ""
    # real candidates rejected by the physicality filter (cubic roots in s
    # for n = 1, frequencies that failed verification otherwise)
    rejected: tuple[float, ...] = ()
    cubic: CubicRoots | None = field(default=None, compare=False)

    @property
    def omegas(self) -> list[float]:
        return [r.omega for r in self.roots]


def _check_common(m, l, n):
    if not (isinstance(m, (int, float)) and math.isfinite(m) and m > 0):
        raise InvalidConfig(f"rest mass m must be > 0, got {m!r}")
    if int(l) != l:
        raise InvalidConfig("l must be an integer")
    if int(n) != n or n < 1:
        raise InvalidConfig(f"radial quantum number n must be an integer >= 1, got {n!r}")


def _verified(cfg, n, tol, convention):
    p = truncated_params(cfg, n)
    return check_truncation(p, n, tol, convention), truncation_residual(p, n, convention)


def freq_case_a_n1(m: float, a: float, l: int) -> float:
    """Closed-form n=1 frequency without the linear potential: a^2 / (2m(2|l|+1))."""
    _check_common(m, l, 1)
    if a == 0:
        raise ZeroCoupling("coupling a = 0 gives omega = 0, which has no confining term")
    return a * a / (2.0 * m * (2 * abs(int(l)) + 1))


def _jacobi_matrix(n: int, abs_l: int):
    """Symmetric tridiagonal whose eigenvalues are the x with b_{n+1}(x) = 0.

    With eta = 2n and delta = 0 the recurrence reads
    x b_j = (j+1)(j+1+2|l|) b_{j+1} + 2(n-j+1) b_{j-1},  j = 0..n,
    a tridiagonal eigenproblem with positive off-diagonal products, so all
    roots are real.
    """
    j = np.arange(n, dtype=np.float64)
    off = np.sqrt((j + 1) * (j + 1 + 2 * abs_l) * 2 * (n - j))
    return np.zeros(n + 1), off


def _bn1_and_derivative(x: float, n: int, abs_l: int):
    # recurrence for b_k(x) and d b_k / dx together (delta = 0, eta = 2n)
    b_prev, b = 1.0, x / (2 * abs_l + 1)
    d_prev, d = 0.0, 1.0 / (2 * abs_l + 1)
    for k in range(n):
        den = (k + 2) * (k + 2 + 2 * abs_l)
        spec = 2.0 * n - 2.0 * k
        b_next = (x * b - spec * b_prev) / den
        d_next = (b + x * d - spec * d_prev) / den
        b_prev, b, d_prev, d = b, b_next, d, d_next
    return b, d


def freq_case_a_general(
    m: float,
    a: float,
    l: int,
    n: int,
    tol: float = DEFAULT_TOL,
    convention: str = CONVENTION_HEUN,
) -> QuantizationResult:
    """All permitted frequencies for degree n without the linear potential.

    b_{n+1} is a degree-(n+1) polynomial in alpha with parity (-1)^(n+1);
    its roots are the eigenvalues of a small symmetric tridiagonal matrix.
    Each root with the sign of ``a`` maps to omega = a^2 / (m alpha^2).
    """
    _check_common(m, l, n)
    if a == 0:
        raise ZeroCoupling("coupling a = 0 gives omega = 0, which has no confining term")
    abs_l = abs(int(l))
    sigma = coulomb_sign(convention)
    d, e = _jacobi_matrix(n, abs_l)
    xs = np.linalg.eigvalsh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))

    roots = []
    for x in xs:
        b, db = _bn1_and_derivative(x, n, abs_l)
        if db != 0:
            x_new = x - b / db
            if abs(_bn1_and_derivative(x_new, n, abs_l)[0]) < abs(b):
                x = x_new
        alpha = sigma * x
        if abs(alpha) <= 1e-8 * max(1.0, float(np.max(np.abs(xs)))) or math.copysign(1, alpha) != math.copysign(1, a):
            continue
        omega = a * a / (m * alpha * alpha)
        ok, residual = _verified(PhysicalConfig(m, omega, a, 0.0, n, l), n, tol, convention)
        if ok and omega > 0:
            roots.append(Root(omega, POLY_ROOT, residual))
    if not roots:
        raise NoPhysicalRoot(f"no physical root for n={n}, l={l}, a={a!r}")
    roots.sort(key=lambda r: r.omega)
    return QuantizationResult("A", n, int(l), tuple(roots), convention)


def case_b_cubic_coefficients(m, a, chi, l, convention=CONVENTION_HEUN):
    """(A, B, C) of the n=1 condition s^3 - A s^2 + B s - C = 0, s = sqrt(m^2 omega^2 + chi^2)."""
    abs_l = abs(int(l))
    sigma = coulomb_sign(convention)
    A = a * a / (2.0 * (2 * abs_l + 1))
    B = -sigma * 2.0 * m * chi * a * (abs_l + 1) / (2 * abs_l + 1)
    C = m * m * chi * chi * (2 * abs_l + 3) / 2.0
    return A, B, C


def freq_case_b_n1(
    m: float,
    a: float,
    chi: float,
    l: int,
    tol: float = DEFAULT_TOL,
    convention: str = CONVENTION_HEUN,
) -> QuantizationResult:
    """n=1 frequencies with the linear potential, from a cubic in s."""
    _check_common(m, l, 1)
    if not (math.isfinite(chi) and chi > 0):
        raise InvalidConfig(f"chi must be > 0 for the linear-potential case, got {chi!r}")
    A, B, C = case_b_cubic_coefficients(m, a, chi, l, convention)
    cubic = real_cubic_roots(1.0, -A, B, -C)
    roots = []
    rejected = []
    for s in cubic.roots:
        # s within round-off of chi is the omega = 0 boundary, not a frequency
        if s - chi <= 8 * np.finfo(float).eps * abs(s):
            rejected.append(s)
            continue
        omega = math.sqrt((s - chi) * (s + chi)) / m
        ok, residual = _verified(PhysicalConfig(m, omega, a, chi, 1, l), 1, tol, convention)
        if ok:
            roots.append(Root(omega, CUBIC_ROOT, residual))
        else:
            rejected.append(s)
    if not roots:
        top = max(cubic.roots)
        raise NoPhysicalRoot(
            f"no physical root (max real root s={top:.3f} < chi={chi:g})"
            if top <= chi
            else f"no physical root (real roots {cubic.roots} fail verification)",
            cubic.roots,
            cubic=cubic,
        )
    return QuantizationResult("B", 1, int(l), tuple(roots), convention, rejected=tuple(rejected), cubic=cubic)


def cubic_relative_residual(m, a, chi, l, s, convention=CONVENTION_HEUN):
    A, B, C = case_b_cubic_coefficients(m, a, chi, l, convention)
    scale = max(1.0, A * s * s, abs(B * s), C)
    return abs(cubic_residual(1.0, -A, B, -C, s)) / scale


def default_scan_range(m, a, chi):
    return 1e-4 * chi / m, 1e4 * max(a * a / m, chi / m)


def _bn1_case_b(omegas, m, a, chi, abs_l, n, sigma):
    omegas = np.asarray(omegas, dtype=np.float64)
    varpi = np.sqrt(m * m * omegas * omegas + chi * chi)
    theta = a / np.sqrt(varpi)
    delta = 2.0 * m * chi / varpi ** 1.5
    eta = np.full_like(omegas, 2.0 * n)
    b = _kernels.frobenius_batch(abs_l, 2.0 * sigma * theta, delta, eta, n + 1)
    return b[:, n + 1]


def freq_case_b_general(
    m: float,
    a: float,
    chi: float,
    l: int,
    n: int,
    omega_min: float | None = None,
    omega_max: float | None = None,
    n_grid: int = 4000,
    tol: float = DEFAULT_TOL,
    convention: str = CONVENTION_HEUN,
) -> QuantizationResult:
    """Permitted frequencies for any n by scanning b_{n+1}(omega) for sign changes.

    Roots closer together than one log-grid step can be missed; raise
    ``n_grid`` or narrow the range if that matters.
    """
    _check_common(m, l, n)
    if not (math.isfinite(chi) and chi > 0):
        raise InvalidConfig(f"chi must be > 0 for the linear-potential case, got {chi!r}")
    lo_def, hi_def = default_scan_range(m, a, chi)
    lo = lo_def if omega_min is None else omega_min
    hi = hi_def if omega_max is None else omega_max
    if not (0 < lo < hi):
        raise InvalidConfig(f"scan range must satisfy 0 < omega_min < omega_max, got ({lo}, {hi})")
    abs_l = abs(int(l))
    sigma = coulomb_sign(convention)
    grid = np.geomspace(lo, hi, n_grid)
    vals = _bn1_case_b(grid, m, a, chi, abs_l, n, sigma)

    def g(w):
        return float(_bn1_case_b(np.array([w]), m, a, chi, abs_l, n, sigma)[0])

    candidates = []
    for i in range(n_grid - 1):
        f0, f1 = vals[i], vals[i + 1]
        if f0 == 0.0:
            candidates.append(float(grid[i]))
        elif f0 * f1 < 0:
            candidates.append(brentq(g, grid[i], grid[i + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500))
    if vals[-1] == 0.0:
        candidates.append(float(grid[-1]))
    if not candidates:
        raise BracketExhausted(
            f"no sign change of b_{n + 1} on omega in [{lo:.3g}, {hi:.3g}]; widen the scan range"
        )
    roots = []
    for omega in candidates:
        ok, residual = _verified(PhysicalConfig(m, omega, a, chi, n, l), n, tol, convention)
        if ok and omega > 0:
            roots.append(Root(float(omega), SCAN_ROOT, residual))
    if not roots:
        raise NoPhysicalRoot(f"{len(candidates)} sign changes found but none verified as truncating")
    roots.sort(key=lambda r: r.omega)
    return QuantizationResult("B", n, int(l), tuple(roots), convention)


def permitted_frequencies(
    case: str,
    m: float,
    a: float,
    l: int,
    n: int,
    chi: float = 0.0,
    tol: float = DEFAULT_TOL,
    convention: str = CONVENTION_HEUN,
    omega_min: float | None = None,
    omega_max: float | None = None,
    strict: bool = False,
) -> QuantizationResult:
    """Dispatch to the right solver; a missing physical root gives an empty result.

    With ``strict=True`` the NoPhysicalRoot error propagates instead.
    """
    case = case.upper()
    try:
        if case == "A":
            if chi != 0:
                raise InvalidConfig("case A has no linear potential; use chi = 0 or case B")
            if n == 1:
                omega = freq_case_a_n1(m, a, l)
                ok, residual = _verified(PhysicalConfig(m, omega, a, 0.0, 1, l), 1, tol, convention)
                if not ok:
                    raise NoPhysicalRoot(f"closed-form omega={omega!r} failed the truncation check")
                return QuantizationResult("A", 1, int(l), (Root(omega, CLOSED_FORM, residual),), convention)
            return freq_case_a_general(m, a, l, n, tol, convention)
        if case == "B":
            if n == 1:
                return freq_case_b_n1(m, a, chi, l, tol, convention)
            return freq_case_b_general(
                m, a, chi, l, n, omega_min=omega_min, omega_max=omega_max, tol=tol, convention=convention
            )
        raise InvalidConfig(f"case must be 'A' or 'B', got {case!r}")
    except NoPhysicalRoot as exc:
        if strict:
            raise
        return QuantizationResult(
            case, int(n), int(l), (), convention, diagnostic=str(exc), rejected=exc.real_roots, cubic=exc.cubic
        )

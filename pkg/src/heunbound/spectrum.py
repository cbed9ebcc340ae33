"""Energy levels and normalised radial wavefunctions at permitted frequencies."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import InvalidConfig, NegativeRadicand, NotTruncated
from .params import HeunParams
from .quantize import case_b_cubic_coefficients, real_cubic_roots
from .series import CONVENTION_HEUN, SeriesSolution, eval_radial_grid


@dataclass(frozen=True)
class EnergyLevel:
    n: int
    l: int
    omega: float
    E_plus: float
    E_minus: float
    case: str


def _check(m, n):
    if not m > 0:
        raise InvalidConfig(f"rest mass m must be > 0, got {m!r}")
    if int(n) != n or n < 1:
        raise InvalidConfig(f"n must be an integer >= 1, got {n!r}")


def energy_case_a(m: float, omega: float, n: int, l: int) -> EnergyLevel:
    """E = +-sqrt(m^2 + 2 m omega (n + |l| + 1/2))."""
    _check(m, n)
    if not omega > 0:
        raise InvalidConfig(f"omega must be > 0, got {omega!r}")
    e = math.sqrt(m * m + 2.0 * m * omega * (n + abs(int(l)) + 0.5))
    return EnergyLevel(int(n), int(l), omega, e, -e, "A")


def energy_case_b(m: float, omega: float, chi: float, n: int, l: int) -> EnergyLevel:
    """Energy with the linear scalar potential.

    E^2 = m^2 + 2 varpi (n + |l| + 1) - m omega - m^2 chi^2 / varpi^2,
    varpi = sqrt(m^2 omega^2 + chi^2).  At chi = 0 this is the case-A
    expression, and the case-A code path is used so the two agree bit for bit.
    """
    _check(m, n)
    if omega < 0 or chi < 0:
        raise InvalidConfig("omega and chi must be >= 0")
    if chi == 0:
        level = energy_case_a(m, omega, n, l)
        return EnergyLevel(level.n, level.l, omega, level.E_plus, level.E_minus, "B")
    varpi2 = m * m * omega * omega + chi * chi
    radicand = (
        m * m
        + 2.0 * math.sqrt(varpi2) * (n + abs(int(l)) + 1)
        - m * omega
        - m * m * chi * chi / varpi2
    )
    if radicand < 0:
        raise NegativeRadicand(radicand)
    e = math.sqrt(radicand)
    return EnergyLevel(int(n), int(l), omega, e, -e, "B")


def energy_n1_closed_form(m: float, a: float, l: int) -> float:
    """Lowest-state energy with omega eliminated: m sqrt(1 + a^2 (2|l|+3) / (2 m^2 (2|l|+1)))."""
    L = abs(int(l))
    return m * math.sqrt(1.0 + a * a * (2 * L + 3) / (2.0 * m * m * (2 * L + 1)))


@dataclass(frozen=True)
class IdentityCheck:
    omega: float
    lhs: float
    rhs: float
    rel_error: float
    passed: bool


def algebraic_identity_check(m, a, chi, l, n=1, rtol=1e-14, convention=CONVENTION_HEUN):
    """Compare the two routes to the n=1 energy.

    Without the linear potential: the omega-free closed form against the
    general level formula at omega = a^2/(2m(2|l|+1)).  With it: the level
    formula evaluated at each cubic root against the same formula written in
    terms of s = sqrt(m^2 omega^2 + chi^2) directly.
    """
    if n != 1:
        raise ValueError("the identity is only stated for n = 1")
    L = abs(int(l))
    checks = []
    if chi == 0:
        omega = a * a / (2.0 * m * (2 * L + 1))
        lhs = energy_n1_closed_form(m, a, l)
        rhs = energy_case_a(m, omega, 1, l).E_plus
        rel = abs(lhs - rhs) / abs(rhs)
        checks.append(IdentityCheck(omega, lhs, rhs, rel, rel <= rtol))
        return checks
    A, B, C = case_b_cubic_coefficients(m, a, chi, l, convention)
    for s in real_cubic_roots(1.0, -A, B, -C).roots:
        if s <= chi:
            continue
        omega = math.sqrt((s - chi) * (s + chi)) / m
        lhs = energy_case_b(m, omega, chi, 1, l).E_plus
        rhs = math.sqrt(m * m + 2.0 * s * (L + 2) - m * omega - m * m * chi * chi / (s * s))
        rel = abs(lhs - rhs) / abs(rhs)
        checks.append(IdentityCheck(omega, lhs, rhs, rel, rel <= max(rtol, 4e-16)))
    return checks


@dataclass(frozen=True)
class GridSpec:
    rho_max: float | None = None
    points: int = 4001


@dataclass(frozen=True)
class RadialWavefunction:
    grid: np.ndarray
    values: np.ndarray
    norm_constant: float
    nodes: int


def count_sign_changes(values: np.ndarray, rel_floor: float = 1e-10) -> int:
    v = np.asarray(values)
    big = np.abs(v) > rel_floor * np.max(np.abs(v))
    s = np.sign(v[big])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def positive_root_count(coeffs: np.ndarray) -> int:
    """Number of real roots > 0 of sum c_k z^k, by companion-matrix isolation."""
    c = np.trim_zeros(np.asarray(coeffs, dtype=np.float64), "b")
    if len(c) <= 1:
        return 0
    roots = np.polynomial.polynomial.polyroots(c)
    real = roots[np.abs(roots.imag) <= 1e-9 * np.maximum(1.0, np.abs(roots))].real
    return int(np.count_nonzero(real > 0))


def build_wavefunction(
    p: HeunParams,
    s: SeriesSolution,
    physical_scale: float | None = None,
    grid_spec: GridSpec | None = None,
) -> RadialWavefunction:
    """Sample f(rho) = zeta^|l| e^{-zeta^2/2 - delta zeta/2} F(zeta), zeta = scale * rho.

    Normalised so that the integral of f^2 rho d rho over [0, rho_max] is 1.
    ``physical_scale`` defaults to sqrt(varpi).
    """
    if s.truncated_at is None:
        raise NotTruncated("wavefunctions are only built for polynomial (truncated) solutions")
    scale = p.scale if physical_scale is None else physical_scale
    spec = grid_spec or GridSpec()
    rho_max = spec.rho_max if spec.rho_max is not None else 10.0 / scale
    rho = np.linspace(0.0, rho_max, spec.points)
    raw = eval_radial_grid(s, scale * rho)
    norm2 = simpson(raw * raw * rho, x=rho)
    c = 1.0 / math.sqrt(norm2)
    return RadialWavefunction(rho, c * raw, c, count_sign_changes(raw))

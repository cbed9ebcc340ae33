"""Finite-difference eigensolver for the effective radial operator.

    -f'' - f'/rho + l^2/rho^2 f + varpi^2 rho^2 f + 2 m chi rho f + (a/rho) f = Lambda f,
    Lambda = E^2 - m^2 + m omega.

This is an independent check on the series machinery: it knows nothing
about Heun functions or truncation, only the operator.

Discretisation: cell-centred grid rho_i = (i - 1/2) h, i = 1..N, with the
outer Dirichlet point at rho_max = (N + 1/2) h.  The radial Laplacian is
taken in flux form, -(1/rho) d/drho (rho df/drho), so no flux crosses the
origin and no inner cutoff is needed.  Scaling by sqrt(rho_i) (the discrete
u = sqrt(rho) f) makes the matrix symmetric tridiagonal.  The scheme is
second order for every l, including l = 0 where the continuum -1/(4 rho^2)
term of the u-equation would otherwise spoil convergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ConvergenceFailure, InvalidDomain, MismatchReport, NegativeRadicand
from .params import PhysicalConfig, effective_varpi, truncated_params
from .quantize import QuantizationResult
from .series import frobenius_coeffs
from .spectrum import count_sign_changes, energy_case_a, energy_case_b, positive_root_count

DEFAULT_POINTS = 4000
DEFAULT_RHO_SCALE = 12.0
DEFAULT_K = 6


@dataclass(frozen=True)
class RadialOperatorSpec:
    abs_l: int
    varpi2: float
    lin_coeff: float
    coul_coeff: float
    rho_max: float
    n_points: int = DEFAULT_POINTS

    def __post_init__(self):
        if self.n_points < 100:
            raise InvalidDomain(f"need at least 100 grid points, got {self.n_points}")
        if not (self.rho_max > 0 and math.isfinite(self.rho_max)):
            raise InvalidDomain(f"rho_max must be positive and finite, got {self.rho_max!r}")
        if not self.varpi2 > 0:
            raise InvalidDomain(f"varpi^2 must be > 0, got {self.varpi2!r}")
        if self.abs_l < 0:
            raise InvalidDomain("abs_l must be >= 0")

    @property
    def h(self) -> float:
        return self.rho_max / (self.n_points + 0.5)

    @property
    def domain(self) -> tuple[float, float]:
        return 0.5 * self.h, self.rho_max

    def refined(self, factor: int = 2) -> "RadialOperatorSpec":
        return RadialOperatorSpec(
            self.abs_l, self.varpi2, self.lin_coeff, self.coul_coeff, self.rho_max, self.n_points * factor
        )

    @classmethod
    def from_config(cls, cfg: PhysicalConfig, rho_max=None, n_points=DEFAULT_POINTS, rho_scale=DEFAULT_RHO_SCALE):
        varpi = effective_varpi(cfg.m, cfg.omega, cfg.chi)
        if rho_max is None:
            rho_max = default_rho_max(varpi, cfg.n, cfg.abs_l, rho_scale)
        return cls(cfg.abs_l, varpi * varpi, 2.0 * cfg.m * cfg.chi, cfg.coupling_a, rho_max, n_points)


def default_rho_max(varpi: float, n: int = 1, abs_l: int = 0, scale: float = DEFAULT_RHO_SCALE) -> float:
    return scale / math.sqrt(varpi) * max(1.0, math.sqrt(n + abs_l + 1))


@dataclass(frozen=True)
class TridiagonalSystem:
    diag: np.ndarray
    off: np.ndarray
    grid: np.ndarray
    h: float


def effective_potential(spec: RadialOperatorSpec, rho):
    return (
        spec.abs_l ** 2 / rho ** 2
        + spec.varpi2 * rho ** 2
        + spec.lin_coeff * rho
        + spec.coul_coeff / rho
    )


def build_operator(spec: RadialOperatorSpec) -> TridiagonalSystem:
    h = spec.h
    rho = (np.arange(1, spec.n_points + 1) - 0.5) * h
    up = rho + 0.5 * h
    down = rho - 0.5 * h
    diag = (up + down) / (rho * h * h) + effective_potential(spec, rho)
    off = -up[:-1] / (h * h * np.sqrt(rho[:-1] * rho[1:]))
    return TridiagonalSystem(diag, off, rho, h)


@dataclass(frozen=True)
class OracleSpectrum:
    eigenvalues: np.ndarray
    node_counts: tuple[int, ...]
    grid_meta: tuple[int, float, float]
    convergence_estimate: np.ndarray
    extrapolated: np.ndarray = field(repr=False)


def _solve(spec, k, with_vectors):
    sys_ = build_operator(spec)
    vals = _kernels.lowest_eigvals(sys_.diag, sys_.off, k)
    if not with_vectors:
        return vals, None
    vecs = _kernels.eigvecs(sys_.diag, sys_.off, vals)
    return vals, tuple(count_sign_changes(vecs[:, j], 1e-8) for j in range(k))


def eigen_lowest(spec: RadialOperatorSpec, k: int = DEFAULT_K, tol: float | None = None) -> OracleSpectrum:
    """The k lowest eigenvalues with node counts and a two-grid (N, 2N) error estimate.

    Raises ConvergenceFailure when ``tol`` is given and any estimated
    relative error exceeds it.
    """
    if k < 1 or k >= spec.n_points // 10:
        raise ValueError(f"k must satisfy 1 <= k << N, got k={k}, N={spec.n_points}")
    coarse, nodes = _solve(spec, k, True)
    fine, _ = _solve(spec.refined(2), k, False)
    # second-order scheme: error(N) ~ (4/3) (Lambda_N - Lambda_2N)
    err = np.abs(coarse - fine) * 4.0 / 3.0
    extrap = (4.0 * fine - coarse) / 3.0
    if tol is not None:
        rel = err / np.maximum(np.abs(coarse), 1e-300)
        if np.any(rel > tol):
            worst = int(np.argmax(rel))
            raise ConvergenceFailure(
                f"eigenvalue {worst}: two-grid estimate {rel[worst]:.3g} exceeds tol {tol:.3g}"
            )
    return OracleSpectrum(coarse, nodes, (spec.n_points, spec.domain[0], spec.rho_max), err, extrap)


def analytic_lambda(cfg: PhysicalConfig, n: int | None = None) -> float:
    """Lambda fixed by the spectral condition: varpi (2n + 2|l| + 2 - delta^2/4)."""
    p = truncated_params(cfg, n)
    return p.varpi * p.mu_bar


@dataclass(frozen=True)
class ValidationEntry:
    omega: float
    lambda_analytic: float
    lambda_oracle: float
    node_index: int
    rel_error: float
    energy_consistent: bool
    passed: bool
    oracle_error_estimate: float = 0.0


@dataclass(frozen=True)
class CrossValidationReport:
    entries: tuple[ValidationEntry, ...]
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.entries) and all(e.passed for e in self.entries)


def cross_validate(
    cfg: PhysicalConfig,
    q: QuantizationResult | None = None,
    tol: float = 2e-3,
    n_points: int = DEFAULT_POINTS,
    rho_scale: float = DEFAULT_RHO_SCALE,
    omegas=None,
    raise_on_mismatch: bool = True,
) -> CrossValidationReport:
    """Check each permitted frequency against the oracle spectrum.

    The polynomial's count of positive roots selects which oracle level
    (by node count) must equal varpi * mu_bar.  ``omegas`` overrides the
    frequencies taken from ``q`` (used for negative controls).
    """
    if omegas is None:
        if q is None or not q.roots:
            raise ValueError("cross_validate needs at least one frequency")
        omegas = q.omegas
    convention = q.convention if q is not None else "heun"
    n = cfg.n if q is None else q.n
    entries = []
    for omega in omegas:
        c = PhysicalConfig(cfg.m, float(omega), cfg.coupling_a, cfg.chi, n, cfg.l)
        p = truncated_params(c, n)
        poly = frobenius_coeffs(p, n + 1, convention).coeffs[: n + 1]
        node = positive_root_count(poly)
        lam = p.varpi * p.mu_bar
        spec = RadialOperatorSpec.from_config(c, n_points=n_points, rho_scale=rho_scale)
        k = max(DEFAULT_K, node + 2)
        oracle = eigen_lowest(spec, k)
        # index by node count, not by position, per the oscillation theorem
        idx = oracle.node_counts.index(node) if node in oracle.node_counts else node
        lam_o = float(oracle.eigenvalues[idx])
        rel = abs(lam_o - lam) / abs(lam)
        try:
            if c.chi == 0:
                level = energy_case_a(c.m, c.omega, n, c.l)
            else:
                level = energy_case_b(c.m, c.omega, c.chi, n, c.l)
            e2 = lam + c.m * c.m - c.m * c.omega
            energy_ok = abs(level.E_plus ** 2 - e2) <= 1e-12 * max(1.0, abs(e2))
        except NegativeRadicand:
            energy_ok = False
        entries.append(
            ValidationEntry(
                float(omega), lam, lam_o, idx, rel, energy_ok, rel <= tol and energy_ok,
                float(oracle.convergence_estimate[idx]),
            )
        )
    report = CrossValidationReport(tuple(entries), tol)
    if raise_on_mismatch and not report.passed:
        raise MismatchReport(report)
    return report

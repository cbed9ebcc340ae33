"""Physical inputs and the dimensionless biconfluent Heun parameters.

The background couplings g, lambda, B0 and kappa only ever enter the radial
equation through their product, so a single ``coupling_a = g*lambda*B0*kappa``
is stored.  Its sign is free (negative means an attractive 1/rho term).

Two physical setups share one parameterisation:

* case "A": oscillator + Coulomb-type term, chi = 0;
* case "B": the same plus a linear scalar potential m -> m + chi*rho.

Case A is the chi = 0 specialisation of case B: ``varpi = m*omega``,
``theta = alpha`` and ``delta = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateOperator, InvalidConfig

CASES = ("A", "B")


@dataclass(frozen=True)
class PhysicalConfig:
    m: float
    omega: float
    coupling_a: float
    chi: float = 0.0
    n: int = 1
    l: int = 0

    def __post_init__(self):
        for name in ("m", "omega", "coupling_a", "chi"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise InvalidConfig(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise InvalidConfig(f"{name} must be finite, got {value!r}")
        if self.m <= 0:
            raise InvalidConfig(f"rest mass m must be > 0, got {self.m!r}")
        if self.omega < 0:
            raise InvalidConfig(f"omega must be >= 0, got {self.omega!r}")
        if self.chi < 0:
            raise InvalidConfig(f"chi must be >= 0, got {self.chi!r}")
        if int(self.n) != self.n or int(self.l) != self.l:
            raise InvalidConfig("quantum numbers n and l must be integers")
        if self.n < 1:
            raise InvalidConfig(f"radial quantum number n must be >= 1, got {self.n!r}")

    @property
    def abs_l(self) -> int:
        return abs(int(self.l))

    @property
    def case(self) -> str:
        return "A" if self.chi == 0 else "B"

    def with_omega(self, omega: float) -> "PhysicalConfig":
        return PhysicalConfig(self.m, omega, self.coupling_a, self.chi, self.n, self.l)


@dataclass(frozen=True)
class HeunParams:
    """One biconfluent Heun problem.

    ``alpha_or_theta`` is alpha in case A and theta in case B; ``mu_bar`` is
    mu or mu-bar likewise.  ``varpi`` is the quadratic strength that sets the
    dimensionless radius zeta = sqrt(varpi) * rho.
    """

    abs_l: int
    alpha_or_theta: float
    delta: float
    mu_bar: float
    varpi: float

    @property
    def eta(self) -> float:
        """mu_bar + delta^2/4 - 2|l| - 2; truncation at degree n requires eta = 2n."""
        return self.mu_bar + self.delta * self.delta / 4.0 - 2 * self.abs_l - 2

    @property
    def scale(self) -> float:
        return math.sqrt(self.varpi)


def effective_varpi(m: float, omega: float, chi: float) -> float:
    if chi == 0:
        return m * omega
    return math.sqrt(m * m * omega * omega + chi * chi)


def _finite(p: HeunParams) -> HeunParams:
    # extremely weak confinement pushes zeta = sqrt(varpi) rho out of range
    if not all(map(math.isfinite, (p.alpha_or_theta, p.delta, p.mu_bar))) or p.varpi ** 1.5 == 0:
        raise DegenerateOperator(f"confinement varpi={p.varpi!r} is too weak to rescale")
    return p


def derive_params(cfg: PhysicalConfig, energy: float) -> HeunParams:
    """Map a physical configuration and a trial energy to Heun parameters."""
    if not math.isfinite(energy):
        raise InvalidConfig(f"energy must be finite, got {energy!r}")
    if cfg.omega == 0 and cfg.chi == 0:
        raise DegenerateOperator("omega = chi = 0 leaves no confining term")
    m, omega, a, chi = cfg.m, cfg.omega, cfg.coupling_a, cfg.chi
    spectral = energy * energy - m * m + m * omega
    varpi = effective_varpi(m, omega, chi)
    if varpi ** 1.5 == 0:
        raise DegenerateOperator(f"confinement varpi={varpi!r} is too weak to rescale")
    if chi == 0:
        return _finite(HeunParams(cfg.abs_l, a / math.sqrt(varpi), 0.0, spectral / varpi, varpi))
    theta = a / math.sqrt(varpi)
    delta = 2.0 * m * chi / varpi ** 1.5
    return _finite(HeunParams(cfg.abs_l, theta, delta, spectral / varpi, varpi))


def truncated_params(cfg: PhysicalConfig, n: int | None = None) -> HeunParams:
    """Heun parameters with mu_bar fixed by the degree-n spectral condition.

    This does not require an energy: eta is set to 2n, i.e.
    mu_bar = 2n + 2|l| + 2 - delta^2/4.
    """
    n = cfg.n if n is None else n
    if cfg.omega == 0 and cfg.chi == 0:
        raise DegenerateOperator("omega = chi = 0 leaves no confining term")
    varpi = effective_varpi(cfg.m, cfg.omega, cfg.chi)
    if varpi ** 1.5 == 0:
        raise DegenerateOperator(f"confinement varpi={varpi!r} is too weak to rescale")
    coul = cfg.coupling_a / math.sqrt(varpi)
    if cfg.chi == 0:
        return _finite(HeunParams(cfg.abs_l, coul, 0.0, float(2 * n + 2 * cfg.abs_l + 2), varpi))
    delta = 2.0 * cfg.m * cfg.chi / varpi ** 1.5
    mu_bar = 2 * n + 2 * cfg.abs_l + 2 - delta * delta / 4.0
    return _finite(HeunParams(cfg.abs_l, coul, delta, mu_bar, varpi))

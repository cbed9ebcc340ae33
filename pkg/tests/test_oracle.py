import math

import numpy as np
import pytest

from _helpers import exact_oscillator_lambda, observed_order
from heunbound import (
    ConvergenceFailure,
    InvalidDomain,
    MismatchReport,
    PhysicalConfig,
    RadialOperatorSpec,
    build_operator,
    cross_validate,
    eigen_lowest,
    permitted_frequencies,
)
from heunbound.oracle import analytic_lambda, default_rho_max, effective_potential


def oscillator_spec(m=1.0, omega=1.0, l=0, n_points=4000, a=0.0, chi=0.0):
    cfg = PhysicalConfig(m, omega, a, chi, 1, l)
    return RadialOperatorSpec.from_config(cfg, n_points=n_points)


def test_diagonal_is_stencil_plus_potential():
    spec = oscillator_spec(a=0.7, chi=0.2, l=2, n_points=500)
    sys_ = build_operator(spec)
    expected = 2 / sys_.h ** 2 + effective_potential(spec, sys_.grid)
    assert np.allclose(sys_.diag, expected, rtol=1e-14)
    assert sys_.grid[0] == pytest.approx(0.5 * sys_.h)
    assert np.all(sys_.off < 0)


@pytest.mark.parametrize("l", [0, 1, 2])
def test_pure_oscillator_spectrum(l):
    spec = oscillator_spec(l=l)
    out = eigen_lowest(spec, 4)
    for k in range(4):
        exact = exact_oscillator_lambda(1.0, 1.0, k, l)
        assert out.eigenvalues[k] == pytest.approx(exact, rel=1e-4)


def test_l1_lowest():
    out = eigen_lowest(oscillator_spec(omega=0.3, l=1), 1)
    assert out.eigenvalues[0] == pytest.approx(4 * 0.3, rel=1e-4)


def test_case_a_ground_state():
    spec = RadialOperatorSpec.from_config(PhysicalConfig(1, 0.5, 1.0))
    out = eigen_lowest(spec, 3)
    assert out.eigenvalues[0] == pytest.approx(2.0, rel=1e-3)
    assert out.node_counts == (0, 1, 2)
    assert np.all(np.diff(out.eigenvalues) > 0)
    assert out.convergence_estimate[0] < 1e-5


def test_attractive_below_repulsive():
    lo = eigen_lowest(RadialOperatorSpec.from_config(PhysicalConfig(1, 0.5, -1.0)), 1)
    hi = eigen_lowest(RadialOperatorSpec.from_config(PhysicalConfig(1, 0.5, 1.0)), 1)
    assert lo.eigenvalues[0] < hi.eigenvalues[0]


@pytest.mark.parametrize("args", [(1, 0.5, 1.0, 0.0, 0), (1, 2.0, -1.5, 0.3, 1), (2, 1.0, 0.0, 0.0, 2)])
def test_sturm_ordering(args):
    m, omega, a, chi, l = args
    out = eigen_lowest(RadialOperatorSpec.from_config(PhysicalConfig(m, omega, a, chi, 1, l)), 6)
    assert out.node_counts == tuple(range(6))


@pytest.mark.parametrize("l", [0, 1])
def test_second_order_convergence(l):
    errs = []
    for N in (2000, 4000, 8000):
        spec = oscillator_spec(l=l, n_points=N, a=0.0)
        lam = eigen_lowest(spec, 1).eigenvalues[0]
        errs.append(lam - exact_oscillator_lambda(1, 1, 0, l))
    assert 1.8 <= observed_order(*errs) <= 2.2


def test_case_a_convergence_order():
    errs = []
    for N in (2000, 4000, 8000):
        spec = RadialOperatorSpec.from_config(PhysicalConfig(1, 0.5, 1.0), n_points=N)
        errs.append(eigen_lowest(spec, 1).eigenvalues[0] - 2.0)
    assert 1.8 <= observed_order(*errs) <= 2.2


def test_domain_doubling_at_fixed_step():
    cfg = PhysicalConfig(1, 0.5, 1.0, 0.2, 1, 1)
    base = RadialOperatorSpec.from_config(cfg, n_points=3000)
    wide = RadialOperatorSpec(
        base.abs_l, base.varpi2, base.lin_coeff, base.coul_coeff,
        (2 * base.n_points + 0.5) * base.h, 2 * base.n_points,
    )
    assert wide.h == pytest.approx(base.h, rel=1e-14)
    a = eigen_lowest(base, 4).eigenvalues
    b = eigen_lowest(wide, 4).eigenvalues
    assert np.all(np.abs(a - b) / np.abs(a) < 1e-9)


def test_default_domain():
    assert default_rho_max(0.5) == pytest.approx(12 / math.sqrt(0.5) * math.sqrt(2))


@pytest.mark.parametrize(
    "kwargs",
    [dict(n_points=50), dict(rho_max=-1.0), dict(rho_max=float("inf")), dict(varpi2=0.0), dict(abs_l=-1)],
)
def test_invalid_domain(kwargs):
    base = dict(abs_l=0, varpi2=1.0, lin_coeff=0.0, coul_coeff=0.0, rho_max=10.0, n_points=1000)
    base.update(kwargs)
    with pytest.raises(InvalidDomain):
        RadialOperatorSpec(**base)


def test_convergence_failure():
    spec = RadialOperatorSpec.from_config(PhysicalConfig(1, 0.5, 1.0), n_points=200)
    with pytest.raises(ConvergenceFailure):
        eigen_lowest(spec, 2, tol=1e-12)
    with pytest.raises(ValueError):
        eigen_lowest(spec, 0)


def test_cross_validate_case_a():
    q = permitted_frequencies("A", 1, 1, 0, 1)
    rep = cross_validate(PhysicalConfig(1, 0.5, 1.0), q, tol=1e-3)
    (e,) = rep.entries
    assert rep.passed and e.node_index == 0 and e.energy_consistent
    assert e.lambda_analytic == 2.0


def test_cross_validate_attractive_uses_node_one():
    q = permitted_frequencies("A", 1, -1, 0, 1)
    rep = cross_validate(PhysicalConfig(1, 0.5, -1.0), q, tol=1e-3)
    assert rep.passed and rep.entries[0].node_index == 1


def test_cross_validate_case_b():
    q = permitted_frequencies("B", 1, 4, 0, 1, chi=0.1)
    rep = cross_validate(PhysicalConfig(1, q.omegas[0], 4.0, 0.1), q, tol=2e-3)
    e = rep.entries[0]
    assert rep.passed
    p_varpi = math.hypot(q.omegas[0], 0.1)
    delta = 2 * 0.1 / p_varpi ** 1.5
    assert e.lambda_analytic == pytest.approx(p_varpi * (4 - delta * delta / 4), rel=1e-14)


def test_cross_validate_flipped_sign_mismatches():
    q = permitted_frequencies("B", 1, 4, 0, 1, chi=0.1, convention="flipped")
    with pytest.raises(MismatchReport) as info:
        cross_validate(PhysicalConfig(1, q.omegas[0], 4.0, 0.1), q, tol=2e-3)
    assert "oracle mismatch" in str(info.value)
    assert not info.value.report.passed


@pytest.mark.parametrize("case,m,a,l,n,chi", [("A", 1, 1, 2, 3, 0.0), ("A", 1, -2, 1, 2, 0.0), ("B", 1, 1, 1, 2, 1.0)])
def test_cross_validate_higher_states(case, m, a, l, n, chi):
    q = permitted_frequencies(case, m, a, l, n, chi=chi)
    rep = cross_validate(PhysicalConfig(m, q.omegas[0], a, chi, n, l), q, tol=2e-3)
    assert rep.passed and len(rep.entries) == len(q.roots)


def test_wrong_frequency_is_caught():
    cfg = PhysicalConfig(1, 0.4, 1.0)
    rep = cross_validate(cfg, omegas=[0.4], raise_on_mismatch=False)
    assert not rep.passed
    assert rep.entries[0].rel_error > 1e-2


def test_analytic_lambda():
    assert analytic_lambda(PhysicalConfig(1, 0.5, 1.0)) == 2.0
    assert analytic_lambda(PhysicalConfig(2, 0.25, 1.0, 0, 3, 2)) == 0.5 * (6 + 4 + 2)

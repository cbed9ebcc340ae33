"""Hot numeric loops with a numba path and a pure-numpy fallback.

The backend is fixed at import time.  Set ``HEUNBOUND_DISABLE_NUMBA=1`` to
force the numpy implementations (also used automatically when numba is not
importable).  Both backends are exposed explicitly as ``NUMBA`` / ``NUMPY``
namespaces so tests and the benchmark can compare them side by side.
"""

import os
from types import SimpleNamespace

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba ships with the dev environment
    numba = None

_DISABLE = os.environ.get("HEUNBOUND_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")
HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _DISABLE

# Smallest pivot allowed in the Sturm recurrence; keeps q_i away from 0.
_PIVMIN = np.finfo(np.float64).tiny * 1e4
_EPS = np.finfo(np.float64).eps

if HAVE_NUMBA:
    _njit = numba.njit(cache=True)
else:  # pragma: no cover
    def _njit(fn):
        return fn


def gershgorin_bounds(d, e):
    """Interval containing every eigenvalue of the symmetric tridiagonal (d, e)."""
    ae = np.abs(e)
    radius = np.zeros_like(d)
    radius[:-1] += ae
    radius[1:] += ae
    return float(np.min(d - radius)), float(np.max(d + radius))


# --------------------------------------------------------------------------
# Frobenius recurrence, batched over independent parameter sets.
#
#   b_0 = 1,  b_1 = (delta (2L+1) + ct) / (2 (2L+1))
#   b_{k+2} = [(delta (2k+2L+3) + ct) b_{k+1} - 2 (eta - 2k) b_k]
#             / (2 (k+2) (k+2+2L))
#
# ct = +-2 theta (sign set by the convention), eta = mu_bar + delta^2/4 - 2L - 2.
# --------------------------------------------------------------------------

@_njit
def _frobenius_batch_loops(abs_l, ct, delta, eta, K):
    M = ct.shape[0]
    out = np.empty((M, K + 1))
    two_l1 = 2.0 * abs_l + 1.0
    for j in range(M):
        out[j, 0] = 1.0
        if K >= 1:
            out[j, 1] = (delta[j] * two_l1 + ct[j]) / (2.0 * two_l1)
        for k in range(K - 1):
            lin = delta[j] * (2.0 * k + 2.0 * abs_l + 3.0) + ct[j]
            spec = 2.0 * (eta[j] - 2.0 * k)
            den = 2.0 * (k + 2.0) * (k + 2.0 + 2.0 * abs_l)
            out[j, k + 2] = (lin * out[j, k + 1] - spec * out[j, k]) / den
    return out


def _frobenius_batch_numpy(abs_l, ct, delta, eta, K):
    ct = np.asarray(ct, dtype=np.float64)
    delta = np.asarray(delta, dtype=np.float64)
    eta = np.asarray(eta, dtype=np.float64)
    out = np.empty((ct.shape[0], K + 1))
    two_l1 = 2.0 * abs_l + 1.0
    out[:, 0] = 1.0
    if K >= 1:
        out[:, 1] = (delta * two_l1 + ct) / (2.0 * two_l1)
    for k in range(K - 1):
        lin = delta * (2.0 * k + 2.0 * abs_l + 3.0) + ct
        spec = 2.0 * (eta - 2.0 * k)
        den = 2.0 * (k + 2.0) * (k + 2.0 + 2.0 * abs_l)
        out[:, k + 2] = (lin * out[:, k + 1] - spec * out[:, k]) / den
    return out


# --------------------------------------------------------------------------
# Sturm-sequence bisection for the lowest eigenvalues of a symmetric
# tridiagonal matrix (diagonal d, off-diagonal e, e2 = e**2).
# --------------------------------------------------------------------------

@_njit
def _sturm_count_loops(d, e2, x, pivmin):
    """Number of eigenvalues strictly below x."""
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, d.shape[0]):
        q = (d[i] - x) - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@_njit
def _lowest_eigvals_loops(d, e2, k, lo0, hi0, abstol, pivmin):
    vals = np.empty(k)
    lo_prev = lo0
    for j in range(k):
        lo = lo_prev
        hi = hi0
        for _ in range(400):
            if hi - lo <= abstol + 2.0 * 2.220446049250313e-16 * max(abs(lo), abs(hi)):
                break
            mid = 0.5 * (lo + hi)
            if _sturm_count_loops(d, e2, mid, pivmin) > j:
                hi = mid
            else:
                lo = mid
        vals[j] = 0.5 * (lo + hi)
        lo_prev = lo
    return vals


def _lowest_eigvals_numpy(d, e2, k, lo0, hi0, abstol, pivmin, points=63):
    # Multisection: every sweep over the rows evaluates `points` shifts per
    # bracket, shrinking all k brackets by a factor points+1 at once.
    lo = np.full(k, lo0)
    hi = np.full(k, hi0)
    idx = np.arange(k)
    frac = np.arange(1, points + 1) / (points + 1.0)
    n = d.shape[0]
    for _ in range(60):
        width = hi - lo
        done = width <= abstol + 2.0 * _EPS * np.maximum(np.abs(lo), np.abs(hi))
        if done.all():
            break
        x = lo[:, None] + width[:, None] * frac[None, :]
        q = d[0] - x
        q[np.abs(q) < pivmin] = -pivmin
        cnt = (q < 0.0).astype(np.int64)
        for i in range(1, n):
            q = (d[i] - x) - e2[i - 1] / q
            q[np.abs(q) < pivmin] = -pivmin
            cnt += q < 0.0
        above = cnt > idx[:, None]
        # first shift lying above eigenvalue j (if any), last shift below it
        first_above = np.where(above.any(axis=1), above.argmax(axis=1), points)
        new_hi = np.where(first_above < points, x[idx, np.minimum(first_above, points - 1)], hi)
        new_lo = np.where(first_above > 0, x[idx, np.maximum(first_above - 1, 0)], lo)
        lo = np.where(done, lo, new_lo)
        hi = np.where(done, hi, new_hi)
    return 0.5 * (lo + hi)


@_njit
def _inverse_iteration_loops(d, e, lam, iters):
    """Eigenvectors for the shifts lam (one column each) by inverse iteration."""
    n = d.shape[0]
    k = lam.shape[0]
    vecs = np.empty((n, k))
    cp = np.empty(n)
    rhs = np.empty(n)
    for j in range(k):
        shift = lam[j] + 1e-13 * max(1.0, abs(lam[j]))
        x = np.ones(n)
        for _ in range(iters):
            # Thomas algorithm on (T - shift I) y = x
            b0 = d[0] - shift
            if abs(b0) < 1e-300:
                b0 = 1e-300
            cp[0] = e[0] / b0 if n > 1 else 0.0
            rhs[0] = x[0] / b0
            for i in range(1, n):
                den = (d[i] - shift) - e[i - 1] * cp[i - 1]
                if abs(den) < 1e-300:
                    den = 1e-300
                if i < n - 1:
                    cp[i] = e[i] / den
                rhs[i] = (x[i] - e[i - 1] * rhs[i - 1]) / den
            for i in range(n - 2, -1, -1):
                rhs[i] = rhs[i] - cp[i] * rhs[i + 1]
            nrm = 0.0
            for i in range(n):
                nrm += rhs[i] * rhs[i]
            nrm = np.sqrt(nrm)
            for i in range(n):
                x[i] = rhs[i] / nrm
        for i in range(n):
            vecs[i, j] = x[i]
    return vecs


def _inverse_iteration_numpy(d, e, lam, iters):
    n = d.shape[0]
    shift = lam + 1e-13 * np.maximum(1.0, np.abs(lam))
    x = np.ones((n, lam.shape[0]))
    cp = np.zeros((n, lam.shape[0]))
    rhs = np.empty_like(x)
    for _ in range(iters):
        den = d[0] - shift
        den = np.where(np.abs(den) < 1e-300, 1e-300, den)
        if n > 1:
            cp[0] = e[0] / den
        rhs[0] = x[0] / den
        for i in range(1, n):
            den = (d[i] - shift) - e[i - 1] * cp[i - 1]
            den = np.where(np.abs(den) < 1e-300, 1e-300, den)
            if i < n - 1:
                cp[i] = e[i] / den
            rhs[i] = (x[i] - e[i - 1] * rhs[i - 1]) / den
        for i in range(n - 2, -1, -1):
            rhs[i] = rhs[i] - cp[i] * rhs[i + 1]
        x = rhs / np.sqrt(np.sum(rhs * rhs, axis=0))
        rhs = np.empty_like(x)
    return x


def _make_numpy_backend():
    return SimpleNamespace(
        name="numpy",
        frobenius_batch=_frobenius_batch_numpy,
        lowest_eigvals=_lowest_eigvals_numpy,
        inverse_iteration=_inverse_iteration_numpy,
    )


def _make_numba_backend():
    return SimpleNamespace(
        name="numba",
        frobenius_batch=_frobenius_batch_loops,
        lowest_eigvals=_lowest_eigvals_loops,
        inverse_iteration=_inverse_iteration_loops,
    )


NUMPY = _make_numpy_backend()
NUMBA = _make_numba_backend() if HAVE_NUMBA else None
ACTIVE = NUMBA if USE_NUMBA else NUMPY


def frobenius_batch(abs_l, ct, delta, eta, K, backend=None):
    be = backend or ACTIVE
    return be.frobenius_batch(
        float(abs_l),
        np.ascontiguousarray(ct, dtype=np.float64),
        np.ascontiguousarray(delta, dtype=np.float64),
        np.ascontiguousarray(eta, dtype=np.float64),
        int(K),
    )


def lowest_eigvals(d, e, k, backend=None):
    """k smallest eigenvalues (ascending) of the symmetric tridiagonal (d, e)."""
    be = backend or ACTIVE
    d = np.ascontiguousarray(d, dtype=np.float64)
    e = np.ascontiguousarray(e, dtype=np.float64)
    lo, hi = gershgorin_bounds(d, e)
    scale = max(abs(lo), abs(hi))
    abstol = 2.0 * _EPS * scale
    pivmin = max(_PIVMIN, _PIVMIN * float(np.max(e * e, initial=1.0)))
    return be.lowest_eigvals(d, e * e, int(k), lo, hi, abstol, pivmin)


def eigvecs(d, e, lam, iters=3, backend=None):
    be = backend or ACTIVE
    return be.inverse_iteration(
        np.ascontiguousarray(d, dtype=np.float64),
        np.ascontiguousarray(e, dtype=np.float64),
        np.ascontiguousarray(lam, dtype=np.float64),
        int(iters),
    )

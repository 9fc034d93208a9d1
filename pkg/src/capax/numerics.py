"""Complex polynomial arithmetic and a global root finder.

Polynomials are plain complex128 ndarrays in ascending coefficient order,
c[0] + c[1] z + ... + c[d] z^d, kept trimmed so the leading coefficient of a
nonzero polynomial is nonzero.  That array convention is the public contract;
everything here accepts any sequence and returns trimmed arrays.
"""

import numpy as np

from . import _kernels
from .errors import NonConvergence

DEFAULT_ROOT_TOL = 1e-12
MAX_SWEEPS = 200

# two computed roots closer than this may legitimately be one multiple root
CLUSTER_SEP = 1e-8


def as_poly(c):
    p = np.atleast_1d(np.asarray(c, dtype=np.complex128))
    if p.ndim != 1:
        raise ValueError("polynomial coefficients must be one-dimensional")
    return p


def poly_trim(c, rel=0.0):
    """Drop trailing coefficients that are zero (or below rel * max|c|)."""
    p = as_poly(c)
    thresh = rel * np.abs(p).max() if p.size else 0.0
    d = p.size - 1
    while d > 0 and abs(p[d]) <= thresh:
        d -= 1
    return p[: d + 1].copy()


def poly_degree(c):
    p = poly_trim(c)
    if p.size == 1 and p[0] == 0:
        return -1  # zero polynomial
    return p.size - 1


def poly_add(a, b):
    pa, pb = as_poly(a), as_poly(b)
    if pa.size < pb.size:
        pa, pb = pb, pa
    out = pa.copy()
    out[: pb.size] += pb
    return poly_trim(out)


def poly_scale(a, s):
    return poly_trim(as_poly(a) * np.complex128(s))


def poly_mul(a, b):
    return poly_trim(np.convolve(as_poly(a), as_poly(b)))


def poly_from_roots(roots):
    """Monic polynomial with the given roots (empty list gives 1)."""
    c = np.array([1.0 + 0j])
    for r in np.asarray(roots, dtype=np.complex128).ravel():
        c = np.convolve(c, np.array([-r, 1.0 + 0j]))
    return c


def poly_eval(c, z):
    """Horner evaluation; z may be a scalar or an ndarray."""
    p = as_poly(c)
    zz = np.asarray(z, dtype=np.complex128)
    out = np.full_like(zz, p[-1])
    for k in range(p.size - 2, -1, -1):
        out = out * zz + p[k]
    if np.isscalar(z) or zz.ndim == 0:
        return complex(out)
    return out


def residual_ok(c, r, tol):
    """Backward-style acceptance: |p(r)| <= tol*(1+max|c|)*(1+|r|)^deg."""
    p = as_poly(c)
    bound = _kernels.residual_bound(np.abs(p).max(), r, p.size - 1, tol)
    return np.abs(poly_eval(p, r)) <= bound


def roots(c, tol=DEFAULT_ROOT_TOL, max_sweeps=MAX_SWEEPS):
    """All complex roots of a degree >= 1 polynomial.

    Backed by simultaneous Ehrlich-Aberth iteration (numba backend) or
    companion-matrix eigenvalues (numpy backend), Newton-polished either way.
    Multiple or clustered roots come back as nearly repeated values; no
    deflation is attempted below a separation of CLUSTER_SEP.

    Raises NonConvergence when any root misses the documented residual bound
    within the sweep budget.
    """
    p = poly_trim(c)
    d = poly_degree(p)
    if d < 1:
        raise ValueError("root finding needs degree >= 1")
    if not np.all(np.isfinite(p)):
        raise ValueError("polynomial coefficients must be finite")
    r, _ = _kernels.roots_single(p, tol, max_sweeps)
    bad = ~residual_ok(p, r, tol)
    if np.any(bad):
        worst = np.abs(poly_eval(p, r[bad])).max()
        raise NonConvergence(
            f"{int(bad.sum())} of {d} roots missed the residual bound "
            f"(worst |p(r)| = {worst:.3e}, tol = {tol:.1e})"
        )
    return r

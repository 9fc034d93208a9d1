"""Hot numerical kernels, in two interchangeable implementations.

The package spends nearly all of its time solving families of small complex
polynomials: a cold solve for one polynomial, and a long chain of solves for
P(z) - w*Q(z) as w walks the unit circle.  Two backends provide the same
contracts:

* "numba": tight scalar loops under @njit, Ehrlich-Aberth simultaneous
  iteration warm-started from the previous step of the chain.
* "numpy": batched companion-matrix eigenvalues (one LAPACK call for the
  whole chain) followed by vectorized Newton polishing.

Selection: environment variable CAPAX_BACKEND ("numba" or "numpy").  Default
is numba when importable, numpy otherwise.  benchmarks/bench_kernels.py times
one backend against the other on identical workloads.

Coefficient convention: ascending order, c[0] + c[1] z + ... + c[d] z^d,
leading coefficient nonzero.
"""

import os

import numpy as np

try:
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - sandbox always has numba
    HAVE_NUMBA = False

_EPS = float(np.finfo(np.float64).eps)


def _pick_backend():
    choice = os.environ.get("CAPAX_BACKEND", "").strip().lower()
    if choice == "numba":
        if not HAVE_NUMBA:
            raise ImportError("CAPAX_BACKEND=numba but numba is not importable")
        return "numba"
    if choice == "numpy":
        return "numpy"
    if choice:
        raise ValueError(f"CAPAX_BACKEND must be 'numba' or 'numpy', got {choice!r}")
    return "numba" if HAVE_NUMBA else "numpy"


BACKEND = _pick_backend()


def configure_threads():
    """Apply the CAPAX_THREADS cap (0 or unset = automatic)."""
    raw = os.environ.get("CAPAX_THREADS", "").strip()
    if not raw:
        return
    n = int(raw)
    if n < 0:
        raise ValueError("CAPAX_THREADS must be >= 0")
    if n > 0 and HAVE_NUMBA:
        try:
            numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
        except ValueError:
            pass


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------


def _eval_rows(C, Z):
    """Horner on row-wise coefficients. C: (M, d+1), Z: (M, n) -> p, dp."""
    p = np.zeros_like(Z)
    dp = np.zeros_like(Z)
    for k in range(C.shape[1] - 1, -1, -1):
        dp = dp * Z + p
        p = p * Z + C[:, k : k + 1]
    return p, dp


def _polish_rows(C, Z, iters=3):
    """Newton-polish each root of each row, keeping a step only when the
    residual actually drops."""
    p, dp = _eval_rows(C, Z)
    for _ in range(iters):
        dps = np.where(dp == 0, 1.0, dp)
        Zn = Z - p / dps
        pn, dpn = _eval_rows(C, Zn)
        better = np.abs(pn) < np.abs(p)
        Z = np.where(better, Zn, Z)
        p = np.where(better, pn, p)
        dp = np.where(better, dpn, dp)
    return Z


def _companion_rows(C):
    """Companion matrices for monic rows C (M, n+1) with C[:, n] == 1."""
    M = C.shape[0]
    n = C.shape[1] - 1
    A = np.zeros((M, n, n), np.complex128)
    if n > 1:
        i = np.arange(n - 1)
        A[:, i + 1, i] = 1.0
    A[:, :, n - 1] = -C[:, :n]
    return A

def _solve_rows_numpy(pc, qc, ws, warm, tol, max_sweeps):
    del warm, tol, max_sweeps  # continuity comes from the shared matching pass
    # roots of pc - w*qc == roots of the monic qc - pc/w (leading coeff -w)
    C = qc[None, :] - pc[None, :] / ws[:, None]
    Z = np.linalg.eigvals(_companion_rows(C))
    return _polish_rows(C, Z), np.ones(len(ws), np.bool_)


def _roots_single_numpy(c, tol, max_sweeps):
    del tol, max_sweeps
    cm = c / c[-1]
    Z = np.linalg.eigvals(_companion_rows(cm[None, :]))
    return _polish_rows(cm[None, :], Z)[0], True


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _horner2(c, z):
        d = c.shape[0] - 1
        p = c[d]
        dp = 0.0 + 0.0j
        for k in range(d - 1, -1, -1):
            dp = dp * z + p
            p = p * z + c[k]
        return p, dp

    @njit(cache=True)
    def _horner_abs(cabs, x):
        d = cabs.shape[0] - 1
        s = cabs[d]
        for k in range(d - 1, -1, -1):
            s = s * x + cabs[k]
        return s

    @njit(cache=True)
    def _aberth_inplace(c, cabs, z, max_sweeps):
        """Ehrlich-Aberth sweeps on z in place.  A root is accepted once its
        residual is at the Horner roundoff floor, so accuracy is limited by
        evaluation noise, not by the documented (looser) acceptance bound.
        Returns sweeps used, or -1 when the budget runs out."""
        d = z.shape[0]
        floor_mul = 4.0 * d * _EPS + 2.0 * _EPS
        for sweep in range(max_sweeps):
            done = True
            for k in range(d):
                zk = z[k]
                p, dp = _horner2(c, zk)
                floor = floor_mul * _horner_abs(cabs, abs(zk)) + 1e-300
                if abs(p) <= floor:
                    continue
                done = False
                if dp == 0.0 + 0.0j:
                    # stationary point of the iteration map: nudge off it
                    z[k] = zk * (1.0 + 1e-8) + 1e-8
                    continue
                nw = p / dp
                s = 0.0 + 0.0j
                for j in range(d):
                    if j != k:
                        dz = zk - z[j]
                        if dz == 0.0 + 0.0j:
                            dz = 1e-30 + 0.0j
                        s += 1.0 / dz
                den = 1.0 - nw * s
                if den == 0.0 + 0.0j:
                    z[k] = zk - nw
                else:
                    z[k] = zk - nw / den
            if done:
                return sweep
        return -1

    @njit(cache=True)
    def _roots_cold_numba(c, max_sweeps):
        d = c.shape[0] - 1
        cabs = np.empty(d + 1, np.float64)
        for k in range(d + 1):
            cabs[k] = abs(c[k])
        # Cauchy bound ring around the root centroid
        rad = 0.0
        for k in range(d):
            r = cabs[k] / cabs[d]
            if r > rad:
                rad = r
        rad = 1.0 + rad
        center = -c[d - 1] / (d * c[d])
        z = np.empty(d, np.complex128)
        for k in range(d):
            ang = 2.0 * np.pi * k / d + 0.4
            z[k] = center + rad * complex(np.cos(ang), np.sin(ang))
        conv = _aberth_inplace(c, cabs, z, max_sweeps)
        return z, conv >= 0

    @njit(cache=True)
    def _solve_rows_numba(pc, qc, ws, warm, tol, max_sweeps):
        M = ws.shape[0]
        n = qc.shape[0] - 1
        Z = np.empty((M, n), np.complex128)
        ok = np.ones(M, np.bool_)
        z = warm.copy()
        c = np.empty(n + 1, np.complex128)
        cabs = np.empty(n + 1, np.float64)
        for r in range(M):
            w = ws[r]
            for k in range(n + 1):
                c[k] = pc[k] - w * qc[k]
                cabs[k] = abs(c[k])
            conv = _aberth_inplace(c, cabs, z, max_sweeps)
            if conv < 0:
                ok[r] = False
            for k in range(n):
                Z[r, k] = z[k]
        return Z, ok

    def _roots_single_numba(c, tol, max_sweeps):
        del tol
        z, ok = _roots_cold_numba(np.ascontiguousarray(c), max_sweeps)
        # uniform final polish so both backends deliver the same quality
        cm = c / c[-1]
        return _polish_rows(cm[None, :], z[None, :])[0], ok


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

IMPLS = {"numpy": (_roots_single_numpy, _solve_rows_numpy)}
if HAVE_NUMBA:
    IMPLS["numba"] = (_roots_single_numba, _solve_rows_numba)

roots_single, solve_rows = IMPLS[BACKEND]


def residual_bound(cabs_max, z, degree, tol):
    """Documented acceptance bound tol*(1+max|c|)*(1+|z|)^degree."""
    return tol * (1.0 + cabs_max) * (1.0 + np.abs(z)) ** degree


def rows_residual_ok(pc, qc, ws, Z, tol):
    """Check every chain root against the documented bound for its own row."""
    C = pc[None, :] - ws[:, None] * qc[None, :]
    p, _ = _eval_rows(C, Z)
    bound = residual_bound(
        np.abs(C).max(axis=1, keepdims=True), Z, C.shape[1] - 1, tol
    )
    return np.abs(p) <= bound


def polish_rows_general(pc, qc, ws, Z, iters=2):
    """Final Newton polish of chain roots on the unnormalized rows."""
    C = pc[None, :] - ws[:, None] * qc[None, :]
    return _polish_rows(C, Z, iters)


def warmup():
    """Force JIT compilation on tiny inputs so timed runs are steady-state."""
    c = np.array([-1.0 + 0j, 0j, 1.0 + 0j])
    roots_single(c, 1e-12, 50)
    pc = np.array([1.0 + 0j, 0j])
    qc = np.array([0j, 1.0 + 0j])
    ws = np.exp(2j * np.pi * np.arange(8) / 8)
    solve_rows(pc, qc, ws, np.array([1.0 + 0j]), 1e-12, 50)

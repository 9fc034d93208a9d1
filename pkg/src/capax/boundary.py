"""Tracing the level set |R(z)| = 1 and integrating along it.

For a good map the level set splits into n analytic Jordan curves, one around
each pole, and R restricted to each curve is a bijection onto the unit circle.
Each curve is therefore parametrized by t in [0, 2pi) through R(z(t)) = e^{it},
and all n curves are sampled on one uniform t grid by following the n roots of
P(z) - e^{it} Q(z) as t advances.  Continuation uses nearest-neighbor matching
between consecutive steps with a factor-2 stability margin; a failed match is
retried on locally halved steps before giving up.

Uniform-grid (periodic trapezoid) sums over these analytic curves converge
spectrally, so moderate N already yields integrals at roundoff level.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels, numerics
from .errors import ComponentCountMismatch, NonConvergence, TrackingAmbiguity
from .ratmap import Goodness, as_fraction, is_n_good

DEFAULT_N = 4096
MAX_N = 1 << 16
NODE_RESIDUAL_TOL = 1e-9
STABILITY_RATIO = 2.0
_MAX_REFINE_DEPTH = 6


@dataclass(frozen=True)
class BoundaryCurve:
    component_id: int
    t: np.ndarray
    z: np.ndarray
    speed: np.ndarray  # |dz/dt| = 1/|R'(z)| > 0
    enclosed_pole: complex


@dataclass(frozen=True)
class BoundarySampling:
    curves: list
    N: int
    total_arclength: float

    def nodes(self):
        """All nodes and quadrature weights w_i with sum w_i = arclength/2pi."""
        z = np.concatenate([c.z for c in self.curves])
        lam = np.concatenate([c.speed for c in self.curves]) / self.N
        return z, lam


def _match(prev, new):
    """Nearest-neighbor assignment prev[i] -> new[perm[i]].

    Returns None unless the assignment is injective and every nearest
    distance beats the second-nearest by STABILITY_RATIO.
    """
    D = np.abs(prev[:, None] - new[None, :])
    perm = D.argmin(axis=1)
    if np.unique(perm).size != perm.size:
        return None
    if perm.size > 1:
        rows = np.arange(perm.size)
        d1 = D[rows, perm]
        D2 = D.copy()
        D2[rows, perm] = np.inf
        d2 = D2.min(axis=1)
        if np.any(d2 < STABILITY_RATIO * d1):
            return None
    return perm


def _refine_gap(left, t0, t1, solver):
    """Re-walk (t0, t1] on successively halved substeps until every hop
    matches stably; returns the ordered roots at t1."""
    for depth in range(1, _MAX_REFINE_DEPTH + 1):
        m = 1 << depth
        ts = t0 + (t1 - t0) * np.arange(1, m + 1) / m
        Z, ok = solver(np.exp(1j * ts), left)
        if not ok.all():
            continue
        cur = left
        for r in range(m):
            perm = _match(cur, Z[r])
            if perm is None:
                cur = None
                break
            cur = Z[r][perm]
        if cur is not None:
            return cur
    raise TrackingAmbiguity(
        f"continuation between t = {t0:.6f} and t = {t1:.6f} stayed ambiguous "
        f"after {1 << _MAX_REFINE_DEPTH} substeps; double N"
    )


def _order_chain(Z, ts, z0, solver):
    """Impose continuity in t on per-step root sets.  Returns the ordered
    (N, n) array; raises on irreparable ambiguity or nontrivial monodromy."""
    N, n = Z.shape
    out = np.empty_like(Z)
    perm = _match(z0, Z[0])
    if perm is None:
        raise TrackingAmbiguity("seed roots did not match the first step")
    out[0] = Z[0][perm]
    for i in range(1, N):
        perm = _match(out[i - 1], Z[i])
        if perm is None:
            refined = _refine_gap(out[i - 1], ts[i - 1], ts[i], solver)
            perm = _match(refined, Z[i])
            if perm is None:
                raise TrackingAmbiguity(
                    f"step {i} (t = {ts[i]:.6f}) remained ambiguous after refinement"
                )
        out[i] = Z[i][perm]
    # closing the loop from t_{N-1} to 2pi must restore the seed assignment
    wrap = _match(out[-1], out[0])
    if wrap is None:
        refined = _refine_gap(out[-1], ts[-1], 2.0 * np.pi, solver)
        wrap = _match(refined, out[0])
        if wrap is None:
            raise TrackingAmbiguity("closing step remained ambiguous after refinement")
    if np.any(wrap != np.arange(n)):
        raise ComponentCountMismatch(
            "tracking around the full circle permuted the roots; "
            "the level set does not split into n degree-1 curves"
        )
    return out


def _windings(z_curve, points):
    """Discrete winding numbers of a closed node loop about each point."""
    v = z_curve[:, None] - np.asarray(points)[None, :]
    ang = np.angle(np.roll(v, -1, axis=0) / v).sum(axis=0) / (2.0 * np.pi)
    w = np.rint(ang)
    if np.abs(ang - w).max() > 0.01:
        raise ComponentCountMismatch(
            "winding numbers did not settle near integers; sampling too coarse"
        )
    return w.astype(np.int64)


def trace(R, N=DEFAULT_N, check_good=True):
    """Sample all boundary curves of {|R| >= 1} on a uniform t grid of size N.

    N must be a power of two, 64 <= N <= 65536.  The map must classify as
    GOOD (skippable with check_good=False for diagnostic runs on bad maps,
    where one of the tracking errors below is the expected outcome).

    Raises TrackingAmbiguity when continuation cannot be disambiguated even
    on halved steps (caller should double N), ComponentCountMismatch when the
    curve/pole pairing is not one-to-one, and NonConvergence when node
    residuals miss NODE_RESIDUAL_TOL.
    """
    N = int(N)
    if N < 64 or N > MAX_N or (N & (N - 1)) != 0:
        raise ValueError(f"N must be a power of two in [64, {MAX_N}]")
    if check_good:
        verdict = is_n_good(R)
        if verdict.status is not Goodness.GOOD:
            raise ComponentCountMismatch(
                f"map classifies as {verdict.status.value} "
                f"(margin {verdict.margin:.3e}); boundary tracing needs a good map"
            )
    n = R.n
    P, Q = as_fraction(R)
    pc = np.zeros(n + 1, dtype=np.complex128)
    pc[:n] = P

    def solver(ws, warm):
        Z, ok = _kernels.solve_rows(pc, Q, ws, warm, numerics.DEFAULT_ROOT_TOL, numerics.MAX_SWEEPS)
        Z = _kernels.polish_rows_general(pc, Q, ws, Z)
        ok &= _kernels.rows_residual_ok(pc, Q, ws, Z, numerics.DEFAULT_ROOT_TOL).all(axis=1)
        return Z, ok

    ts = 2.0 * np.pi * np.arange(N) / N
    # Seeds: the n distinct t = 0 roots, one per component for a good map.
    # Which root lies on which component is settled after tracing by winding
    # numbers; no geometric heuristic here (nearest-pole grouping misfires on
    # good maps whose residue mass sits close to a neighboring component).
    z0 = R.preimages(1.0)

    Z, ok = solver(np.exp(1j * ts), z0)
    if not ok.all():
        bad = int(np.flatnonzero(~ok)[0])
        raise NonConvergence(f"root solve failed at t = {ts[bad]:.6f}")
    Z = _order_chain(Z, ts, z0, solver)

    resid = np.abs(np.abs(_eval_many(R, Z)) - 1.0).max()
    if resid > NODE_RESIDUAL_TOL:
        raise NonConvergence(
            f"node residual {resid:.3e} exceeds {NODE_RESIDUAL_TOL:.1e}"
        )

    speed = 1.0 / np.abs(R.derivative(Z))
    curves = []
    for c in range(n):
        w = _windings(Z[:, c], R.poles)
        inside = np.flatnonzero(np.abs(w) == 1)
        if inside.size != 1 or np.abs(w).sum() != 1:
            raise ComponentCountMismatch(
                f"curve {c} winds {w.tolist()} about the poles; expected one +-1"
            )
        k = int(inside[0])
        curves.append(
            BoundaryCurve(
                component_id=k,
                t=ts,
                z=Z[:, c].copy(),
                speed=speed[:, c].copy(),
                enclosed_pole=complex(R.poles[k]),
            )
        )
    ids = sorted(cv.component_id for cv in curves)
    if ids != list(range(n)):
        raise ComponentCountMismatch(
            f"curves enclose poles {ids}; expected each pole exactly once"
        )
    curves.sort(key=lambda cv: cv.component_id)
    total = float(sum(cv.speed.sum() for cv in curves) * (2.0 * np.pi / N))
    return BoundarySampling(curves=curves, N=N, total_arclength=total)


def _eval_many(R, Z):
    """R on an array, no pole-proximity guard (nodes stay away from poles)."""
    d = Z[..., None] - R.poles
    return (R.residues / d).sum(axis=-1)


def quad_inner(sampling, f, g):
    """(1/2pi) integral of f * conj(g) |dz| over all curves, by the periodic
    trapezoid rule.  f and g must accept complex ndarrays."""
    total = 0.0 + 0.0j
    for c in sampling.curves:
        fv = np.asarray(f(c.z), dtype=np.complex128)
        gv = np.asarray(g(c.z), dtype=np.complex128)
        total += (fv * np.conj(gv) * c.speed).sum() / sampling.N
    return complex(total)


def emit_csv(sampling):
    """Node table: component,t,re,im,speed with 15 significant digits, LF."""
    lines = ["component,t,re,im,speed"]
    for c in sampling.curves:
        for t, z, s in zip(c.t, c.z, c.speed):
            lines.append(
                f"{c.component_id},{t:.15g},{z.real:.15g},{z.imag:.15g},{s:.15g}"
            )
    return "\n".join(lines) + "\n"


_SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def emit_svg(sampling):
    """One closed polyline per component, y flipped so the picture matches
    mathematical orientation, viewBox padded by 5 percent per axis."""
    xs = np.concatenate([c.z.real for c in sampling.curves])
    ys = np.concatenate([-c.z.imag for c in sampling.curves])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    spanx = (x1 - x0) or 1.0
    spany = (y1 - y0) or 1.0
    padx, pady = 0.05 * spanx, 0.05 * spany
    vb = (x0 - padx, y0 - pady, spanx + 2 * padx, spany + 2 * pady)
    stroke = 0.005 * max(vb[2], vb[3])
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{vb[0]:.6g} {vb[1]:.6g} {vb[2]:.6g} {vb[3]:.6g}">'
    ]
    for c in sampling.curves:
        pts = " ".join(
            f"{x:.8g},{y:.8g}" for x, y in zip(c.z.real, -c.z.imag)
        )
        first = f"{c.z.real[0]:.8g},{-c.z.imag[0]:.8g}"
        color = _SVG_COLORS[c.component_id % len(_SVG_COLORS)]
        parts.append(
            f'<polyline points="{pts} {first}" fill="none" '
            f'stroke="{color}" stroke-width="{stroke:.6g}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

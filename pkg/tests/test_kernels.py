"""Backend selection and agreement between the two kernel implementations."""

import numpy as np
import pytest

from capax import _kernels


def test_backend_is_known():
    assert _kernels.BACKEND in _kernels.IMPLS


def test_residual_bound_scales():
    b1 = _kernels.residual_bound(1.0, np.array([1.0 + 0j]), 3, 1e-12)
    b2 = _kernels.residual_bound(1.0, np.array([2.0 + 0j]), 3, 1e-12)
    assert b2[0] > b1[0] > 0


@pytest.mark.skipif("numba" not in _kernels.IMPLS, reason="numba backend unavailable")
def test_backends_agree_on_single_roots():
    rng = np.random.default_rng(101)
    for _ in range(10):
        deg = int(rng.integers(2, 9))
        c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        got = {}
        for name, (roots_single, _) in _kernels.IMPLS.items():
            r, _ok = roots_single(np.ascontiguousarray(c / c[-1]), 1e-12, 200)
            got[name] = np.sort_complex(r)
        for a, b in zip(got["numba"], got["numpy"]):
            assert abs(a - b) < 1e-8


@pytest.mark.skipif("numba" not in _kernels.IMPLS, reason="numba backend unavailable")
def test_backends_agree_on_row_sweeps():
    # pc - w qc over a ring of w values, as the tracer consumes them.
    rng = np.random.default_rng(103)
    qc = np.array([-1.0, 0.0, 0.0, 1.0], dtype=np.complex128)  # z^3 - 1
    pc = np.array([0.1, 0.3, 0.0, 0.0], dtype=np.complex128)
    ws = np.exp(2j * np.pi * np.sort(rng.uniform(size=16)))
    # warm start: the root set of the first row, as the tracer would seed it
    roots_np, _ = _kernels.IMPLS["numpy"]
    warm, _ok = roots_np(qc - pc / ws[0], 1e-12, 200)
    out = {}
    for name, (_, solve_rows) in _kernels.IMPLS.items():
        Z, ok = solve_rows(pc, qc, ws, warm.copy(), 1e-12, 200)
        assert ok.all()
        out[name] = np.sort_complex(Z.ravel())
    assert np.max(np.abs(out["numba"] - out["numpy"])) < 1e-8

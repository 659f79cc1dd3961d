import json
import math

import numpy as np
import pytest

import manifold_approx as ma


def test_polynomials_and_quadrature():
    nodes, weights = ma.gauss_jacobi_rule(2, 12)
    assert weights.sum() == pytest.approx(2.0)
    fam = ma.UltrasphericalFamily(2)
    p = np.array([fam.eval_batch(10, t) for t in nodes])
    gram = (p * weights[:, None]).T @ p
    assert np.allclose(gram, np.eye(11), atol=1e-12)
    assert ma.ultra_at_one(3, 7) == pytest.approx(fam.__class__(3).eval(7, 1.0))


def test_kernel_vectorized():
    k = ma.LocalizedKernel(4, 1)
    assert k(1.0) == pytest.approx(6.0)
    t = np.linspace(-1, 1, 5)
    assert np.allclose(k(t), [k(v) for v in t])
    assert len(k.coefficients) == 5
    assert ma.cutoff(0.75) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        k(1.5)


def test_estimators_and_degeneracy():
    th = np.linspace(0, 2 * np.pi, 400, endpoint=False)
    pts = np.column_stack([np.cos(th), np.sin(th)])
    data = ma.LabeledDataset(pts, np.cos(th)[:, None])
    k = ma.LocalizedKernel(16, 1)
    x = np.array([1.0, 0.0])
    assert ma.quotient_estimate(data, k, x)[0] == pytest.approx(1.0, abs=1e-10)
    assert ma.density_estimate(data, k, x) == pytest.approx(1.0, abs=1e-10)
    grid = ma.estimate_grid(data, k, pts[:8], normalize=True, threads=2)
    assert np.allclose(grid[:, 0], np.cos(th[:8]), atol=1e-10)

    one = ma.LabeledDataset(np.array([[1.0, 0.0]]), np.array([[1.0]]))
    with pytest.raises(ma.DegenerateDenominatorError):
        ma.quotient_estimate(one, ma.LocalizedKernel(64, 1), np.array([math.cos(3), math.sin(3)]))
    assert issubclass(ma.DegenerateDenominatorError, ma.NumericalError)


def test_codec_roundtrip():
    rng = np.random.default_rng(0)
    pts = rng.normal(size=(64, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    data = ma.LabeledDataset(pts, (pts[:, 0] ** 2)[:, None])
    basis = ma.HarmonicBasis(9)
    enc = ma.encode(data, basis, 9)
    gamma = ma.gamma_coeffs(8, 2)
    x = np.array([0.0, 0.6, 0.8])
    direct = ma.f_hat(data, ma.LocalizedKernel(8, 2), x)[0]
    assert ma.decode(enc, gamma, basis, x) == pytest.approx(direct, abs=1e-10)
    text = ma.encoding_to_json(enc, 2, 8)
    assert json.loads(text)["L"] == 9
    back, q, n = ma.encoding_from_json(text)
    assert (q, n) == (2, 8)
    assert back.coefficients == enc.coefficients


def test_experiments():
    r = ma.run_ellipse(n=16, M=2048, grid=64)
    assert r["skipped"] == 0
    assert np.nanmedian(r["errors"]) < 0.05
    b = ma.run_biexp(n=8, M=256, tests=8)
    assert len(b["errors"]) == 8

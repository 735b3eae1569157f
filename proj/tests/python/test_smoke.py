"""Smoke tests for the python bindings: numpy interop, determinism, and the
main recovery flows end to end."""

import math

import numpy as np
import pytest

lrr = pytest.importorskip("lrr")


def test_version_string():
    assert lrr.__version__ == "0.1.0"


def test_rng_determinism_and_fork():
    a = lrr.RngStream(7, 3)
    b = lrr.RngStream(7, 3)
    assert [a.next_u64() for _ in range(5)] == [b.next_u64() for _ in range(5)]
    # Forks depend only on (seed, stream, key), not on the draw position.
    burned = lrr.RngStream(7, 3)
    for _ in range(100):
        burned.next_gaussian()
    assert burned.fork(4).next_u64() == lrr.RngStream(7, 3).fork(4).next_u64()


def test_svd_reconstruction_against_numpy():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((5, 7))
    f = lrr.svd(a)
    assert np.allclose(f.u @ np.diag(f.sigmas) @ f.v.T, a, atol=1e-10)
    assert np.allclose(f.u.T @ f.u, np.eye(5), atol=1e-10)
    assert np.all(np.diff(f.sigmas) <= 1e-15)
    np_sigmas = np.linalg.svd(a, compute_uv=False)
    assert math.isclose(lrr.nuclear_norm(a), np_sigmas.sum(), rel_tol=1e-10)
    assert math.isclose(lrr.operator_norm(a), np_sigmas[0], rel_tol=1e-10)
    assert math.isclose(lrr.schatten_norm(a, 2.0), np.linalg.norm(a), rel_tol=1e-10)


def test_sgn_attains_the_nuclear_norm():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((6, 4))
    assert math.isclose(
        lrr.frobenius_inner(lrr.sgn(a), a), lrr.nuclear_norm(a), rel_tol=1e-9
    )


def test_fully_sampled_completion_recovers_exactly():
    rng = lrr.RngStream(11, 0)
    basis = lrr.OperatorBasis.entry(6)
    op = lrr.sample_operator(basis, 36, False, rng)
    truth = np.random.default_rng(2).standard_normal((6, 6))
    meas = lrr.Measurement(op)
    rep = lrr.complete(meas, meas.measure(truth))
    assert rep.converged
    assert rep.iterations <= 2
    assert np.allclose(rep.solution, truth, atol=1e-8)
    assert math.isclose(rep.objective, lrr.nuclear_norm(rep.solution), rel_tol=1e-9)


def test_sampling_operator_determinism():
    op1 = lrr.sample_operator(lrr.OperatorBasis.entry(5), 30, True, lrr.RngStream(3, 0))
    op2 = lrr.sample_operator(lrr.OperatorBasis.entry(5), 30, True, lrr.RngStream(3, 0))
    assert op1.omegas == op2.omegas
    assert op1.n == 5 and op1.replacement


def test_gaussian_map_layout_roundtrip():
    rng = lrr.RngStream(21, 4)
    fresh = lrr.gaussian_map_new(rng, 3, 4, 2)
    rebuilt = lrr.gaussian_map_from_layout(fresh.seed, fresh.stream_id, 3, 4, 2)
    for a, b in zip(fresh.mats, rebuilt.mats):
        assert np.array_equal(a, b)


def test_tangent_projection_splits_the_space():
    a = np.ones((5, 5)) / 5.0
    p = lrr.tangent_projector_at(a)
    z = np.random.default_rng(3).standard_normal((5, 5))
    assert np.allclose(lrr.tangent_project(p, z) + lrr.tangent_complement(p, z), z,
                       atol=1e-12)


def test_golfing_certificate_closes_on_a_full_sweep():
    n = 4
    a = np.ones((n, n)) / n
    p = lrr.tangent_projector_at(a)
    basis = lrr.OperatorBasis.entry(n)
    cert = lrr.golfing_certificate_batches(basis, a, p, [list(range(1, n * n + 1))])
    check = lrr.verify_certificate(cert, basis, a, p)
    assert check.in_range and check.cond_ii and check.cond_iii
    assert cert.residual_norms[0] <= 1e-12


def test_jl_embedding_shapes():
    rng_np = np.random.default_rng(4)
    pts = [rng_np.standard_normal(50) for _ in range(10)]
    m = lrr.jl_min_dim(10, 0.5)
    res = lrr.jl_embed(lrr.PointSet(pts), 0.5, m, lrr.RngStream(17, 0))
    assert res.embedded.dim == m
    assert len(res.embedded.points) == 10
    assert res.max_distortion >= 0.0
    assert res.success == (res.max_distortion <= 0.5)


def test_chi2_tail_bound_formula():
    m, eps = 40, 0.3
    expect = math.exp(-(m / 2.0) * (eps**2 / 2.0 - eps**3 / 3.0))
    assert math.isclose(lrr.chi2_tail_bound(m, eps), expect, rel_tol=1e-12)


def test_error_translation():
    with pytest.raises(ValueError):
        lrr.svt(np.zeros((2, 2)), -1.0)
    with pytest.raises(ValueError):
        lrr.sym_logm(-np.eye(3))
    with pytest.raises(ValueError):
        lrr.jl_min_dim(10, 1.5)
    assert issubclass(lrr.NumericalError, RuntimeError)


def test_bernstein_reports_are_consistent():
    rep = lrr.bernstein_tail_experiment(
        lrr.dyad_ensemble(4), 20, [3.0, 6.0], 200, lrr.RngStream(23, 0)
    )
    assert rep.trials == 200
    assert rep.empirical[1] <= rep.empirical[0]
    for k, t in enumerate(rep.thresholds):
        assert math.isclose(
            rep.bound_lieb[k],
            lrr.bernstein_bound_lieb(4, 20, rep.params.v0_sq, rep.params.c, t),
            rel_tol=1e-12,
        )

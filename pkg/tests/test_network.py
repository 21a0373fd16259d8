"""Geometry, pathloss, shadowing and spatial correlation."""

import numpy as np
import pytest

from cfiama.config import SimulationConfig
from cfiama.network import (AP_HEIGHT_M, build_channel_statistics, draw_channel,
                            generate_network, large_scale_coefficients,
                            spatial_correlation_matrix, wrapped_distance)


def test_generate_network_bounds_and_determinism():
    config = SimulationConfig(L=50, K=50)
    net1 = generate_network(config, np.random.default_rng(3))
    net2 = generate_network(config, np.random.default_rng(3))
    assert net1.ap_positions.shape == (50, 2)
    assert net1.ue_positions.shape == (50, 2)
    assert (net1.ap_positions >= 0).all() and (net1.ap_positions < 500).all()
    assert np.array_equal(net1.ue_positions, net2.ue_positions)


def test_positions_cover_the_area():
    config = SimulationConfig(L=100, K=100)
    rng = np.random.default_rng(5)
    means = np.mean([generate_network(config, rng).ue_positions.mean(axis=0)
                     for _ in range(100)], axis=0)
    assert np.allclose(means, 250.0, atol=5.0)


def test_wrapped_distance_values():
    p = np.array([[0.0, 0.0]])
    assert wrapped_distance(p, p, 500.0)[0, 0] == 0.0
    q = np.array([[499.0, 0.0]])
    assert np.isclose(wrapped_distance(p, q, 500.0)[0, 0], 1.0)
    # crossing both edges beats the direct path
    a = np.array([[10.0, 10.0]])
    b = np.array([[490.0, 490.0]])
    assert np.isclose(wrapped_distance(a, b, 500.0)[0, 0], 28.284271247461902)


def test_wrapped_distance_never_exceeds_half_diagonal():
    rng = np.random.default_rng(0)
    src = rng.uniform(0, 500, size=(40, 2))
    dst = rng.uniform(0, 500, size=(40, 2))
    assert wrapped_distance(src, dst, 500.0).max() <= 500.0 / np.sqrt(2.0) + 1e-9


def test_pathloss_frozen_values():
    config = SimulationConfig(shadow_std_db=0.0)
    net = generate_network(config, np.random.default_rng(1))
    # place one UE 1 m from an AP: the 10 m height floor dominates
    net.ue_positions[0] = net.ap_positions[0] + np.array([1.0, 0.0])
    beta = large_scale_coefficients(net, config, np.random.default_rng(1))
    assert np.isclose(beta[0, 0], 1.8709848854323092e-07, rtol=1e-12)


def test_pathloss_at_100m():
    config = SimulationConfig(shadow_std_db=0.0)
    net = generate_network(config, np.random.default_rng(1))
    d2 = np.sqrt(100.0 ** 2 - AP_HEIGHT_M ** 2)
    net.ue_positions[0] = net.ap_positions[0] + np.array([d2, 0.0])
    beta = large_scale_coefficients(net, config, np.random.default_rng(1))
    assert np.isclose(beta[0, 0], 4.073802778041122e-11, rtol=1e-12)


def test_zero_shadowing_is_deterministic():
    config = SimulationConfig(shadow_std_db=0.0)
    net = generate_network(config, np.random.default_rng(2))
    b1 = large_scale_coefficients(net, config, np.random.default_rng(10))
    b2 = large_scale_coefficients(net, config, np.random.default_rng(99))
    assert np.array_equal(b1, b2)


def test_shadowing_spread_matches_std():
    config = SimulationConfig(L=50, K=200, shadow_std_db=4.0)
    net = generate_network(config, np.random.default_rng(4))
    base = large_scale_coefficients(net, SimulationConfig(L=50, K=200, shadow_std_db=0.0),
                                    np.random.default_rng(8))
    shadowed = large_scale_coefficients(net, config, np.random.default_rng(8))
    offsets_db = 10.0 * np.log10(shadowed / base)
    assert abs(offsets_db.mean()) < 0.1
    assert abs(offsets_db.std() - 4.0) < 0.1


def test_correlation_matrix_entry():
    R = spatial_correlation_matrix(2.0, 0.0, np.deg2rad(15.0), 2)
    assert np.isclose(R[0, 0], 2.0)
    assert np.isclose(R[0, 1], 2.0 * 0.7130341164638042)
    assert np.allclose(R, R.conj().T)


def test_correlation_matrix_n1_and_wide_spread():
    assert np.allclose(spatial_correlation_matrix(3.0, 0.4, 0.3, 1), [[3.0]])
    wide = spatial_correlation_matrix(1.0, 0.0, 50.0, 4)
    off_diag = wide - np.diag(np.diag(wide))
    assert np.abs(off_diag).max() < 1e-9


def test_statistics_trace_equals_n_beta():
    config = SimulationConfig(L=6, K=5, N=4)
    rng = np.random.default_rng(6)
    net = generate_network(config, rng)
    stats = build_channel_statistics(net, config, rng)
    traces = np.trace(stats.R, axis1=-2, axis2=-1).real
    assert np.allclose(traces, config.N * stats.beta, rtol=1e-9)


def test_sqrt_r_squares_back():
    config = SimulationConfig(L=4, K=3, N=4)
    rng = np.random.default_rng(9)
    stats = build_channel_statistics(generate_network(config, rng), config, rng)
    rebuilt = stats.sqrt_R @ stats.sqrt_R
    assert np.allclose(rebuilt, stats.R, atol=1e-12 * stats.beta.max())


def test_draw_channel_covariance():
    config = SimulationConfig(L=1, K=1, N=2)
    R = spatial_correlation_matrix(1.5, 0.7, np.deg2rad(15.0), 2)
    vals, vecs = np.linalg.eigh(R)
    sqrt_R = (vecs * np.sqrt(vals)) @ vecs.conj().T

    class Stats:
        pass

    stats = Stats()
    stats.sqrt_R = sqrt_R[None, None]
    rng = np.random.default_rng(12)
    h = np.stack([draw_channel(stats, rng)[0, 0] for _ in range(100000)])
    sample = (h[:, :, None] * h[:, None, :].conj()).mean(axis=0)
    rel = np.linalg.norm(sample - R) / np.linalg.norm(R)
    assert rel < 0.02


def test_draw_channel_zero_matrix():
    class Stats:
        pass

    stats = Stats()
    stats.sqrt_R = np.zeros((1, 1, 3, 3))
    h = draw_channel(stats, np.random.default_rng(0))
    assert np.all(h == 0)


def test_psd_guard_rejects_indefinite_input():
    from cfiama.network import _hermitian_sqrt
    bad = np.array([[[[1.0, 0.0], [0.0, -0.5]]]])
    with pytest.raises(ValueError):
        _hermitian_sqrt(bad)

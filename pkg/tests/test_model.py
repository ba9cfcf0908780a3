import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_complex
from flexjrc.config import SystemConfig
from flexjrc.model import (
    CommChannel,
    HybridPrecoder,
    beampattern,
    fft_analog_precoder,
    gen_comm_channel,
    gen_radar_scene,
    hybrid_precoder,
    path_sum_channel,
    radar_block_precoder,
    steering_vector,
    svd_combiner,
    transmit_signal,
)


def naive_steering(angle, n, spacing):
    return [cmath.exp(2j * math.pi * spacing * m * math.sin(angle)) / math.sqrt(n) for m in range(n)]


# ---- steering vectors -------------------------------------------------------

def test_steering_broadside_is_uniform():
    np.testing.assert_allclose(steering_vector(0.0, 4, 0.5), np.full(4, 0.5 + 0j), atol=1e-15)


def test_steering_endfire_two_elements():
    np.testing.assert_allclose(steering_vector(math.pi / 2, 2, 0.5), [0.70710678118, -0.70710678118], atol=1e-10)


@given(
    angle=st.floats(-math.pi, math.pi),
    n=st.integers(1, 200),
    spacing=st.floats(0.05, 4.0),
)
@settings(max_examples=200, deadline=None)
def test_steering_unit_norm(angle, n, spacing):
    assert abs(np.linalg.norm(steering_vector(angle, n, spacing)) - 1.0) < 1e-12


def test_steering_matches_naive_formula():
    for angle in (-1.2, -0.3, 0.0, 0.7, 1.5):
        np.testing.assert_allclose(steering_vector(angle, 7, 0.37), naive_steering(angle, 7, 0.37), atol=1e-14)


def test_steering_rejects_bad_input():
    with pytest.raises(ValueError):
        steering_vector(0.1, 0)
    with pytest.raises(ValueError):
        steering_vector(0.1, 4, 0.0)


# ---- communication channel --------------------------------------------------

def test_zero_gain_gives_zero_channel():
    h = path_sum_channel([0.0], [0.3], [-0.2], 8, 2)
    assert np.all(h == 0)


def test_single_path_rank_one():
    n_tx, n_rx, aod, aoa = 8, 2, 0.4, -0.9
    h = path_sum_channel([1.0], [aod], [aoa], n_tx, n_rx)
    a_t = naive_steering(aod, n_tx, 0.5)
    a_r = naive_steering(aoa, n_rx, 0.5)
    expected = np.array([[math.sqrt(n_tx * n_rx) * a_r[i] * a_t[j].conjugate() for j in range(n_tx)] for i in range(n_rx)])
    np.testing.assert_allclose(h, expected, atol=1e-13)
    assert np.linalg.matrix_rank(h) == 1


def test_channel_rebuild_matches(rng, cfg):
    ch = gen_comm_channel(rng, cfg)
    assert ch.matrix.shape == (cfg.n_rx, cfg.n_tx)
    assert ch.path_gains.shape == ch.aod.shape == ch.aoa.shape == (cfg.n_clusters,)
    rebuilt = ch.rebuild(cfg.spacing_ratio)
    assert np.linalg.norm(rebuilt - ch.matrix) <= 1e-12 * np.linalg.norm(ch.matrix)


def test_channel_angles_in_range(rng, cfg):
    for _ in range(50):
        ch = gen_comm_channel(rng, cfg)
        assert np.all(np.abs(ch.aod) <= np.pi / 2) and np.all(np.abs(ch.aoa) <= np.pi / 2)


def test_channel_power_normalization():
    cfg = SystemConfig(n_tx=8, n_rx=2, n_rf=2, n_clusters=6, n_targets=1)
    rng = np.random.default_rng(7)
    power = [np.linalg.norm(gen_comm_channel(rng, cfg).matrix) ** 2 for _ in range(10_000)]
    assert abs(np.mean(power) / 16.0 - 1.0) < 0.05


def test_generation_is_deterministic(cfg):
    a = gen_comm_channel(np.random.default_rng(3), cfg)
    b = gen_comm_channel(np.random.default_rng(3), cfg)
    assert np.array_equal(a.matrix, b.matrix)
    sa = gen_radar_scene(np.random.default_rng(4), cfg)
    sb = gen_radar_scene(np.random.default_rng(4), cfg)
    assert np.array_equal(sa.r_t_opt, sb.r_t_opt) and np.array_equal(sa.h_rad, sb.h_rad)


# ---- radar scene ------------------------------------------------------------

def test_radar_scene_covariance(rng, cfg):
    for _ in range(20):
        scene = gen_radar_scene(rng, cfg)
        r = scene.r_t_opt
        assert np.allclose(r, r.conj().T, atol=1e-14)
        assert np.min(np.linalg.eigvalsh(r)) > -1e-12
        assert np.linalg.matrix_rank(r, tol=1e-9) <= cfg.n_targets
        assert np.max(np.abs(r - scene.f_rad_opt @ scene.f_rad_opt.conj().T)) < 1e-12
        assert np.all(np.abs(scene.target_angles) <= np.pi / 2)


def test_radar_precoder_block_slots():
    angles = [-0.5, 0.1, 0.9]
    f = radar_block_precoder(angles, 9)
    for i in range(3):
        rows = np.arange(3 * i, 3 * i + 3)
        np.testing.assert_allclose(f[rows, i], np.array(naive_steering(angles[i], 9, 0.5))[rows], atol=1e-14)
        mask = np.ones(9, bool)
        mask[rows] = False
        assert np.all(f[mask, i] == 0)


def test_radar_channel_spans_target_directions():
    cfg = SystemConfig(n_targets=2)
    scene = gen_radar_scene(np.random.default_rng(11), cfg)
    expected = path_sum_channel(np.ones(2), scene.target_angles, scene.target_angles, cfg.n_tx, cfg.n_rx)
    np.testing.assert_allclose(scene.h_rad, expected)
    assert np.linalg.matrix_rank(scene.h_rad) <= 2


def test_too_many_targets_rejected():
    with pytest.raises(ValueError):
        radar_block_precoder(np.zeros(5), 4)


def test_single_target_pattern_peaks_at_target():
    cfg = SystemConfig(n_targets=1)
    scene = gen_radar_scene(np.random.default_rng(2), cfg)
    phi = scene.target_angles[0]
    a = steering_vector(phi, cfg.n_tx)
    np.testing.assert_allclose(scene.r_t_opt, np.outer(a, a.conj()), atol=1e-14)
    grid = np.linspace(-np.pi / 2, np.pi / 2, 2001)
    p = beampattern(scene.r_t_opt, grid, cfg)
    assert abs(grid[np.argmax(p)] - phi) <= grid[1] - grid[0]


def local_maxima(p):
    left = np.concatenate([[-np.inf], p[:-1]])
    right = np.concatenate([p[1:], [-np.inf]])
    return np.flatnonzero((p >= left) & (p >= right))


def test_three_target_pattern_peaks_within_one_step():
    cfg = SystemConfig()
    angles = np.deg2rad([-40.3, 5.6, 50.2])
    f = radar_block_precoder(angles, cfg.n_tx)
    grid_deg = np.arange(-90, 91)
    p = beampattern(f @ f.conj().T, np.deg2rad(grid_deg), cfg)
    peaks = grid_deg[local_maxima(p)]
    for phi in np.rad2deg(angles):
        assert np.min(np.abs(peaks - phi)) <= 1.0


# ---- analog precoder --------------------------------------------------------

def test_fft_two_point():
    np.testing.assert_allclose(fft_analog_precoder(2, 2), np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-15)


def test_fft_columns_of_four_point_dft():
    expected = np.array([[cmath.exp(-2j * math.pi * m * k / 4) / 2 for k in range(2)] for m in range(4)])
    np.testing.assert_allclose(fft_analog_precoder(4, 2), expected, atol=1e-15)


@pytest.mark.parametrize("n_tx, n_rf", [(2, 1), (8, 8), (32, 4), (96, 4), (17, 5)])
def test_fft_orthonormal_constant_modulus(n_tx, n_rf):
    f = fft_analog_precoder(n_tx, n_rf)
    np.testing.assert_allclose(f.conj().T @ f, np.eye(n_rf), atol=1e-12)
    np.testing.assert_allclose(np.abs(f), 1 / np.sqrt(n_tx), atol=1e-15)


def test_fft_rejects_too_many_chains():
    with pytest.raises(ValueError):
        fft_analog_precoder(4, 5)


def test_hybrid_precoder_invariants(cfg):
    prec = hybrid_precoder(cfg, 2.0)
    mags = np.abs(prec.analog)
    assert np.allclose(mags, mags[0, 0])
    assert np.array_equal(prec.baseband, np.eye(cfg.n_rf))
    assert abs(prec.power() - 2.0) < 1e-12
    sel = np.array([1, 0, 1, 0])
    partial = prec.with_selection(sel)
    assert np.array_equal(np.diag(sel) @ np.diag(sel), np.diag(sel))
    assert partial.power() <= 2.0 + 1e-12
    assert abs(partial.power() - 1.0) < 1e-12


def test_hybrid_precoder_rejects_nonbinary_selection(cfg):
    prec = hybrid_precoder(cfg, 1.0)
    with pytest.raises(ValueError):
        HybridPrecoder(prec.analog, prec.baseband, np.array([1, 0.5, 0, 1]))


# ---- combiner ---------------------------------------------------------------

def test_svd_combiner_rank_one(rng):
    u = random_complex(rng, 3)
    u /= np.linalg.norm(u)
    v = random_complex(rng, 6)
    v /= np.linalg.norm(v)
    w = svd_combiner(2.5 * np.outer(u, v.conj()))
    assert abs(abs(np.vdot(w[:, 0], u)) - 1.0) < 1e-12


def test_svd_combiner_orthonormal(rng):
    w = svd_combiner(random_complex(rng, 4, 32))
    np.testing.assert_allclose(w.conj().T @ w, np.eye(4), atol=1e-12)


def test_svd_combiner_first_column_beats_grid(rng):
    for _ in range(5):
        h = random_complex(rng, 2, 2)
        w1 = svd_combiner(h)[:, 0]
        best = np.linalg.norm(w1.conj() @ h)
        grid = 0.0
        for theta in np.linspace(0, np.pi / 2, 181):
            for psi in np.linspace(0, 2 * np.pi, 361):
                w = np.array([np.cos(theta), np.exp(1j * psi) * np.sin(theta)])
                grid = max(grid, np.linalg.norm(w.conj() @ h))
        assert grid <= best + 1e-12
        assert best - grid < 1e-3 * best


def test_svd_combiner_zero_matrix():
    with pytest.raises(ValueError):
        svd_combiner(np.zeros((2, 4)))


# ---- beampattern ------------------------------------------------------------

def test_beampattern_identity(cfg):
    grid = np.linspace(-np.pi / 2, np.pi / 2, 37)
    np.testing.assert_allclose(beampattern(np.eye(cfg.n_tx), grid, cfg), 1.0, atol=1e-12)


def test_beampattern_single_direction_maximum(cfg):
    phi0 = 0.3
    a = steering_vector(phi0, cfg.n_tx)
    r = np.outer(a, a.conj())
    assert abs(beampattern(r, [phi0], cfg)[0] - 1.0) < 1e-12
    grid = np.linspace(-np.pi / 2, np.pi / 2, 721)
    assert np.all(beampattern(r, grid, cfg) <= 1.0 + 1e-12)


def test_beampattern_rejects_non_hermitian(rng, cfg):
    with pytest.raises(ValueError):
        beampattern(random_complex(rng, cfg.n_tx, cfg.n_tx), [0.0], cfg)


# ---- transmit signal --------------------------------------------------------

def _unit(v):
    return v / np.linalg.norm(v)


def test_transmit_single_operation(rng, cfg):
    pc, pr = hybrid_precoder(cfg, 1.0), hybrid_precoder(cfg, 1.0)
    s_com = _unit(random_complex(rng, cfg.n_rf))
    x = transmit_signal(pc, pr, s_com, np.zeros(cfg.n_rf), interference=False)
    np.testing.assert_allclose(x, pc.analog @ pc.baseband @ s_com, atol=1e-14)


def test_transmit_zero_precoders(rng, cfg):
    p = hybrid_precoder(cfg, 1.0, selection=np.zeros(cfg.n_rf))
    x = transmit_signal(p, p, _unit(random_complex(rng, cfg.n_rf)), _unit(random_complex(rng, cfg.n_rf)))
    assert np.all(x == 0)


def test_transmit_four_terms(rng):
    n_tx, n_rf = 6, 3
    a_c, a_r = random_complex(rng, n_tx, n_rf), random_complex(rng, n_tx, n_rf)
    b_c, b_r = random_complex(rng, n_rf, n_rf), random_complex(rng, n_rf, n_rf)
    pc = HybridPrecoder(a_c, b_c, np.ones(n_rf, np.int8))
    pr = HybridPrecoder(a_r, b_r, np.ones(n_rf, np.int8))
    s_c, s_r = _unit(random_complex(rng, n_rf)), _unit(random_complex(rng, n_rf))
    x = transmit_signal(pc, pr, s_c, s_r)
    expected = np.zeros(n_tx, complex)
    for analog, base, s in ((a_c, b_c, s_c), (a_r, b_r, s_r), (a_c, b_r, s_r), (a_r, b_c, s_c)):
        for i in range(n_tx):
            for k in range(n_rf):
                for j in range(n_rf):
                    expected[i] += analog[i, k] * base[k, j] * s[j]
    np.testing.assert_allclose(x, expected, atol=1e-12)


def test_transmit_dimension_mismatch(cfg):
    p = hybrid_precoder(cfg, 1.0)
    with pytest.raises(ValueError):
        transmit_signal(p, p, np.ones(cfg.n_rf + 1), np.ones(cfg.n_rf))

"""
Physical-layer objects for the dual-function transmitter.

Uniform linear arrays only. Everything random takes an explicit
``numpy.random.Generator`` so a (seed, trial) pair pins every draw.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SystemConfig

__all__ = [
    "CommChannel",
    "RadarScene",
    "HybridPrecoder",
    "Combiners",
    "steering_vector",
    "steering_matrix",
    "path_sum_channel",
    "gen_comm_channel",
    "gen_radar_scene",
    "radar_scene",
    "fft_analog_precoder",
    "hybrid_precoder",
    "svd_combiner",
    "beampattern",
    "transmit_signal",
]


def steering_vector(angle: float, n: int, spacing_ratio: float = 0.5) -> np.ndarray:
    """Unit-norm ULA response of ``n`` elements toward ``angle`` (radians)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if spacing_ratio <= 0:
        raise ValueError(f"spacing_ratio must be > 0, got {spacing_ratio}")
    m = np.arange(n)
    return np.exp(2j * np.pi * spacing_ratio * m * np.sin(angle)) / np.sqrt(n)


def steering_matrix(angles, n: int, spacing_ratio: float = 0.5) -> np.ndarray:
    """Stack steering vectors column-wise, shape ``(n, len(angles))``."""
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    m = np.arange(n)[:, None]
    return np.exp(2j * np.pi * spacing_ratio * m * np.sin(angles)[None, :]) / np.sqrt(n)


def path_sum_channel(gains, aod, aoa, n_tx: int, n_rx: int, spacing_ratio: float = 0.5) -> np.ndarray:
    """sqrt(n_tx*n_rx/L) * sum_l g_l a_R(aoa_l) a_T(aod_l)^H for L paths."""
    gains = np.atleast_1d(np.asarray(gains, dtype=complex))
    a_t = steering_matrix(aod, n_tx, spacing_ratio)
    a_r = steering_matrix(aoa, n_rx, spacing_ratio)
    scale = np.sqrt(n_tx * n_rx / gains.size)
    return scale * (a_r * gains[None, :]) @ a_t.conj().T


@dataclass(frozen=True)
class CommChannel:
    matrix: np.ndarray
    path_gains: np.ndarray
    aod: np.ndarray
    aoa: np.ndarray

    def rebuild(self, spacing_ratio: float = 0.5) -> np.ndarray:
        n_rx, n_tx = self.matrix.shape
        return path_sum_channel(self.path_gains, self.aod, self.aoa, n_tx, n_rx, spacing_ratio)


@dataclass(frozen=True)
class RadarScene:
    target_angles: np.ndarray
    h_rad: np.ndarray
    f_rad_opt: np.ndarray
    r_t_opt: np.ndarray


@dataclass(frozen=True)
class HybridPrecoder:
    """
    Analog stage, baseband stage and RF-chain selection of one operation.

    The effective precoder is ``analog @ diag(selection) @ baseband``.
    """

    analog: np.ndarray
    baseband: np.ndarray
    selection: np.ndarray

    def __post_init__(self):
        sel = np.asarray(self.selection)
        if sel.shape != (self.analog.shape[1],):
            raise ValueError("selection length must equal the number of RF chains")
        if not np.all((sel == 0) | (sel == 1)):
            raise ValueError("selection entries must be 0 or 1")
        if self.baseband.shape[0] != self.analog.shape[1]:
            raise ValueError("baseband rows must equal the number of RF chains")

    @property
    def n_rf(self) -> int:
        return self.analog.shape[1]

    def matrix(self) -> np.ndarray:
        return (self.analog * np.asarray(self.selection, dtype=float)[None, :]) @ self.baseband

    def power(self) -> float:
        f = self.matrix()
        return float(np.real(np.trace(f @ f.conj().T)))

    def with_selection(self, selection) -> "HybridPrecoder":
        return HybridPrecoder(self.analog, self.baseband, np.asarray(selection, dtype=np.int8))


@dataclass(frozen=True)
class Combiners:
    """Receive combiners; column k serves stream k."""

    w_com: np.ndarray
    w_rad: np.ndarray


def gen_comm_channel(rng: np.random.Generator, cfg: SystemConfig) -> CommChannel:
    """Draw a clustered narrowband channel with ``cfg.n_clusters`` paths."""
    n = cfg.n_clusters
    gains = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)
    aod = rng.uniform(-np.pi / 2, np.pi / 2, n)
    aoa = rng.uniform(-np.pi / 2, np.pi / 2, n)
    h = path_sum_channel(gains, aod, aoa, cfg.n_tx, cfg.n_rx, cfg.spacing_ratio)
    return CommChannel(matrix=h, path_gains=gains, aod=aod, aoa=aoa)


def radar_block_precoder(target_angles, n_tx: int, spacing_ratio: float = 0.5) -> np.ndarray:
    """
    Radar precoder with one column per target.

    Column i is nonzero only on the i-th contiguous antenna slot, where it
    holds the matching entries of the target's steering vector. Slots
    split the array as evenly as possible.
    """
    angles = np.atleast_1d(np.asarray(target_angles, dtype=float))
    if angles.size > n_tx:
        raise ValueError(f"cannot place {angles.size} targets on {n_tx} antennas")
    a_t = steering_matrix(angles, n_tx, spacing_ratio)
    f = np.zeros((n_tx, angles.size), dtype=complex)
    for i, rows in enumerate(np.array_split(np.arange(n_tx), angles.size)):
        f[rows, i] = a_t[rows, i]
    return f


def gen_radar_scene(rng: np.random.Generator, cfg: SystemConfig) -> RadarScene:
    """
    Draw target angles and build the radar channel and optimal covariance.

    The radar channel uses the clustered form with one unit-gain path per
    target, departure and arrival both at the target angle.
    """
    if cfg.n_targets > cfg.n_tx:
        raise ValueError(f"n_targets={cfg.n_targets} exceeds n_tx={cfg.n_tx}")
    return radar_scene(rng.uniform(-np.pi / 2, np.pi / 2, cfg.n_targets), cfg)


def radar_scene(target_angles, cfg: SystemConfig) -> RadarScene:
    """Deterministic scene for given target angles."""
    angles = np.atleast_1d(np.asarray(target_angles, dtype=float))
    h_rad = path_sum_channel(np.ones(angles.size), angles, angles, cfg.n_tx, cfg.n_rx, cfg.spacing_ratio)
    f_opt = radar_block_precoder(angles, cfg.n_tx, cfg.spacing_ratio)
    return RadarScene(target_angles=angles, h_rad=h_rad, f_rad_opt=f_opt, r_t_opt=f_opt @ f_opt.conj().T)


def fft_analog_precoder(n_tx: int, n_rf: int) -> np.ndarray:
    """First ``n_rf`` columns of the unitary ``n_tx``-point DFT matrix."""
    if not 1 <= n_rf <= n_tx:
        raise ValueError(f"need 1 <= n_rf <= n_tx, got n_rf={n_rf}, n_tx={n_tx}")
    m = np.arange(n_tx)[:, None]
    k = np.arange(n_rf)[None, :]
    return np.exp(-2j * np.pi * m * k / n_tx) / np.sqrt(n_tx)


def hybrid_precoder(cfg: SystemConfig, p_max: float, selection=None) -> HybridPrecoder:
    """
    DFT analog stage with identity baseband, scaled to the power budget.

    The scale is set so that all ``n_rf`` chains together radiate exactly
    ``p_max``; deactivating chains lowers the radiated power instead of
    redistributing it. The scale sits on the analog stage so the baseband
    stays an exact identity.
    """
    analog = fft_analog_precoder(cfg.n_tx, cfg.n_rf) * np.sqrt(p_max / cfg.n_rf)
    if selection is None:
        selection = np.ones(cfg.n_rf, dtype=np.int8)
    return HybridPrecoder(analog, np.eye(cfg.n_rf, dtype=complex), np.asarray(selection, dtype=np.int8))


def svd_combiner(h: np.ndarray) -> np.ndarray:
    """
    Left singular vectors of ``h`` as combiner columns.

    Columns are ordered by descending singular value. Raises
    ``ValueError`` for an all-zero matrix.
    """
    h = np.asarray(h)
    if not np.any(h):
        raise ValueError("zero channel has no combiner")
    u, _, _ = np.linalg.svd(h)
    return u


def beampattern(r: np.ndarray, grid, cfg: SystemConfig) -> np.ndarray:
    """Transmit power a^H(phi) R a(phi) over ``grid`` (radians), clamped at 0."""
    r = np.asarray(r)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError("covariance must be square")
    scale = max(1.0, float(np.max(np.abs(r))))
    if not np.allclose(r, r.conj().T, rtol=0, atol=1e-10 * scale):
        raise ValueError("covariance must be Hermitian")
    a = steering_matrix(grid, r.shape[0], cfg.spacing_ratio)
    p = np.real(np.einsum("ij,ik,kj->j", a.conj(), r, a))
    return np.clip(p, 0.0, None)


def transmit_signal(
    prec_com: HybridPrecoder,
    prec_rad: HybridPrecoder,
    s_com: np.ndarray,
    s_rad: np.ndarray,
    interference: bool = True,
) -> np.ndarray:
    """
    Dual-function transmit vector.

    With ``interference`` the cross terms, where each analog stage is also
    driven by the other operation's baseband output, are included.
    """
    s_com = np.asarray(s_com, dtype=complex)
    s_rad = np.asarray(s_rad, dtype=complex)
    if prec_com.analog.shape[0] != prec_rad.analog.shape[0]:
        raise ValueError("precoders must share the antenna count")
    if s_com.shape != (prec_com.baseband.shape[1],) or s_rad.shape != (prec_rad.baseband.shape[1],):
        raise ValueError("symbol vector length does not match baseband columns")

    def analog(p):
        return p.analog * np.asarray(p.selection, dtype=float)[None, :]

    rf_com, rf_rad = analog(prec_com), analog(prec_rad)
    bb_com = prec_com.baseband @ s_com
    bb_rad = prec_rad.baseband @ s_rad
    x = rf_com @ bb_com + rf_rad @ bb_rad
    if interference:
        if rf_com.shape[1] != bb_rad.shape[0] or rf_rad.shape[1] != bb_com.shape[0]:
            raise ValueError("cross terms need equal RF-chain counts")
        x = x + rf_com @ bb_rad + rf_rad @ bb_com
    return x

"""
Interference-coupled rates of the communication and radar operations.

Conventions used throughout:

* A selection is a length-``n_rf`` 0/1 vector holding the diagonal of the
  selection matrix.
* Quadratic forms with a combiner matrix are summed over its columns, so
  an interference power is the total leakage seen by every stream of the
  interfered operation.
* Rates are in bits/s/Hz and sum the per-stream rates. The denominator of
  each stream is interference plus the receiver noise floor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS = 1e-12

__all__ = [
    "EPS",
    "RateReport",
    "LinearCoefficients",
    "interference_rad_to_com",
    "interference_com_to_rad",
    "comm_rate",
    "radar_rate",
    "joint_rate",
    "linear_coefficients",
    "approx_weighted_objective",
]


@dataclass(frozen=True)
class RateReport:
    r_com: float
    r_rad: float
    r_joint: float
    sigma2_rad_com: float
    sigma2_com_rad: float


@dataclass(frozen=True)
class LinearCoefficients:
    """
    Per-RF-chain contributions to the four quadratic forms.

    For any 0/1 selection ``s``: ``delta_com = c_com @ s``,
    ``sigma2_rad_com = g_com @ s``, and likewise ``c_rad``/``g_rad`` for the
    radar operation's selection. Valid when the baseband precoder satisfies
    ``F_BB F_BB^H = I``.
    """

    c_com: np.ndarray
    g_com: np.ndarray
    c_rad: np.ndarray
    g_rad: np.ndarray

    def __post_init__(self):
        n = len(self.c_com)
        for name in ("c_com", "g_com", "c_rad", "g_rad"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (n,):
                raise ValueError(f"{name} must have length {n}")
            if np.any(v < 0) or not np.all(np.isfinite(v)):
                raise ValueError(f"{name} must be finite and nonnegative")
            object.__setattr__(self, name, v)

    @property
    def n_rf(self) -> int:
        return len(self.c_com)

    def scaled(self, factor: float) -> "LinearCoefficients":
        return LinearCoefficients(self.c_com * factor, self.g_com * factor, self.c_rad * factor, self.g_rad * factor)


def _selection(s, n: int) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.shape != (n,):
        raise ValueError(f"selection must have length {n}, got shape {s.shape}")
    return s


def _chain_gains(h: np.ndarray, f_rf: np.ndarray, w: np.ndarray) -> np.ndarray:
    """|w_j^H H f_k|^2 summed over combiner columns j, one value per chain k."""
    w = np.asarray(w)
    if w.ndim == 1:
        w = w[:, None]
    if h.shape[0] != w.shape[0] or h.shape[1] != f_rf.shape[0]:
        raise ValueError(
            f"dimension mismatch: H {h.shape}, F_RF {f_rf.shape}, w {w.shape}"
        )
    return np.sum(np.abs(w.conj().T @ h @ f_rf) ** 2, axis=0)


def interference_rad_to_com(s_com, f_rf_com, h_rad, w_rad) -> float:
    """Leakage of the communication precoder into the radar receivers."""
    s = _selection(s_com, f_rf_com.shape[1])
    return float(_chain_gains(h_rad, f_rf_com, w_rad) @ s)


def interference_com_to_rad(s_rad, f_rf_rad, h_com, w_com) -> float:
    """Leakage of the radar precoder into the communication receivers."""
    s = _selection(s_rad, f_rf_rad.shape[1])
    return float(_chain_gains(h_com, f_rf_rad, w_com) @ s)


def _stream_rate(s, f_rf, f_bb, h, w, interference: float, noise_floor: float) -> float:
    if interference < 0 or noise_floor < 0:
        raise ValueError("interference and noise floor must be nonnegative")
    denom = interference + noise_floor
    if denom <= 0:
        raise ValueError("interference plus noise must be positive")
    s = _selection(s, f_rf.shape[1])
    w = np.asarray(w)
    if w.ndim == 1:
        w = w[:, None]
    if f_bb.shape[0] != f_rf.shape[1] or h.shape != (w.shape[0], f_rf.shape[0]):
        raise ValueError("dimension mismatch between channel, precoder and combiner")
    g = w.conj().T @ h @ (f_rf * s[None, :]) @ f_bb
    signal = np.sum(np.abs(g) ** 2, axis=1)
    return float(np.sum(np.log2(1.0 + signal / denom)))


def comm_rate(s_com, f_rf_com, f_bb_com, h_com, w_com, interference: float, noise_floor: float) -> float:
    """Sum over communication streams of log2(1 + signal_k / (interference + noise))."""
    return _stream_rate(s_com, f_rf_com, f_bb_com, h_com, w_com, interference, noise_floor)


def radar_rate(s_rad, f_rf_rad, f_bb_rad, h_rad, w_rad, interference: float, noise_floor: float) -> float:
    """Radar counterpart of :func:`comm_rate`."""
    return _stream_rate(s_rad, f_rf_rad, f_bb_rad, h_rad, w_rad, interference, noise_floor)


def joint_rate(rho: float, r_com: float, r_rad: float) -> float:
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    return rho * r_com + (1.0 - rho) * r_rad


def linear_coefficients(f_rf_com, f_rf_rad, h_com, h_rad, w_com, w_rad) -> LinearCoefficients:
    return LinearCoefficients(
        c_com=_chain_gains(h_com, f_rf_com, w_com),
        g_com=_chain_gains(h_rad, f_rf_com, w_rad),
        c_rad=_chain_gains(h_rad, f_rf_rad, w_rad),
        g_rad=_chain_gains(h_com, f_rf_rad, w_com),
    )


def _floor(noise_floor: float) -> float:
    # zero noise falls back to the epsilon guard so empty selections stay finite
    return noise_floor if noise_floor > 0 else EPS


def ratio(c: np.ndarray, g: np.ndarray, s, noise_floor: float = 0.0) -> float:
    """Approximate rate c.s / (g.s + noise), the log2(1+x) ~ x surrogate."""
    s = np.asarray(s, dtype=float)
    return float(c @ s / (g @ s + _floor(noise_floor)))


def approx_weighted_objective(
    coeffs: LinearCoefficients, s_com, s_rad, rho: float, noise_floor: float = 0.0
) -> float:
    """
    Weighted sum of the two signal-to-interference fractions.

    With ``noise_floor=0`` each fraction is delta/sigma^2 with an epsilon
    guard on the denominator. A positive ``noise_floor`` is added to both
    denominators, which keeps the surrogate consistent with the
    noise-limited exact rates.
    """
    s_com = _selection(s_com, coeffs.n_rf)
    s_rad = _selection(s_rad, coeffs.n_rf)
    return rho * ratio(coeffs.c_com, coeffs.g_com, s_com, noise_floor) + (1.0 - rho) * ratio(
        coeffs.c_rad, coeffs.g_rad, s_rad, noise_floor
    )

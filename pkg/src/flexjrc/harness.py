"""
Monte-Carlo driver: realizations, the four interference baselines, the
flexible selection scheme, and SNR / RF-chain sweeps.

Trial ``t`` of a sweep with base seed ``seed`` draws its channel and radar
scene from ``numpy.random.default_rng([seed, t])``. The same realization is
reused at every sweep point, so curves differ only through the swept
quantity.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .config import SystemConfig
from .model import (
    CommChannel,
    Combiners,
    HybridPrecoder,
    RadarScene,
    gen_comm_channel,
    gen_radar_scene,
    hybrid_precoder,
    svd_combiner,
)
from .rates import (
    LinearCoefficients,
    RateReport,
    comm_rate,
    interference_com_to_rad,
    interference_rad_to_com,
    joint_rate,
    linear_coefficients,
    radar_rate,
)
from .selection import SelectionOptions, SelectionResult, dinkelbach_select

__all__ = [
    "BaselineKind",
    "SweepRow",
    "Realization",
    "realize",
    "build_realization",
    "trial_rng",
    "evaluate",
    "eval_baseline",
    "run_snr_sweep",
    "run_rf_sweep",
    "DEFAULT_SNR_GRID",
]

DEFAULT_SNR_GRID = tuple(float(x) for x in range(-10, 11, 2))


class BaselineKind(enum.Enum):
    NoInterference = "no_interference"
    InterferenceBoth = "interference_both"
    InterferenceRadarOnly = "interference_radar_only"
    InterferenceCommsOnly = "interference_comms_only"
    ProposedFlexible = "proposed_flexible"

    @property
    def order(self) -> int:
        return list(BaselineKind).index(self)

    # which interference terms reach the rate denominators: (into com, into rad)
    @property
    def interference(self) -> tuple[bool, bool]:
        return _INTERFERENCE[self]


_INTERFERENCE = {
    BaselineKind.NoInterference: (False, False),
    BaselineKind.InterferenceBoth: (True, True),
    BaselineKind.InterferenceRadarOnly: (False, True),
    BaselineKind.InterferenceCommsOnly: (True, False),
    BaselineKind.ProposedFlexible: (True, True),
}


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    baseline: BaselineKind
    rho: float
    mean_rate: float
    std_rate: float
    trials: int
    mean_active_rf: float

    @property
    def stderr(self) -> float:
        return self.std_rate / np.sqrt(self.trials)


@dataclass(frozen=True)
class Realization:
    channel: CommChannel
    scene: RadarScene
    prec_com: HybridPrecoder
    prec_rad: HybridPrecoder
    combiners: Combiners
    coeffs: LinearCoefficients


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(trial)])


def realize(rng: np.random.Generator, cfg: SystemConfig) -> Realization:
    """Draw one channel and scene and build precoders, combiners and coefficients."""
    channel = gen_comm_channel(rng, cfg)
    scene = gen_radar_scene(rng, cfg)
    return build_realization(cfg, channel, scene)


def build_realization(cfg: SystemConfig, channel: CommChannel, scene: RadarScene) -> Realization:
    prec_com = hybrid_precoder(cfg, cfg.p_max_com)
    prec_rad = hybrid_precoder(cfg, cfg.p_max_rad)
    comb = Combiners(w_com=svd_combiner(channel.matrix), w_rad=svd_combiner(scene.h_rad))
    coeffs = linear_coefficients(
        prec_com.analog, prec_rad.analog, channel.matrix, scene.h_rad, comb.w_com, comb.w_rad
    )
    return Realization(channel, scene, prec_com, prec_rad, comb, coeffs)


def evaluate(
    real: Realization,
    s_com,
    s_rad,
    rho: float,
    noise_floor: float,
    interfere_com: bool = True,
    interfere_rad: bool = True,
) -> RateReport:
    """
    Exact rates for given selections.

    ``interfere_com`` puts radar-to-communication leakage into the
    communication denominator, ``interfere_rad`` the reverse. Disabled terms
    are reported as 0.
    """
    h_com, h_rad = real.channel.matrix, real.scene.h_rad
    w_com, w_rad = real.combiners.w_com, real.combiners.w_rad
    f_com, f_rad = real.prec_com, real.prec_rad
    sig_rc = interference_rad_to_com(s_com, f_com.analog, h_rad, w_rad) if interfere_com else 0.0
    sig_cr = interference_com_to_rad(s_rad, f_rad.analog, h_com, w_com) if interfere_rad else 0.0
    r_com = comm_rate(s_com, f_com.analog, f_com.baseband, h_com, w_com, sig_rc, noise_floor)
    r_rad = radar_rate(s_rad, f_rad.analog, f_rad.baseband, h_rad, w_rad, sig_cr, noise_floor)
    return RateReport(
        r_com=r_com,
        r_rad=r_rad,
        r_joint=joint_rate(rho, r_com, r_rad),
        sigma2_rad_com=sig_rc,
        sigma2_com_rad=sig_cr,
    )


def reference_selection(real: Realization, n_active: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Fixed hybrid selection with ``n_active`` chains per operation.

    Keeps the chains carrying the most useful signal for each operation
    (largest ``c_com`` resp. ``c_rad``, lower index on ties). With
    ``n_active == n_rf`` every chain is on. The kept sets are nested in
    ``n_active``.
    """
    n = real.coeffs.n_rf
    if not 1 <= n_active <= n:
        raise ValueError(f"n_active must lie in [1, {n}], got {n_active}")

    def top(c):
        s = np.zeros(n, dtype=np.int8)
        s[np.argsort(-c, kind="stable")[:n_active]] = 1
        return s

    return top(real.coeffs.c_com), top(real.coeffs.c_rad)


def eval_baseline(
    kind: BaselineKind,
    real: Realization,
    cfg: SystemConfig,
    rho: float | None = None,
    n_active: int | None = None,
    opts: SelectionOptions | None = None,
) -> tuple[RateReport, float, SelectionResult | None]:
    """
    Evaluate one scheme on one realization.

    Fixed baselines run ``n_active`` chains (all of them by default). The
    flexible scheme runs Dinkelbach selection capped at ``n_active`` chains
    and is scored with both interference terms. Returns the rate report, the
    mean number of active chains over the two operations and, for the
    flexible scheme, the selection result.
    """
    rho = cfg.rho if rho is None else rho
    n_active = cfg.n_rf if n_active is None else n_active
    noise = cfg.noise_floor
    if kind is BaselineKind.ProposedFlexible:
        opts = opts or SelectionOptions()
        if n_active < cfg.n_rf:
            opts = SelectionOptions(opts.i_max, opts.kappa_tol, n_active)
        sel = dinkelbach_select(real.coeffs, rho, opts, noise_floor=noise)
        report = evaluate(real, sel.s_com, sel.s_rad, rho, noise)
        active = 0.5 * (sel.active_com + sel.active_rad)
        return report, active, sel
    s_com, s_rad = reference_selection(real, n_active)
    into_com, into_rad = kind.interference
    report = evaluate(real, s_com, s_rad, rho, noise, into_com, into_rad)
    return report, float(n_active), None


def _aggregate(sweep_value, kind, rho, rates, active) -> SweepRow:
    rates = np.asarray(rates, dtype=float)
    std = float(np.std(rates, ddof=1)) if rates.size > 1 else 0.0
    return SweepRow(
        sweep_value=float(sweep_value),
        baseline=kind,
        rho=float(rho),
        mean_rate=float(np.mean(rates)),
        std_rate=std,
        trials=int(rates.size),
        mean_active_rf=float(np.mean(active)),
    )


def _sorted(rows):
    return sorted(rows, key=lambda r: (r.sweep_value, r.baseline.order))


def run_snr_sweep(
    cfg: SystemConfig,
    snr_grid=DEFAULT_SNR_GRID,
    rho: float | None = None,
    trials: int = 500,
    seed: int = 0,
    opts: SelectionOptions | None = None,
) -> list[SweepRow]:
    """Mean joint rate of every scheme at each SNR, all chains available."""
    snr_grid = [float(x) for x in snr_grid]
    if not snr_grid:
        raise ValueError("SNR grid must not be empty")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rho = cfg.rho if rho is None else rho
    kinds = list(BaselineKind)
    rates = np.zeros((len(snr_grid), len(kinds), trials))
    active = np.zeros_like(rates)
    for t in range(trials):
        real = realize(trial_rng(seed, t), cfg)
        for i, snr in enumerate(snr_grid):
            point = cfg.replace(snr_db=snr)
            for j, kind in enumerate(kinds):
                report, act, _ = eval_baseline(kind, real, point, rho, opts=opts)
                rates[i, j, t] = report.r_joint
                active[i, j, t] = act
    rows = [
        _aggregate(snr, kind, rho, rates[i, j], active[i, j])
        for i, snr in enumerate(snr_grid)
        for j, kind in enumerate(kinds)
    ]
    return _sorted(rows)


RF_SWEEP_KINDS = (
    BaselineKind.NoInterference,
    BaselineKind.InterferenceBoth,
    BaselineKind.ProposedFlexible,
)


def run_rf_sweep(
    cfg: SystemConfig,
    rf_grid=None,
    rho: float | None = None,
    trials: int = 500,
    seed: int = 0,
    opts: SelectionOptions | None = None,
    kinds=RF_SWEEP_KINDS,
) -> list[SweepRow]:
    """
    Mean joint rate against the number of usable RF chains ``L``.

    The flexible scheme selects at most ``L`` chains; the references keep
    exactly ``L``. Operating SNR is ``cfg.snr_db``.
    """
    rf_grid = list(range(1, cfg.n_rf + 1)) if rf_grid is None else [int(x) for x in rf_grid]
    if not rf_grid:
        raise ValueError("RF grid must not be empty")
    for L in rf_grid:
        if not 1 <= L <= cfg.n_rf:
            raise ValueError(f"RF count {L} outside [1, {cfg.n_rf}]")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rho = cfg.rho if rho is None else rho
    kinds = list(kinds)
    rates = np.zeros((len(rf_grid), len(kinds), trials))
    active = np.zeros_like(rates)
    for t in range(trials):
        real = realize(trial_rng(seed, t), cfg)
        for i, L in enumerate(rf_grid):
            for j, kind in enumerate(kinds):
                report, act, _ = eval_baseline(kind, real, cfg, rho, n_active=L, opts=opts)
                rates[i, j, t] = report.r_joint
                active[i, j, t] = act
    rows = [
        _aggregate(L, kind, rho, rates[i, j], active[i, j])
        for i, L in enumerate(rf_grid)
        for j, kind in enumerate(kinds)
    ]
    return _sorted(rows)

"""
Command-line front end.

    flexjrc --sweep snr --rho 1 --trials 500 --out runs/fig2 --emit-plot

Writes ``results.csv``, ``manifest.json`` and optionally ``plot.gp`` into
the output directory.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, SystemConfig, config_from_mapping, parse_config
from .harness import DEFAULT_SNR_GRID, realize, run_rf_sweep, run_snr_sweep, trial_rng
from .model import beampattern

log = logging.getLogger("flexjrc")

SWEEPS = ("snr", "rf", "beampattern")
CSV_HEADER = ["sweep_value", "baseline", "rho", "mean_rate", "std_rate", "trials", "mean_active_rf"]
BEAMPATTERN_HEADER = ["angle_deg", "power"]
U64_MAX = 2**64 - 1


@dataclass
class RunManifest:
    config_path: str | None
    sweep: str
    rho: float
    seed: int
    trials: int
    out_dir: str
    emit_plot: bool = False
    config: SystemConfig = field(default_factory=SystemConfig)
    snr_grid: list = field(default_factory=lambda: list(DEFAULT_SNR_GRID))
    rf_grid: list | None = None

    def __post_init__(self):
        if self.sweep not in SWEEPS:
            raise ValueError(f"sweep must be one of {SWEEPS}, got {self.sweep!r}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if not 0 <= self.seed <= U64_MAX:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.rf_grid is None:
            self.rf_grid = list(range(1, self.config.n_rf + 1))

    def to_dict(self) -> dict:
        return {
            "version": __version__,
            "config_path": self.config_path,
            "sweep": self.sweep,
            "rho": self.rho,
            "seed": self.seed,
            "trials": self.trials,
            "out_dir": self.out_dir,
            "emit_plot": self.emit_plot,
            "snr_grid": [float(x) for x in self.snr_grid],
            "rf_grid": [int(x) for x in self.rf_grid],
            "config": self.config.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict, out_dir: str | None = None) -> "RunManifest":
        return cls(
            config_path=data.get("config_path"),
            sweep=data["sweep"],
            rho=float(data["rho"]),
            seed=int(data["seed"]),
            trials=int(data["trials"]),
            out_dir=out_dir or data["out_dir"],
            emit_plot=bool(data.get("emit_plot", False)),
            config=config_from_mapping(data.get("config")),
            snr_grid=list(data.get("snr_grid", DEFAULT_SNR_GRID)),
            rf_grid=data.get("rf_grid"),
        )


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".12g")


def _rows_for(manifest: RunManifest):
    cfg = manifest.config
    if manifest.sweep == "snr":
        rows = run_snr_sweep(cfg, manifest.snr_grid, manifest.rho, manifest.trials, manifest.seed)
    elif manifest.sweep == "rf":
        rows = run_rf_sweep(cfg, manifest.rf_grid, manifest.rho, manifest.trials, manifest.seed)
    else:
        real = realize(trial_rng(manifest.seed, 0), cfg)
        grid_deg = np.arange(-90, 91)
        power = beampattern(real.scene.r_t_opt, np.deg2rad(grid_deg), cfg)
        return BEAMPATTERN_HEADER, [[int(a), p] for a, p in zip(grid_deg, power)]
    table = [
        [r.sweep_value, r.baseline.value, r.rho, r.mean_rate, r.std_rate, r.trials, r.mean_active_rf]
        for r in rows
    ]
    return CSV_HEADER, table


def write_csv(path: Path, header, table) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in table:
            writer.writerow([_fmt(x) for x in row])


_SERIES = {
    "no_interference": "(i) no interference",
    "interference_both": "(ii) interference both",
    "interference_radar_only": "(iii) interference radar only",
    "interference_comms_only": "(iv) interference comms only",
    "proposed_flexible": "proposed flexible",
}


def plot_script(manifest: RunManifest, baselines) -> str:
    """Gnuplot script that draws results.csv."""
    if manifest.sweep == "beampattern":
        return "\n".join([
            'set datafile separator ","',
            'set xlabel "angle (deg)"',
            'set ylabel "transmit beampattern"',
            "set grid",
            "plot 'results.csv' using 1:2 skip 1 with lines title 'R_T^{opt}'",
            "",
        ])
    xlabel = "SNR (dB)" if manifest.sweep == "snr" else "number of RF chains"
    lines = [
        'set datafile separator ","',
        f'set xlabel "{xlabel}"',
        'set ylabel "joint rate (bits/s/Hz)"',
        f'set title "rho = {_fmt(manifest.rho)}"',
        "set key left top",
        "set grid",
    ]
    parts = [
        f"'results.csv' using 1:(strcol(2) eq \"{b}\" ? $4 : NaN) skip 1 with linespoints title '{_SERIES[b]}'"
        for b in baselines
    ]
    lines.append("plot " + ", \\\n     ".join(parts))
    lines.append("")
    return "\n".join(lines)


def run(manifest: RunManifest) -> int:
    """Execute a sweep and write its artifacts. Returns the exit status."""
    out = Path(manifest.out_dir)
    created: list[Path] = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        header, table = _rows_for(manifest)
        results = out / "results.csv"
        created.append(results)
        write_csv(results, header, table)
        man = out / "manifest.json"
        created.append(man)
        man.write_text(json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n")
        if manifest.emit_plot:
            baselines = list(dict.fromkeys(row[1] for row in table)) if header == CSV_HEADER else []
            gp = out / "plot.gp"
            created.append(gp)
            gp.write_text(plot_script(manifest, baselines))
    except Exception as exc:
        for path in created:
            path.unlink(missing_ok=True)
        log.error("run failed: %s", exc)
        return 1
    log.info("wrote %s", ", ".join(str(p) for p in created))
    return 0


def _grid(text: str, cast):
    return [cast(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flexjrc", description=__doc__.splitlines()[1])
    p.add_argument("--config", help="flat key: value scenario file (defaults if omitted)")
    p.add_argument("--manifest", help="replay a previous run's manifest.json")
    p.add_argument("--sweep", choices=SWEEPS, default="snr")
    p.add_argument("--rho", type=float, default=None, help="weight of the communication rate in [0, 1]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--out", default="results", help="output directory")
    p.add_argument("--emit-plot", action="store_true", help="also write a gnuplot script")
    p.add_argument("--snr-grid", help="comma-separated SNR points in dB")
    p.add_argument("--rf-grid", help="comma-separated RF-chain counts")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.manifest:
            data = json.loads(Path(args.manifest).read_text())
            manifest = RunManifest.from_dict(data, out_dir=args.out)
        else:
            cfg = parse_config(args.config) if args.config else SystemConfig()
            manifest = RunManifest(
                config_path=args.config,
                sweep=args.sweep,
                rho=cfg.rho if args.rho is None else args.rho,
                seed=args.seed,
                trials=args.trials,
                out_dir=args.out,
                emit_plot=args.emit_plot,
                config=cfg,
                snr_grid=_grid(args.snr_grid, float) if args.snr_grid else list(DEFAULT_SNR_GRID),
                rf_grid=_grid(args.rf_grid, int) if args.rf_grid else None,
            )
    except (ConfigError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"flexjrc: error: {exc}", file=sys.stderr)
        return 2
    status = run(manifest)
    if status:
        print("flexjrc: error: run failed, see log above", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())

"""
RF-chain selection by Dinkelbach iterations.

Each operation's surrogate rate is a ratio of two linear functions of its
0/1 selection vector, and the two operations do not share variables. The
per-iteration subproblem is therefore linear and separable per chain, and
its optimum over the unit box sits on a vertex. It is solved in closed form
by a sign rule (top-``L`` positive weights under a cardinality cap).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .rates import EPS, LinearCoefficients, approx_weighted_objective

__all__ = [
    "SelectionOptions",
    "SelectionResult",
    "solve_db_subproblem",
    "dinkelbach_select",
    "brute_force_select",
    "round_selection",
    "binary_vertices",
]

MAX_ENUMERATION = 16


@dataclass(frozen=True)
class SelectionOptions:
    i_max: int = 20
    kappa_tol: float = 1e-6
    max_active: int | None = None

    def __post_init__(self):
        if self.i_max < 1:
            raise ValueError("i_max must be >= 1")
        if self.max_active is not None and self.max_active < 0:
            raise ValueError("max_active must be >= 0")


@dataclass(frozen=True)
class SelectionResult:
    s_com: np.ndarray
    s_rad: np.ndarray
    kappa_com_trajectory: np.ndarray
    kappa_rad_trajectory: np.ndarray
    iterations: int
    converged: bool
    objective: float
    degenerate: bool = False
    flags: tuple = field(default_factory=tuple)

    @property
    def active_com(self) -> int:
        return int(self.s_com.sum())

    @property
    def active_rad(self) -> int:
        return int(self.s_rad.sum())


def _sign_rule(weights: np.ndarray, max_active: int | None) -> np.ndarray:
    # zero weight -> chain off
    s = (weights > 0).astype(float)
    if max_active is not None and s.sum() > max_active:
        order = np.argsort(-weights, kind="stable")
        s = np.zeros_like(s)
        s[order[:max_active]] = 1.0
    return s


def solve_db_subproblem(
    coeffs: LinearCoefficients,
    kappa_com: float,
    kappa_rad: float,
    rho: float,
    max_active: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Maximize the Dinkelbach auxiliary objective over the unit box.

    The objective ``rho*(c_com - kappa_com*g_com) @ s_com +
    (1-rho)*(c_rad - kappa_rad*g_rad) @ s_rad`` is linear per chain, so a
    chain is switched on iff its weight is strictly positive. Returns the
    two selections as float vectors with entries in {0, 1}.
    """
    if not (np.isfinite(kappa_com) and np.isfinite(kappa_rad)):
        raise ValueError("kappa values must be finite")
    w_com = rho * (coeffs.c_com - kappa_com * coeffs.g_com)
    w_rad = (1.0 - rho) * (coeffs.c_rad - kappa_rad * coeffs.g_rad)
    return _sign_rule(w_com, max_active), _sign_rule(w_rad, max_active)


def round_selection(relaxed) -> np.ndarray:
    """Threshold a relaxed selection at 0.5; exactly 0.5 goes to 0."""
    relaxed = np.asarray(relaxed, dtype=float)
    if np.any(relaxed < 0) or np.any(relaxed > 1) or np.any(np.isnan(relaxed)):
        raise ValueError("relaxed selection entries must lie in [0, 1]")
    return (relaxed > 0.5).astype(np.int8)


def dinkelbach_select(
    coeffs: LinearCoefficients,
    rho: float,
    opts: SelectionOptions | None = None,
    noise_floor: float = 0.0,
) -> SelectionResult:
    """
    Select active RF chains for both operations.

    Starts from all chains active with both ratio parameters at 1. Each
    iteration sets every operation's parameter to the surrogate ratio of its
    current selection and solves the linear subproblem. An operation stops
    moving once the subproblem cannot beat its current selection, which is
    the point where the current ratio is globally optimal. The loop ends
    when both operations have stopped, both parameters change by less than
    ``kappa_tol`` (relative), or after ``i_max`` iterations.

    ``noise_floor`` is added to both surrogate denominators; at zero they
    fall back to an epsilon guard.
    """
    opts = opts or SelectionOptions()
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    n = coeffs.n_rf
    floor = noise_floor if noise_floor > 0 else EPS
    c = np.vstack([coeffs.c_com, coeffs.c_rad])
    g = np.vstack([coeffs.g_com, coeffs.g_rad])
    weight = np.array([rho, 1.0 - rho])
    cap = opts.max_active

    s = np.ones((2, n))
    feasible = np.full(2, cap is None or n <= cap)
    kappa = np.ones(2)
    traj = [[1.0], [1.0]]
    stopped = np.zeros(2, dtype=bool)
    converged = False
    iterations = 0

    for it in range(1, opts.i_max + 1):
        iterations = it
        delta = np.sum(c * s, axis=1)
        sigma = np.sum(g * s, axis=1) + floor
        kappa_new = delta / sigma
        for op in range(2):
            traj[op].append(float(kappa_new[op]))

        cand = np.vstack([_sign_rule(weight[op] * (c[op] - kappa_new[op] * g[op]), cap) for op in range(2)])
        gain = weight * (np.sum(c * cand, axis=1) - kappa_new * (np.sum(g * cand, axis=1) + floor))
        scale = weight * (c.sum(axis=1) + kappa_new * (g.sum(axis=1) + floor))
        improves = gain > 1e-14 * np.maximum(scale, EPS)

        move = improves | ~feasible
        stopped = ~move
        s[move] = cand[move]
        feasible[move] = True

        small_step = np.abs(kappa_new - kappa) < opts.kappa_tol * np.maximum(1.0, np.abs(kappa))
        kappa = kappa_new
        if stopped.all() or (it > 1 and small_step.all()):
            converged = True
            break

    s_com = s[0].astype(np.int8)
    s_rad = s[1].astype(np.int8)
    degenerate = bool(not np.any(coeffs.g_com) or not np.any(coeffs.g_rad))
    return SelectionResult(
        s_com=s_com,
        s_rad=s_rad,
        kappa_com_trajectory=np.array(traj[0]),
        kappa_rad_trajectory=np.array(traj[1]),
        iterations=iterations,
        converged=converged,
        objective=approx_weighted_objective(coeffs, s_com, s_rad, rho, noise_floor),
        degenerate=degenerate,
        flags=("zero_interference_coefficients",) if degenerate else (),
    )


def binary_vertices(n: int, max_active: int | None = None) -> np.ndarray:
    """All 0/1 vectors of length ``n`` in lexicographic order, one per row."""
    if n > MAX_ENUMERATION:
        raise ValueError(f"n_rf={n} too large for enumeration (limit {MAX_ENUMERATION})")
    verts = np.array(list(itertools.product((0, 1), repeat=n)), dtype=float).reshape(-1, n)
    if max_active is not None:
        verts = verts[verts.sum(axis=1) <= max_active]
    return verts


def brute_force_select(
    coeffs: LinearCoefficients,
    rho: float,
    max_active: int | None = None,
    noise_floor: float = 0.0,
) -> tuple[np.ndarray, np.ndarray, float]:
    """
    Exact maximizer of the surrogate objective by enumeration.

    The objective splits into a communication term and a radar term, so
    the best pair is the best communication vertex with the best radar
    vertex. Ties resolve to the lexicographically first vertex.
    """
    floor = noise_floor if noise_floor > 0 else EPS
    verts = binary_vertices(coeffs.n_rf, max_active)
    obj_com = rho * (verts @ coeffs.c_com) / (verts @ coeffs.g_com + floor)
    obj_rad = (1.0 - rho) * (verts @ coeffs.c_rad) / (verts @ coeffs.g_rad + floor)
    i = int(np.argmax(obj_com))
    j = int(np.argmax(obj_rad))
    s_com = verts[i].astype(np.int8)
    s_rad = verts[j].astype(np.int8)
    return s_com, s_rad, approx_weighted_objective(coeffs, s_com, s_rad, rho, noise_floor)

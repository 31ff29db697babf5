"""Brute-force reference implementations.

These oracles deliberately share no logic with the analytic solvers: owner
objectives are maximized by exhaustive grid evaluation, and program optima
by nested grid refinement over (bonus, threshold).  They are slow on
purpose and exist to generate expected values for tests and to back the
oracle-equivalence checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Tuple, Union

import numpy as np

from .duopoly import Llp, NoProgram, SignUp
from .utilities import SelfUseUtility

__all__ = ["GridSpec", "grid_best_response", "grid_optimal_llp", "grid_split_search"]


@dataclass(frozen=True)
class GridSpec:
    """Resolution (points per unit interval) for oracle searches."""

    resolution: int = 200
    refine_rounds: int = 3

    def __post_init__(self) -> None:
        if self.resolution < 10:
            raise ValueError("oracle resolution must be at least 10")


def _argmax_prefer_larger(values: np.ndarray) -> int:
    """Index of the maximum, ties resolved to the largest index."""
    return len(values) - 1 - int(np.argmax(values[::-1]))


def grid_best_response(
    u: SelfUseUtility, reward: Callable[[float], float], resolution: int = 10_000
) -> Tuple[float, float]:
    """Exhaustive maximization of f(1 - s) + reward(s) on a sharing grid."""
    grid = np.linspace(0.0, 1.0, resolution + 1)
    vals = np.array([u.value(1.0 - s) + reward(float(s)) for s in grid])
    i = _argmax_prefer_larger(vals)
    return float(grid[i]), float(vals[i])


def grid_optimal_llp(
    u: SelfUseUtility, p: float, q: float, grid: GridSpec = GridSpec()
) -> Tuple[float, float, float]:
    """Best (bonus, threshold) for a single-threshold program, by search.

    Each refinement round lays a (resolution + 1)^2 grid over the current
    (B, t) box, computes the owner's response for every cell by brute-force
    utility maximization on a fine sharing grid (with each threshold added
    as an explicit kink candidate), and zooms the box onto the best cell.
    """
    if q < p:
        raise ValueError("need p <= q")
    if q == p:
        return 0.0, 0.0, 0.0
    res = grid.resolution
    b_lo, b_hi = 0.0, q
    t_lo, t_hi = 0.0, 1.0
    best = (0.0, 0.0, -np.inf)

    for _ in range(grid.refine_rounds):
        b_grid = np.linspace(b_lo, b_hi, res + 1)
        t_grid = np.linspace(t_lo, t_hi, res + 1)
        s_grid = np.unique(np.concatenate([np.linspace(0.0, 1.0, 10 * res + 1), t_grid]))
        base = np.array([u.value(1.0 - s) + p * s for s in s_grid])
        excess = np.maximum(s_grid[:, None] - t_grid[None, :], 0.0)  # (ns, nt)

        round_best = (0.0, 0.0, -np.inf)
        for b in b_grid:
            util = base[:, None] + b * excess
            # ties toward larger s, matching the owner's tie-break
            idx = util.shape[0] - 1 - np.argmax(util[::-1, :], axis=0)
            s_star = s_grid[idx]
            revenue = (q - p) * s_star - b * np.maximum(s_star - t_grid, 0.0)
            j = int(np.argmax(revenue))
            if revenue[j] > round_best[2]:
                round_best = (float(b), float(t_grid[j]), float(revenue[j]))
        if round_best[2] > best[2]:
            best = round_best

        db = (b_hi - b_lo) / res
        dt = (t_hi - t_lo) / res
        b_lo = max(0.0, round_best[0] - 2 * db)
        b_hi = min(q, round_best[0] + 2 * db)
        t_lo = max(0.0, round_best[1] - 2 * dt)
        t_hi = min(1.0, round_best[1] + 2 * dt)
    return best


Config = Tuple[float, Union[NoProgram, SignUp, Llp]]


def grid_split_search(
    u: SelfUseUtility, a: Config, b: Config, resolution: int = 200
) -> Tuple[float, float, float]:
    """Exhaustive owner optimum over split allocations s_a + s_b <= 1.

    Used to confirm exclusivity: when a program's effective wage beats the
    rival's pay, no interior split should beat the exclusive optimum.
    Sign-up bonuses only pay on exclusive allocations by definition.
    """
    p_a, strat_a = a
    p_b, strat_b = b
    steps = resolution
    axis = np.linspace(0.0, 1.0, steps + 1)
    f_by_used = np.array([u.value(1.0 - k / steps) for k in range(steps + 1)])

    i = np.arange(steps + 1)
    used = i[:, None] + i[None, :]
    valid = used <= steps
    sa = axis[:, None] * np.ones_like(axis)[None, :]
    sb = np.ones_like(axis)[:, None] * axis[None, :]

    total = np.where(valid, f_by_used[np.minimum(used, steps)], -np.inf)
    total = total + p_a * sa + p_b * sb

    def program_pay(strat, s_own, s_other):
        if isinstance(strat, NoProgram):
            return 0.0
        if isinstance(strat, Llp):
            return strat.bonus * np.maximum(s_own - strat.threshold, 0.0)
        if isinstance(strat, SignUp):
            return strat.bonus * ((s_own > 0) & (s_other == 0))
        raise ValueError(f"unsupported oracle strategy {strat}")

    total = total + program_pay(strat_a, sa, sb) + program_pay(strat_b, sb, sa)
    flat = int(np.argmax(np.where(valid, total, -np.inf)))
    ia, ib = np.unravel_index(flat, total.shape)
    return float(axis[ia]), float(axis[ib]), float(total[ia, ib])

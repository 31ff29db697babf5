"""Case-study market builders.

Two parameterized owner populations recur in the experiments:

* a ladder of n classes with f_i = (n - i + 1) * f, used for the
  multi-threshold monopoly experiments at unit utility scale; and
* a two-class market with f_1 = k * f_base and f_2 = f_base, used for all
  competition experiments.

For the competition experiments the base utility carries an overall scale of
10 relative to the quoted prices (p_a = 10 and so on).  The fitted gamma
applies at unit price scale; the competition prices are an order of
magnitude larger, and only this scaling reproduces the published regime
boundaries (see the repository notes).  ``BASE_SCALE`` makes that choice
explicit and overridable.
"""

from __future__ import annotations

from typing import List

from .utilities import OwnerClass, ScaledLog

__all__ = ["GAMMA", "BASE_SCALE", "ladder_market", "two_class_market"]

GAMMA = 0.832
BASE_SCALE = 10.0


def ladder_market(n: int, gamma: float = GAMMA) -> List[OwnerClass]:
    """n owner classes with utilities (n - i + 1) * f, i = 1..n."""
    if n < 1:
        raise ValueError("need at least one owner class")
    return [OwnerClass(i, ScaledLog(scale=float(n - i + 1), gamma=gamma)) for i in range(1, n + 1)]


def two_class_market(
    k: float, gamma: float = GAMMA, base_scale: float = BASE_SCALE
) -> List[OwnerClass]:
    """Two classes, f_1 = k * base and f_2 = base, k > 1."""
    if k <= 1:
        raise ValueError("heterogeneity k must exceed 1")
    return [
        OwnerClass(1, ScaledLog(scale=k * base_scale, gamma=gamma)),
        OwnerClass(2, ScaledLog(scale=base_scale, gamma=gamma)),
    ]

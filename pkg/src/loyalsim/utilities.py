"""Owner self-usage utilities.

An owner holds one divisible unit of a resource and splits it between
self-usage ``x`` and sharing ``s = 1 - x``.  The benefit of self-usage is a
concave increasing function ``f`` with ``f(0) = 0``, strictly decreasing
marginal ``f'`` and ``f'(1) = 0``.  Everything downstream (best responses,
program construction, competition) only needs four primitives from ``f``:
point evaluation, the marginal, the inverse marginal, and definite integrals
of the marginal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "SelfUseUtility",
    "ScaledLog",
    "TabulatedMarginal",
    "OwnerClass",
    "validate_class_ordering",
]


class SelfUseUtility:
    """Abstract concave self-usage utility on [0, 1]."""

    def value(self, x: float) -> float:
        raise NotImplementedError

    def marginal(self, x: float) -> float:
        raise NotImplementedError

    def inverse_marginal(self, y: float) -> float:
        raise NotImplementedError

    def marginal_integral(self, a: float, b: float) -> float:
        """Integral of f' over [a, b], i.e. f(b) - f(a)."""
        if not (0.0 <= a <= b <= 1.0):
            raise ValueError(f"invalid integration bounds [{a}, {b}]")
        return self.value(b) - self.value(a)

    def sharing_at_wage(self, w: float) -> float:
        """Sharing level where the marginal self-use benefit equals wage w.

        An owner paid ``w`` per shared unit keeps resources only while
        ``f'(x) > w``, so the interior optimum is ``s = 1 - (f')^{-1}(w)``.
        """
        if w < 0:
            raise ValueError("wage must be non-negative")
        return 1.0 - self.inverse_marginal(w)


@dataclass(frozen=True)
class ScaledLog(SelfUseUtility):
    """f(x) = (k / gamma) * (x - x ln x), the fitted form used throughout.

    ``scale`` multiplies the whole utility, so a class with scale ``k`` has
    marginals exactly ``k`` times the base class.  All four primitives have
    closed forms.
    """

    scale: float = 1.0
    gamma: float = 0.832

    def __post_init__(self) -> None:
        if self.scale <= 0 or self.gamma <= 0:
            raise ValueError("scale and gamma must be positive")

    def value(self, x: float) -> float:
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"x={x} outside [0, 1]")
        if x == 0.0:
            return 0.0  # limit of x - x ln x as x -> 0+
        return (self.scale / self.gamma) * (x - x * math.log(x))

    def marginal(self, x: float) -> float:
        if not 0.0 < x <= 1.0:
            raise ValueError(f"x={x} outside (0, 1]")
        return -(self.scale / self.gamma) * math.log(x)

    def inverse_marginal(self, y: float) -> float:
        if y < 0:
            raise ValueError("marginal values are non-negative")
        return math.exp(-self.gamma * y / self.scale)


@dataclass(frozen=True)
class TabulatedMarginal(SelfUseUtility):
    """Utility specified by strictly decreasing marginal samples.

    ``xs`` must be increasing in (0, 1] with ``xs[-1] == 1`` and ``ys``
    strictly decreasing with ``ys[-1] == 0`` (the f'(1) = 0 assumption).
    The marginal is linearly interpolated between samples and held constant
    at ``ys[0]`` below ``xs[0]``; ``value`` integrates the interpolant.
    """

    xs: tuple = ()
    ys: tuple = ()
    _cum: tuple = field(default=(), repr=False, compare=False)

    BISECT_LO = 1e-12
    BISECT_TOL = 1e-10
    BISECT_MAX_ITER = 200

    def __post_init__(self) -> None:
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if xs.size < 2 or xs.size != ys.size:
            raise ValueError("need matching xs/ys with at least two samples")
        if not (np.all(np.diff(xs) > 0) and xs[0] > 0 and xs[-1] == 1.0):
            raise ValueError("xs must be strictly increasing in (0, 1] ending at 1")
        if not np.all(np.diff(ys) < 0):
            raise ValueError("marginal samples must be strictly decreasing")
        if ys[-1] != 0.0:
            raise ValueError("marginal at x=1 must be 0")
        # Cumulative integral of the interpolated marginal from 0 to xs[i],
        # treating the marginal as the constant ys[0] on [0, xs[0]].
        seg = 0.5 * (ys[1:] + ys[:-1]) * np.diff(xs)
        cum = np.concatenate([[ys[0] * xs[0]], ys[0] * xs[0] + np.cumsum(seg)])
        object.__setattr__(self, "_cum", tuple(cum))

    def _interp_marginal(self, x: float) -> float:
        xs = np.asarray(self.xs)
        if x <= xs[0]:
            return float(self.ys[0])
        return float(np.interp(x, xs, np.asarray(self.ys)))

    def value(self, x: float) -> float:
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"x={x} outside [0, 1]")
        xs = np.asarray(self.xs)
        if x <= xs[0]:
            return float(self.ys[0]) * x
        i = int(np.searchsorted(xs, x)) - 1
        y_x = self._interp_marginal(x)
        return self._cum[i] + 0.5 * (self.ys[i] + y_x) * (x - xs[i])

    def marginal(self, x: float) -> float:
        if not 0.0 < x <= 1.0:
            raise ValueError(f"x={x} outside (0, 1]")
        return self._interp_marginal(x)

    def inverse_marginal(self, y: float) -> float:
        if y < 0:
            raise ValueError("marginal values are non-negative")
        if y == 0.0:
            return 1.0
        if y >= self.ys[0]:
            return float(self.xs[0])  # marginal is flat below xs[0]
        lo, hi = self.BISECT_LO, 1.0
        for _ in range(self.BISECT_MAX_ITER):
            mid = 0.5 * (lo + hi)
            if self._interp_marginal(mid) > y:
                lo = mid
            else:
                hi = mid
            if hi - lo < self.BISECT_TOL:
                break
        return 0.5 * (lo + hi)


@dataclass(frozen=True)
class OwnerClass:
    """An owner class: a 1-based index plus its self-usage utility."""

    id: int
    utility: SelfUseUtility


def validate_class_ordering(owners: Sequence[OwnerClass], grid_points: int = 100) -> None:
    """Check f'_1 > f'_2 > ... pointwise on a grid; raise on violation.

    The heterogeneous-market results assume strictly ordered marginal curves,
    so equal or crossing curves are treated as invalid input rather than
    silently reordered.
    """
    # open interval: every marginal vanishes at x = 1 by assumption
    xs = np.linspace(1e-6, 1.0, grid_points + 1)[:-1]
    for hi, lo in zip(owners, owners[1:]):
        for x in xs:
            if not hi.utility.marginal(float(x)) > lo.utility.marginal(float(x)):
                raise ValueError(
                    f"owner class {hi.id} does not strictly dominate class {lo.id} "
                    f"in marginal utility at x={x:.6f}"
                )

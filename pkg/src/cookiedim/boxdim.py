"""Brute-force box counting, independent of the pressure machinery.

Grid boxes are ``[m*eps, (m+1)*eps)``.  A closed component ``[l, r]`` with
``l < r`` occupies the boxes whose interiors it meets, i.e. indices
``floor(l/eps)`` through ``ceil(r/eps) - 1`` (evaluated with a 1e-9 slack so
that endpoints lying on grid lines up to rounding are not double counted).
A degenerate point ``x`` occupies box ``floor(x/eps)``.  With this rule
``[0, 1]`` at ``eps = 1/4`` gives 4 boxes and the depth-k middle-thirds
intervals at ``eps = 3**-k`` give exactly ``2**k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .ifs import WordInterval, as_family, contraction_profile
from .nonstationary import DimensionEstimate, _as_sequence, cantor_arrays
from .thermo import DEFAULT_DEPTH_CAP

GRID_SLACK = 1e-9
EPS_FLOOR = 1e-10
DEFAULT_POINTS = 6


@dataclass(frozen=True)
class CoverCount:
    epsilon: float
    count: int


def _endpoints(intervals) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(intervals, tuple) and len(intervals) == 2 and isinstance(intervals[0], np.ndarray):
        return intervals
    items = list(intervals)
    if items and isinstance(items[0], WordInterval):
        return (np.array([w.left for w in items]), np.array([w.right for w in items]))
    arr = np.asarray(items, dtype=float).reshape(-1, 2)
    return arr[:, 0], arr[:, 1]


def cover_count(intervals, epsilon: float) -> CoverCount:
    """Number of grid boxes of side ``epsilon`` meeting the union of ``intervals``.

    ``intervals`` is a list of :class:`WordInterval`, a list of ``(left, right)``
    pairs, or a ``(lefts, rights)`` pair of arrays.
    """
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    left, right = _endpoints(intervals)
    if left.size == 0:
        return CoverCount(epsilon, 0)
    lo = np.floor(left / epsilon + GRID_SLACK)
    hi = np.ceil(right / epsilon - GRID_SLACK) - 1
    hi = np.where(right > left, np.maximum(hi, lo), lo)
    order = np.argsort(lo, kind="stable")
    lo, hi = lo[order], hi[order]
    prev = np.maximum.accumulate(np.concatenate(([-np.inf], hi[:-1])))
    fresh = hi - np.maximum(lo - 1, prev)
    return CoverCount(epsilon, int(np.clip(fresh, 0, None).sum()))


def default_schedule(fam, depth: int, points: int = DEFAULT_POINTS) -> list[float]:
    """Geometric scales from ``lam**-2`` down to ``bigL**-(depth-2)`` (floored)."""
    prof = contraction_profile(fam)
    lo = max(prof.big_l ** -(depth - 2), EPS_FLOOR)
    hi = prof.lam**-2
    if lo >= hi:
        raise DomainError(f"depth {depth} is too shallow for a box-counting schedule")
    return list(np.geomspace(hi, lo, points))


def box_dimension_regression(
    fam, seq=None, depth: int = 10, eps_schedule: Sequence[float] | None = None,
    *, depth_cap: int = DEFAULT_DEPTH_CAP,
) -> DimensionEstimate:
    """Least-squares slope of ``log N(eps)`` against ``log(1/eps)``.

    The radius is the largest fit residual plus ``1/log(1/eps_min)``.  Without
    ``seq`` the first system is iterated, i.e. the stationary set of ``fam[0]``.
    """
    fam = as_family(fam)
    if seq is None:
        letters = (0,) * depth
    else:
        letters = tuple(int(c) for c in _as_sequence(seq, fam.k).prefix(depth))
    eps = list(eps_schedule) if eps_schedule is not None else default_schedule(fam, depth)
    if len(eps) < 2:
        raise DomainError("need at least two scales")
    floor = contraction_profile(fam).big_l ** -depth
    if min(eps) < floor:
        raise DomainError(f"schedule reaches {min(eps):.3g}, finer than depth {depth} resolves")
    arrays = cantor_arrays(fam, letters, depth_cap=depth_cap)
    counts = [cover_count(arrays, e).count for e in eps]
    x = np.log(1.0 / np.asarray(eps))
    y = np.log(np.asarray(counts, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = np.max(np.abs(y - (slope * x + intercept)))
    radius = float(resid) + 1.0 / math.log(1.0 / min(eps))
    return DimensionEstimate(
        float(np.clip(slope, 0.0, 1.0)), "box_counting", depth, radius, "grid"
    )

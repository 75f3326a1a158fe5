"""Partition functions, pressures and their zeros.

All zeros are located by bisection on [0, 1]: every pressure here is strictly
decreasing with slope at most ``-log(lam)``, so a residual ``P(s')`` converts
into the certified distance ``|s - s'| <= |P(s')| / log(lam)`` to the true zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DepthCapError
from .ifs import (
    CookieCutter,
    SystemFamily,
    as_family,
    contraction_profile,
    word_count_log,
    word_log_lengths,
)

DEFAULT_DEPTH_CAP = 2**22
# single-branch systems never hit the word cap; bound their depth instead
MAX_STATIONARY_DEPTH = 4096
ROOT_WIDTH = 1e-10
MORAN_WIDTH = 1e-12


@dataclass(frozen=True)
class PressureEvaluation:
    s: float
    value: float
    depth: int
    error_bound: float | None = None


@dataclass(frozen=True)
class SimplexPoint:
    weights: tuple

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if not w or min(w) < 0 or abs(sum(w) - 1.0) > 1e-12:
            raise ValueError(f"not a point of the simplex: {w}")
        object.__setattr__(self, "weights", w)

    @property
    def k(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    error_radius: float
    clamped: bool = False
    depth: int | None = None
    route: str = ""


def bisect_decreasing(
    f: Callable[[float], float], lo: float = 0.0, hi: float = 1.0, width: float = ROOT_WIDTH
) -> tuple[float, float, float, bool]:
    """Zero of a strictly decreasing function on ``[lo, hi]``.

    Returns ``(root, residual, bracket_width, clamped)``; when the sign does
    not change the nearer endpoint is returned with ``clamped=True``.
    """
    f_lo = f(lo)
    if f_lo <= 0:
        return lo, f_lo, 0.0, f_lo < 0
    f_hi = f(hi)
    if f_hi >= 0:
        return hi, f_hi, 0.0, f_hi > 0
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid > 0:
            lo, f_lo = mid, f_mid
        elif f_mid < 0:
            hi, f_hi = mid, f_mid
        else:
            return mid, 0.0, 0.0, False
    if abs(f_lo) <= abs(f_hi):
        return lo, f_lo, hi - lo, False
    return hi, f_hi, hi - lo, False


def _logsumexp_scaled(ll: np.ndarray, s: float, ll_max: float, ll_min: float) -> float:
    top = s * (ll_max if s >= 0 else ll_min)
    return top + math.log(float(np.exp(s * ll - top).sum()))


def _check_cap(fam: SystemFamily, letters: Sequence[int], depth_cap: int) -> None:
    if word_count_log(fam, letters) > math.log(depth_cap) + 1e-9:
        raise DepthCapError(
            f"{len(letters)} letters need more than {depth_cap} words for exact enumeration"
        )


def _affine_letter_log_sums(fam: SystemFamily, s: float) -> list[float]:
    return [math.log(sum(abs(a) ** s for a in F.slopes())) for F in fam.systems]


def log_partition_function(
    fam, letters: Sequence[int], s: float, *, depth_cap: int = DEFAULT_DEPTH_CAP,
    method: str = "auto",
) -> float:
    """``log Z`` for the word ``letters``.

    ``method`` is ``"factor"`` (all-affine product formula), ``"enumerate"``
    (sum over every component interval) or ``"auto"``.
    """
    fam = as_family(fam)
    letters = tuple(int(c) for c in letters)
    if not letters:
        raise ValueError("need at least one letter")
    if method == "auto":
        method = "factor" if fam.is_affine else "enumerate"
    if method == "factor":
        per_letter = _affine_letter_log_sums(fam, s)
        counts = np.bincount(letters, minlength=fam.k)
        return float(sum(n * v for n, v in zip(counts, per_letter)))
    if method != "enumerate":
        raise ValueError(f"unknown method {method!r}")
    _check_cap(fam, letters, depth_cap)
    ll = word_log_lengths(fam, letters)
    return _logsumexp_scaled(ll, s, float(ll.max()), float(ll.min()))


def partition_function(fam, letters: Sequence[int], s: float, **kw) -> float:
    return math.exp(log_partition_function(fam, letters, s, **kw))


def pressure(fam, letters: Sequence[int], s: float, **kw) -> PressureEvaluation:
    n = len(letters)
    return PressureEvaluation(s, log_partition_function(fam, letters, s, **kw) / n, n, None)


class _PrefixPressure:
    """``s -> P_{c1...cn}(s)`` with the component lengths enumerated once."""

    def __init__(self, fam: SystemFamily, letters: tuple, depth_cap: int):
        self.n = len(letters)
        if fam.is_affine:
            counts = np.bincount(letters, minlength=fam.k)
            slopes = [np.abs(F.slopes()) for F in fam.systems]
            self._eval = lambda s: float(
                sum(n * math.log(float(np.sum(a**s))) for n, a in zip(counts, slopes) if n)
            ) / self.n
        else:
            _check_cap(fam, letters, depth_cap)
            ll = word_log_lengths(fam, letters)
            hi, lo = float(ll.max()), float(ll.min())
            self._eval = lambda s: _logsumexp_scaled(ll, s, hi, lo) / self.n

    def __call__(self, s: float) -> float:
        return self._eval(s)


def stationary_depth(
    F: CookieCutter, s: float, tol: float, *, depth_cap: int = DEFAULT_DEPTH_CAP,
    allow_best: bool = False,
) -> int:
    """Smallest depth whose distance-to-limit bound ``c_kappa*|s|/n`` is ``<= tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if F.is_affine:
        return 1
    c_kappa = contraction_profile(F).c_kappa
    need = max(1, math.ceil(c_kappa * abs(s) / tol))
    best = MAX_STATIONARY_DEPTH if F.q == 1 else int(math.log(depth_cap) / math.log(F.q) + 1e-9)
    if need <= best:
        return need
    best = max(best, 1)
    best_tol = c_kappa * abs(s) / best
    if allow_best:
        return best
    raise DepthCapError(
        f"{F.label or 'system'}: tolerance {tol:g} needs depth {need}, cap allows {best} "
        f"(best achievable tolerance {best_tol:.3g})",
        best_tolerance=best_tol,
    )


class StationaryPressure:
    """``s -> P_{n,F}(s)`` at a fixed depth, with its distance-to-limit bound."""

    def __init__(self, F: CookieCutter, depth: int, depth_cap: int = DEFAULT_DEPTH_CAP):
        self.system = F
        self.depth = 1 if F.is_affine else depth
        if F.is_affine:
            self.c_kappa = 0.0
            self._eval = _PrefixPressure(SystemFamily((F,)), (0,), depth_cap)
        else:
            self.c_kappa = contraction_profile(F).c_kappa
            self._eval = _PrefixPressure(SystemFamily((F,)), (0,) * depth, depth_cap)

    def __call__(self, s: float) -> float:
        return self._eval(s)

    def error_bound(self, s: float) -> float:
        return self.c_kappa * abs(s) / self.depth

    def evaluate(self, s: float) -> PressureEvaluation:
        return PressureEvaluation(s, self(s), self.depth, self.error_bound(s))


def stationary_pressure(
    F: CookieCutter, s: float, tol: float, *, depth: int | None = None,
    depth_cap: int = DEFAULT_DEPTH_CAP, allow_best: bool = False,
) -> PressureEvaluation:
    """Limit pressure ``P_F(s)`` within ``tol`` (exact for affine systems).

    Non-affine systems are evaluated at the depth where the quasi-additivity
    bound ``c_kappa*|s|/n`` drops below ``tol``.  If the word cap forbids that
    depth, :class:`DepthCapError` is raised unless ``allow_best`` is set, in
    which case the deepest admissible level is used and its (larger) bound is
    reported.
    """
    if depth is None:
        depth = stationary_depth(F, s, tol, depth_cap=depth_cap, allow_best=allow_best)
    return StationaryPressure(F, depth, depth_cap).evaluate(s)


def moran_dimension(ratios: Sequence[float]) -> RootResult:
    """Zero of ``s -> log sum |a_j|^s`` on [0, 1]."""
    ratios = [abs(float(a)) for a in ratios]
    if not ratios:
        raise ValueError("empty ratio list")
    if any(not 0 < a < 1 for a in ratios):
        raise ValueError(f"ratios must lie in (0, 1): {ratios}")
    if sum(ratios) > 1 + 1e-12:
        raise ValueError(f"ratios sum to {sum(ratios):.12g} > 1; images cannot be disjoint")

    def f(s: float) -> float:
        return math.log(math.fsum(a**s for a in ratios))

    root, res, width, clamped = bisect_decreasing(f, 0.0, 1.0, MORAN_WIDTH)
    log_lam = -math.log(max(ratios))
    return RootResult(root, res, max(width, abs(res) / log_lam), clamped, 1, "moran")


def bowen_root(fam, letters: Sequence[int], *, depth_cap: int = DEFAULT_DEPTH_CAP) -> RootResult:
    """Zero of the prefix pressure ``P_{c1...cn}``.

    The radius bounds the distance to the exact zero of this finite-depth
    pressure; it makes no claim about the limit ``n -> infinity``.
    """
    fam = as_family(fam)
    letters = tuple(int(c) for c in letters)
    if not letters:
        raise ValueError("need at least one letter")
    prof = contraction_profile(fam)
    P = _PrefixPressure(fam, letters, depth_cap)
    root, res, width, clamped = bisect_decreasing(P, 0.0, 1.0, ROOT_WIDTH)
    radius = max(width, abs(res) / math.log(prof.lam))
    route = "affine" if fam.is_affine else "exact"
    return RootResult(root, res, radius, clamped, len(letters), route)


def root_map(
    fam, alpha, tol: float = 1e-6, *, depth_cap: int = DEFAULT_DEPTH_CAP,
    allow_best: bool = False,
) -> RootResult:
    """Zero of ``sum_j alpha_j * P_{F_j}(s)`` over the simplex of weights.

    Each non-affine stationary pressure is truncated at the depth meeting
    ``tol/k`` on the whole of ``s in [0, 1]``, so the weighted function is a
    fixed monotone function during the bisection.  The radius adds the
    truncation bound at the root to the residual conversion.
    """
    fam = as_family(fam)
    if not isinstance(alpha, SimplexPoint):
        alpha = SimplexPoint(tuple(alpha))
    if alpha.k != fam.k:
        raise ValueError(f"{alpha.k} weights for {fam.k} systems")
    terms = []
    for w, F in zip(alpha.weights, fam.systems):
        if w == 0:
            continue
        depth = stationary_depth(F, 1.0, tol / fam.k, depth_cap=depth_cap, allow_best=allow_best)
        terms.append((w, StationaryPressure(F, depth, depth_cap)))

    def G(s: float) -> float:
        return sum(w * P(s) for w, P in terms)

    root, res, width, clamped = bisect_decreasing(G, 0.0, 1.0, ROOT_WIDTH)
    log_lam = math.log(contraction_profile(fam).lam)
    truncation = sum(w * P.error_bound(root) for w, P in terms)
    radius = width + (abs(res) + truncation) / log_lam
    depth = max(P.depth for _, P in terms)
    route = "affine" if all(P.c_kappa == 0 for _, P in terms) else "stationary"
    return RootResult(root, res, radius, clamped, depth, route)


def stationary_root(
    F: CookieCutter, tol: float = 1e-6, *, depth: int | None = None,
    depth_cap: int = DEFAULT_DEPTH_CAP, allow_best: bool = False,
) -> RootResult:
    """Bowen root of a single cookie-cutter; radius includes the truncation bound."""
    if F.is_affine:
        return moran_dimension(F.slopes())
    if depth is None:
        depth = stationary_depth(F, 1.0, tol, depth_cap=depth_cap, allow_best=allow_best)
    P = StationaryPressure(F, depth, depth_cap)
    root, res, width, clamped = bisect_decreasing(P, 0.0, 1.0, ROOT_WIDTH)
    log_lam = math.log(contraction_profile(F).lam)
    radius = width + (abs(res) + P.error_bound(root)) / log_lam
    return RootResult(root, res, radius, clamped, depth, "stationary")


def pressure_sup_norm(F: CookieCutter, tol: float = 1e-6, **kw) -> float:
    """``max_{s in [0,1]} |P_F(s)|``, attained at an endpoint by monotonicity."""
    if F.is_affine:
        return max(abs(math.log(F.q)), abs(math.log(sum(abs(a) for a in F.slopes()))))
    p1 = stationary_pressure(F, 1.0, tol, **kw)
    return max(math.log(F.q), abs(p1.value) + p1.error_bound)



def root_map_lipschitz(fam, tol: float = 1e-6, **kw) -> float:
    """``M / log(lam)``: l1-Lipschitz constant of the root map on the simplex."""
    fam = as_family(fam)
    kw.setdefault("allow_best", True)
    big_m = max(pressure_sup_norm(F, tol, **kw) for F in fam.systems)
    return big_m / math.log(contraction_profile(fam).lam)

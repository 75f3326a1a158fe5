"""Dimensions of cookie-cutter-like sets driven by a symbol sequence.

The Hausdorff dimension is the liminf and the upper box dimension the limsup
of the prefix roots ``s_{c1...cn}``.  Both limits are estimated on a finite
list of horizons by the inf and sup over its tail half.

A prefix root is computed along one of three routes, recorded in
``RootResult.route``:

``affine``
    the partition function factors per letter, so only letter counts matter;
``exact``
    every component interval of the prefix is enumerated;
``frequency``
    the prefix is too deep to enumerate, and its pressure is replaced by the
    frequency-weighted sum of stationary pressures.  The replacement costs at
    most ``(2*kappa_n + k) * c_kappa * |s| / n`` in pressure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import DepthCapError
from .ifs import CookieCutter, WordInterval, as_family, contraction_profile, word_intervals
from .sequences import SymbolSequence, explicit_sequence, stats
from .thermo import (
    DEFAULT_DEPTH_CAP,
    RootResult,
    bowen_root,
    log_partition_function,
    moran_dimension,
    root_map,
    stationary_pressure,
    stationary_root,
)

KINDS = ("hausdorff_liminf", "upper_box_limsup", "stationary", "moran", "box_counting")
DEFAULT_BLOCK_HORIZONS = 10


@dataclass(frozen=True)
class DimensionEstimate:
    value: float
    kind: str
    depth: int
    error_radius: float
    route: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown estimate kind {self.kind!r}")
        if self.error_radius < 0:
            raise ValueError("error radius must be non-negative")


@dataclass(frozen=True)
class ApproximationReport:
    horizon: int
    measured: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.measured <= self.bound + 1e-9


def _as_sequence(seq, k: int) -> SymbolSequence:
    if isinstance(seq, SymbolSequence):
        return seq
    return explicit_sequence(seq, k)


def _fits_cap(fam, letters, depth_cap: int) -> bool:
    total = 0.0
    for c in letters:
        total += math.log(fam.systems[c].q)
    return total <= math.log(depth_cap) + 1e-9


def prefix_root(
    fam, seq, n: int, *, tol: float = 1e-6, depth_cap: int = DEFAULT_DEPTH_CAP,
    allow_fallback: bool = False,
) -> RootResult:
    """Zero of the prefix pressure ``P_{c1...cn}`` with a certified radius.

    Raises :class:`DepthCapError` for non-affine prefixes beyond the word cap
    unless ``allow_fallback`` selects the frequency route.
    """
    fam = as_family(fam)
    seq = _as_sequence(seq, fam.k)
    if seq.k > fam.k:
        raise ValueError(f"sequence alphabet {seq.k} exceeds the {fam.k} systems")
    st = stats(seq, n)
    freqs = st.frequencies + (0.0,) * (fam.k - seq.k)
    if fam.is_affine:
        return replace(root_map(fam, freqs), depth=n, route="affine")
    log_words = sum(c * math.log(F.q) for c, F in zip(st.counts, fam.systems))
    if log_words <= math.log(depth_cap) + 1e-9:
        letters = tuple(int(c) for c in seq.prefix(n))
        return bowen_root(fam, letters, depth_cap=depth_cap)
    if not allow_fallback:
        raise DepthCapError(f"prefix of length {n} exceeds the word cap {depth_cap}")
    approx = root_map(fam, freqs, tol, depth_cap=depth_cap, allow_best=True)
    prof = contraction_profile(fam)
    # pressure defect at |s| <= 1, converted by the slope bound
    combine = (2 * st.switch_count + fam.k) * prof.c_kappa / n / math.log(prof.lam)
    return replace(approx, error_radius=approx.error_radius + combine, depth=n, route="frequency")


def default_horizons(seq: SymbolSequence, limit: int = DEFAULT_BLOCK_HORIZONS) -> list[int]:
    """Block ends, where the extremes of the prefix roots are attained."""
    ends = seq.block_ends(limit)
    if len(ends) < 2:
        raise ValueError("need a sequence with at least two blocks for default horizons")
    return ends


def dimension_estimates(
    fam, seq, horizons: Sequence[int] | None = None, **kw
) -> tuple[DimensionEstimate, DimensionEstimate, list[RootResult]]:
    """Liminf and limsup estimates of the prefix roots over ``horizons``.

    Returns ``(hausdorff, upper_box, trace)``.  The tail window is the larger
    half of the horizons; the radius adds the largest root radius in the
    window to the change of the extreme between the window and its own
    second half, a crude measure of how settled the extreme is.
    """
    fam = as_family(fam)
    seq = _as_sequence(seq, fam.k)
    hs = list(horizons) if horizons is not None else default_horizons(seq)
    if not hs or any(b <= a for a, b in zip(hs, hs[1:])):
        raise ValueError("horizons must be a non-empty increasing list")
    trace = [prefix_root(fam, seq, n, **kw) for n in hs]
    tail = trace[len(trace) // 2 :]
    late = tail[len(tail) // 2 :]
    radius = max(r.error_radius for r in tail)
    routes = "+".join(sorted({r.route for r in tail}))
    lo = min(r.root for r in tail)
    hi = max(r.root for r in tail)
    lo_spread = abs(lo - min(r.root for r in late))
    hi_spread = abs(hi - max(r.root for r in late))
    h = DimensionEstimate(lo, "hausdorff_liminf", hs[-1], radius + lo_spread, routes)
    ub = DimensionEstimate(hi, "upper_box_limsup", hs[-1], radius + hi_spread, routes)
    return h, ub, trace


def stationary_dimension(F: CookieCutter, tol: float = 1e-6, **kw) -> DimensionEstimate:
    """``dim J(F)``: Moran root for affine systems, truncated Bowen root otherwise."""
    if F.is_affine:
        r = moran_dimension(F.slopes())
        return DimensionEstimate(r.root, "moran", 1, r.error_radius, r.route)
    r = stationary_root(F, tol, **kw)
    return DimensionEstimate(r.root, "stationary", r.depth, r.error_radius, r.route)


def quasi_additivity_check(
    fam, letters: Sequence[int], m: int, s: float, *, depth_cap: int = DEFAULT_DEPTH_CAP
) -> ApproximationReport:
    """Measured ``|log Z_{1..n} - log Z_{1..m} - log Z_{m+1..n}|`` against ``c_kappa*|s|``."""
    fam = as_family(fam)
    letters = tuple(int(c) for c in letters)
    n = len(letters)
    if not 1 <= m < n:
        raise ValueError(f"split {m} must satisfy 1 <= m < {n}")

    def logz(w):
        return log_partition_function(fam, w, s, depth_cap=depth_cap)

    measured = abs(logz(letters) - logz(letters[:m]) - logz(letters[m:]))
    return ApproximationReport(n, measured, contraction_profile(fam).c_kappa * abs(s))


def combine_error(
    fam, seq, n: int, s: float, *, tol: float = 1e-6, depth_cap: int = DEFAULT_DEPTH_CAP
) -> ApproximationReport:
    """Frequency-weighted approximation of a prefix pressure.

    Measured: ``|P_{c1...cn}(s) - sum_j Freq_{n,j} P_{F_j}(s)|``.  Bound:
    ``(2*kappa_n + k) * c_kappa * |s| / n`` plus the weighted truncation
    bounds of the stationary pressures, which are evaluated at the deepest
    admissible level when ``tol`` is out of reach.
    """
    fam = as_family(fam)
    seq = _as_sequence(seq, fam.k)
    st = stats(seq, n)
    letters = tuple(int(c) for c in seq.prefix(n))
    p_prefix = log_partition_function(fam, letters, s, depth_cap=depth_cap) / n
    approx, trunc = 0.0, 0.0
    for freq, F in zip(st.frequencies, fam.systems):
        if freq == 0:
            continue
        pe = stationary_pressure(F, s, tol, depth_cap=depth_cap, allow_best=True)
        approx += freq * pe.value
        trunc += freq * pe.error_bound
    c_kappa = contraction_profile(fam).c_kappa
    bound = (2 * st.switch_count + fam.k) * c_kappa * abs(s) / n + trunc
    return ApproximationReport(n, abs(p_prefix - approx), bound)


def cantor_arrays(
    fam, letters: Sequence[int], *, depth_cap: int = DEFAULT_DEPTH_CAP
) -> tuple[np.ndarray, np.ndarray]:
    """Sorted left and right endpoints of the components of ``K_{c1...cn}``."""
    fam = as_family(fam)
    letters = tuple(int(c) for c in letters)
    if not _fits_cap(fam, letters, depth_cap):
        raise DepthCapError(f"{len(letters)} letters exceed the word cap {depth_cap}")
    left, right, _ = word_intervals(fam, letters)
    order = np.argsort(left, kind="stable")
    return left[order], right[order]


def cantor_intervals(
    fam, seq, n: int, *, depth_cap: int = DEFAULT_DEPTH_CAP
) -> list[WordInterval]:
    """All components of ``K_{c1...cn}`` sorted by left endpoint."""
    fam = as_family(fam)
    seq = _as_sequence(seq, fam.k)
    letters = tuple(int(c) for c in seq.prefix(n))
    if not _fits_cap(fam, letters, depth_cap):
        raise DepthCapError(f"{n} letters exceed the word cap {depth_cap}")
    left, right, loglen = word_intervals(fam, letters)
    words = list(itertools.product(*(range(fam.systems[c].q) for c in letters)))
    order = np.argsort(left, kind="stable")
    return [
        WordInterval(letters, words[i], float(left[i]), float(right[i]), math.exp(loglen[i]))
        for i in order
    ]

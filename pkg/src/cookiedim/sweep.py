"""Parameter-dependent families, dimension envelopes and kink detection.

Every branch coefficient is a polynomial in the parameter ``a``, stored as
ascending coefficients (``[c0, c1, ...]`` means ``c0 + c1*a + ...``).  A
family may also carry synthetic curves, given directly as polynomials in
``a``, which enter the envelopes like dimension curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import ConfigError, ConstructionError, InvalidMapError, InvalidSystemError
from .ifs import Affine, CookieCutter, Moebius, SystemFamily, moebius_from_constraints
from .nonstationary import DimensionEstimate, stationary_dimension

BRANCH_FIELDS = {
    "affine": ("a", "b"),
    "moebius": ("p", "q", "r"),
    "moebius_abcd": ("a", "b", "c", "d"),
    "moebius_constraints": ("x0", "y0", "d0", "x1", "y1"),
    "reflect_of": (),
}
DEFAULT_THRESHOLD = 0.05
DEFAULT_TOL = 1e-6


def _poly(value) -> tuple:
    if isinstance(value, (int, float)):
        return (float(value),)
    coeffs = tuple(float(c) for c in value)
    if not coeffs:
        raise ConfigError("empty coefficient list")
    return coeffs


@dataclass(frozen=True)
class BranchTemplate:
    """One branch; ``moebius_constraints`` describes the expanding map whose
    inverse is the branch unless ``invert`` is false."""

    kind: str
    coeffs: tuple = ()  # ((field, poly), ...)
    ref: tuple | None = None  # (system, index) for reflect_of
    invert: bool = True

    @classmethod
    def from_table(cls, table: dict) -> "BranchTemplate":
        kind = table.get("type")
        if kind not in BRANCH_FIELDS:
            raise ConfigError(f"unknown branch type {kind!r}; expected one of {list(BRANCH_FIELDS)}")
        if kind == "reflect_of":
            try:
                return cls(kind, (), (int(table["system"]), int(table["index"])))
            except KeyError as exc:
                raise ConfigError(f"reflect_of needs {exc.args[0]!r}") from None
        missing = [f for f in BRANCH_FIELDS[kind] if f not in table]
        if missing:
            raise ConfigError(f"{kind} branch is missing {missing}")
        coeffs = tuple((f, _poly(table[f])) for f in BRANCH_FIELDS[kind])
        return cls(kind, coeffs, None, bool(table.get("invert", True)))

    def build(self, a: float, built: Sequence[CookieCutter]):
        v = {name: float(P.polyval(a, c)) for name, c in self.coeffs}
        if self.kind == "affine":
            return Affine(v["a"], v["b"])
        if self.kind == "moebius":
            return Moebius.from_pqr(v["p"], v["q"], v["r"])
        if self.kind == "moebius_abcd":
            return Moebius(v["a"], v["b"], v["c"], v["d"])
        if self.kind == "moebius_constraints":
            g = moebius_from_constraints(v["x0"], v["y0"], v["d0"], v["x1"], v["y1"])
            return g.inverse() if self.invert else g
        j, i = self.ref
        if not 0 <= j < len(built):
            raise ConfigError(f"reflect_of refers to system {j}, only {len(built)} defined before it")
        if not 0 <= i < built[j].q:
            raise ConfigError(f"reflect_of index {i} outside system {j}")
        return built[j].branches[i].reflect()


@dataclass(frozen=True)
class SystemTemplate:
    branches: tuple
    label: str = ""


@dataclass(frozen=True)
class ParametricFamily:
    systems: tuple
    a_lo: float
    a_hi: float
    curves: tuple = ()  # ((label, poly), ...)

    def __post_init__(self):
        if not self.a_lo <= self.a_hi:
            raise ConfigError(f"empty parameter range [{self.a_lo}, {self.a_hi}]")
        if not self.systems and not self.curves:
            raise ConfigError("a family needs at least one system or curve")

    @property
    def labels(self) -> list[str]:
        out = [s.label or f"F{j}" for j, s in enumerate(self.systems)]
        return out + [lab for lab, _ in self.curves]


def build_systems(templates: Sequence[SystemTemplate], a: float) -> SystemFamily:
    """Instantiate templates at ``a`` without range checks."""
    built: list[CookieCutter] = []
    for j, tmpl in enumerate(templates):
        branches = tuple(b.build(a, built) for b in tmpl.branches)
        built.append(CookieCutter(branches, tmpl.label or f"F{j}"))
    return SystemFamily(tuple(built))


def instantiate(family: ParametricFamily, a: float) -> SystemFamily:
    """The systems of ``family`` at parameter ``a``."""
    if not family.a_lo - 1e-12 <= a <= family.a_hi + 1e-12:
        raise ConfigError(f"a = {a} outside [{family.a_lo}, {family.a_hi}]")
    try:
        return build_systems(family.systems, a)
    except (InvalidMapError, InvalidSystemError, ConstructionError) as exc:
        raise InvalidSystemError(f"at a = {a:.12g}: {exc}") from exc


@dataclass(frozen=True)
class Kink:
    a: float
    left_slope: float
    right_slope: float
    envelope: str = "min"

    @property
    def jump(self) -> float:
        return self.right_slope - self.left_slope


def _crossing(grid, curves, i0: int, i1: int) -> float | None:
    """Zero of the difference of the two curves that swap order across ``[i0, i1]``."""
    if curves is None or len(curves) < 2:
        return None
    best = None
    for p in range(len(curves)):
        for q in range(p + 1, len(curves)):
            d = np.asarray(curves[p]) - np.asarray(curves[q])
            for i in range(i0, i1):
                if d[i] == 0:
                    return float(grid[i])
                if d[i] * d[i + 1] < 0:
                    t = d[i] / (d[i] - d[i + 1])
                    x = float(grid[i] + t * (grid[i + 1] - grid[i]))
                    mid = 0.5 * (grid[i0] + grid[i1])
                    if best is None or abs(x - mid) < abs(best - mid):
                        best = x
    return best


def kink_detect(
    grid, envelope, threshold: float = DEFAULT_THRESHOLD, curves=None, tag: str = "min"
) -> list[Kink]:
    """Points where the one-sided secant slopes of ``envelope`` jump by ``>= threshold``.

    Adjacent flagged points are merged into one kink.  Its location is the
    crossing of two of ``curves`` inside the cluster if they are given,
    otherwise the intersection of the outer secant lines, falling back to
    the grid point with the largest jump.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    x = np.asarray(grid, dtype=float)
    e = np.asarray(envelope, dtype=float)
    if x.size < 3:
        return []
    h = np.diff(x)
    slope = np.diff(e) / h
    jump = slope[1:] - slope[:-1]  # at interior points 1..n-2
    flagged = np.flatnonzero(np.abs(jump) >= threshold) + 1
    flagged = [i for i in flagged if np.isfinite(jump[i - 1])]
    clusters: list[list[int]] = []
    for i in flagged:
        if clusters and i == clusters[-1][-1] + 1:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    kinks = []
    for cl in clusters:
        i0, i1 = cl[0], cl[-1]
        left, right = slope[i0 - 1], slope[i1]
        loc = _crossing(x, curves, i0 - 1, i1 + 1)
        if loc is None and right != left:
            # intersect the secant lines entering and leaving the cluster
            t = (e[i1] - e[i0] - right * (x[i1] - x[i0])) / (left - right)
            cand = x[i0] + t
            if x[i0 - 1] <= cand <= x[i1 + 1]:
                loc = float(cand)
        if loc is None:
            loc = float(x[cl[int(np.argmax(np.abs(jump[np.array(cl) - 1])))]])
        kinks.append(Kink(loc, float(left), float(right), tag))
    return kinks


@dataclass
class SweepResult:
    grid: np.ndarray
    labels: list
    dims: list  # per curve, per grid point: DimensionEstimate or None
    min_envelope: np.ndarray
    max_envelope: np.ndarray
    kinks: list  # on the min envelope
    max_kinks: list = field(default_factory=list)
    skipped: list = field(default_factory=list)  # (a, reason)

    @property
    def values(self) -> np.ndarray:
        """Curves as a ``(k, grid)`` array, NaN where a point was skipped."""
        return np.array([[d.value if d else math.nan for d in row] for row in self.dims])

    @property
    def radii(self) -> np.ndarray:
        return np.array([[d.error_radius if d else math.nan for d in row] for row in self.dims])


def sweep(
    family: ParametricFamily, grid_size: int, *, threshold: float = DEFAULT_THRESHOLD,
    tol: float = DEFAULT_TOL, **kw,
) -> SweepResult:
    """Stationary dimensions of every system on a uniform grid, with envelopes and kinks.

    Non-affine systems are truncated as dictated by their distortion constant;
    when the word cap forbids the requested ``tol`` the deepest admissible
    level is used and the larger radius is reported per point.
    """
    if grid_size < 3:
        raise ValueError("grid_size must be >= 3")
    kw.setdefault("allow_best", True)
    grid = np.linspace(family.a_lo, family.a_hi, grid_size)
    k = len(family.systems)
    dims: list[list] = [[] for _ in family.labels]
    skipped = []
    for a in grid:
        try:
            systems = instantiate(family, float(a)).systems if k else ()
        except InvalidSystemError as exc:
            skipped.append((float(a), str(exc)))
            for row in dims[:k]:
                row.append(None)
        else:
            for j, F in enumerate(systems):
                dims[j].append(stationary_dimension(F, tol, **kw))
        for j, (_, poly) in enumerate(family.curves):
            val = float(P.polyval(a, poly))
            dims[k + j].append(DimensionEstimate(val, "stationary", 0, 0.0, "synthetic"))
    vals = np.array([[d.value if d else math.nan for d in row] for row in dims])
    with np.errstate(all="ignore"):
        lo = np.min(vals, axis=0)
        hi = np.max(vals, axis=0)
    kinks = kink_detect(grid, lo, threshold, vals, "min")
    max_kinks = kink_detect(grid, hi, threshold, vals, "max")
    return SweepResult(grid, family.labels, dims, lo, hi, kinks, max_kinks, skipped)

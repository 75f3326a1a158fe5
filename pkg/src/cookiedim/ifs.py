"""Contracting branches, cookie-cutter systems and their distortion profile.

Branches are inverse branches of cookie-cutter maps: each one sends the unit
interval into itself with derivative of modulus strictly below one.  Three
variants are supported:

* :class:`Affine` ``x -> a*x + b``
* :class:`Moebius` ``x -> (a*x + b) / (c*x + d)``; the three-coefficient form
  ``x -> p*x / (q*x + r)`` is available through :meth:`Moebius.from_pqr`
* :class:`Composite` a finite composition, applied right to left

Every map evaluates on scalars and on numpy arrays.  Interval lengths are
never obtained by subtracting endpoints; they are propagated as products of
secant slopes, which keeps relative precision for intervals far below the
spacing of doubles near 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    ConstructionError,
    DomainError,
    InvalidMapError,
    InvalidSystemError,
    UnsupportedVariantError,
)

ENDPOINT_TOL = 1e-12
COMPOSITE_SAMPLES = 1024
COMPOSITE_INFLATION = 1.1


def _full(x, value):
    if np.ndim(x) == 0:
        return float(value)
    return np.full(np.shape(x), float(value))


@dataclass(frozen=True)
class Affine:
    """Affine branch ``x -> a*x + b``."""

    a: float
    b: float

    def __call__(self, x):
        return self.a * x + self.b

    def deriv(self, x):
        return _full(x, self.a)

    def secant(self, x, y):
        return _full(x, self.a)

    def dlogderiv(self, x):
        return _full(x, 0.0)

    @property
    def reverses(self) -> bool:
        return self.a < 0

    def affine_coeffs(self) -> tuple[float, float]:
        return (self.a, self.b)

    def deriv_bounds(self) -> tuple[float, float]:
        return (abs(self.a), abs(self.a))

    def log_deriv_lipschitz(self) -> float:
        return 0.0

    def distortion(self, left: float, right: float) -> float:
        return 0.0

    def inverse(self) -> "Affine":
        if self.a == 0:
            raise ConstructionError("constant affine map has no inverse")
        return Affine(1.0 / self.a, -self.b / self.a)

    def reflect(self) -> "Affine":
        # 1 - (a(1-x) + b) = a x + (1 - a - b)
        return Affine(self.a, 1.0 - self.a - self.b)

    def validate(self) -> None:
        if not 0 < abs(self.a) < 1:
            raise InvalidMapError(f"affine slope {self.a} is not a strict contraction")
        _check_unit_image(self)


@dataclass(frozen=True)
class Moebius:
    """Real Möbius branch ``x -> (a*x + b) / (c*x + d)``."""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_pqr(cls, p: float, q: float, r: float) -> "Moebius":
        """The map ``x -> p*x / (q*x + r)``, which fixes 0."""
        return cls(float(p), 0.0, float(q), float(r))

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def pole(self) -> float | None:
        return None if self.c == 0 else -self.d / self.c

    def __call__(self, x):
        return (self.a * x + self.b) / (self.c * x + self.d)

    def deriv(self, x):
        den = self.c * x + self.d
        return self.det / (den * den)

    def secant(self, x, y):
        return self.det / ((self.c * x + self.d) * (self.c * y + self.d))

    def dlogderiv(self, x):
        return -2.0 * self.c / (self.c * x + self.d)

    @property
    def reverses(self) -> bool:
        return self.det < 0

    def affine_coeffs(self) -> tuple[float, float] | None:
        if self.c != 0:
            return None
        return (self.a / self.d, self.b / self.d)

    def _den_range(self) -> tuple[float, float]:
        lo, hi = sorted((abs(self.d), abs(self.c + self.d)))
        return lo, hi

    def deriv_bounds(self) -> tuple[float, float]:
        # |c x + d| is monotone on [0, 1] when the pole is outside it
        lo, hi = self._den_range()
        adet = abs(self.det)
        return (adet / (hi * hi), adet / (lo * lo))

    def log_deriv_lipschitz(self) -> float:
        lo, _ = self._den_range()
        return 2.0 * abs(self.c) / lo

    def distortion(self, left: float, right: float) -> float:
        return 2.0 * abs(
            math.log(abs(self.c * right + self.d)) - math.log(abs(self.c * left + self.d))
        )

    def inverse(self) -> "Moebius":
        if self.det == 0:
            raise ConstructionError("degenerate Möbius map has no inverse")
        return Moebius(self.d, -self.b, -self.c, self.a)

    def reflect(self) -> "Moebius":
        # R M R with R(x) = 1 - x, as 2x2 matrices
        a, b, c, d = self.a, self.b, self.c, self.d
        return Moebius(a - c, c + d - a - b, -c, c + d)

    def validate(self) -> None:
        if self.det == 0:
            raise InvalidMapError("degenerate Möbius map (zero determinant)")
        if not self.d * (self.c + self.d) > 0:
            raise InvalidMapError(f"Möbius pole {self.pole} lies in [0, 1]")
        inf_d, sup_d = self.deriv_bounds()
        if not (0 < inf_d and sup_d < 1):
            raise InvalidMapError(
                f"Möbius map is not a strict contraction (sup |Df| = {sup_d:.6g})"
            )
        _check_unit_image(self)


@dataclass(frozen=True)
class Composite:
    """Composition ``maps[0] o maps[1] o ... o maps[-1]`` (rightmost applied first)."""

    maps: tuple

    def __post_init__(self):
        flat = []
        for m in self.maps:
            flat.extend(m.maps if isinstance(m, Composite) else (m,))
        if not flat:
            raise ConstructionError("empty composition")
        object.__setattr__(self, "maps", tuple(flat))

    def __call__(self, x):
        for m in reversed(self.maps):
            x = m(x)
        return x

    def deriv(self, x):
        out = _full(x, 1.0)
        for m in reversed(self.maps):
            out = out * m.deriv(x)
            x = m(x)
        return out

    def secant(self, x, y):
        out = _full(x, 1.0)
        for m in reversed(self.maps):
            out = out * m.secant(x, y)
            x, y = m(x), m(y)
        return out

    def dlogderiv(self, x):
        total = _full(x, 0.0)
        inner = _full(x, 1.0)
        for m in reversed(self.maps):
            total = total + m.dlogderiv(x) * inner
            inner = inner * m.deriv(x)
            x = m(x)
        return total

    @property
    def reverses(self) -> bool:
        return sum(m.reverses for m in self.maps) % 2 == 1

    def affine_coeffs(self) -> tuple[float, float] | None:
        slope, offset = 1.0, 0.0
        for m in reversed(self.maps):
            co = m.affine_coeffs()
            if co is None:
                return None
            slope, offset = co[0] * slope, co[0] * offset + co[1]
        return (slope, offset)

    def _grid(self, left: float = 0.0, right: float = 1.0) -> np.ndarray:
        return np.linspace(left, right, COMPOSITE_SAMPLES)

    def deriv_bounds(self) -> tuple[float, float]:
        dv = np.abs(self.deriv(self._grid()))
        chain_lo = math.prod(m.deriv_bounds()[0] for m in self.maps)
        chain_hi = math.prod(m.deriv_bounds()[1] for m in self.maps)
        lo = max(float(dv.min()) / COMPOSITE_INFLATION, chain_lo)
        hi = min(float(dv.max()) * COMPOSITE_INFLATION, chain_hi)
        return (lo, hi)

    def log_deriv_lipschitz(self) -> float:
        sampled = float(np.abs(self.dlogderiv(self._grid())).max()) * COMPOSITE_INFLATION
        chain, inner_sup = 0.0, 1.0
        for m in reversed(self.maps):
            chain += m.log_deriv_lipschitz() * inner_sup
            inner_sup *= m.deriv_bounds()[1]
        return min(sampled, chain)

    def distortion(self, left: float, right: float) -> float:
        logs = np.log(np.abs(self.deriv(self._grid(left, right))))
        return float(logs.max() - logs.min())

    def inverse(self):
        raise UnsupportedVariantError("composite branches have no closed-form inverse")

    def reflect(self) -> "Composite":
        return Composite(tuple(m.reflect() for m in self.maps))

    def validate(self) -> None:
        for m in self.maps:
            m.validate()


ContractingMap = Union[Affine, Moebius, Composite]


def compose(*maps: ContractingMap) -> Composite:
    """Composite applying the last argument first."""
    return Composite(tuple(maps))


def _check_unit_image(m) -> None:
    for x in (0.0, 1.0):
        y = m(x)
        if not (-ENDPOINT_TOL <= y <= 1 + ENDPOINT_TOL):
            raise InvalidMapError(f"branch sends {x} to {y}, outside [0, 1]")


def _check_unit(x) -> None:
    arr = np.asarray(x, dtype=float)
    if arr.size and (np.any(~np.isfinite(arr)) or arr.min() < 0 or arr.max() > 1):
        raise DomainError(f"point(s) outside [0, 1]: {x!r}")


def branch_image(m: ContractingMap) -> tuple[float, float]:
    lo, hi = sorted((float(m(0.0)), float(m(1.0))))
    return (lo, hi)


@dataclass(frozen=True)
class CookieCutter:
    """Ordered IFS branches with pairwise disjoint images, plus a label."""

    branches: tuple
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        if not self.branches:
            raise InvalidSystemError("a cookie-cutter needs at least one branch")
        for i, m in enumerate(self.branches):
            try:
                m.validate()
            except InvalidMapError as exc:
                raise InvalidSystemError(f"{self.label or 'system'} branch {i}: {exc}") from exc
        images = sorted(branch_image(m) for m in self.branches)
        for (_, r0), (l1, _) in zip(images, images[1:]):
            if not r0 < l1:
                raise InvalidSystemError(
                    f"{self.label or 'system'}: branch images overlap or touch at {r0:.12g}"
                )

    @property
    def q(self) -> int:
        return len(self.branches)

    @property
    def is_affine(self) -> bool:
        return all(m.affine_coeffs() is not None for m in self.branches)

    def slopes(self) -> list[float]:
        """Affine slopes of every branch; raises for non-affine systems."""
        out = []
        for m in self.branches:
            co = m.affine_coeffs()
            if co is None:
                raise UnsupportedVariantError(f"{self.label or 'system'} is not affine")
            out.append(co[0])
        return out


@dataclass(frozen=True)
class SystemFamily:
    """The finite set of cookie-cutters a driving sequence chooses from."""

    systems: tuple

    def __post_init__(self):
        systems = tuple(self.systems)
        if isinstance(self.systems, CookieCutter):
            systems = (self.systems,)
        if not systems:
            raise InvalidSystemError("a system family needs k >= 1 systems")
        object.__setattr__(self, "systems", systems)

    @property
    def k(self) -> int:
        return len(self.systems)

    @property
    def branch_counts(self) -> tuple[int, ...]:
        return tuple(F.q for F in self.systems)

    @property
    def is_affine(self) -> bool:
        return all(F.is_affine for F in self.systems)

    def __getitem__(self, j: int) -> CookieCutter:
        return self.systems[j]

    def __len__(self) -> int:
        return len(self.systems)


def as_family(obj) -> SystemFamily:
    if isinstance(obj, SystemFamily):
        return obj
    if isinstance(obj, CookieCutter):
        return SystemFamily((obj,))
    return SystemFamily(tuple(obj))


@dataclass(frozen=True)
class ContractionProfile:
    """Uniform derivative and distortion constants of a family.

    Every branch derivative satisfies ``1/big_l <= |Df| <= 1/lam`` on [0, 1];
    ``c_f`` bounds the Lipschitz constant of ``log|Df|`` and ``c_kappa`` bounds
    the distortion of arbitrary compositions.
    """

    lam: float
    big_l: float
    tau: float
    c_f: float
    c_kappa: float


@lru_cache(maxsize=128)
def _profile(fam: SystemFamily) -> ContractionProfile:
    sup_d, inf_d, c_f = 0.0, math.inf, 0.0
    for F in fam.systems:
        for m in F.branches:
            lo, hi = m.deriv_bounds()
            sup_d, inf_d = max(sup_d, hi), min(inf_d, lo)
            c_f = max(c_f, m.log_deriv_lipschitz())
    if not sup_d < 1:
        raise InvalidSystemError(f"non-contraction detected: sup |Df| = {sup_d:.6g}")
    lam, big_l = 1.0 / sup_d, 1.0 / inf_d
    return ContractionProfile(
        lam=lam, big_l=big_l, tau=1.0, c_f=c_f, c_kappa=c_f / (1.0 - 1.0 / lam)
    )


def contraction_profile(fam) -> ContractionProfile:
    return _profile(as_family(fam))


@dataclass(frozen=True)
class WordInterval:
    """Component ``f_{c1,w1} o ... o f_{cn,wn}([0, 1])`` of the depth-n cover."""

    letters: tuple
    word: tuple
    left: float
    right: float
    length: float

    @property
    def depth(self) -> int:
        return len(self.letters)


def eval_map(m: ContractingMap, x):
    _check_unit(x)
    return m(x)


def eval_derivative(m: ContractingMap, x):
    _check_unit(x)
    return m.deriv(x)


def distortion(m: ContractingMap, left: float, right: float) -> float:
    """Oscillation of ``log|Df|`` over ``[left, right]``."""
    if not 0 <= left <= right <= 1:
        raise DomainError(f"[{left}, {right}] is not a subinterval of [0, 1]")
    return m.distortion(left, right)


def invert_on_image(m: ContractingMap):
    if isinstance(m, Composite):
        raise UnsupportedVariantError("composite branches have no closed-form inverse")
    return m.inverse()


def reflect(m: ContractingMap):
    """Conjugate by ``x -> 1 - x``; stays in the same variant class."""
    return m.reflect()


def moebius_from_constraints(x0: float, y0: float, d0: float, x1: float, y1: float) -> Moebius:
    """The Möbius map g with g(x0) = y0, g'(x0) = d0 and g(x1) = y1.

    Writes ``g(x) = y0 + d0*h / (1 + k*h)`` with ``h = x - x0`` and solves the
    last constraint for ``k``.
    """
    h = x1 - x0
    dy = y1 - y0
    if h == 0 or dy == 0 or d0 == 0:
        raise ConstructionError("degenerate constraints: need x0 != x1, y0 != y1, d0 != 0")
    k = (d0 * h / dy - 1.0) / h
    a = y0 * k + d0
    m = Moebius(a, y0 - x0 * a, k, 1.0 - k * x0)
    pole = m.pole
    if pole is not None and min(x0, x1) <= pole <= max(x0, x1):
        raise ConstructionError(f"pole {pole:.6g} falls between the constraint points")
    return m


def _branch(fam: SystemFamily, letter: int, index: int) -> ContractingMap:
    if not 0 <= letter < fam.k:
        raise IndexError(f"letter {letter} outside alphabet 0..{fam.k - 1}")
    F = fam.systems[letter]
    if not 0 <= index < F.q:
        raise IndexError(f"branch {index} outside 0..{F.q - 1} for letter {letter}")
    return F.branches[index]


def compose_word(fam, letters: Sequence[int], word: Sequence[int]) -> WordInterval:
    fam = as_family(fam)
    letters, word = tuple(int(c) for c in letters), tuple(int(w) for w in word)
    if len(letters) != len(word):
        raise IndexError("letters and word must have the same length")
    left, right, length = 0.0, 1.0, 1.0
    for c, w in zip(reversed(letters), reversed(word)):
        f = _branch(fam, c, w)
        length *= abs(float(f.secant(left, right)))
        left, right = sorted((float(f(left)), float(f(right))))
    return WordInterval(letters, word, left, right, length)


def word_intervals(fam, letters: Sequence[int]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Left endpoints, right endpoints and log-lengths of all depth-n components.

    Arrays are in lexicographic order of the word ``(w1, ..., wn)``.
    """
    fam = as_family(fam)
    left = np.zeros(1)
    right = np.ones(1)
    loglen = np.zeros(1)
    for c in reversed(tuple(letters)):
        F = fam.systems[c]
        ls, rs, lls = [], [], []
        for f in F.branches:
            fl, fr = f(left), f(right)
            lls.append(loglen + np.log(np.abs(f.secant(left, right))))
            if f.reverses:
                fl, fr = fr, fl
            ls.append(fl)
            rs.append(fr)
        left, right, loglen = np.concatenate(ls), np.concatenate(rs), np.concatenate(lls)
    return left, right, loglen


@lru_cache(maxsize=6)
def _cached_log_lengths(fam: SystemFamily, letters: tuple) -> np.ndarray:
    ll = word_intervals(fam, letters)[2]
    ll.setflags(write=False)
    return ll


def word_log_lengths(fam, letters: Iterable[int]) -> np.ndarray:
    """Log-lengths of all depth-n components (cached, read-only)."""
    return _cached_log_lengths(as_family(fam), tuple(int(c) for c in letters))


def word_count_log(fam, letters: Iterable[int]) -> float:
    fam = as_family(fam)
    return sum(math.log(fam.systems[c].q) for c in letters)

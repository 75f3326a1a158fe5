"""Ready-made systems and sequences used by the examples and the CLI."""

from __future__ import annotations

from typing import Sequence

from .errors import InvalidSystemError
from .ifs import Affine, CookieCutter, Moebius, SystemFamily, moebius_from_constraints
from .sequences import SymbolSequence, composed_system, growth_sequence

EX61_EPS = 1e-3


def affine_system(slopes: Sequence[float], label: str = "") -> CookieCutter:
    """Affine branches laid out left to right with equal gaps.

    Negative slopes give orientation-reversing branches on the same slots.
    """
    slopes = [float(a) for a in slopes]
    total = sum(abs(a) for a in slopes)
    if len(slopes) > 1 and total >= 1:
        raise InvalidSystemError(f"slopes with total length {total:.6g} cannot be disjoint")
    gap = (1.0 - total) / (len(slopes) - 1) if len(slopes) > 1 else 0.0
    branches, pos = [], 0.0
    for a in slopes:
        b = pos if a > 0 else pos - a
        branches.append(Affine(a, b))
        pos += abs(a) + gap
    return CookieCutter(tuple(branches), label)


def middle_thirds() -> CookieCutter:
    return CookieCutter((Affine(1 / 3, 0.0), Affine(1 / 3, 2 / 3)), "middle-thirds")


def quarter() -> CookieCutter:
    return CookieCutter((Affine(0.25, 0.0), Affine(0.25, 0.75)), "quarter")


def ex61_branch(eps: float = EX61_EPS) -> Moebius:
    """Left branch of F0: inverse of g with g(0)=0, g'(0)=1+eps, g(1/20)=1."""
    return moebius_from_constraints(0.0, 0.0, 1.0 + eps, 1 / 20, 1.0).inverse()


def ex61_f0(eps: float = EX61_EPS) -> CookieCutter:
    return CookieCutter((ex61_branch(eps), Affine(1 / 20, 19 / 20)), "F0")


def ex61_family(eps: float = EX61_EPS) -> SystemFamily:
    """``{F0, F1}`` with ``F1(x) = 1 - F0(1 - x)``."""
    F0 = ex61_f0(eps)
    F1 = CookieCutter(tuple(m.reflect() for m in F0.branches), "F1")
    return SystemFamily((F0, F1))


def ex61_pair(eps: float = EX61_EPS) -> CookieCutter:
    """The four-branch system of the composition ``F0 F1``."""
    return composed_system(ex61_family(eps), (0, 1))


def ex62_sequence(
    gamma: float = 2.0, growth: str = "supergeometric", j_max: int | None = None
) -> SymbolSequence:
    """``(00)^{l_1} (11)^{l_2} (01)^{l_3} ...`` over the letters of ``ex61_family``."""
    return growth_sequence(["00", "11", "01"], gamma, 2, growth, j_max)

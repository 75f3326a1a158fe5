"""Built-in verification scenarios with measured-vs-bound reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .catalog import EX61_EPS, ex61_family, ex61_pair, ex62_sequence, middle_thirds, quarter
from .ifs import SystemFamily, contraction_profile
from .nonstationary import (
    combine_error,
    dimension_estimates,
    quasi_additivity_check,
    stationary_dimension,
)
from .sequences import explicit_sequence, group_letters, growth_sequence
from .thermo import DEFAULT_DEPTH_CAP, stationary_root

SEPARATOR = 1 / 2.01
PAIR_BOUND = math.log(4) / math.log(20)
THM_TOL = 0.02
SEED = 20240611


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    relation: str
    bound: float
    passed: bool
    note: str = ""

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        text = f"{verdict}  {self.name}: {self.measured:.10g} {self.relation} {self.bound:.10g}"
        return text + (f"  ({self.note})" if self.note else "")


def at_most(name, measured, bound, note="") -> Check:
    return Check(name, measured, "<=", bound, bool(measured <= bound), note)


def below(name, measured, bound, note="") -> Check:
    return Check(name, measured, "<", bound, bool(measured < bound), note)


def above(name, measured, bound, note="") -> Check:
    return Check(name, measured, ">", bound, bool(measured > bound), note)


@dataclass
class Report:
    scenario: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def lines(self) -> list[str]:
        head = f"[{self.scenario}] {'PASS' if self.passed else 'FAIL'}"
        return [head] + ["  " + c.line() for c in self.checks]


def ex61(eps: float = EX61_EPS, depth_cap: int = DEFAULT_DEPTH_CAP, **_) -> Report:
    """``dim J(F0F1) < 1/2.01 < dim J(F0)`` at a fixed small ``eps``."""
    rep = Report("ex61")
    pair = ex61_pair(eps)
    r8 = stationary_root(pair, depth=8, depth_cap=depth_cap)
    r10 = stationary_root(pair, depth=10, depth_cap=depth_cap)
    rep.checks.append(at_most(
        "|dim J(F0F1) depth 8 - depth 10|", abs(r8.root - r10.root), r8.error_radius + r10.error_radius,
        "bound = sum of radii",
    ))
    for r in (r8, r10):
        note = f"radius {r.error_radius:.3g}"
        rep.checks.append(below(f"dim J(F0F1) depth {r.depth}", r.root, SEPARATOR, note))
        rep.checks.append(below(f"dim J(F0F1) depth {r.depth}", r.root, PAIR_BOUND, note))
    F0 = ex61_family(eps).systems[0]
    d0 = stationary_dimension(F0, allow_best=True, depth_cap=depth_cap)
    rep.checks.append(above(
        "dim J(F0)", d0.value, SEPARATOR, f"depth {d0.depth}, radius {d0.error_radius:.3g}"
    ))
    return rep


def ex62(eps: float = EX61_EPS, depth_cap: int = DEFAULT_DEPTH_CAP, blocks: int = 7, **_) -> Report:
    """Grouped-pair liminf of the (00)/(11)/(01) sequence equals ``dim J(F0F1)``."""
    rep = Report("ex62")
    fam = ex61_family(eps)
    gseq, gfam = group_letters(ex62_sequence(), 2, fam)
    h, _, _ = dimension_estimates(
        gfam, gseq, gseq.block_ends(blocks), depth_cap=depth_cap, allow_fallback=True
    )
    pair = stationary_root(ex61_pair(eps), depth=10, depth_cap=depth_cap)
    d0 = stationary_dimension(fam.systems[0], allow_best=True, depth_cap=depth_cap)
    rep.checks.append(at_most(
        "|hausdorff - dim J(F0F1)|", abs(h.value - pair.root), THM_TOL,
        f"hausdorff {h.value:.6f} via {h.route}, dim J(F0F1) {pair.root:.6f}",
    ))
    rep.checks.append(below("hausdorff", h.value, d0.value - 0.01, f"dim J(F0) {d0.value:.6f} minus 0.01"))
    return rep


def _thm_main(name: str, seq, horizons) -> Report:
    rep = Report(name)
    fam = SystemFamily((middle_thirds(), quarter()))
    h, ub, _ = dimension_estimates(fam, seq, horizons)
    lo, hi = 0.5, math.log(2) / math.log(3)
    rep.checks.append(at_most("|hausdorff - min dim|", abs(h.value - lo), THM_TOL, f"hausdorff {h.value:.6f}"))
    rep.checks.append(at_most("|upper_box - max dim|", abs(ub.value - hi), THM_TOL, f"upper_box {ub.value:.6f}"))
    return rep


def thm_main_affine(**_) -> Report:
    """Geometric blocks ``l_j = 4**j`` up to ``j = 10`` (about 1.4e6 letters)."""
    seq = growth_sequence([0, 1], 4, 2, "geometric", j_max=10)
    return _thm_main("thm-main-affine", seq, seq.block_ends())


def thm_main_supergeometric(**_) -> Report:
    """Blocks ``l_j = 2**(j*j)``, whose ratios tend to infinity."""
    seq = growth_sequence([0, 1], 2, 2, "supergeometric", j_max=6)
    return _thm_main("thm-main-supergeometric", seq, seq.block_ends())


def lemma_quasi(
    eps: float = EX61_EPS, cases: int = 20, max_depth: int = 12, seed: int = SEED, **_
) -> Report:
    """Quasi-additivity defect against ``c_kappa*|s|`` on random splits."""
    rep = Report("lemma-quasi")
    fam = ex61_family(eps)
    rng = np.random.default_rng(seed)
    for _ in range(cases):
        n = int(rng.integers(2, max_depth + 1))
        letters = tuple(int(c) for c in rng.integers(0, 2, n))
        m = int(rng.integers(1, n))
        for s in (0.3, 0.5, 0.7):
            r = quasi_additivity_check(fam, letters, m, s)
            word = "".join(map(str, letters))
            rep.checks.append(at_most(f"defect {word}|{m} s={s}", r.measured, r.bound))
    return rep


PROP_PREFIXES = {
    0: [0] * 12,
    1: [0] * 6 + [1] * 6,
    2: [0] * 4 + [1] * 4 + [0] * 4,
    3: ([0] * 3 + [1] * 3) * 2,
}


def prop_combine(eps: float = EX61_EPS, depth_cap: int = DEFAULT_DEPTH_CAP, **_) -> Report:
    """Frequency-weighted pressure approximation against its switching bound."""
    rep = Report("prop-combine")
    fam = ex61_family(eps)
    for kappa, letters in PROP_PREFIXES.items():
        seq = explicit_sequence(letters, 2)
        for s in (0.3, 0.46, 0.7):
            r = combine_error(fam, seq, len(letters), s, depth_cap=depth_cap)
            rep.checks.append(at_most(f"defect kappa={kappa} s={s}", r.measured, r.bound))
    return rep


SCENARIOS = {
    "ex61": ex61,
    "ex62": ex62,
    "thm-main-affine": thm_main_affine,
    "thm-main-supergeometric": thm_main_supergeometric,
    "lemma-quasi": lemma_quasi,
    "prop-combine": prop_combine,
}


def run(scenario: str, **kw) -> Report:
    if scenario not in SCENARIOS:
        raise KeyError(f"unknown scenario {scenario!r}; choose from {sorted(SCENARIOS)}")
    return SCENARIOS[scenario](**kw)


def profile_summary(eps: float = EX61_EPS) -> str:
    p = contraction_profile(ex61_family(eps))
    return f"lam={p.lam:.6g} L={p.big_l:.6g} c_kappa={p.c_kappa:.6g}"

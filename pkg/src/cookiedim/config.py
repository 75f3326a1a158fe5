"""TOML configuration for systems, sequences and sweeps.

System file (top-level keys must precede the tables)::

    compose = ["01"]          # optional: also report the composed systems

    [[systems]]
    label = "F0"
    branches = [
        {type = "moebius_constraints", x0 = 0, y0 = 0, d0 = 1.001, x1 = 0.05, y1 = 1},
        {type = "affine", a = 0.05, b = 0.95},
    ]

    [[check]]                 # optional: dim(lower) < separator < dim(upper)
    lower = "F0F1"
    upper = "F0"
    separator = 0.49751243781

Sequence file (or a ``[sequence]`` table in the system file)::

    blocks = [["0", 4], ["1", 16]]
    # or
    rule = {words = ["00", "11", "01"], growth = "supergeometric", gamma = 2}

Sweep file: ``range = [lo, hi]``, ``grid_size``, ``threshold``, ``[[systems]]``
whose branch coefficients may be polynomial coefficient lists in the
parameter, and ``[[curves]]`` with ``label`` and ``coeffs``.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field

from .errors import ConfigError, CookieDimError
from .ifs import SystemFamily
from .sequences import SymbolSequence, block_sequence, composed_system, explicit_sequence, growth_sequence
from .sweep import BranchTemplate, ParametricFamily, SystemTemplate, build_systems

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

MAX_DEPTH_CAP = 2**26


def load_toml(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"no such file: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _templates(doc: dict) -> tuple:
    systems = doc.get("systems", [])
    if not isinstance(systems, list):
        raise ConfigError("'systems' must be an array of tables")
    out = []
    for j, tbl in enumerate(systems):
        branches = tbl.get("branches")
        if not branches:
            raise ConfigError(f"system {j} has no branches")
        out.append(SystemTemplate(tuple(BranchTemplate.from_table(b) for b in branches), tbl.get("label", "")))
    return tuple(out)


def parse_parametric(doc: dict) -> ParametricFamily:
    rng = doc.get("range", [0.0, 0.0])
    if len(rng) != 2:
        raise ConfigError("'range' must be [lo, hi]")
    curves = tuple(
        (c.get("label", f"curve{j}"), tuple(float(x) for x in c["coeffs"]))
        for j, c in enumerate(doc.get("curves", []))
    )
    return ParametricFamily(_templates(doc), float(rng[0]), float(rng[1]), curves)


def parse_systems(doc: dict) -> SystemFamily:
    fam = parse_parametric(doc)
    if not fam.systems:
        raise ConfigError("no [[systems]] defined")
    try:
        return build_systems(fam.systems, 0.0)
    except (CookieDimError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def parse_sequence(tbl: dict, k: int) -> SymbolSequence:
    k = int(tbl.get("k", k))
    if "letters" in tbl:
        return explicit_sequence(tbl["letters"], k)
    if "blocks" in tbl:
        return block_sequence([(w, r) for w, r in tbl["blocks"]], k)
    if "rule" in tbl:
        r = tbl["rule"]
        try:
            return growth_sequence(
                r["words"], float(r["gamma"]), k, r.get("growth", "geometric"), r.get("j_max")
            )
        except KeyError as exc:
            raise ConfigError(f"sequence rule needs {exc.args[0]!r}") from None
    raise ConfigError("sequence needs one of 'letters', 'blocks' or 'rule'")


@dataclass
class SystemConfig:
    family: SystemFamily
    compose: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    sequence: SymbolSequence | None = None


def load_system_file(path: str) -> SystemConfig:
    doc = load_toml(path)
    fam = parse_systems(doc)
    composed = []
    for w in doc.get("compose", []):
        word = tuple(int(c) for c in w)
        if any(not 0 <= c < fam.k for c in word):
            raise ConfigError(f"compose word {w!r} uses letters outside 0..{fam.k - 1}")
        composed.append(composed_system(fam, word))
    seq = parse_sequence(doc["sequence"], fam.k) if "sequence" in doc else None
    return SystemConfig(fam, composed, list(doc.get("check", [])), seq)


def load_sequence_file(path: str, k: int) -> SymbolSequence:
    doc = load_toml(path)
    return parse_sequence(doc.get("sequence", doc), k)


@dataclass
class SweepConfig:
    family: ParametricFamily
    grid_size: int = 101
    threshold: float = 0.05


def load_sweep_file(path: str) -> SweepConfig:
    doc = load_toml(path)
    return SweepConfig(
        parse_parametric(doc), int(doc.get("grid_size", 101)), float(doc.get("threshold", 0.05))
    )


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    out_dir: str | None = None
    depth_cap: int = 2**22
    tol: float = 1e-6
    horizons: list | None = None
    grid: int | None = None
    threshold: float | None = None
    allow_fallback: bool = False

    def validate(self) -> "RunConfig":
        for p in self.inputs:
            if not os.path.isfile(p):
                raise ConfigError(f"no such file: {p}")
        if not 1 <= self.depth_cap <= MAX_DEPTH_CAP:
            raise ConfigError(f"--depth-cap must lie in [1, {MAX_DEPTH_CAP}]")
        if not 0 < self.tol < 1:
            raise ConfigError("--tol must lie in (0, 1)")
        if self.grid is not None and self.grid < 3:
            raise ConfigError("--grid must be >= 3")
        if self.threshold is not None and self.threshold <= 0:
            raise ConfigError("--threshold must be positive")
        if self.horizons is not None and (
            not self.horizons or any(b <= a for a, b in zip(self.horizons, self.horizons[1:]))
            or self.horizons[0] < 1
        ):
            raise ConfigError("--horizons must be positive and increasing")
        return self

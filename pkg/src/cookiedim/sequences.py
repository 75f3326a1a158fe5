"""Driving sequences over the alphabet {0, ..., k-1}.

Sequences are stored as block specifications (a word repeated some number of
times), optionally continued by a growth rule cycling through a list of words
with block lengths ``ceil(gamma**j)`` or ``ceil(gamma**(j*j))``.  Statistics at
a horizon are computed from block boundaries with integer arithmetic, so
horizons far beyond anything that could be materialised are cheap.

Letters are 0-based.  All diagnostics are finite-horizon quantities: they
never certify that a limit condition holds.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import SequenceError
from .ifs import CookieCutter, SystemFamily, as_family, compose

GROWTH_KINDS = ("geometric", "supergeometric")


def parse_word(word) -> tuple[int, ...]:
    if isinstance(word, (int, np.integer)):
        return (int(word),)
    if isinstance(word, str):
        try:
            return tuple(int(ch) for ch in word)
        except ValueError:
            raise SequenceError(f"word {word!r} is not a string of digits") from None
    return tuple(int(c) for c in word)


@dataclass(frozen=True)
class Block:
    word: tuple
    repeat: int

    @property
    def length(self) -> int:
        return len(self.word) * self.repeat


@dataclass(frozen=True)
class GrowthRule:
    """Block ``j >= 1`` repeats ``words[(j-1) % len(words)]`` ``l_j`` times."""

    words: tuple
    growth: str = "geometric"
    gamma: float = 2.0
    j_max: int | None = None

    def block_length(self, j: int) -> int:
        e = j if self.growth == "geometric" else j * j
        if float(self.gamma).is_integer():
            return int(self.gamma) ** e
        return math.ceil(self.gamma**e)


@dataclass(frozen=True)
class SymbolSequence:
    k: int
    blocks: tuple = ()
    rule: GrowthRule | None = None

    def __post_init__(self):
        if self.k < 1:
            raise SequenceError("alphabet size must be >= 1")
        words = [b.word for b in self.blocks]
        if self.rule is not None:
            words.extend(self.rule.words)
        for w in words:
            if not w:
                raise SequenceError("empty word")
            bad = [c for c in w if not 0 <= c < self.k]
            if bad:
                raise SequenceError(f"letters {bad} outside 0..{self.k - 1}")
        for b in self.blocks:
            if b.repeat < 1:
                raise SequenceError("block repeat counts must be >= 1")

    def iter_blocks(self) -> Iterator[Block]:
        yield from self.blocks
        if self.rule is not None:
            r = self.rule
            js = itertools.count(1) if r.j_max is None else range(1, r.j_max + 1)
            for j in js:
                yield Block(r.words[(j - 1) % len(r.words)], r.block_length(j))

    @property
    def length(self) -> int | None:
        """Total length, or ``None`` for an unbounded growth rule."""
        if self.rule is not None and self.rule.j_max is None:
            return None
        return sum(b.length for b in self.iter_blocks())

    def _check_horizon(self, n: int) -> None:
        if n < 1:
            raise SequenceError("horizon must be >= 1")
        total = self.length
        if total is not None and n > total:
            raise SequenceError(f"horizon {n} exceeds sequence length {total}")

    def prefix(self, n: int) -> np.ndarray:
        """The first ``n`` letters as an integer array."""
        self._check_horizon(n)
        parts, have = [], 0
        for b in self.iter_blocks():
            take = min(b.length, n - have)
            reps = -(-take // len(b.word))
            parts.append(np.tile(np.asarray(b.word, dtype=np.int64), reps)[:take])
            have += take
            if have >= n:
                break
        return np.concatenate(parts)

    def block_ends(self, limit: int | None = None) -> list[int]:
        """Cumulative block end positions (at most ``limit`` of them)."""
        out, pos = [], 0
        for b in self.iter_blocks():
            if limit is not None and len(out) >= limit:
                break
            pos += b.length
            out.append(pos)
        return out


def explicit_sequence(letters: Iterable[int], k: int) -> SymbolSequence:
    return SymbolSequence(k, (Block(parse_word(list(letters)), 1),))


def block_sequence(blocks: Iterable, k: int) -> SymbolSequence:
    """Concatenate ``word**repeat`` for each ``(word, repeat)`` pair."""
    return SymbolSequence(k, tuple(Block(parse_word(w), int(r)) for w, r in blocks))


def growth_sequence(
    words: Sequence, gamma: float, k: int, growth: str = "geometric", j_max: int | None = None
) -> SymbolSequence:
    if growth not in GROWTH_KINDS:
        raise SequenceError(f"growth must be one of {GROWTH_KINDS}")
    if gamma <= 1:
        raise SequenceError("gamma must exceed 1")
    rule = GrowthRule(tuple(parse_word(w) for w in words), growth, gamma, j_max)
    return SymbolSequence(k, (), rule)


@dataclass(frozen=True)
class SequenceStats:
    n: int
    switch_count: int
    counts: tuple

    @property
    def frequencies(self) -> tuple:
        return tuple(c / self.n for c in self.counts)


def _word_info(word: tuple, k: int):
    counts = np.bincount(word, minlength=k).astype(object)
    switches = sum(a != b for a, b in zip(word, word[1:]))
    return counts, switches, word[-1] != word[0]


def stats(seq: SymbolSequence, n: int) -> SequenceStats:
    """Switch count and letter counts of the length-``n`` prefix."""
    seq._check_horizon(n)
    counts = np.zeros(seq.k, dtype=object)
    switches, have, last = 0, 0, None
    for b in seq.iter_blocks():
        w, L = b.word, len(b.word)
        take = min(b.length, n - have)
        full, rem = divmod(take, L)
        wc, wsw, wrap = _word_info(w, seq.k)
        counts += full * wc
        switches += full * wsw + max(full - 1, 0) * wrap
        if rem:
            head = w[:rem]
            hc, hsw, _ = _word_info(head, seq.k)
            counts += hc
            switches += hsw + (wrap if full else 0)
        if last is not None and last != w[0]:
            switches += 1
        last = w[rem - 1] if rem else w[-1]
        have += take
        if have >= n:
            break
    return SequenceStats(n, int(switches), tuple(int(c) for c in counts))


@dataclass(frozen=True)
class SwitchingDiagnostic:
    points: tuple  # (n, kappa_n / n)
    decreasing: bool


def rarely_switching_diagnostic(seq: SymbolSequence, horizons: Iterable[int]) -> SwitchingDiagnostic:
    """Switch ratios ``kappa_n / n``; flags a halving (or better) per decade."""
    pts = tuple((n, stats(seq, n).switch_count / n) for n in sorted(horizons))
    # leading zero ratios (no switch yet) say nothing about the trend
    first = next((i for i, (_, r) in enumerate(pts) if r > 0), 0)
    chain = []
    for n, r in pts[first:]:
        if not chain or n >= 10 * chain[-1][0]:
            chain.append((n, r))
    decreasing = len(chain) >= 2 and all(
        b <= a / 2 for (_, a), (_, b) in zip(chain, chain[1:])
    )
    return SwitchingDiagnostic(pts, decreasing)


@dataclass(frozen=True)
class FrequencyDiagnostic:
    horizons: tuple
    running_max: tuple  # per horizon, per letter

    @property
    def final(self) -> tuple:
        return self.running_max[-1]


def frequencies_condition_diagnostic(
    seq: SymbolSequence, horizons: Iterable[int]
) -> FrequencyDiagnostic:
    """Per-letter running maximum of the frequencies over the horizons."""
    hs = tuple(sorted(horizons))
    best = [0.0] * seq.k
    rows = []
    for n in hs:
        for j, f in enumerate(stats(seq, n).frequencies):
            best[j] = max(best[j], f)
        rows.append(tuple(best))
    return FrequencyDiagnostic(hs, tuple(rows))


def composed_system(fam: SystemFamily, word: Sequence[int], label: str | None = None) -> CookieCutter:
    """IFS of ``F_{c1} ... F_{cb}``: all compositions ``f_{c1,i1} o ... o f_{cb,ib}``."""
    fam = as_family(fam)
    systems = [fam.systems[c] for c in word]
    branches = [compose(*combo) for combo in itertools.product(*(F.branches for F in systems))]
    if label is None:
        label = "".join(F.label or str(c) for F, c in zip(systems, word))
    return CookieCutter(tuple(branches), label)


def group_letters(
    seq: SymbolSequence, block_len: int, fam, horizon: int | None = None
) -> tuple[SymbolSequence, SystemFamily]:
    """Read ``seq`` in chunks of ``block_len`` letters over composed systems.

    The new alphabet lists the distinct chunks in order of first occurrence.
    Sequences whose block words all have lengths divisible by ``block_len``
    are regrouped symbolically; anything else needs a ``horizon`` that is a
    multiple of ``block_len`` and is regrouped explicitly up to it.
    """
    fam = as_family(fam)
    if block_len < 1:
        raise SequenceError("block_len must be >= 1")
    if block_len == 1:
        return seq, fam
    words = [b.word for b in seq.blocks] + list(seq.rule.words if seq.rule else ())
    aligned = all(len(w) % block_len == 0 for w in words)
    alphabet: dict[tuple, int] = {}

    def chunks(w) -> tuple:
        out = []
        for i in range(0, len(w), block_len):
            out.append(alphabet.setdefault(tuple(w[i : i + block_len]), len(alphabet)))
        return tuple(out)

    if aligned and horizon is None:
        new_blocks = tuple(Block(chunks(b.word), b.repeat) for b in seq.blocks)
        rule = None
        if seq.rule is not None:
            r = seq.rule
            rule = GrowthRule(tuple(chunks(w) for w in r.words), r.growth, r.gamma, r.j_max)
        new_seq = SymbolSequence(len(alphabet), new_blocks, rule)
    else:
        if horizon is None:
            horizon = seq.length
        if horizon is None or horizon % block_len:
            raise SequenceError(
                f"sequence length at horizon {horizon} is not a multiple of {block_len}"
            )
        letters = chunks(tuple(int(c) for c in seq.prefix(horizon)))
        new_seq = SymbolSequence(len(alphabet), (Block(letters, 1),))
    systems = tuple(composed_system(fam, w) for w in alphabet)
    return new_seq, SystemFamily(systems)

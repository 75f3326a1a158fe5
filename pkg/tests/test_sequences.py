import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cookiedim import (
    SequenceError,
    block_sequence,
    explicit_sequence,
    frequencies_condition_diagnostic,
    group_letters,
    growth_sequence,
    rarely_switching_diagnostic,
    stats,
)
from cookiedim.catalog import ex61_family, ex62_sequence, middle_thirds, quarter
from cookiedim.ifs import SystemFamily
from cookiedim.nonstationary import cantor_arrays


def brute_stats(letters, k):
    letters = list(letters)
    switches = sum(a != b for a, b in zip(letters, letters[1:]))
    return switches, tuple(letters.count(j) for j in range(k))


# construction ------------------------------------------------------------------

def test_block_prefix_example():
    seq = block_sequence([(0, 2), (1, 4), (0, 8)], 2)
    assert seq.prefix(6).tolist() == [0, 0, 1, 1, 1, 1]
    assert seq.length == 14


def test_ex62_prefix():
    assert ex62_sequence().prefix(4).tolist() == [0, 0, 0, 0]
    geo = growth_sequence(["00", "11", "01"], 4, 2, "geometric", j_max=3)
    assert geo.prefix(4).tolist() == [0, 0, 0, 0]
    assert geo.prefix(16).tolist() == [0] * 8 + [1] * 8


def test_constant_block():
    seq = block_sequence([(1, 50)], 2)
    assert stats(seq, 50).switch_count == 0


def test_invalid_letters_and_repeats():
    with pytest.raises(SequenceError):
        block_sequence([(2, 3)], 2)
    with pytest.raises(SequenceError):
        block_sequence([(0, 0)], 2)
    with pytest.raises(SequenceError):
        block_sequence([("", 1)], 2)
    with pytest.raises(SequenceError):
        growth_sequence([0, 1], 1.0, 2)
    with pytest.raises(SequenceError):
        explicit_sequence([0, 1], 2).prefix(3)


def test_growth_block_lengths():
    seq = growth_sequence([0, 1], 2, 2, "supergeometric", j_max=4)
    assert seq.block_ends() == [2, 2 + 16, 2 + 16 + 512, 2 + 16 + 512 + 65536]
    seq = growth_sequence([0, 1], 1.5, 2, "geometric", j_max=3)
    assert [b.repeat for b in seq.iter_blocks()] == [2, 3, 4]


# statistics --------------------------------------------------------------------

def test_stats_examples():
    s = stats(explicit_sequence([0, 0, 1, 1], 2), 4)
    assert (s.switch_count, s.frequencies) == (1, (0.5, 0.5))
    alt = block_sequence([("01", 50)], 2)
    s = stats(alt, 100)
    assert (s.switch_count, s.frequencies) == (99, (0.5, 0.5))


def test_block4_frequency_supergeometric():
    seq = growth_sequence([0, 1], 2, 2, "supergeometric")
    n = seq.block_ends(4)[-1]
    assert stats(seq, n).frequencies[1] >= 0.8


def test_stats_huge_horizon_cheap():
    seq = growth_sequence([0, 1], 4, 2, "geometric")
    n = 10**15
    s = stats(seq, n)
    assert sum(s.counts) == n
    assert s.switch_count <= 25


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.tuples(st.sampled_from(["0", "1", "2", "01", "12", "210", "0011"]), st.integers(1, 5)),
             min_size=1, max_size=6),
    st.data(),
)
def test_stats_matches_brute_force(blocks, data):
    seq = block_sequence(blocks, 3)
    n = data.draw(st.integers(1, seq.length))
    s = stats(seq, n)
    assert (s.switch_count, s.counts) == brute_stats(seq.prefix(n), 3)
    assert sum(s.counts) == n
    assert 0 <= s.switch_count <= n - 1


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["0", "1", "01", "110"]), st.integers(1, 4)), min_size=1, max_size=5))
def test_switch_count_monotone(blocks):
    seq = block_sequence(blocks, 2)
    kappas = [stats(seq, n).switch_count for n in range(1, seq.length + 1)]
    steps = np.diff(kappas)
    assert np.all((steps == 0) | (steps == 1))


def test_frequency_lower_bound_geometric():
    # at the end of block j the previous blocks total at most l_j / (gamma - 1)
    gamma = 4
    seq = growth_sequence([0, 1], gamma, 2, "geometric", j_max=10)
    for j, n in enumerate(seq.block_ends(), start=1):
        current = (j - 1) % 2
        assert stats(seq, n).frequencies[current] >= 1 - 1 / gamma


# diagnostics -------------------------------------------------------------------

def test_switching_diagnostic_examples():
    const = block_sequence([(0, 10**6)], 2)
    d = rarely_switching_diagnostic(const, [10, 100, 1000])
    assert all(r == 0 for _, r in d.points)
    alt = block_sequence([("01", 10**6)], 2)
    d = rarely_switching_diagnostic(alt, [10, 1000, 10**5])
    assert d.points[-1][1] == pytest.approx(1, abs=1e-4)
    assert not d.decreasing
    seq = growth_sequence([0, 1], 4, 2, "geometric")
    d = rarely_switching_diagnostic(seq, [10**e for e in range(2, 7)])
    assert d.points[-1][1] < 0.01
    assert d.decreasing


def test_frequency_diagnostic_examples():
    const = block_sequence([(0, 100)], 2)
    d = frequencies_condition_diagnostic(const, [10, 100])
    assert d.final[1] == 0
    seq = growth_sequence([0, 1], 4, 2, "supergeometric")
    d = frequencies_condition_diagnostic(seq, seq.block_ends(4))
    assert min(d.final) >= 0.9
    alt = block_sequence([("01", 500)], 2)
    d = frequencies_condition_diagnostic(alt, [100, 1000])
    assert d.final == pytest.approx((0.5, 0.5))


# grouping ----------------------------------------------------------------------

def test_group_ex62():
    gseq, gfam = group_letters(ex62_sequence(j_max=4), 2, ex61_family())
    assert gseq.k == 3
    assert [F.label for F in gfam.systems] == ["F0F0", "F1F1", "F0F1"]
    assert [F.q for F in gfam.systems] == [4, 4, 4]
    # (00)^2 (11)^16 (01)^512 ... read in pairs
    assert gseq.prefix(6).tolist() == [0, 0, 1, 1, 1, 1]
    assert gseq.block_ends() == [2, 18, 530, 66066]


def test_group_identity():
    seq = explicit_sequence([0, 1, 1], 2)
    fam = SystemFamily((middle_thirds(), quarter()))
    assert group_letters(seq, 1, fam) == (seq, fam)


def test_group_0011():
    fam = SystemFamily((middle_thirds(), quarter()))
    gseq, gfam = group_letters(explicit_sequence([0, 0, 1, 1], 2), 2, fam)
    assert gseq.prefix(2).tolist() == [0, 1]
    assert [F.q for F in gfam.systems] == [4, 4]


def test_group_non_multiple():
    fam = SystemFamily((middle_thirds(), quarter()))
    with pytest.raises(SequenceError):
        group_letters(explicit_sequence([0, 0, 1], 2), 2, fam)
    seq = growth_sequence([0, 1], 2, 2, "geometric")
    with pytest.raises(SequenceError):
        group_letters(seq, 2, fam, horizon=5)
    gseq, _ = group_letters(seq, 2, fam, horizon=6)
    assert gseq.length == 3


@pytest.mark.parametrize("letters", [(0, 0, 1, 1), (0, 1, 0, 1, 1, 0), (1, 1, 0, 1)])
def test_group_preserves_cantor_set(letters):
    fam = ex61_family()
    gseq, gfam = group_letters(explicit_sequence(letters, 2), 2, fam)
    l0, r0 = cantor_arrays(fam, letters)
    l1, r1 = cantor_arrays(gfam, gseq.prefix(len(letters) // 2))
    np.testing.assert_allclose(l0, l1, atol=1e-12)
    np.testing.assert_allclose(r0, r1, atol=1e-12)

"""Statistics checked against independent exact oracles.

The oracles below recompute every quantity from first principles with
`fractions.Fraction` and `math.comb`, so agreement is a real cross-check
rather than a re-run of the production code path.
"""

import math
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ranatomy.stats import (
    EXACT_MW_LIMIT,
    Z_95,
    bonferroni,
    cohens_d,
    effect_word,
    fisher_exact_2x2,
    mann_whitney,
    phi_coefficient,
)

# --- independent oracles -------------------------------------------------------


def fisher_oracle(a, b, c, d):
    """Two-sided Fisher p as an exact fraction via hypergeometric summation."""
    r1, r2, c1 = a + b, c + d, a + c
    n = r1 + r2
    if r1 == 0 or r2 == 0 or c1 == 0 or c1 == n:
        return Fraction(1)
    denom = comb(n, c1)
    lo, hi = max(0, c1 - r2), min(r1, c1)
    observed = Fraction(comb(r1, a) * comb(r2, c1 - a), denom)
    total = Fraction(0)
    for k in range(lo, hi + 1):
        point = Fraction(comb(r1, k) * comb(r2, c1 - k), denom)
        if point <= observed:
            total += point
    return min(Fraction(1), total)


def mw_u_of_ranks(chosen, n1):
    return sum(chosen) - n1 * (n1 + 1) // 2


def mw_oracle_distribution(n1, n2):
    """U -> count over all rank assignments, by brute enumeration."""
    counts = {}
    for chosen in combinations(range(1, n1 + n2 + 1), n1):
        u = mw_u_of_ranks(chosen, n1)
        counts[u] = counts.get(u, 0) + 1
    return counts


def mw_oracle_p(counts, u, n1, n2):
    lo, hi = min(u, n1 * n2 - u), max(u, n1 * n2 - u)
    total = sum(counts.values())
    favorable = sum(v for k, v in counts.items() if k <= lo or k >= hi)
    return Fraction(favorable, total)


def rank_sum_distribution(n, k):
    """Subset-sum counts for k-subsets of {1..n}, independent dynamic program."""
    table = [{0: 1}] + [{} for _ in range(k)]
    for value in range(1, n + 1):
        for size in range(min(value, k), 0, -1):
            for s, cnt in table[size - 1].items():
                key = s + value
                table[size][key] = table[size].get(key, 0) + cnt
    return table[k]


# --- exhaustive agreement ---------------------------------------------------------


def test_fisher_matches_oracle_on_all_small_tables():
    checked = 0
    for a in range(13):
        for b in range(13 - a):
            for c in range(13):
                for d in range(13 - c):
                    if a + c > 12 or b + d > 12:
                        continue
                    want = float(fisher_oracle(a, b, c, d))
                    got = fisher_exact_2x2(a, b, c, d)
                    assert got == pytest.approx(want, rel=1e-9), (a, b, c, d)
                    assert 0.0 <= got <= 1.0
                    checked += 1
    assert checked > 5000


def test_mann_whitney_exact_matches_enumeration():
    checked = 0
    for n1 in range(1, 7):
        for n2 in range(1, 7):
            counts = mw_oracle_distribution(n1, n2)
            for chosen in combinations(range(1, n1 + n2 + 1), n1):
                xs = [float(r) for r in chosen]
                ys = [float(r) for r in range(1, n1 + n2 + 1) if r not in chosen]
                u_obs = mw_u_of_ranks(chosen, n1)
                want = float(mw_oracle_p(counts, u_obs, n1, n2))
                u_got, p_got = mann_whitney(xs, ys)
                assert u_got == pytest.approx(float(u_obs), abs=1e-12)
                assert p_got == pytest.approx(want, rel=1e-12), (xs, ys)
                checked += 1
    assert checked > 3000


def test_normal_approximation_stays_close_to_exact():
    # min(n) > EXACT_MW_LIMIT forces the approximate branch; the tie-corrected
    # continuity-adjusted normal should sit within 0.08 of the exact answer.
    n1 = n2 = EXACT_MW_LIMIT + 1
    n = n1 + n2
    sums = rank_sum_distribution(n, n1)
    counts = {s - n1 * (n1 + 1) // 2: c for s, c in sums.items()}
    cases = [
        list(range(1, n1 + 1)),              # maximal separation
        [1, 3, 5, 7, 9, 11, 13, 15, 17],     # interleaved
        [2, 3, 5, 8, 9, 12, 14, 17, 18],     # irregular
        [5, 6, 7, 8, 9, 10, 11, 12, 13],     # central block
    ]
    for chosen in cases:
        xs = [float(r) for r in chosen]
        ys = [float(r) for r in range(1, n + 1) if r not in chosen]
        u_obs = mw_u_of_ranks(chosen, n1)
        exact = float(mw_oracle_p(counts, u_obs, n1, n2))
        _, approx = mann_whitney(xs, ys)
        assert abs(approx - exact) < 0.08, (chosen, exact, approx)


# --- frozen oracle values ----------------------------------------------------------


@pytest.mark.parametrize(
    "table,expected",
    [
        ((4, 0, 0, 5), Fraction(1, 126)),
        ((1, 0, 0, 2), Fraction(1, 3)),
        ((3, 7, 9, 2), Fraction(881, 29393)),
        ((0, 10, 10, 0), Fraction(1, 92378)),
        ((12, 4, 3, 9), Fraction(6692, 334305)),
        ((5, 5, 5, 5), Fraction(1)),
    ],
)
def test_fisher_frozen_values(table, expected):
    assert fisher_exact_2x2(*table) == pytest.approx(float(expected), rel=1e-9)


def test_mann_whitney_frozen_values():
    u, p = mann_whitney([1.0, 2.0, 3.0], [4.0, 5.0, 6.0])
    assert (u, p) == (0.0, pytest.approx(0.1, rel=1e-12))
    u2, p2 = mann_whitney([4.0, 5.0, 6.0], [1.0, 2.0, 3.0])
    assert (u2, p2) == (9.0, pytest.approx(0.1, rel=1e-12))


def test_cohens_d_frozen_value():
    result = cohens_d([1.0, 2.0, 3.0], [2.0, 3.0, 4.0])
    # Pooled sd is 1, so d = -1; se = sqrt(6/9 + 1/12) = sqrt(3)/2.
    se = math.sqrt(6 / 9 + 1 / 12)
    assert result.d == pytest.approx(-1.0, abs=1e-12)
    assert result.ci_low == pytest.approx(-1.0 - Z_95 * se, abs=1e-12)
    assert result.ci_high == pytest.approx(-1.0 + Z_95 * se, abs=1e-12)


def test_second_oracle_module_agrees():
    # tests/oracles.py reimplements everything along different lines
    # (pair counting, rational hypergeometrics); all three must agree.
    for table in [(4, 0, 0, 5), (3, 7, 9, 2), (5, 5, 5, 5), (1, 2, 3, 4)]:
        mine = fisher_oracle(*table)
        theirs = oracles.fisher_exact_fraction(*table)
        assert mine == theirs
        assert fisher_exact_2x2(*table) == pytest.approx(float(theirs), rel=1e-9)
        phi_ref = oracles.phi_fraction(*table)
        if phi_ref is not None:
            assert phi_coefficient(*table) == pytest.approx(phi_ref, abs=1e-12)
    for xs, ys in [([1.0, 4.0], [2.0, 3.0]), ([1.0, 2.0, 6.0], [3.0, 5.0])]:
        u_ref, p_ref = oracles.mann_whitney_exhaustive(xs, ys)
        u_got, p_got = mann_whitney(xs, ys)
        assert u_got == pytest.approx(float(u_ref), abs=1e-12)
        assert p_got == pytest.approx(float(p_ref), rel=1e-12)
    d_ref, lo_ref, hi_ref = oracles.cohens_d_fraction([1.0, 2.0, 3.0], [2.0, 3.0, 4.0])
    got = cohens_d([1.0, 2.0, 3.0], [2.0, 3.0, 4.0])
    assert got.d == pytest.approx(d_ref, abs=1e-12)
    assert got.ci_low == pytest.approx(lo_ref, abs=1e-12)
    assert got.ci_high == pytest.approx(hi_ref, abs=1e-12)


# --- hand-recomputed effect sizes ----------------------------------------------------


@pytest.mark.parametrize(
    "table",
    [(2, 0, 0, 2), (3, 1, 1, 3), (1, 2, 3, 4), (10, 2, 5, 9), (0, 4, 4, 0)],
)
def test_phi_matches_hand_formula(table):
    a, b, c, d = table
    want = (a * d - b * c) / math.sqrt((a + b) * (c + d) * (a + c) * (b + d))
    assert phi_coefficient(a, b, c, d) == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize(
    "case",
    [
        ([1.0, 2.0, 3.0], [4.0, 6.0]),
        ([10.0, 11.0, 12.0, 13.0], [10.5, 11.5, 12.5]),
        ([0.0, 0.5, 1.5, 9.0], [2.0, 2.5]),
    ],
)
def test_cohens_d_matches_hand_formula(case):
    xs, ys = case
    n1, n2 = len(xs), len(ys)
    m1, m2 = sum(xs) / n1, sum(ys) / n2
    v1 = sum((x - m1) ** 2 for x in xs) / (n1 - 1)
    v2 = sum((y - m2) ** 2 for y in ys) / (n2 - 1)
    pooled = math.sqrt(((n1 - 1) * v1 + (n2 - 1) * v2) / (n1 + n2 - 2))
    want = (m1 - m2) / pooled
    result = cohens_d(xs, ys)
    assert result.d == pytest.approx(want, abs=1e-12)
    se = math.sqrt((n1 + n2) / (n1 * n2) + want**2 / (2 * (n1 + n2)))
    assert result.ci_high - result.ci_low == pytest.approx(2 * Z_95 * se, abs=1e-12)


# --- degenerate conventions ------------------------------------------------------------


def test_degenerate_fisher_margins_give_p_one():
    assert fisher_exact_2x2(0, 0, 3, 4) == 1.0
    assert fisher_exact_2x2(3, 4, 0, 0) == 1.0
    assert fisher_exact_2x2(0, 3, 0, 4) == 1.0
    assert fisher_exact_2x2(3, 0, 4, 0) == 1.0
    assert fisher_exact_2x2(0, 0, 0, 0) == 1.0


def test_phi_zero_margin_is_none():
    assert phi_coefficient(0, 0, 1, 1) is None
    assert phi_coefficient(1, 1, 0, 0) is None
    assert phi_coefficient(0, 1, 0, 1) is None
    assert phi_coefficient(1, 0, 1, 0) is None


def test_mann_whitney_zero_variance_gives_p_one():
    u, p = mann_whitney([2.0, 2.0, 2.0], [2.0, 2.0])
    assert p == 1.0


def test_cohens_d_zero_variance_conventions():
    same = cohens_d([2.0, 2.0], [2.0, 2.0])
    assert same.d == 0.0
    higher = cohens_d([3.0, 3.0], [2.0, 2.0])
    assert math.isinf(higher.d) and higher.d > 0
    lower = cohens_d([2.0, 2.0], [3.0, 3.0])
    assert math.isinf(lower.d) and lower.d < 0


# --- adjustment and wording ----------------------------------------------------------


def test_bonferroni_multiplies_and_caps():
    assert bonferroni(0.01, 5) == pytest.approx(0.05)
    assert bonferroni(0.5, 10) == 1.0
    assert bonferroni(0.0, 100) == 0.0
    assert bonferroni(1.0, 1) == 1.0


@pytest.mark.parametrize(
    "value,word",
    [
        (0.0, "negligible"),
        (0.009, "negligible"),
        (0.01, "very small"),
        (0.19, "very small"),
        (0.2, "small"),
        (0.49, "small"),
        (0.5, "medium"),
        (0.79, "medium"),
        (0.8, "large"),
        (1.19, "large"),
        (1.2, "very large"),
        (1.99, "very large"),
        (2.0, "huge"),
        (50.0, "huge"),
        (-0.25, "small"),
        (-3.0, "huge"),
    ],
)
def test_effect_word_thresholds(value, word):
    assert effect_word(value) == word


# --- property-based invariants ----------------------------------------------------------

cells = st.integers(min_value=0, max_value=40)


@settings(max_examples=200, deadline=None)
@given(cells, cells, cells, cells)
def test_fisher_symmetries(a, b, c, d):
    base = fisher_exact_2x2(a, b, c, d)
    assert 0.0 <= base <= 1.0
    for variant in [(c, d, a, b), (b, a, d, c), (a, c, b, d)]:
        assert fisher_exact_2x2(*variant) == pytest.approx(base, rel=1e-9, abs=1e-12)


samples = st.lists(
    st.floats(min_value=-50, max_value=50, allow_nan=False, width=32),
    min_size=2,
    max_size=10,
)


@settings(max_examples=100, deadline=None)
@given(samples, samples)
def test_mann_whitney_swap_symmetry(xs, ys):
    u1, p1 = mann_whitney(xs, ys)
    u2, p2 = mann_whitney(ys, xs)
    assert u1 + u2 == pytest.approx(len(xs) * len(ys), abs=1e-9)
    assert p1 == pytest.approx(p2, rel=1e-9, abs=1e-12)
    assert 0.0 <= p1 <= 1.0


@settings(max_examples=100, deadline=None)
@given(samples, samples, st.floats(min_value=-100, max_value=100, allow_nan=False))
def test_cohens_d_antisymmetry_and_shift(xs, ys, shift):
    forward = cohens_d(xs, ys)
    backward = cohens_d(ys, xs)
    if math.isfinite(forward.d):
        assert forward.d == pytest.approx(-backward.d, rel=1e-9, abs=1e-9)
        moved = cohens_d([x + shift for x in xs], [y + shift for y in ys])
        if math.isfinite(moved.d):
            assert moved.d == pytest.approx(forward.d, rel=1e-6, abs=1e-6)

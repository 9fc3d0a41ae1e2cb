"""Statistical toolkit for comparing two corpora.

File-proportion comparisons use Fisher's exact test with the phi coefficient
as effect size; per-file count comparisons use the Mann-Whitney U test with
Cohen's d and a 95% confidence interval; families of tests are adjusted with
the Bonferroni correction. All functions are pure.

Numerics: hypergeometric point probabilities are computed with log-space
factorials so corpus-scale tables cannot overflow, and the two-sided Fisher
sum admits a 1e-7 relative slack when comparing point probabilities so that
mathematically tied tables are not dropped to floating-point noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

Z_95 = 1.959964
EXACT_MW_LIMIT = 8

_EFFECT_WORDS = (
    (0.01, "negligible"),
    (0.2, "very small"),
    (0.5, "small"),
    (0.8, "medium"),
    (1.2, "large"),
    (2.0, "very large"),
)


@dataclass(frozen=True, slots=True)
class CohensD:
    d: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True, slots=True)
class StatResult:
    test: str  # "FisherExact" | "MannWhitney"
    p_value: float
    p_adjusted: float
    k: int
    effect: dict
    effect_word: str


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def fisher_exact_2x2(a: int, b: int, c: int, d: int) -> float:
    """Two-sided Fisher p: sum of point probabilities ≤ the observed one.

    With margins fixed, every admissible table is indexed by its top-left
    cell; tables whose hypergeometric point probability is at most the
    observed probability times (1 + 1e-7) contribute. A zero row or column
    margin leaves a single admissible table, hence p = 1 by convention.
    """
    r1, r2 = a + b, c + d
    c1, c2 = a + c, b + d
    n = r1 + r2
    if r1 == 0 or r2 == 0 or c1 == 0 or c2 == 0:
        return 1.0

    def log_point(x: int) -> float:
        return _log_comb(r1, x) + _log_comb(r2, c1 - x) - _log_comb(n, c1)

    cutoff = log_point(a) + math.log1p(1e-7)
    lo = max(0, c1 - r2)
    hi = min(r1, c1)
    total = sum(
        math.exp(lp)
        for x in range(lo, hi + 1)
        if (lp := log_point(x)) <= cutoff
    )
    return min(1.0, total)


def phi_coefficient(a: int, b: int, c: int, d: int) -> float | None:
    """(ad − bc) / sqrt of the margin product; None when a margin is zero."""
    r1, r2, c1, c2 = a + b, c + d, a + c, b + d
    if 0 in (r1, r2, c1, c2):
        return None
    return (a * d - b * c) / math.sqrt(r1 * r2 * c1 * c2)


# -- Mann-Whitney -------------------------------------------------------------


def _midranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j + 2) / 2  # average of 1-based positions i+1 .. j+1
        for idx in order[i:j + 1]:
            ranks[idx] = rank
        i = j + 1
    return ranks


def _u_counts(m: int, big: int) -> list[int]:
    """counts[u] = number of m-subsets of ranks 1..m+big with U statistic u.

    This is the coefficient list of the Gaussian binomial [m+big choose m]_q:
    multiply out (1 - q^(big+i)) for i = 1..m, then divide by (1 - q^i),
    both linear passes over the coefficient array — exact integer arithmetic.
    """
    size = m * big + 1
    coeffs = [0] * size
    coeffs[0] = 1
    for i in range(1, m + 1):
        step = big + i
        for u in range(size - 1, step - 1, -1):
            coeffs[u] -= coeffs[u - step]
    for i in range(1, m + 1):
        for u in range(i, size):
            coeffs[u] += coeffs[u - i]
    return coeffs


def mann_whitney(xs: list[float], ys: list[float]) -> tuple[float, float]:
    """U for the first sample and the two-sided p-value.

    Exact p by enumeration of the U distribution when the smaller sample has
    at most 8 values and there are no ties; otherwise a normal approximation
    with tie-corrected variance and a 0.5 continuity correction. Identical
    constant samples give p = 1.
    """
    n1, n2 = len(xs), len(ys)
    combined = list(xs) + list(ys)
    ranks = _midranks(combined)
    r1 = sum(ranks[:n1])
    u1 = r1 - n1 * (n1 + 1) / 2
    untied = len(set(combined)) == len(combined)

    if untied and min(n1, n2) <= EXACT_MW_LIMIT:
        u_small = int(round(u1 if n1 <= n2 else n1 * n2 - u1))
        counts = _u_counts(min(n1, n2), max(n1, n2))
        lo = min(u_small, n1 * n2 - u_small)
        hi = max(u_small, n1 * n2 - u_small)
        favorable = sum(
            cnt for u, cnt in enumerate(counts) if u <= lo or u >= hi
        )
        return u1, favorable / sum(counts)

    n = n1 + n2
    tie_sum = 0
    seen: dict[float, int] = {}
    for value in combined:
        seen[value] = seen.get(value, 0) + 1
    for t in seen.values():
        tie_sum += t ** 3 - t
    variance = n1 * n2 / 12 * ((n + 1) - tie_sum / (n * (n - 1)))
    if variance <= 0:
        return u1, 1.0
    delta = u1 - n1 * n2 / 2
    if delta > 0:
        delta -= 0.5
    elif delta < 0:
        delta += 0.5
    z = delta / math.sqrt(variance)
    return u1, min(1.0, math.erfc(abs(z) / math.sqrt(2)))


def cohens_d(xs: list[float], ys: list[float]) -> CohensD:
    """Pooled-SD standardized mean difference with a 95% normal CI.

    Zero pooled variance degenerates: equal means give d = 0, unequal means
    give a signed infinite-effect sentinel.
    """
    n1, n2 = len(xs), len(ys)
    m1 = sum(xs) / n1
    m2 = sum(ys) / n2
    v1 = sum((x - m1) ** 2 for x in xs) / (n1 - 1)
    v2 = sum((y - m2) ** 2 for y in ys) / (n2 - 1)
    pooled = ((n1 - 1) * v1 + (n2 - 1) * v2) / (n1 + n2 - 2)
    if pooled == 0:
        if m1 == m2:
            d = 0.0
        else:
            inf = math.inf if m1 > m2 else -math.inf
            return CohensD(inf, inf, inf)
    else:
        d = (m1 - m2) / math.sqrt(pooled)
    se = math.sqrt((n1 + n2) / (n1 * n2) + d * d / (2 * (n1 + n2)))
    return CohensD(d, d - Z_95 * se, d + Z_95 * se)


def bonferroni(p: float, k: int) -> float:
    return min(1.0, k * p)


def effect_word(d: float) -> str:
    magnitude = abs(d)
    for threshold, word in _EFFECT_WORDS:
        if magnitude < threshold:
            return word
    return "huge"

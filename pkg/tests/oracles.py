"""Independent reference implementations used to pin test expectations.

Everything here favors exactness over speed: rational arithmetic via
fractions.Fraction, brute-force enumeration instead of closed forms.
These routines are intentionally written along different lines than the
production code in ranatomy.stats (pair counting instead of rank-sum
formulas, Fraction hypergeometrics instead of log-space floats) so the
two can check each other.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations


def fisher_exact_fraction(a: int, b: int, c: int, d: int) -> Fraction:
    """Two-sided Fisher p for [[a, b], [c, d]] as an exact rational.

    Sums hypergeometric point probabilities that do not exceed the
    probability of the observed table. Degenerate margins collapse the
    support to a single table and the sum is 1.
    """
    r1, r2 = a + b, c + d
    c1 = a + c
    n = r1 + r2
    denom = math.comb(n, c1)
    p_obs = Fraction(math.comb(r1, a) * math.comb(r2, c), denom)
    total = Fraction(0)
    for k in range(max(0, c1 - r2), min(r1, c1) + 1):
        p_k = Fraction(math.comb(r1, k) * math.comb(r2, c1 - k), denom)
        if p_k <= p_obs:
            total += p_k
    return total


def phi_fraction(a: int, b: int, c: int, d: int) -> float | None:
    """Phi coefficient recomputed with exact rationals, None if undefined."""
    num = a * d - b * c
    den_sq = (a + b) * (c + d) * (a + c) * (b + d)
    if den_sq == 0:
        return None
    value = math.sqrt(float(Fraction(num * num, den_sq)))
    return value if num >= 0 else -value


def mann_whitney_exhaustive(xs, ys) -> tuple[Fraction, Fraction]:
    """(U, two-sided p) for untied samples by full label enumeration.

    U is computed by literal pair counting: the number of (x, y) pairs
    with x > y. The p-value enumerates every way of relabeling the pooled
    values into groups of the same sizes and counts labelings at least as
    extreme (in either direction) as the observed one.
    """
    pooled = list(xs) + list(ys)
    assert len(set(pooled)) == len(pooled), "oracle only handles untied data"
    n1, n2 = len(xs), len(ys)

    def u_of(group_x, group_y) -> Fraction:
        return Fraction(sum(1 for x in group_x for y in group_y if x > y))

    u_obs = u_of(xs, ys)
    lo = min(u_obs, n1 * n2 - u_obs)
    hi = max(u_obs, n1 * n2 - u_obs)
    extreme = 0
    total = 0
    indices = range(len(pooled))
    for chosen in combinations(indices, n1):
        group_x = [pooled[i] for i in chosen]
        rest = set(chosen)
        group_y = [pooled[i] for i in indices if i not in rest]
        u = u_of(group_x, group_y)
        total += 1
        if u <= lo or u >= hi:
            extreme += 1
    return u_obs, Fraction(extreme, total)


def cohens_d_fraction(xs, ys) -> tuple[float, float, float]:
    """(d, ci_low, ci_high) recomputed with rational means and variances."""
    n1, n2 = len(xs), len(ys)
    m1 = Fraction(sum(Fraction(x) for x in xs), n1)
    m2 = Fraction(sum(Fraction(y) for y in ys), n2)
    v1 = sum((Fraction(x) - m1) ** 2 for x in xs) / (n1 - 1)
    v2 = sum((Fraction(y) - m2) ** 2 for y in ys) / (n2 - 1)
    pooled = ((n1 - 1) * v1 + (n2 - 1) * v2) / (n1 + n2 - 2)
    if pooled == 0:
        if m1 == m2:
            return 0.0, 0.0, 0.0
        inf = math.inf if m1 > m2 else -math.inf
        return inf, inf, inf
    d = float(m1 - m2) / math.sqrt(float(pooled))
    se = math.sqrt((n1 + n2) / (n1 * n2) + d * d / (2 * (n1 + n2)))
    return d, d - 1.959964 * se, d + 1.959964 * se


if __name__ == "__main__":
    cases = [
        (5, 0, 0, 5),
        (3, 3, 3, 3),
        (1, 9, 11, 3),
        (10, 0, 0, 10),
        (0, 0, 0, 0),
        (2, 0, 3, 0),
    ]
    for a, b, c, d in cases:
        p = fisher_exact_fraction(a, b, c, d)
        print(f"fisher [[{a},{b}],[{c},{d}]] = {p} = {float(p)!r} "
              f"phi={phi_fraction(a, b, c, d)!r}")
    for xs, ys in [([1, 2], [3, 4]), (list(range(1, 6)), list(range(6, 11)))]:
        u, p = mann_whitney_exhaustive(xs, ys)
        print(f"mw {xs} vs {ys}: U={u} p={p} = {float(p)!r}")
    print("d [1,2,3] vs [2,3,4]:", cohens_d_fraction([1, 2, 3], [2, 3, 4]))
    print("d [1,2,3] vs [1,2,3]:", cohens_d_fraction([1, 2, 3], [1, 2, 3]))

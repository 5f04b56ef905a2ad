"""Independent reference computations used to check the package.

Nothing here imports from ``altpresence`` beyond enum values, so the checks
stay independent of the implementation paths they verify.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from fractions import Fraction


def rank_then_pearson(x, y):
    """Spearman rho as Pearson correlation of average ranks, quadratic and pure Python."""
    def ranks(v):
        out = []
        for a in v:
            below = sum(1 for b in v if b < a)
            ties = sum(1 for b in v if b == a)
            out.append(below + (ties + 1) / 2)
        return out

    rx, ry = ranks(list(x)), ranks(list(y))
    n = len(rx)
    mx, my = math.fsum(rx) / n, math.fsum(ry) / n
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(rx, ry))
    sxx = math.fsum((a - mx) ** 2 for a in rx)
    syy = math.fsum((b - my) ** 2 for b in ry)
    return sxy / math.sqrt(sxx * syy)


def topic_indicators(pub_counts):
    """Exact (coverage %, intensity, events) for one topic's publication counts."""
    n = len(pub_counts)
    covered = sum(1 for c in pub_counts if c > 0)
    events = sum(pub_counts)
    cov = Fraction(100 * covered, n)
    inten = Fraction(events, covered) if covered else Fraction(0)
    return cov, inten, events


def competition_ranks(keys):
    """Rank = 1 + number of strictly greater keys (tuples compare lexicographically)."""
    ordered = sorted(keys)
    return [1 + len(ordered) - bisect_right(ordered, k) for k in keys]


def classify_oracle(topics, q):
    """Categories for ``{topic_id: (coverage, intensity, events)}`` by sorting and rule application."""
    ids = list(topics)
    m = len(ids)
    k = math.floor(Fraction(str(q)) * m)
    cr = competition_ranks([(topics[t][0], topics[t][2]) for t in ids])
    ir = competition_ranks([(topics[t][1], topics[t][2]) for t in ids])
    out = {}
    for t, a, b in zip(ids, cr, ir):
        if a <= k and b <= k:
            cat = "hot"
        elif a <= k:
            cat = "popular"
        elif b <= k:
            cat = "star_papers"
        else:
            cat = "unpopular"
        out[t] = (a, b, cat)
    return out

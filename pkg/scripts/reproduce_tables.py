"""Recompute presence indicators and population shares from published aggregate counts.

Prints one line per row with the recomputed and published values and flags
rows whose display-rounded values differ beyond the tolerance.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import published_figures as pub  # noqa: E402

from altpresence.indicators import verify_aggregates  # noqa: E402
from altpresence.strata import share_pct  # noqa: E402


def main() -> int:
    rows = [(s, pub.N_PUBLICATIONS, np_, ne, c, d, i) for s, (np_, ne, c, d, i) in pub.PRESENCE.items()]
    bad = 0
    print(f"{'source':<12} {'C':>7} {'D':>8} {'I':>8}   published")
    for chk in verify_aggregates(rows, pub.TOLERANCE):
        c, d, i = chk.triple.display()
        flag = "" if chk.ok else "   MISMATCH " + ", ".join(f"{e:.4f}" for e in chk.errors)
        bad += not chk.ok
        print(f"{chk.label:<12} {c:>7} {d:>8} {i:>8}   {chk.expected[0]:.2f} {chk.expected[1]:.3f} "
              f"{chk.expected[2]:.3f}{flag}")
    for title, counts, total, expected in (
        ("field shares", pub.FIELD_COUNTS, pub.N_CLASSIFIED, pub.FIELD_SHARES),
        ("document-type shares", pub.DOC_TYPE_COUNTS, pub.N_PUBLICATIONS, pub.DOC_TYPE_SHARES),
    ):
        print(f"\n{title}")
        for (name, want), got in zip(expected.items(), share_pct(list(counts.values()), total)):
            ok = abs(round(got, 2) - want) <= pub.SHARE_TOLERANCE + 1e-9
            bad += not ok
            print(f"  {name:<18} {got:6.2f}  published {want:6.2f}{'' if ok else '  MISMATCH'}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())

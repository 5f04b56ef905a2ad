"""Monte-Carlo hot share as a function of the rank correlation between coverage and intensity.

Independent dimensions give roughly q**2 hot topics; perfectly correlated
dimensions give exactly floor(q*M)/M. Intermediate correlation fills the gap.
"""

import argparse

import numpy as np

from altpresence.topics import AttentionCategory, quadrants


def hot_share(rng, m, q, mix):
    z = rng.standard_normal(m)
    cov = z
    inten = mix * z + np.sqrt(1 - mix**2) * rng.standard_normal(m)
    events = rng.integers(1, 10**6, m)
    _, _, cats, _ = quadrants(cov, inten, events, q)
    return sum(c is AttentionCategory.HOT for c in cats) / m


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--topics", type=int, default=1000)
    ap.add_argument("--q", type=float, default=0.10)
    ap.add_argument("--seeds", type=int, default=50)
    args = ap.parse_args()
    print("latent_corr  mean_hot_share  min     max")
    for mix in (0.0, 0.25, 0.5, 0.75, 0.9, 1.0):
        shares = [hot_share(np.random.default_rng(s), args.topics, args.q, mix) for s in range(args.seeds)]
        print(f"{mix:11.2f}  {np.mean(shares):14.4f}  {min(shares):.3f}  {max(shares):.3f}")


if __name__ == "__main__":
    main()

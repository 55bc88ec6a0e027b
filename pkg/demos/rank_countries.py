"""Rank the 20 countries of the bundled indicator table with TOPSIS and VIKOR.

Run: python3 demos/rank_countries.py
"""

import numpy as np

from bibrank import data_path
from bibrank.indicators import read_indicator_table
from bibrank.mcdm import TOPSIS_CRITERIA, VIKOR_CRITERIA, build_matrix, rank_compare, topsis, vikor

rows = read_indicator_table(data_path("table2.csv"))
print(f"{len(rows)} countries, criteria for TOPSIS: {[c.name for c in TOPSIS_CRITERIA]}")

# NCP (share of uncited papers) is the only cost criterion
tm = build_matrix(rows, TOPSIS_CRITERIA)
vm = build_matrix(rows, VIKOR_CRITERIA, method="vikor")
print("decision matrix:", tm.x.shape, "directions:", [c.direction for c in tm.criteria])

t = topsis(tm)
v = vikor(vm, v=0.5)

print(f"\n{'country':<16}{'C':>7}{'T.r':>5}{'S':>8}{'R':>8}{'Q':>8}{'V.r':>5}")
for i in np.argsort(t.rank):
    name = t.alternatives[i]
    j = v.alternatives.index(name)
    print(f"{name:<16}{t.closeness[i]:7.3f}{t.rank[i]:5d}{v.S[j]:8.3f}{v.R[j]:8.3f}{v.Q[j]:8.3f}{v.rank[j]:5d}")

print("\nVIKOR compromise set:", v.compromise_set, "advantage:", v.advantage, "stability:", v.stability)

cmp = rank_compare(t.ranking(), v.ranking())
print(f"spearman {cmp.spearman_rho:.3f}  kendall {cmp.kendall_tau:.3f}")
biggest = sorted(cmp.delta.items(), key=lambda kv: -kv[1])[:3]
print("largest rank gaps:", biggest)

# the group-utility weight v moves VIKOR between consensus (S) and worst-criterion regret (R)
for weight in (0.0, 0.25, 0.5, 0.75, 1.0):
    r = vikor(vm, v=weight)
    top = [r.alternatives[k] for k in np.argsort(r.rank)[:3]]
    print(f"v={weight:.2f}: top three {top}")

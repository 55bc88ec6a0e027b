"""Keyword, coupling and co-citation networks, exported for external renderers.

Run: python3 demos/networks.py [output-dir]
"""

import sys
from pathlib import Path

from bibrank import data_path
from bibrank.export import write_graph
from bibrank.graphs import (
    association_strength,
    avg_normalized_citations,
    bibliographic_coupling,
    cocitation,
    keyword_cooccurrence,
)
from bibrank.ingest import load_schema, parse_corpus

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_networks")
out.mkdir(parents=True, exist_ok=True)
corpus = parse_corpus(data_path("corpus_fixture.csv"), load_schema(data_path("scopus.map")))

kw = keyword_cooccurrence(corpus, min_occurrences=3, source="author")
print(f"author keywords seen 3+ times: {len(kw.nodes)}, co-occurrence links: {len(kw.edges)}")
print("most frequent:", [(k, kw.nodes[k]) for k in kw.top_nodes(5)])

# raw counts favour frequent terms; association strength divides by both frequencies
assoc = association_strength(kw)
strongest = sorted(assoc.edges.items(), key=lambda e: -e[1])[:5]
print("strongest associations:")
for (a, b), w in strongest:
    print(f"  {a} / {b}: {w:.4f} (count {kw.weight(a, b)})")

docs = bibliographic_coupling(corpus)
countries = bibliographic_coupling(corpus, "country", min_doc_citations=1)
print(f"\ndocument coupling: {len(docs.edges)} pairs share a reference")
print(f"country coupling (cited papers only): {len(countries.nodes)} countries, {len(countries.edges)} links")

cc = cocitation(corpus, min_cocitations=3).without_isolates()
print(f"references co-cited 3+ times: {len(cc.nodes)} nodes, {len(cc.edges)} edges")

scores = avg_normalized_citations(corpus)
top = sorted(scores.items(), key=lambda kv: -kv[1])[:5]
print("\naverage normalized citations:", [(c, round(s, 3)) for c, s in top])

for name, g in [("keywords.graphml", kw), ("association.dot", assoc), ("countries.net", countries), ("cocitation.graphml", cc)]:
    print("wrote", write_graph(g, out / name))

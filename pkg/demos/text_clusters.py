"""tf-idf weighting and k-means topics over titles, abstracts and keywords.

Run: python3 demos/text_clusters.py
"""

import numpy as np

from bibrank import data_path
from bibrank.ingest import load_schema, parse_corpus
from bibrank.textmine import bisecting_kmeans, default_rules, default_stopwords, kmeans, tfidf, tokenize

corpus = parse_corpus(data_path("corpus_fixture.csv"), load_schema(data_path("scopus.map")))

# wildcard rules fold privacy/private/privately into one term before counting
counts = tokenize(corpus, default_stopwords(), default_rules())
print("term-document matrix:", counts.shape)
totals = counts.values.sum(axis=0)
print("most frequent terms:", [counts.terms[j] for j in np.argsort(-totals, kind="stable")[:8]])

weighted = tfidf(counts)
print(f"after tf-idf: {len(weighted.terms)} terms ({len(counts.terms) - len(weighted.terms)} appear everywhere and carry no weight)")

for k in (4, 8, 12):
    cl = kmeans(weighted, k, seed=42)
    print(f"k={k:>2}: sse {cl.sse:10.2f} after {cl.iterations} iterations")

cl = kmeans(weighted, 8, seed=42)
sizes = np.bincount(list(cl.assignments.values()), minlength=8)
print("\ncluster sizes:", sizes.tolist())
for c in np.argsort(-sizes)[:4]:
    top = np.argsort(-cl.centroids[c], kind="stable")[:5]
    print(f"cluster {c}: " + ", ".join(weighted.terms[j] for j in top))

# same seed, same answer
again = kmeans(weighted, 8, seed=42)
print("\nrerun identical:", again.assignments == cl.assignments)

bi = bisecting_kmeans(weighted, 8, seed=42)
print(f"bisecting k-means sse {bi.sse:.2f} vs plain {cl.sse:.2f}")

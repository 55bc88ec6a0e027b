"""Small random corpora for property tests."""

import numpy as np

from bibrank.ingest import Corpus, PublicationRecord

KEYWORDS = tuple(f"kw{i}" for i in range(12))
REFERENCES = tuple(f"Author{i}, {1990 + i % 25}" for i in range(40))
COUNTRIES = ("Brazil", "China", "India", "Spain", "United States")


def random_corpus(rng: np.random.Generator, n_docs: int | None = None) -> Corpus:
    n = int(rng.integers(1, 31)) if n_docs is None else n_docs
    recs = []
    for i in range(n):
        kws = rng.choice(KEYWORDS, size=int(rng.integers(0, 6)), replace=False)
        ikws = rng.choice(KEYWORDS, size=int(rng.integers(0, 4)), replace=False)
        # skewed reference pool so some references are shared often
        p = 1.0 / np.arange(1, len(REFERENCES) + 1)
        refs = rng.choice(REFERENCES, size=int(rng.integers(0, 9)), replace=False, p=p / p.sum())
        ctry = rng.choice(COUNTRIES, size=int(rng.integers(0, 3)), replace=False)
        recs.append(
            PublicationRecord(
                id=f"d{i}",
                title=f"title {i}",
                year=int(rng.integers(2005, 2018)),
                authors=("Doe, J.",),
                countries=tuple(str(c) for c in ctry),
                author_keywords=tuple(str(k) for k in kws),
                indexed_keywords=tuple(str(k) for k in ikws),
                references=tuple(str(r) for r in refs),
                citation_count=int(rng.integers(0, 20)),
            )
        )
    return Corpus(tuple(recs))

"""Term-document matrices, tf-idf weighting and k-means document clustering.

Stemming is rule driven: a wildcard rule ``priva* priva`` maps every token
starting with ``priva`` to the canonical term ``priva``. When several rules
match, the longest pattern wins.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .ingest import Corpus, InputError

__all__ = [
    "TermDocMatrix",
    "WildcardRule",
    "Clustering",
    "Split",
    "load_stopwords",
    "load_rules",
    "default_stopwords",
    "default_rules",
    "tokenize_text",
    "tokenize",
    "tfidf",
    "kmeans",
    "bisecting_kmeans",
]


@dataclass(frozen=True)
class WildcardRule:
    pattern: str
    canonical: str

    def __post_init__(self):
        if not self.pattern.endswith("*") or len(self.pattern) < 4:
            raise ValueError(f"wildcard pattern {self.pattern!r} must end in '*' and have >= 3 leading characters")
        if "*" in self.pattern[:-1]:
            raise ValueError(f"only a trailing '*' is supported: {self.pattern!r}")
        if not self.canonical:
            raise ValueError("canonical term must be non-empty")

    @property
    def prefix(self) -> str:
        return self.pattern[:-1]


@dataclass(frozen=True)
class TermDocMatrix:
    terms: tuple[str, ...]
    doc_ids: tuple[str, ...]
    values: np.ndarray  # docs x terms
    weighting: str = "raw_tf"

    def __post_init__(self):
        if self.values.shape != (len(self.doc_ids), len(self.terms)):
            raise ValueError("values shape does not match doc_ids x terms")
        if np.any(self.values < 0):
            raise ValueError("term weights must be non-negative")
        if len(set(self.terms)) != len(self.terms):
            raise ValueError("duplicate terms")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def column(self, term: str) -> np.ndarray:
        return self.values[:, self.terms.index(term)]

    def row(self, doc_id: str) -> dict[str, float]:
        r = self.values[self.doc_ids.index(doc_id)]
        return {t: float(v) for t, v in zip(self.terms, r) if v}


@dataclass(frozen=True)
class Split:
    parent: int  # cluster label that was split
    child: int  # new label given to the second half
    parent_sse: float
    sizes: tuple[int, int]


@dataclass(frozen=True)
class Clustering:
    k: int
    assignments: dict[str, int]
    centroids: np.ndarray
    sse: float
    seed: int
    iterations: int
    sse_history: tuple[float, ...] = ()
    tree: tuple[Split, ...] = field(default=())

    def members(self, label: int) -> list[str]:
        return [d for d, c in self.assignments.items() if c == label]

    def summary(self) -> dict:
        return {"k": self.k, "seed": self.seed, "sse": self.sse, "iterations": self.iterations}


def load_stopwords(path: str | Path) -> frozenset[str]:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"stopword file not found: {path}")
    words = (w.strip().lower() for w in path.read_text(encoding="utf-8").splitlines())
    return frozenset(w for w in words if w and not w.startswith("#"))


def load_rules(path: str | Path) -> list[WildcardRule]:
    """Read ``pattern canonical`` lines (``#`` starts a comment)."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"wildcard rules file not found: {path}")
    rules = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"{path}:{lineno}: expected 'pattern canonical'")
        try:
            rules.append(WildcardRule(parts[0].lower(), parts[1].lower()))
        except ValueError as e:
            raise InputError(f"{path}:{lineno}: {e}") from None
    return rules


def default_stopwords() -> frozenset[str]:
    with resources.as_file(resources.files("bibrank") / "data" / "stopwords_en.txt") as p:
        return load_stopwords(p)


def default_rules() -> list[WildcardRule]:
    with resources.as_file(resources.files("bibrank") / "data" / "wildcards.txt") as p:
        return load_rules(p)


_JOINERS = re.compile(r"(?<=[a-z])['’-](?=[a-z])")
_NON_LETTERS = re.compile(r"[^a-z\s]+")


def _ordered_rules(rules: Iterable[WildcardRule]) -> list[WildcardRule]:
    ordered = sorted(rules, key=lambda r: (-len(r.prefix), r.prefix))
    for rule in ordered:
        if _apply_rules(rule.canonical, ordered) != rule.canonical:
            raise ValueError(f"canonical term {rule.canonical!r} is rewritten by another rule")
    return ordered


def _apply_rules(token: str, ordered: Sequence[WildcardRule]) -> str:
    for rule in ordered:
        if token.startswith(rule.prefix):
            return rule.canonical
    return token


def tokenize_text(
    text: str,
    stopwords: frozenset[str] | set[str] = frozenset(),
    rules: Iterable[WildcardRule] = (),
    *,
    min_length: int = 3,
) -> list[str]:
    """Lowercase, strip punctuation and digits, drop stopwords and short tokens, apply rules.

    Intra-word hyphens and apostrophes are removed ("privacy-preserving"
    becomes "privacypreserving"); any other non-letter splits tokens.
    """
    ordered = _ordered_rules(rules)
    text = _JOINERS.sub("", text.lower())
    text = _NON_LETTERS.sub(" ", text)
    out = []
    for tok in text.split():
        if len(tok) < min_length or tok in stopwords:
            continue
        out.append(_apply_rules(tok, ordered))
    return out


def _document_text(rec) -> str:
    return " ".join([rec.title, rec.abstract, *rec.author_keywords, *rec.indexed_keywords])


def tokenize(
    corpus: Corpus,
    stopwords: Iterable[str] = (),
    rules: Iterable[WildcardRule] = (),
    *,
    min_length: int = 3,
) -> TermDocMatrix:
    """Raw term-frequency matrix over title, abstract and keywords.

    Terms are sorted alphabetically; only terms occurring somewhere are kept,
    so no column is all-zero. Documents with no surviving token get a zero row.
    """
    stop = frozenset(w.lower() for w in stopwords)
    ordered = _ordered_rules(rules)
    docs = [tokenize_text(_document_text(r), stop, ordered, min_length=min_length) for r in corpus]
    terms = sorted({t for d in docs for t in d})
    index = {t: j for j, t in enumerate(terms)}
    values = np.zeros((len(docs), len(terms)))
    for i, toks in enumerate(docs):
        for t in toks:
            values[i, index[t]] += 1
    return TermDocMatrix(tuple(terms), tuple(r.id for r in corpus), values, "raw_tf")


def tfidf(m: TermDocMatrix, *, smooth: bool = False, keep_zero_columns: bool = False) -> TermDocMatrix:
    """Weight raw counts by ln(N / df).

    Terms present in every document get idf 0 and are pruned unless
    ``keep_zero_columns`` is set. ``smooth`` uses ln(N / (1 + df)) + 1.
    """
    if m.weighting != "raw_tf":
        raise ValueError("tfidf expects a raw term-frequency matrix")
    n = m.values.shape[0]
    if n == 0:
        raise ValueError("tfidf needs at least one document")
    if n == 1:
        warnings.warn("single-document corpus: every idf is 0", stacklevel=2)
    df = (m.values > 0).sum(axis=0)
    idf = np.log(n / (1 + df)) + 1 if smooth else np.log(n / df)
    w = m.values * idf
    keep = np.ones(len(m.terms), dtype=bool) if keep_zero_columns else np.any(w > 0, axis=0)
    w = np.where(w < 0, 0.0, w)  # smoothed idf can dip below 0 for terms in every document
    return TermDocMatrix(
        tuple(t for t, k in zip(m.terms, keep) if k),
        m.doc_ids,
        w[:, keep],
        "tfidf",
    )


def _l2_rows(x: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    return np.divide(x, norms, out=np.zeros_like(x, dtype=float), where=norms > 0)


def _sq_dists(x: np.ndarray, c: np.ndarray) -> np.ndarray:
    return ((x[:, None, :] - c[None, :, :]) ** 2).sum(axis=2)


def _initial_centroids(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k seeded-random documents, preferring distinct vectors.

    Rows equal to 12 decimals count as the same vector, so documents that
    differ only by normalization round-off are not seeded twice.
    """
    picked: list[int] = []
    seen: set[bytes] = set()
    keys = np.round(x, 12) + 0.0  # + 0.0 folds -0.0 into 0.0
    order = rng.permutation(len(x))
    for i in order:
        key = keys[i].tobytes()
        if key not in seen:
            seen.add(key)
            picked.append(int(i))
            if len(picked) == k:
                break
    for i in order:  # fewer distinct rows than k
        if len(picked) == k:
            break
        if int(i) not in picked:
            picked.append(int(i))
    return x[picked].copy()


def _fill_empty(x: np.ndarray, labels: np.ndarray, centroids: np.ndarray) -> None:
    """Give each empty cluster the point farthest from its centroid among clusters with >1 member."""
    k = len(centroids)
    for j in range(k):
        if np.any(labels == j):
            continue
        sizes = np.bincount(labels, minlength=k)
        d = ((x - centroids[labels]) ** 2).sum(axis=1)
        d[sizes[labels] < 2] = -1.0
        i = int(np.argmax(d))
        labels[i] = j
        centroids[j] = x[i]


def _lloyd(x: np.ndarray, k: int, seed: int, max_iter: int) -> tuple[np.ndarray, np.ndarray, list[float], int]:
    rng = np.random.default_rng(seed)
    centroids = _initial_centroids(x, k, rng)
    labels = np.full(len(x), -1)
    history: list[float] = []
    it = 0
    for it in range(1, max_iter + 1):
        d = _sq_dists(x, centroids)
        new = d.argmin(axis=1)
        if it > 1:
            # keep the current cluster on exact ties so the fixpoint test is stable
            cur = d[np.arange(len(x)), labels]
            new = np.where(cur <= d[np.arange(len(x)), new], labels, new)
        _fill_empty(x, new, centroids)
        changed = not np.array_equal(new, labels)
        labels = new
        centroids = np.array([x[labels == j].mean(axis=0) for j in range(k)])
        history.append(float(((x - centroids[labels]) ** 2).sum()))
        if not changed:
            break
    return labels, centroids, history, it


def _check_input(m: TermDocMatrix, k: int, max_iter: int) -> None:
    n, t = m.values.shape
    if n == 0 or t == 0:
        raise ValueError("cannot cluster an empty matrix")
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must be between 1 and the number of documents ({n})")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")


def kmeans(m: TermDocMatrix, k: int, seed: int = 0, max_iter: int = 100) -> Clustering:
    """Lloyd's k-means on L2-normalized document rows.

    Initial centroids are k documents drawn with ``numpy.random.default_rng(seed)``.
    Iterates until assignments stop changing or ``max_iter`` is reached;
    ``sse_history`` holds the within-cluster sum of squares after each update.
    """
    _check_input(m, k, max_iter)
    x = _l2_rows(m.values)
    labels, centroids, history, it = _lloyd(x, k, seed, max_iter)
    return Clustering(
        k=k,
        assignments={d: int(c) for d, c in zip(m.doc_ids, labels)},
        centroids=centroids,
        sse=history[-1],
        seed=seed,
        iterations=it,
        sse_history=tuple(history),
    )


def bisecting_kmeans(m: TermDocMatrix, k: int, seed: int = 0, max_iter: int = 100) -> Clustering:
    """Top-down hierarchical clustering by repeated 2-means splits.

    The cluster with the largest SSE (that has at least two documents) is
    split until there are k clusters. The first half keeps the parent's
    label, the second gets the next free label; ``tree`` records each split.
    """
    _check_input(m, k, max_iter)
    x = _l2_rows(m.values)
    labels = np.zeros(len(x), dtype=int)
    tree: list[Split] = []
    iterations = 0

    def sse_of(j):
        pts = x[labels == j]
        return float(((pts - pts.mean(axis=0)) ** 2).sum())

    while labels.max() + 1 < k:
        current = labels.max() + 1
        candidates = [(sse_of(j), -j) for j in range(current) if (labels == j).sum() >= 2]
        parent_sse, neg_j = max(candidates)
        parent = -neg_j
        idx = np.flatnonzero(labels == parent)
        sub, _, _, it = _lloyd(x[idx], 2, seed, max_iter)
        iterations += it
        labels[idx[sub == 1]] = current
        tree.append(Split(parent, int(current), parent_sse, (int((sub == 0).sum()), int((sub == 1).sum()))))

    centroids = np.array([x[labels == j].mean(axis=0) for j in range(k)])
    sse = float(((x - centroids[labels]) ** 2).sum())
    return Clustering(
        k=k,
        assignments={d: int(c) for d, c in zip(m.doc_ids, labels)},
        centroids=centroids,
        sse=sse,
        seed=seed,
        iterations=iterations,
        sse_history=(sse,),
        tree=tuple(tree),
    )

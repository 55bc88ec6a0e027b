"""Keyword co-occurrence, bibliographic coupling and co-citation networks."""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from .ingest import Corpus

__all__ = [
    "WeightedGraph",
    "GRAPH_KINDS",
    "keyword_cooccurrence",
    "association_strength",
    "bibliographic_coupling",
    "cocitation",
    "avg_normalized_citations",
    "normalize_reference",
]

GRAPH_KINDS = ("cooccurrence", "coupling", "cocitation")


@dataclass
class WeightedGraph:
    """Undirected weighted graph with weighted nodes.

    Edge keys are stored as sorted pairs, so ``(a, b)`` and ``(b, a)`` are
    the same edge. Node order is insertion order.
    """

    kind: str
    nodes: dict[str, float] = field(default_factory=dict)
    edges: dict[tuple[str, str], float] = field(default_factory=dict)
    attrs: dict[str, dict] = field(default_factory=dict)
    normalized: str | None = None

    def __post_init__(self):
        if self.kind not in GRAPH_KINDS:
            raise ValueError(f"unknown graph kind {self.kind!r}")

    def add_edge(self, a: str, b: str, weight: float) -> None:
        if a == b:
            raise ValueError(f"self-loop on {a!r}")
        if a not in self.nodes or b not in self.nodes:
            raise KeyError(f"edge ({a!r}, {b!r}) references an unknown node")
        self.edges[_pair(a, b)] = weight

    def weight(self, a: str, b: str) -> float:
        return self.edges.get(_pair(a, b), 0.0)

    def neighbors(self, a: str) -> list[str]:
        return [v if u == a else u for u, v in self.edges if a in (u, v)]

    def degree(self, a: str) -> int:
        return len(self.neighbors(a))

    def without_isolates(self) -> "WeightedGraph":
        linked = {n for e in self.edges for n in e}
        return WeightedGraph(
            self.kind,
            {k: w for k, w in self.nodes.items() if k in linked},
            dict(self.edges),
            {k: a for k, a in self.attrs.items() if k in linked},
            self.normalized,
        )

    def top_nodes(self, n: int) -> list[str]:
        """Keys of the ``n`` heaviest nodes (ties by key)."""
        return [k for k, _ in sorted(self.nodes.items(), key=lambda kv: (-kv[1], kv[0]))[:n]]

    def restrict(self, keep: Iterable[str]) -> "WeightedGraph":
        keep = set(keep)
        return WeightedGraph(
            self.kind,
            {k: w for k, w in self.nodes.items() if k in keep},
            {e: w for e, w in self.edges.items() if e[0] in keep and e[1] in keep},
            {k: a for k, a in self.attrs.items() if k in keep},
            self.normalized,
        )

    def is_subgraph_of(self, other: "WeightedGraph") -> bool:
        return set(self.nodes) <= set(other.nodes) and set(self.edges) <= set(other.edges)

    def adjacency(self) -> tuple[list[str], np.ndarray]:
        """Symmetric weighted adjacency matrix in node order."""
        keys = list(self.nodes)
        index = {k: i for i, k in enumerate(keys)}
        a = np.zeros((len(keys), len(keys)))
        for (u, v), w in self.edges.items():
            a[index[u], index[v]] = a[index[v], index[u]] = w
        return keys, a

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph(kind=self.kind)
        for k, w in self.nodes.items():
            g.add_node(k, weight=float(w), **self.attrs.get(k, {}))
        for (u, v), w in self.edges.items():
            g.add_edge(u, v, weight=float(w))
        return g


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def _pair_counts(groups: Iterable[Iterable[str]]) -> Counter:
    """Number of groups containing each unordered pair of members."""
    counts: Counter = Counter()
    for g in groups:
        counts.update(combinations(sorted(set(g)), 2))
    return counts


def keyword_cooccurrence(corpus: Corpus, min_occurrences: int = 1, source: str = "author") -> WeightedGraph:
    """Keyword network: node weight = documents with the keyword, edge weight = documents with both.

    ``source`` picks the keyword field (``"author"`` or ``"indexed"``); the
    two are never merged. Keywords below ``min_occurrences`` are removed
    before edges are counted.
    """
    if min_occurrences < 1:
        raise ValueError("min_occurrences must be >= 1")
    fields = {"author": "author_keywords", "indexed": "indexed_keywords"}
    if source not in fields:
        raise ValueError(f"source must be one of {sorted(fields)}")
    docs = [set(getattr(r, fields[source])) for r in corpus]
    occurrences = Counter(k for d in docs for k in d)
    keep = {k for k, c in occurrences.items() if c >= min_occurrences}
    g = WeightedGraph("cooccurrence")
    for k, c in sorted(occurrences.items(), key=lambda kv: (-kv[1], kv[0])):
        if k in keep:
            g.nodes[k] = c
    for (a, b), c in sorted(_pair_counts(d & keep for d in docs).items()):
        g.edges[(a, b)] = c
    return g


def association_strength(graph: WeightedGraph) -> WeightedGraph:
    """Replace co-occurrence counts c_ab by c_ab / (s_a * s_b).

    s is the node occurrence count. The edge set and node weights are kept.
    """
    if graph.kind != "cooccurrence":
        raise ValueError("association strength applies to co-occurrence graphs")
    if graph.normalized:
        raise ValueError(f"graph is already normalized ({graph.normalized})")
    edges = {}
    for (a, b), c in graph.edges.items():
        sa, sb = graph.nodes[a], graph.nodes[b]
        if sa <= 0 or sb <= 0:
            raise RuntimeError(f"edge ({a!r}, {b!r}) has an endpoint with zero occurrences")
        edges[(a, b)] = c / (sa * sb)
    return WeightedGraph(graph.kind, dict(graph.nodes), edges, dict(graph.attrs), "association_strength")


_WS = re.compile(r"\s+")


def normalize_reference(ref: str) -> str:
    return _WS.sub(" ", ref).strip().lower()


def bibliographic_coupling(
    corpus: Corpus,
    unit: str = "document",
    min_weight: int = 1,
    *,
    min_doc_citations: int = 0,
) -> WeightedGraph:
    """Coupling network: edge weight = number of shared references.

    ``unit="document"`` links documents; ``unit="country"`` pools each
    country's references (as a set) before intersecting. Documents cited
    fewer than ``min_doc_citations`` times are left out first. Node weight
    is the reference count (documents) or document count (countries).
    """
    if unit not in ("document", "country"):
        raise ValueError("unit must be 'document' or 'country'")
    docs = [r for r in corpus if r.citation_count >= min_doc_citations]
    refsets: dict[str, set[str]] = {}
    g = WeightedGraph("coupling")
    if unit == "document":
        for r in docs:
            refsets[r.id] = {normalize_reference(x) for x in r.references}
            g.nodes[r.id] = len(refsets[r.id])
            g.attrs[r.id] = {"label": r.title, "year": r.year}
    else:
        ndocs: Counter = Counter()
        for r in docs:
            for c in r.countries:
                refsets.setdefault(c, set()).update(normalize_reference(x) for x in r.references)
                ndocs[c] += 1
        for c in sorted(refsets, key=lambda c: (-ndocs[c], c)):
            g.nodes[c] = ndocs[c]

    citing: dict[str, list[str]] = defaultdict(list)
    for key, refs in refsets.items():
        for ref in refs:
            citing[ref].append(key)
    shared = _pair_counts(citing.values())
    for pair, w in sorted(shared.items()):
        if w >= min_weight:
            g.edges[pair] = w
    return g


def cocitation(corpus: Corpus, min_cocitations: int = 3) -> WeightedGraph:
    """Co-citation network over cited references.

    Node weight is how many corpus documents cite the reference; edge weight
    is how many cite both. Edges below ``min_cocitations`` are dropped; nodes
    are kept (use :meth:`WeightedGraph.without_isolates` to prune them).
    """
    if min_cocitations < 1:
        raise ValueError("min_cocitations must be >= 1")
    reflists = [{normalize_reference(x) for x in r.references} for r in corpus]
    counts = Counter(ref for refs in reflists for ref in refs)
    g = WeightedGraph("cocitation")
    for ref, c in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
        g.nodes[ref] = c
    for pair, w in sorted(_pair_counts(reflists).items()):
        if w >= min_cocitations:
            g.edges[pair] = w
    return g


def avg_normalized_citations(corpus: Corpus, *, exclude_uncited: bool = False) -> dict[str, float]:
    """Mean year-normalized citation score per country.

    Each document's citations are divided by the mean citations of all
    corpus documents from the same year (0 when that mean is 0); a
    country's score averages its documents. ``exclude_uncited`` drops
    uncited documents before any averaging.
    """
    docs = [r for r in corpus if not exclude_uncited or r.citation_count > 0]
    by_year: dict[int, list[int]] = defaultdict(list)
    for r in docs:
        by_year[r.year].append(r.citation_count)
    year_mean = {y: float(np.mean(v)) for y, v in by_year.items()}
    per_country: dict[str, list[float]] = defaultdict(list)
    for r in docs:
        mean = year_mean[r.year]
        score = r.citation_count / mean if mean > 0 else 0.0
        for c in r.countries:
            per_country[c].append(score)
    return {c: float(np.mean(v)) for c, v in sorted(per_country.items())}

"""Graph and matrix writers for external renderers and analysis tools."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np
from scipy import io as sio
from scipy import sparse

from .graphs import WeightedGraph

__all__ = [
    "write_graph",
    "write_dot",
    "write_graphml",
    "write_pajek",
    "write_matrix_market",
    "read_matrix_market",
    "write_clustering",
    "write_summary",
]


def _num(w: float) -> str:
    w = float(w)
    return str(int(w)) if w.is_integer() else repr(w)


def _dot_quote(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_dot(graph: WeightedGraph, path: str | Path) -> Path:
    path = Path(path)
    lines = [f"graph {_dot_quote(graph.kind)} {{"]
    for k, w in graph.nodes.items():
        extra = "".join(f", {a}={_dot_quote(v)}" for a, v in sorted(graph.attrs.get(k, {}).items()) if a != "weight")
        lines.append(f"  {_dot_quote(k)} [weight={_num(w)}{extra}];")
    for (a, b), w in graph.edges.items():
        lines.append(f"  {_dot_quote(a)} -- {_dot_quote(b)} [weight={_num(w)}];")
    lines.append("}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_graphml(graph: WeightedGraph, path: str | Path) -> Path:
    import networkx as nx

    path = Path(path)
    nx.write_graphml(graph.to_networkx(), path)
    return path


def write_pajek(graph: WeightedGraph, path: str | Path) -> Path:
    """Pajek ``.net``: 1-based vertex list and weighted edge list."""
    path = Path(path)
    index = {k: i for i, k in enumerate(graph.nodes, 1)}
    lines = [f"*Vertices {len(index)}"]
    lines += [f"{i} {_dot_quote(k)}" for k, i in index.items()]
    lines.append("*Edges")
    lines += [f"{index[a]} {index[b]} {_num(w)}" for (a, b), w in graph.edges.items()]
    path.write_text("\r\n".join(lines) + "\r\n", encoding="utf-8")
    return path


_WRITERS = {".dot": write_dot, ".gv": write_dot, ".graphml": write_graphml, ".net": write_pajek}


def write_graph(graph: WeightedGraph, path: str | Path) -> Path:
    """Write ``graph`` in the format implied by the file extension."""
    path = Path(path)
    try:
        writer = _WRITERS[path.suffix.lower()]
    except KeyError:
        raise ValueError(f"unsupported graph format {path.suffix!r}; use .dot, .graphml or .net") from None
    return writer(graph, path)


def write_matrix_market(values: np.ndarray, terms, doc_ids, path: str | Path) -> tuple[Path, Path]:
    """MatrixMarket coordinate file plus a ``.index.csv`` sidecar naming rows and columns."""
    path = Path(path)
    sio.mmwrite(str(path), sparse.coo_matrix(np.asarray(values)), field="real", precision=17)
    mtx = path if path.suffix == ".mtx" else path.with_name(path.name + ".mtx")
    sidecar = mtx.with_suffix(".index.csv")
    with sidecar.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["axis", "position", "key"])
        w.writerows(("doc", i + 1, d) for i, d in enumerate(doc_ids))
        w.writerows(("term", j + 1, t) for j, t in enumerate(terms))
    return mtx, sidecar


def read_matrix_market(path: str | Path) -> tuple[np.ndarray, list[str], list[str]]:
    path = Path(path)
    values = sio.mmread(str(path))
    values = values.toarray() if sparse.issparse(values) else np.asarray(values)
    terms, docs = [], []
    with path.with_suffix(".index.csv").open(newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            (docs if row["axis"] == "doc" else terms).append(row["key"])
    return values, terms, docs


def write_clustering(assignments: dict[str, int], path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["doc_id", "cluster"])
        w.writerows(assignments.items())
    return path


def write_summary(summary: dict, path: str | Path) -> Path:
    """Key-value run summary as sorted JSON."""
    path = Path(path)
    path.write_text(json.dumps(summary, indent=2, sort_keys=True, default=_jsonable) + "\n", encoding="utf-8")
    return path


def _jsonable(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, Path):
        return str(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")

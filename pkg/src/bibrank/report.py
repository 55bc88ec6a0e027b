"""Combined indicator + TOPSIS + VIKOR ranking table."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

from .indicators import INDICATOR_COLUMNS, CountryIndicators, format_indicator_row
from .mcdm import TopsisResult, VikorResult, dense_ranks

__all__ = ["RANK_COLUMNS", "ranking_rows", "write_ranking_report", "read_ranking_report"]

RANK_COLUMNS = ("T.s", "T.r", "V.S", "V.R", "V.Q", "V.r")


def ranking_rows(
    rows: Sequence[CountryIndicators],
    t: TopsisResult,
    v: VikorResult,
    decimals: int = 3,
) -> list[list[str]]:
    """Display rows in indicator order for countries ranked by both methods.

    Trailing ``T.dense``/``V.dense`` columns give equal ranks to scores that
    tie at display precision.
    """
    t_dense = dense_ranks(t.closeness, descending=True, decimals=decimals)
    v_dense = dense_ranks(v.Q, descending=False, decimals=decimals)
    ti = {a: i for i, a in enumerate(t.alternatives)}
    vi = {a: i for i, a in enumerate(v.alternatives)}
    f = f"{{:.{decimals}f}}".format
    out = []
    for r in rows:
        if r.country not in ti or r.country not in vi:
            continue
        i, j = ti[r.country], vi[r.country]
        out.append(
            [
                r.country,
                *format_indicator_row(r, decimals),
                f(t.closeness[i]),
                str(t.rank[i]),
                f(v.S[j]),
                f(v.R[j]),
                f(v.Q[j]),
                str(v.rank[j]),
                str(t_dense[i]),
                str(v_dense[j]),
            ]
        )
    return out


def write_ranking_report(
    rows: Sequence[CountryIndicators],
    t: TopsisResult,
    v: VikorResult,
    path: str | Path,
    decimals: int = 3,
) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["Country", *INDICATOR_COLUMNS, *RANK_COLUMNS, "T.dense", "V.dense"])
        w.writerows(ranking_rows(rows, t, v, decimals))
    return path


def read_ranking_report(path: str | Path) -> list[dict[str, str]]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))

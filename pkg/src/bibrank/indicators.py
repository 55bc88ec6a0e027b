"""Per-country and per-author research production indicators."""

from __future__ import annotations

import csv
import math
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .ingest import Corpus, InputError, normalize_country

__all__ = [
    "CountryIndicators",
    "YearSeries",
    "INDICATOR_COLUMNS",
    "country_indicators",
    "consistency_issues",
    "apgr",
    "year_series",
    "author_production",
    "read_sis",
    "read_indicator_table",
    "write_indicator_table",
    "format_indicator_row",
]

# display order of the indicator half of the country ranking table
INDICATOR_COLUMNS = ("Pub", "Cites", "CPP", "Std.Dev", "NCP", "Max.Cites", "Pub.SIS", "SIS")


@dataclass(frozen=True)
class CountryIndicators:
    country: str
    pub: float
    cites: float
    cpp: float
    std_dev: float
    ncp: float
    max_cites: int
    sis: int | None = None
    degenerate_sd: bool = False
    pub_per_sis_override: float | None = field(default=None, compare=False, repr=False)

    @property
    def pub_per_sis(self) -> float | None:
        if self.pub_per_sis_override is not None:
            return self.pub_per_sis_override
        if self.sis is None or self.sis == 0:
            return None
        return self.pub / self.sis

    def value(self, column: str) -> float | None:
        """Look up an indicator by its table column name (``"CPP"``, ``"SIS"``...)."""
        return {
            "Pub": self.pub,
            "Cites": self.cites,
            "CPP": self.cpp,
            "Std.Dev": self.std_dev,
            "NCP": self.ncp,
            "Max.Cites": self.max_cites,
            "Pub.SIS": self.pub_per_sis,
            "SIS": self.sis,
        }[column]


@dataclass(frozen=True)
class YearSeries:
    label: str
    counts: Mapping[int, float]

    def __post_init__(self):
        if any(v < 0 for v in self.counts.values()):
            raise ValueError("year counts must be non-negative")


def _sample_sd(values: list[int]) -> float:
    if len(values) < 2:
        return 0.0
    # sorted so the result does not depend on record order
    return float(np.std(sorted(values), ddof=1))


def country_indicators(
    corpus: Corpus,
    external: Mapping[str, int] | None = None,
    *,
    fractional: bool = False,
) -> list[CountryIndicators]:
    """Aggregate citation indicators for every country in ``corpus``.

    A paper with affiliations in k countries counts once for each of them
    (full counting). With ``fractional=True`` it adds 1/k to each country's
    ``pub`` and c/k to its ``cites``; NCP becomes the weighted share of
    uncited papers and ``std_dev`` stays the unweighted sample SD.

    Countries without an entry in ``external`` get ``sis=None`` and a
    warning. Rows are sorted by pub, then cites, both descending.
    """
    if len(corpus) == 0:
        raise ValueError("corpus is empty")
    sis_lookup = {k.casefold(): v for k, v in (external or {}).items()}
    per_country: dict[str, list[tuple[int, float]]] = defaultdict(list)
    for rec in corpus:
        if not rec.countries:
            continue
        share = 1.0 / len(rec.countries) if fractional else 1.0
        for c in rec.countries:
            per_country[c].append((rec.citation_count, share))

    rows = []
    missing = []
    for country, papers in per_country.items():
        cites_list = [c for c, _ in papers]
        pub = math.fsum(s for _, s in papers)
        cites = math.fsum(c * s for c, s in papers)
        uncited = math.fsum(s for c, s in papers if c == 0)
        if not fractional:
            pub, cites, uncited = int(round(pub)), int(round(cites)), int(round(uncited))
        sis = sis_lookup.get(country.casefold())
        if external is not None and sis is None:
            missing.append(country)
        rows.append(
            CountryIndicators(
                country=country,
                pub=pub,
                cites=cites,
                cpp=cites / pub,
                std_dev=_sample_sd(cites_list),
                ncp=uncited / pub,
                max_cites=max(cites_list),
                sis=sis,
                degenerate_sd=len(papers) < 2,
            )
        )
    if missing:
        warnings.warn(f"no SIS value for {sorted(missing)}; rows will be excluded from ranking", stacklevel=2)
    rows.sort(key=lambda r: (-r.pub, -r.cites, r.country))
    return rows


def consistency_issues(row: CountryIndicators, tol: float = 5e-4) -> list[str]:
    """Report derived columns that do not follow from the counts.

    Useful for indicator tables typed in from print, where CPP, NCP or
    Pub.SIS may have been computed from different counts than shown.
    """
    issues = []
    if row.pub > 0 and abs(row.cites / row.pub - row.cpp) > tol:
        issues.append(f"CPP {row.cpp:.3f} != Cites/Pub {row.cites / row.pub:.3f}")
    k = row.ncp * row.pub
    if abs(k - round(k)) > row.pub * tol + 1e-9:
        issues.append(f"NCP*Pub = {k:.3f} is not a whole number of papers")
    if row.max_cites > row.cites:
        issues.append("Max.Cites exceeds Cites")
    if row.pub_per_sis_override is not None and row.sis:
        if abs(row.pub / row.sis - row.pub_per_sis_override) > tol + 1e-12:
            issues.append(f"Pub.SIS {row.pub_per_sis_override:.3f} != Pub/SIS {row.pub / row.sis:.3f}")
    return issues


def apgr(series: YearSeries, start_year: int, end_year: int) -> float:
    """Annual percentage growth rate between two years, compounded yearly."""
    if end_year <= start_year:
        raise ValueError("end_year must be after start_year")
    first = series.counts.get(start_year, 0)
    last = series.counts.get(end_year, 0)
    if first <= 0:
        raise ValueError(f"no publications in {start_year}: growth base undefined")
    if last <= 0:
        raise ValueError(f"no publications in {end_year}")
    return 100.0 * ((last / first) ** (1.0 / (end_year - start_year)) - 1.0)


def year_series(corpus: Corpus, label: str = "all") -> YearSeries:
    """Publications per year over the contiguous year range of ``corpus``."""
    years = [r.year for r in corpus]
    if not years:
        return YearSeries(label, {})
    counts = {y: 0 for y in range(min(years), max(years) + 1)}
    for y in years:
        counts[y] += 1
    return YearSeries(label, counts)


def author_production(corpus: Corpus) -> list[tuple[str, int, int]]:
    """(author, publications, total citations), most productive first."""
    pubs: dict[str, int] = defaultdict(int)
    cites: dict[str, int] = defaultdict(int)
    for rec in corpus:
        for a in dict.fromkeys(rec.authors):
            pubs[a] += 1
            cites[a] += rec.citation_count
    return sorted(((a, pubs[a], cites[a]) for a in pubs), key=lambda t: (-t[1], -t[2], t[0]))


def read_sis(path: str | Path) -> dict[str, int]:
    """Read a two-column ``country,sis`` file (header optional)."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"SIS file not found: {path}")
    out: dict[str, int] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 2:
                raise InputError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
            name, value = row[0].strip(), row[1].strip()
            try:
                out[normalize_country(name)] = int(float(value))
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise InputError(f"{path}:{lineno}: bad SIS value {value!r}") from None
    return out


def format_indicator_row(row: CountryIndicators, decimals: int = 3) -> list[str]:
    """Display strings for :data:`INDICATOR_COLUMNS`; counts print as integers."""
    count_cols = {"Pub", "Cites", "Max.Cites", "SIS"}
    out = []
    for col in INDICATOR_COLUMNS:
        v = row.value(col)
        if v is None:
            out.append("")
        elif col in count_cols and float(v).is_integer():
            out.append(str(int(v)))
        else:
            out.append(f"{float(v):.{decimals}f}")
    return out


def write_indicator_table(rows: Iterable[CountryIndicators], path: str | Path, decimals: int = 3) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["Country", *INDICATOR_COLUMNS])
        for r in rows:
            w.writerow([r.country, *format_indicator_row(r, decimals)])
    return path


def _num(s: str) -> float | None:
    s = s.strip()
    if not s:
        return None
    v = float(s)
    return int(v) if v.is_integer() and "." not in s else v


def read_indicator_table(path: str | Path, sis: Mapping[str, int] | None = None) -> list[CountryIndicators]:
    """Load an indicator table written by :func:`write_indicator_table`.

    Values are taken as given (derived columns are not recomputed), so a
    table typed from print round-trips exactly. ``sis`` fills or overrides
    the SIS column; Pub.SIS is then recomputed from it.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f"indicator table not found: {path}")
    lookup = {k.casefold(): v for k, v in (sis or {}).items()}
    rows = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        need = {"Country", "Pub", "Cites", "CPP", "Std.Dev", "NCP", "Max.Cites"}
        if not need <= set(reader.fieldnames or []):
            raise InputError(f"{path}: missing columns {sorted(need - set(reader.fieldnames or []))}")
        for rec in reader:
            country = rec["Country"].strip()
            sis_val = _num(rec.get("SIS") or "")
            override = _num(rec.get("Pub.SIS") or "")
            if country.casefold() in lookup:
                sis_val = lookup[country.casefold()]
                override = None
            pub = _num(rec["Pub"])
            rows.append(
                CountryIndicators(
                    country=country,
                    pub=pub,
                    cites=_num(rec["Cites"]),
                    cpp=float(rec["CPP"]),
                    std_dev=float(rec["Std.Dev"]),
                    ncp=float(rec["NCP"]),
                    max_cites=_num(rec["Max.Cites"]),
                    sis=None if sis_val is None else int(sis_val),
                    degenerate_sd=pub is not None and pub < 2,
                    pub_per_sis_override=None if override is None else float(override),
                )
            )
    return rows

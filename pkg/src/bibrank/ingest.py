"""Parsing, validation and deduplication of exported publication records.

Records come from a delimited export (one row per document). A small
``column=field`` mapping file tells the parser which export column feeds
which record field, so the same code reads Scopus-like, WoS-like or
hand-made tables.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import re
import string
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

__all__ = [
    "FIELDS",
    "DOC_TYPES",
    "InputError",
    "NoValidRecordsError",
    "PublicationRecord",
    "Exclusion",
    "Corpus",
    "load_schema",
    "parse_corpus",
    "dedupe",
    "write_corpus",
    "read_corpus",
    "write_exclusions",
    "read_exclusions",
    "normalize_country",
    "normalize_title",
]

FIELDS = (
    "id",
    "title",
    "abstract",
    "year",
    "doc_type",
    "language",
    "authors",
    "countries",
    "author_keywords",
    "indexed_keywords",
    "references",
    "citation_count",
)
MULTI_VALUED = ("authors", "countries", "author_keywords", "indexed_keywords", "references")
REQUIRED = ("id", "title", "year", "authors")
DOC_TYPES = ("article", "conference_paper", "other")

_DOC_TYPE_ALIASES = {
    "article": "article",
    "ar": "article",
    "conference paper": "conference_paper",
    "conference_paper": "conference_paper",
    "cp": "conference_paper",
}

_LANGUAGE_ALIASES = {"english": "en", "portuguese": "pt", "spanish": "es", "french": "fr",
                     "german": "de", "chinese": "zh", "italian": "it", "japanese": "ja"}


class InputError(ValueError):
    """Raised for unreadable, malformed or otherwise invalid input files."""


class NoValidRecordsError(InputError):
    """Raised when an ingest run yields zero valid records.

    The exclusion report collected so far is kept on ``exclusions``.
    """

    def __init__(self, message: str, exclusions: list["Exclusion"]):
        super().__init__(message)
        self.exclusions = exclusions


@dataclass(frozen=True)
class PublicationRecord:
    id: str
    title: str
    year: int
    authors: tuple[str, ...]
    abstract: str = ""
    doc_type: str = "article"
    language: str = "en"
    countries: tuple[str, ...] = ()
    author_keywords: tuple[str, ...] = ()
    indexed_keywords: tuple[str, ...] = ()
    references: tuple[str, ...] = ()
    citation_count: int = 0

    def __post_init__(self):
        if not self.id:
            raise ValueError("record id must be non-empty")
        if self.citation_count < 0:
            raise ValueError(f"{self.id}: negative citation count")
        if not 1900 <= self.year <= 2100:
            raise ValueError(f"{self.id}: year {self.year} outside [1900, 2100]")
        if any(not c or c != c.strip() for c in self.countries):
            raise ValueError(f"{self.id}: country entries must be non-empty and trimmed")
        if self.doc_type not in DOC_TYPES:
            raise ValueError(f"{self.id}: unknown doc_type {self.doc_type!r}")

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for name in MULTI_VALUED:
            d[name] = list(d[name])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PublicationRecord":
        kw = dict(d)
        for name in MULTI_VALUED:
            kw[name] = tuple(kw.get(name, ()))
        return cls(**kw)


@dataclass(frozen=True)
class Exclusion:
    row: int  # 1-based data row number in the source file, 0 when not file-backed
    id: str
    reason: str
    detail: str = ""


@dataclass(frozen=True)
class Corpus:
    """Immutable collection of validated records.

    Equality compares records only; provenance is informational.
    """

    records: tuple[PublicationRecord, ...]
    source: str = field(default="", compare=False)
    ingested_at: str = field(default="", compare=False)
    exclusions: tuple[Exclusion, ...] = field(default=(), compare=False)

    def __post_init__(self):
        ids = [r.id for r in self.records]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate record ids in corpus")

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def by_id(self, record_id: str) -> PublicationRecord:
        for r in self.records:
            if r.id == record_id:
                return r
        raise KeyError(record_id)


def load_schema(path: str | Path) -> dict[str, str]:
    """Read a ``column name = field`` mapping file.

    Blank lines and ``#`` comments are ignored. The special key ``@separator``
    overrides the intra-cell separator (default ``;``).
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f"schema file not found: {path}")
    mapping: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected 'column = field'")
        column, target = (s.strip() for s in line.split("=", 1))
        if column != "@separator" and target not in FIELDS:
            raise InputError(f"{path}:{lineno}: unknown field {target!r}")
        mapping[column] = target
    missing = set(REQUIRED) - set(mapping.values())
    if missing:
        raise InputError(f"{path}: schema does not map required fields {sorted(missing)}")
    return mapping


_WS = re.compile(r"\s+")


def _clean(s: str) -> str:
    return _WS.sub(" ", s).strip()


def normalize_country(name: str) -> str:
    """Trim and fix the case of an affiliation country name.

    All-caps or all-lowercase names are title-cased; mixed case is kept.
    """
    name = _clean(name)
    if name.isupper() or name.islower():
        name = string.capwords(name)
    return name


def normalize_title(title: str) -> str:
    title = title.lower()
    title = re.sub(r"[^\w\s]", " ", title)
    return _clean(title)


_PLACEHOLDERS = {"[no author name available]", "[anonymous]"}


def _split(cell: str, sep: str) -> list[str]:
    return [p for p in (_clean(x) for x in cell.split(sep)) if p and p.lower() not in _PLACEHOLDERS]


def _unique(items: Iterable[str]) -> tuple[str, ...]:
    return tuple(dict.fromkeys(items))


def _record_from_row(row: dict[str, str], sep: str) -> PublicationRecord:
    """Build a record from a mapped row; raises ``_RowError`` with a reason code."""
    rid = _clean(row.get("id", ""))
    if not rid:
        raise _RowError("missing_id")
    title = _clean(row.get("title", ""))
    if not title:
        raise _RowError("no_title")
    authors = _split(row.get("authors", ""), sep)
    if not authors:
        raise _RowError("no_authors")
    try:
        year = int(_clean(row.get("year", "")))
    except ValueError:
        raise _RowError("bad_year", row.get("year", "")) from None
    if not 1900 <= year <= 2100:
        raise _RowError("bad_year", str(year))
    cites_raw = _clean(row.get("citation_count", "")) or "0"
    try:
        cites = int(cites_raw)
    except ValueError:
        raise _RowError("bad_citation_count", cites_raw) from None
    if cites < 0:
        raise _RowError("bad_citation_count", cites_raw)
    doc_type_raw = _clean(row.get("doc_type", "")).lower()
    doc_type = _DOC_TYPE_ALIASES.get(doc_type_raw, "other" if doc_type_raw else "article")
    lang = _clean(row.get("language", "")).lower() or "en"
    lang = _LANGUAGE_ALIASES.get(lang, lang)
    return PublicationRecord(
        id=rid,
        title=title,
        year=year,
        authors=tuple(authors),
        abstract=_clean(row.get("abstract", "")),
        doc_type=doc_type,
        language=lang,
        countries=_unique(normalize_country(c) for c in _split(row.get("countries", ""), sep)),
        author_keywords=_unique(k.lower() for k in _split(row.get("author_keywords", ""), sep)),
        indexed_keywords=_unique(k.lower() for k in _split(row.get("indexed_keywords", ""), sep)),
        references=tuple(_split(row.get("references", ""), sep)),
        citation_count=cites,
    )


class _RowError(Exception):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(reason)
        self.reason = reason
        self.detail = detail


def parse_corpus(
    path: str | Path,
    schema: dict[str, str] | str | Path,
    *,
    separator: str | None = None,
    require_records: bool = True,
) -> Corpus:
    """Parse a delimited export into a :class:`Corpus`.

    Every row either becomes a record or an :class:`Exclusion` on
    ``corpus.exclusions``; nothing is dropped silently. Raises
    :class:`InputError` for a missing file or a header that lacks mapped
    columns, and :class:`NoValidRecordsError` when no row survives (unless
    ``require_records`` is false).
    """
    path = Path(path)
    if not isinstance(schema, dict):
        schema = load_schema(schema)
    schema = dict(schema)
    sep = separator or schema.pop("@separator", ";")
    schema.pop("@separator", None)
    if not path.is_file():
        raise InputError(f"input file not found: {path}")

    records: list[PublicationRecord] = []
    exclusions: list[Exclusion] = []
    seen: set[str] = set()
    try:
        with path.open(newline="", encoding="utf-8-sig") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            absent = [col for col in schema if col not in header]
            if absent:
                raise InputError(f"{path}: header is missing mapped columns {absent}")
            for rownum, raw in enumerate(reader, 1):
                mapped = {target: raw.get(col) or "" for col, target in schema.items()}
                rid = _clean(mapped.get("id", ""))
                try:
                    rec = _record_from_row(mapped, sep)
                except _RowError as e:
                    exclusions.append(Exclusion(rownum, rid, e.reason, e.detail))
                    continue
                if rec.id in seen:
                    exclusions.append(Exclusion(rownum, rec.id, "duplicate_id"))
                    continue
                seen.add(rec.id)
                records.append(rec)
    except UnicodeDecodeError as e:
        raise InputError(f"{path}: not valid UTF-8 ({e})") from None

    if not records and require_records:
        raise NoValidRecordsError(f"{path}: zero valid rows", exclusions)
    return Corpus(
        records=tuple(records),
        source=str(path),
        ingested_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        exclusions=tuple(exclusions),
    )


def _dedupe_key(rec: PublicationRecord) -> tuple:
    first = rec.authors[0].lower() if rec.authors else ""
    return (normalize_title(rec.title), rec.year, _clean(first))


def dedupe(corpus: Corpus) -> tuple[Corpus, list[Exclusion]]:
    """Collapse records sharing normalized title, year and first author.

    The most cited copy survives (the earliest one on ties) and keeps its
    position of first appearance. Removed ids are reported with reason
    ``duplicate``.
    """
    groups: dict[tuple, list[PublicationRecord]] = {}
    for rec in corpus.records:
        groups.setdefault(_dedupe_key(rec), []).append(rec)
    kept: list[PublicationRecord] = []
    removed: list[Exclusion] = []
    for members in groups.values():
        best = max(members, key=lambda r: r.citation_count)  # max keeps first on ties
        kept.append(best)
        removed.extend(Exclusion(0, r.id, "duplicate", f"kept {best.id}") for r in members if r is not best)
    out = Corpus(
        records=tuple(kept),
        source=corpus.source,
        ingested_at=corpus.ingested_at,
        exclusions=corpus.exclusions + tuple(removed),
    )
    return out, removed


def write_corpus(corpus: Corpus, path: str | Path) -> Path:
    """Write one JSON object per line, keys in field order."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for rec in corpus.records:
            fh.write(json.dumps(rec.to_dict(), ensure_ascii=False) + "\n")
    return path


def read_corpus(path: str | Path) -> Corpus:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"corpus file not found: {path}")
    records = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                records.append(PublicationRecord.from_dict(json.loads(line)))
            except (json.JSONDecodeError, TypeError, ValueError) as e:
                raise InputError(f"{path}:{lineno}: {e}") from None
    return Corpus(records=tuple(records), source=str(path))


def write_exclusions(exclusions: Iterable[Exclusion], path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "row", "reason", "detail"])
        for e in exclusions:
            w.writerow([e.id, e.row, e.reason, e.detail])
    return path


def read_exclusions(path: str | Path) -> list[Exclusion]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        return [Exclusion(int(r["row"]), r["id"], r["reason"], r["detail"]) for r in csv.DictReader(fh)]

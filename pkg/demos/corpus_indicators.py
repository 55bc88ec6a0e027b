"""From an exported record file to per-country indicators and author counts.

Run: python3 demos/corpus_indicators.py
"""

from collections import Counter

from bibrank import data_path
from bibrank.indicators import author_production, country_indicators, format_indicator_row, read_sis, year_series
from bibrank.ingest import dedupe, load_schema, parse_corpus

schema = load_schema(data_path("scopus.map"))
raw = parse_corpus(data_path("corpus_raw.csv"), schema)
print(f"parsed {len(raw)} records, {len(raw.exclusions)} rows excluded")
print("exclusion reasons:", Counter(e.reason for e in raw.exclusions))

corpus, removed = dedupe(raw)
print(f"after de-duplication: {len(corpus)} records ({len(removed)} duplicates dropped)")

years = year_series(corpus)
print("publications per year:", dict(years.counts))

rows = country_indicators(corpus, read_sis(data_path("sis_2015.csv")))
print(f"\n{'country':<16}{'Pub':>5}{'Cites':>7}{'CPP':>9}{'Std.Dev':>9}{'NCP':>7}{'Max':>5}")
for r in rows[:8]:
    pub, cites, cpp, sd, ncp, mx, *_ = format_indicator_row(r)
    print(f"{r.country:<16}{pub:>5}{cites:>7}{cpp:>9}{sd:>9}{ncp:>7}{mx:>5}")

# full counting credits every listed country; fractional counting splits each paper
frac = {r.country: r.pub for r in country_indicators(corpus, fractional=True)}
multi = sum(1 for rec in corpus if len(rec.countries) > 1)
print(f"\n{multi} papers list more than one country")
for r in rows[:5]:
    print(f"{r.country:<16} full {r.pub:>3}   fractional {frac[r.country]:6.2f}")

print("\nmost productive authors:")
for name, n, cites in author_production(corpus)[:5]:
    print(f"  {name:<12} {n} papers, {cites} citations")

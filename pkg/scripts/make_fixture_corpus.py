"""Generate the synthetic 226-record fixture corpus shipped in bibrank/data.

The records are invented, but their aggregates are pinned to published
figures so the indicator and graph code has something real to hit:

* per-country citation lists reproduce the Pub, Cites, Std.Dev, NCP and
  Max.Cites columns of the country table under full counting (the 283
  country-paper slots are folded into 226 records by merging equally cited
  papers from different countries);
* author and indexed keyword frequencies reproduce the top-20 keyword table;
* "Liu, Y." authors 7 records, "Chen, X.", "Ma, J." and "Zhang, L." 5 each.

Two files are written: ``corpus_fixture.csv`` (226 clean rows) and
``corpus_raw.csv`` (the same rows plus 13 author-less rows and 2 lower-cited
duplicates, as a raw export would have them).

Run from the repository root:  python scripts/make_fixture_corpus.py
"""

import csv
from collections import Counter
from pathlib import Path

import numpy as np

SEED = 20180423
OUT = Path(__file__).resolve().parents[1] / "src" / "bibrank" / "data"

DE = [("privacy", 61), ("big data", 41), ("cloud computing", 27), ("security", 25), ("authentication", 17),
      ("access control", 13), ("ubiquitous computing", 13), ("pervasive computing", 12), ("anonymization", 10),
      ("data mining", 8), ("privacy-preserving", 8), ("anonymity", 7), ("cloud", 7), ("encryption", 7),
      ("hadoop", 7), ("privacy preservation", 7), ("confidentiality", 6), ("data anonymization", 6),
      ("homomorphic encryption", 6), ("mapreduce", 6)]
ID = [("data privacy", 92), ("cryptography", 61), ("big data", 46), ("cloud computing", 45),
      ("privacy preserving", 41), ("distributed computer systems", 32), ("digital storage", 29),
      ("ubiquitous computing", 23), ("internet", 22), ("mobile security", 22), ("access control", 21),
      ("security of data", 21), ("security", 20), ("data mining", 18), ("data handling", 17), ("privacy", 17),
      ("security and privacy", 17), ("sensitive informations", 16), ("privacy preservation", 15),
      ("authentication", 14)]
FILLER_KW = ["internet of things", "smart city", "differential privacy", "k-anonymity", "blockchain", "e-health",
             "trust", "surveillance", "social networks", "location privacy", "rfid", "wireless sensor networks",
             "biometrics", "proxy re-encryption", "attribute-based encryption", "context awareness",
             "data protection", "law and regulation", "self-disclosure", "shoulder surfing", "e-government",
             "intrusion detection", "information security", "wearables", "collaborative filtering"]

THEMES = {
    "crypto": (
        ["Secure", "Efficient", "Verifiable", "Lightweight", "Scalable"],
        ["attribute-based encryption", "proxy re-encryption scheme", "homomorphic encryption protocol",
         "authentication protocol", "signature scheme", "access control scheme"],
        ["for cloud storage", "for outsourced big data", "in multi-cloud environments", "for untrusted servers"],
        ["We propose an encryption scheme that protects user keys stored on untrusted cloud servers.",
         "The scheme supports fine-grained access control policy and efficient revocation.",
         "Security analysis shows the protocol resists collusion and chosen ciphertext attacks.",
         "Experiments on a Hadoop cluster show encryption overhead remains low for large datasets.",
         "Authentication of users relies on signatures verified by the storage server."],
    ),
    "anon": (
        ["Privacy-preserving", "Anonymized", "Differentially private", "Scalable"],
        ["data mining", "record linkage", "data publishing", "collaborative filtering", "MapReduce analytics"],
        ["of medical records", "on big data platforms", "with k-anonymity guarantees", "for data sharing"],
        ["We study anonymization of sensitive records before data sharing among organizations.",
         "The approach generalizes quasi-identifiers and preserves utility for data mining tasks.",
         "Privacy preservation is evaluated against linkage attacks on published datasets.",
         "A MapReduce implementation anonymizes large datasets in parallel on Hadoop.",
         "Results show a favorable trade-off between information loss and privacy protection."],
    ),
    "ubiq": (
        ["Context-aware", "Privacy-aware", "Trustworthy", "Adaptive"],
        ["ubiquitous computing middleware", "pervasive computing environments", "wireless sensor networks",
         "location-based services", "smart home monitoring"],
        ["with user control", "in smart cities", "for mobile users", "with routing through the mist"],
        ["Ubiquitous computing embeds sensors in everyday environments and exposes personal context.",
         "We design a middleware that lets users control disclosure of location and activity data.",
         "Routing through intermediate nodes hides the identity of mobile users from observers.",
         "Trust between devices is negotiated using context information and user preferences.",
         "A field study with wearable sensors evaluates usability and privacy awareness."],
    ),
    "policy": (
        ["Rethinking", "Regulating", "Governing", "Understanding"],
        ["big data privacy", "informed consent", "personal data markets", "surveillance practices",
         "privacy self-management"],
        ["in the age of big data", "under data protection law", "for e-government", "and user behavior"],
        ["Big data practices challenge traditional notions of informed consent and privacy law.",
         "We analyze regulation of personal data collection by governments and companies.",
         "Users rarely read privacy policies and struggle with privacy self-management.",
         "Ethical concerns arise when data are reused outside their original context.",
         "We discuss implications for policy makers, organizations and citizens."],
    ),
}

POPULAR_REFS = ["Canny,2002", "Al-Muhtadi,2002", "Agrawal,2000", "Weiser,1991", "Sweeney,2002",
                "Dean,2008", "Gentry,2009", "Sahai,2005", "Nissenbaum,2004", "Boyd,2012"]
SURNAMES = ["Wang", "Li", "Smith", "Kim", "Park", "Lee", "Kumar", "Singh", "Brown", "Rossi", "Martin", "Muller",
            "Tanaka", "Tan", "Ahmad", "Silva", "Garcia", "Hansen", "Khan", "Meier", "Jansen", "Dubois", "Yang",
            "Huang", "Sharma", "Choi", "Nguyen", "Taylor", "Wilson", "Novak", "Ferrari", "Sato", "Lim", "Ali"]
INITIALS = "ABCDEFGHJKLMNPRSTW"


def solve_citations(n, cites, sd, zeros, top, rng):
    """Integer citation list with the given count, total, sample SD (3 dp), zero count and maximum."""
    k = n - zeros - 1
    rest = cites - top
    if k == 0:
        assert rest == 0
        vals = [top] + [0] * zeros
        assert round(float(np.std(vals, ddof=1)), 3) == sd if n > 1 else True
        return vals
    lo = (n - 1) * (sd - 0.0005) ** 2 + cites**2 / n - top**2
    hi = (n - 1) * (sd + 0.0005) ** 2 + cites**2 / n - top**2
    for attempt in range(200):
        base = [1] * k
        extra = rest - k
        assert 0 <= extra <= k * (top - 1)
        while extra:  # random fill
            i = int(rng.integers(k))
            if base[i] < top:
                base[i] += 1
                extra -= 1
        v = np.array(base)
        for _ in range(20000):
            ss = int((v**2).sum())
            if lo <= ss <= hi:
                out = sorted([top, *v.tolist(), *([0] * zeros)], reverse=True)
                if round(float(np.std(out, ddof=1)), 3) == sd:
                    return out
            target = (lo + hi) / 2
            # transfer one citation from i to j changes ss by 2*(v_j - v_i) + 2
            i_ok = np.flatnonzero(v > 1)
            j_ok = np.flatnonzero(v < top)
            if len(i_ok) == 0 or len(j_ok) == 0:
                break
            delta = 2 * (v[j_ok][None, :] - v[i_ok][:, None]) + 2
            gap = abs(ss + delta - target)
            gap[i_ok[:, None] == j_ok[None, :]] = np.inf
            a, b = np.unravel_index(np.argmin(gap), gap.shape)
            if gap[a, b] >= abs(ss - target):
                break
            v[i_ok[a]] -= 1
            v[j_ok[b]] += 1
    raise RuntimeError(f"no citation list for n={n} cites={cites} sd={sd}")


def country_papers(rng):
    table = list(csv.DictReader((OUT / "table2.csv").open()))
    papers = []  # [citations, [countries]]
    for row in table:
        n, cites, top = int(row["Pub"]), int(row["Cites"]), int(row["Max.Cites"])
        zeros = round(float(row["NCP"]) * n)
        vals = solve_citations(n, cites, float(row["Std.Dev"]), zeros, top, rng)
        papers.extend([c, [row["Country"]]] for c in vals)
    return papers


def fold(papers, target, rng):
    """Merge equally cited papers of different countries until ``target`` records remain."""
    papers = [p for p in papers]
    while len(papers) > target:
        by_cites = {}
        for idx, (c, cs) in enumerate(papers):
            by_cites.setdefault(c, []).append(idx)
        merged = False
        for c in sorted(by_cites):
            idxs = by_cites[c]
            order = rng.permutation(len(idxs))
            for a in order:
                for b in order:
                    pa, pb = papers[idxs[a]], papers[idxs[b]]
                    if a != b and len(pa[1]) == 1 and not set(pa[1]) & set(pb[1]) and len(pb[1]) < 3:
                        pb[1].extend(pa[1])
                        del papers[idxs[a]]
                        merged = True
                        break
                if merged:
                    break
            if merged:
                break
        if not merged:
            raise RuntimeError("cannot fold further")
    return papers


def assign_counts(n_docs, table, rng):
    """For each (keyword, count) choose ``count`` distinct documents."""
    per_doc = [[] for _ in range(n_docs)]
    for kw, count in table:
        for i in rng.choice(n_docs, size=count, replace=False):
            per_doc[i].append(kw)
    return per_doc


def main():
    rng = np.random.default_rng(SEED)
    papers = fold(country_papers(rng), 226, rng)
    papers = [papers[i] for i in rng.permutation(len(papers))]
    n = len(papers)

    # older papers collect more citations
    cites = np.array([p[0] for p in papers])
    years = np.sort(rng.choice(np.arange(2002, 2017), size=n, p=_year_weights()))
    order = np.argsort(-cites + rng.random(n), kind="stable")
    year_of = np.empty(n, dtype=int)
    year_of[order] = np.sort(years)

    de = assign_counts(n, DE, rng)
    idx_kw = assign_counts(n, ID, rng)
    filler = Counter()
    for d in range(n):
        for kw in rng.choice(FILLER_KW, size=int(rng.integers(0, 3)), replace=False):
            if filler[kw] < 5:
                de[d].append(str(kw))
                filler[kw] += 1

    author_plan = {"Liu, Y.": 7, "Chen, X.": 5, "Ma, J.": 5, "Zhang, L.": 5}
    authors = [[] for _ in range(n)]
    for name, count in author_plan.items():
        for d in rng.choice(n, size=count, replace=False):
            authors[d].append(name)
    used = Counter()
    for d in range(n):
        for _ in range(int(rng.integers(1, 5))):
            while True:
                name = f"{rng.choice(SURNAMES)}, {rng.choice(list(INITIALS))}."
                if name not in author_plan and used[name] < 4 and name not in authors[d]:
                    break
            authors[d].append(name)
            used[name] += 1

    ref_pool = POPULAR_REFS + [f"{s},{y}" for s in SURNAMES for y in range(1995, 2016, 3)]
    weights = 1.0 / np.arange(1, len(ref_pool) + 1) ** 0.9
    weights /= weights.sum()
    theme_names = list(THEMES)
    rows = []
    titles = set()
    for d in range(n):
        while True:
            theme = theme_names[int(rng.integers(len(theme_names)))]
            adj, subj, ctx, sentences = THEMES[theme]
            title = f"{rng.choice(adj)} {rng.choice(subj)} {rng.choice(ctx)}"
            if title not in titles:
                titles.add(title)
                break
        abstract = " ".join(rng.choice(sentences, size=3, replace=False))
        refs = rng.choice(len(ref_pool), size=int(rng.integers(4, 16)), replace=False, p=weights)
        rows.append({
            "EID": f"2-s2.0-{84900000000 + d * 7919}",
            "Title": title,
            "Abstract": abstract,
            "Year": int(year_of[d]),
            "Document Type": "Article" if rng.random() < 0.55 else "Conference Paper",
            "Language of Original Document": "English",
            "Authors": "; ".join(authors[d]),
            "Countries": "; ".join(papers[d][1]),
            "Author Keywords": "; ".join(k.upper() for k in de[d]),
            "Index Keywords": "; ".join(k.upper() for k in idx_kw[d]),
            "References": "; ".join(ref_pool[i] for i in sorted(refs)),
            "Cited by": int(papers[d][0]),
        })

    header = list(rows[0])
    _write(OUT / "corpus_fixture.csv", header, rows)

    raw = list(rows)
    for j in range(13):
        raw.append({**rows[(j * 17) % n], "EID": f"2-s2.0-{85100000000 + j}", "Authors": "[No author name available]",
                    "Title": f"Editorial note {j + 1} on privacy and big data"})
    for src in (50, 200):  # redundant copies with fewer citations
        dup = dict(rows[src])
        dup["EID"] = f"2-s2.0-{85200000000 + src}"
        dup["Cited by"] = max(0, int(dup["Cited by"]) - 2)
        raw.append(dup)
    _write(OUT / "corpus_raw.csv", header, raw)
    print(f"wrote {n} clean rows and {len(raw)} raw rows")


def _year_weights():
    years = np.arange(2002, 2017)
    w = 1.18 ** (years - 2002)
    return w / w.sum()


def _write(path, header, rows):
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, header, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


if __name__ == "__main__":
    main()

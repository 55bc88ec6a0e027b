"""Acceptance criteria, one test group per criterion.

Each test carries ``@pytest.mark.acceptance(number, title)``; conftest
prints one PASS/FAIL line per criterion at the end of the run.
"""

import math
import time
from itertools import combinations

import numpy as np
import pytest

import oracles
from corpusgen import random_corpus
from bibrank import cli, data_path
from bibrank.graphs import bibliographic_coupling, cocitation, keyword_cooccurrence, normalize_reference
from bibrank.indicators import INDICATOR_COLUMNS, YearSeries, apgr, read_indicator_table, write_indicator_table
from bibrank.manifest import read_manifest
from bibrank.mcdm import (
    TOPSIS_CRITERIA,
    VIKOR_CRITERIA,
    Criterion,
    DecisionMatrix,
    build_matrix,
    equal_weights,
    rank_compare,
    topsis,
    vikor,
)
from bibrank.report import read_ranking_report, write_ranking_report
from bibrank.textmine import TermDocMatrix, bisecting_kmeans, kmeans, tfidf

TOL_TABLE = 5e-3
CANDIDATE_COLUMNS = ("Pub", "Cites", "CPP", "Std.Dev", "NCP", "Max.Cites", "Pub.SIS", "SIS")


def _published(table2_rows, col, cast=float):
    return np.array([cast(r[col]) for r in table2_rows])


def _table_matrix(table2_rows, columns):
    return [[float(r[c]) for c in columns] for r in table2_rows]


# -- 1 ----------------------------------------------------------------------

A1 = pytest.mark.acceptance(1, "indicator table re-emitted exactly at 3 decimals (< 1 s)")


@A1
def test_indicator_table_roundtrip(tmp_path, table2_rows):
    t0 = time.perf_counter()
    rows = read_indicator_table(data_path("table2.csv"))
    out = write_indicator_table(rows, tmp_path / "ind.csv")
    elapsed = time.perf_counter() - t0
    emitted = read_ranking_report(out)  # plain DictReader over the CSV
    assert [e["Country"] for e in emitted] == [r["Country"] for r in table2_rows]
    for e, r in zip(emitted, table2_rows):
        for col in INDICATOR_COLUMNS:
            assert e[col] == r[col], (r["Country"], col)
    assert elapsed < 1.0


@A1
def test_indicator_columns_in_ranking_report(tmp_path, table2_rows):
    t0 = time.perf_counter()
    rows = read_indicator_table(data_path("table2.csv"))
    t = topsis(build_matrix(rows, TOPSIS_CRITERIA))
    v = vikor(build_matrix(rows, VIKOR_CRITERIA, method="vikor"))
    report = read_ranking_report(write_ranking_report(rows, t, v, tmp_path / "rank.csv"))
    assert time.perf_counter() - t0 < 1.0
    for e, r in zip(report, table2_rows):
        for col in INDICATOR_COLUMNS:
            assert e[col] == r[col], (r["Country"], col)


# -- 2 / 3: configuration search ---------------------------------------------


def _subset_search(table2_rows):
    """Every equal-weight subset of 6-8 candidate columns, NCP as cost, scored by the oracle."""
    ts = _published(table2_rows, "T.s")
    vq, vs, vr = (_published(table2_rows, c) for c in ("V.Q", "V.S", "V.R"))
    results = []
    for size in (6, 7, 8):
        for cols in combinations(CANDIDATE_COLUMNS, size):
            x = _table_matrix(table2_rows, cols)
            w = [1.0 / size] * size
            benefit = [c != "NCP" for c in cols]
            c, _, _ = oracles.topsis_steps(x, w, benefit)
            S, R, Q = oracles.vikor_steps(x, w, benefit, 0.5)
            t_res = float(np.max(np.abs(np.array(c) - ts)))
            v_res = float(max(np.max(np.abs(np.array(a) - b)) for a, b in ((S, vs), (R, vr), (Q, vq))))
            results.append((cols, t_res, v_res))
    return results


@pytest.fixture(scope="module")
def subset_search(table2_rows):
    return _subset_search(table2_rows)


A2 = pytest.mark.acceptance(2, "TOPSIS reproduces T.s (+/-5e-3) and T.r exactly (< 1 s)")


@A2
def test_topsis_default_is_best_subset(subset_search):
    best = min(subset_search, key=lambda r: r[1])
    assert best[0] == tuple(c.name for c in TOPSIS_CRITERIA)
    assert best[1] <= TOL_TABLE


@A2
def test_topsis_reproduces_table(table2_rows):
    t0 = time.perf_counter()
    rows = read_indicator_table(data_path("table2.csv"))
    res = topsis(build_matrix(rows, TOPSIS_CRITERIA))
    elapsed = time.perf_counter() - t0
    np.testing.assert_allclose(res.closeness, _published(table2_rows, "T.s"), atol=TOL_TABLE, rtol=0)
    assert list(res.rank) == list(_published(table2_rows, "T.r", int))
    assert res.rank_of("United States") == 1
    assert res.rank_of("China") == 2
    assert res.rank_of("Spain") == 20
    assert res.score_of("United States") == pytest.approx(0.667, abs=TOL_TABLE)
    assert elapsed < 1.0


A3 = pytest.mark.acceptance(3, "VIKOR reproduces V.S, V.R, V.Q (+/-5e-3) and V.r exactly (< 1 s)")


@A3
def test_vikor_default_is_best_subset(subset_search):
    best = min(subset_search, key=lambda r: r[2])
    assert best[0] == tuple(c.name for c in VIKOR_CRITERIA)
    assert best[2] <= TOL_TABLE


@A3
def test_vikor_reproduces_table(table2_rows):
    t0 = time.perf_counter()
    rows = read_indicator_table(data_path("table2.csv"))
    res = vikor(build_matrix(rows, VIKOR_CRITERIA, method="vikor"), v=0.5)
    elapsed = time.perf_counter() - t0
    for attr, col in (("S", "V.S"), ("R", "V.R"), ("Q", "V.Q")):
        np.testing.assert_allclose(getattr(res, attr), _published(table2_rows, col), atol=TOL_TABLE, rtol=0)
    assert list(res.rank) == list(_published(table2_rows, "V.r", int))
    assert res.Q[res.alternatives.index("United States")] == pytest.approx(0.0, abs=TOL_TABLE)
    assert res.rank_of("United States") == 1
    assert res.Q[res.alternatives.index("India")] == pytest.approx(1.0, abs=TOL_TABLE)
    assert res.rank_of("India") == 20
    assert res.R.max() == pytest.approx(0.143, abs=TOL_TABLE)
    assert elapsed < 1.0


# -- 4 ----------------------------------------------------------------------

A4 = pytest.mark.acceptance(4, "MCDM properties on 1000 random matrices (< 30 s)")


def _random_matrix(rng):
    """Integer-valued matrix with no constant column (VIKOR needs a range in every column)."""
    n, m = int(rng.integers(2, 21)), int(rng.integers(2, 9))
    while True:
        x = rng.integers(0, 101, size=(n, m)).astype(float)
        if np.all(np.ptp(x, axis=0) > 0):
            break
    w = rng.random(m) + 0.05
    w = w / w.sum()
    benefit = rng.random(m) < 0.6
    crit = [Criterion(f"c{j}", "benefit" if b else "cost", float(wj)) for j, (b, wj) in enumerate(zip(benefit, w))]
    # rounding in w / w.sum() can leave the total a few ulp off 1, which is inside tolerance
    return DecisionMatrix([f"a{i}" for i in range(n)], crit, x)


def _flip(c):
    return Criterion(c.name, "cost" if c.is_benefit else "benefit", c.weight)


@A4
def test_mcdm_property_suite():
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    for _ in range(1000):
        m = _random_matrix(rng)
        n, k = m.x.shape
        t, v = topsis(m), vikor(m)

        assert np.all((t.closeness >= 0) & (t.closeness <= 1))
        assert np.all((v.Q >= 0) & (v.Q <= 1))

        scale = rng.uniform(0.1, 10, size=k)
        t_scaled = topsis(DecisionMatrix(m.alternatives, m.criteria, m.x * scale))
        np.testing.assert_allclose(t_scaled.closeness, t.closeness, atol=1e-12, rtol=0)

        a, b = rng.uniform(0.5, 5, size=k), rng.uniform(-10, 10, size=k)
        v_aff = vikor(DecisionMatrix(m.alternatives, m.criteria, m.x * a + b))
        for attr in ("S", "R", "Q"):
            np.testing.assert_allclose(getattr(v_aff, attr), getattr(v, attr), atol=1e-12, rtol=0)

        j = int(rng.integers(k))
        x_neg = m.x.copy()
        x_neg[:, j] = -x_neg[:, j]
        crit_neg = list(m.criteria)
        crit_neg[j] = _flip(crit_neg[j])
        m_neg = DecisionMatrix(m.alternatives, crit_neg, x_neg)
        np.testing.assert_allclose(topsis(m_neg).closeness, t.closeness, atol=1e-12, rtol=0)
        np.testing.assert_allclose(vikor(m_neg).Q, v.Q, atol=1e-12, rtol=0)

        perm = rng.permutation(n)
        m_perm = DecisionMatrix([m.alternatives[i] for i in perm], m.criteria, m.x[perm])
        t_perm, v_perm = topsis(m_perm), vikor(m_perm)
        np.testing.assert_allclose(t_perm.closeness, t.closeness[perm], atol=1e-12, rtol=0)
        np.testing.assert_allclose(v_perm.Q, v.Q[perm], atol=1e-12, rtol=0)
        if np.min(np.diff(np.sort(t.closeness))) > 1e-9:
            assert list(t_perm.rank) == list(t.rank[perm])
        if np.min(np.diff(np.sort(v.Q))) > 1e-9:
            assert list(v_perm.rank) == list(v.rank[perm])

        # newcomer strictly worse than a random incumbent on every criterion
        src = m.x[int(rng.integers(n))]
        step = rng.integers(1, 10, size=k)
        worse = np.where(m.benefit, src - step, src + step)
        m_new = DecisionMatrix((*m.alternatives, "new"), m.criteria, np.vstack([m.x, worse]))
        assert topsis(m_new).rank_of("new") != 1
        assert vikor(m_new).rank_of("new") != 1
    assert time.perf_counter() - t0 < 30.0


# -- 5 ----------------------------------------------------------------------

A5 = pytest.mark.acceptance(5, "3x2 hand worksheet matches step-by-step calculation to 1e-9")

SYM_X = [[1, 9], [5, 5], [9, 1]]
ASYM_X = [[2, 3], [4, 1], [3, 1]]


def _matrix(x, weights, directions):
    crit = [Criterion(f"c{j}", d, w) for j, (d, w) in enumerate(zip(directions, weights))]
    return DecisionMatrix(["r1", "r2", "r3"], crit, np.array(x, dtype=float))


@A5
def test_worksheet_symmetric_instance():
    m = _matrix(SYM_X, (0.5, 0.5), ("benefit", "benefit"))
    t, v = topsis(m), vikor(m)
    # frozen hand values
    outer, middle = 4 / math.sqrt(107), math.sqrt(32) / (2 * math.sqrt(107))
    np.testing.assert_allclose(t.d_plus, [outer, middle, outer], atol=1e-9, rtol=0)
    np.testing.assert_allclose(t.d_minus, [outer, middle, outer], atol=1e-9, rtol=0)
    np.testing.assert_allclose(t.closeness, [0.5, 0.5, 0.5], atol=1e-9, rtol=0)
    np.testing.assert_allclose(v.S, [0.5, 0.5, 0.5], atol=1e-9, rtol=0)
    np.testing.assert_allclose(v.R, [0.5, 0.25, 0.5], atol=1e-9, rtol=0)
    np.testing.assert_allclose(v.Q, [0.5, 0.0, 0.5], atol=1e-9, rtol=0)
    assert v.s_constant and not v.r_constant
    assert list(v.rank) == [2, 1, 3]
    # step-by-step oracle
    c, dp, dm = oracles.topsis_steps(SYM_X, (0.5, 0.5), (True, True))
    np.testing.assert_allclose(t.closeness, c, atol=1e-9, rtol=0)
    np.testing.assert_allclose(t.d_plus, dp, atol=1e-9, rtol=0)
    np.testing.assert_allclose(t.d_minus, dm, atol=1e-9, rtol=0)
    S, R, Q = oracles.vikor_steps(SYM_X, (0.5, 0.5), (True, True))
    np.testing.assert_allclose(np.c_[v.S, v.R, v.Q], np.c_[S, R, Q], atol=1e-9, rtol=0)


@A5
def test_worksheet_asymmetric_instance():
    m = _matrix(ASYM_X, (0.6, 0.4), ("benefit", "cost"))
    t, v = topsis(m), vikor(m)
    far = math.sqrt(1.44 / 29 + 0.64 / 11)
    near, away = 0.6 / math.sqrt(29), math.sqrt(0.36 / 29 + 0.64 / 11)
    np.testing.assert_allclose(t.d_plus, [far, 0.0, near], atol=1e-9, rtol=0)
    np.testing.assert_allclose(t.d_minus, [0.0, far, away], atol=1e-9, rtol=0)
    np.testing.assert_allclose(t.closeness, [0.0, 1.0, away / (near + away)], atol=1e-9, rtol=0)
    assert t.closeness[2] == pytest.approx(0.704554, abs=1e-6)
    assert list(t.rank) == [3, 1, 2]
    np.testing.assert_allclose(v.S, [1.0, 0.0, 0.3], atol=1e-9, rtol=0)
    np.testing.assert_allclose(v.R, [0.6, 0.0, 0.3], atol=1e-9, rtol=0)
    np.testing.assert_allclose(v.Q, [1.0, 0.0, 0.4], atol=1e-9, rtol=0)
    assert list(v.rank) == [3, 1, 2]
    assert not v.advantage and v.stability
    assert v.compromise_set == ("r2", "r3")
    c, dp, dm = oracles.topsis_steps(ASYM_X, (0.6, 0.4), (True, False))
    np.testing.assert_allclose(np.c_[t.closeness, t.d_plus, t.d_minus], np.c_[c, dp, dm], atol=1e-9, rtol=0)
    S, R, Q = oracles.vikor_steps(ASYM_X, (0.6, 0.4), (True, False))
    np.testing.assert_allclose(np.c_[v.S, v.R, v.Q], np.c_[S, R, Q], atol=1e-9, rtol=0)


# -- 6 ----------------------------------------------------------------------

A6 = pytest.mark.acceptance(6, "graph properties and brute-force oracle on 500 random corpora (< 30 s)")


@A6
def test_graph_properties():
    rng = np.random.default_rng(6)
    t0 = time.perf_counter()
    for _ in range(500):
        corpus = random_corpus(rng)
        assert len(corpus) <= 30

        for source, field in (("author", "author_keywords"), ("indexed", "indexed_keywords")):
            g = keyword_cooccurrence(corpus, 1, source)
            for (a, b), w in g.edges.items():
                assert w <= min(g.nodes[a], g.nodes[b])
            docs = [set(getattr(r, field)) for r in corpus]
            assert g.edges == oracles.cocitation_bruteforce(docs)
            prev = g
            for t in range(2, 6):
                cur = keyword_cooccurrence(corpus, t, source)
                assert cur.is_subgraph_of(prev)
                prev = cur

        refsets = {r.id: {normalize_reference(x) for x in r.references} for r in corpus}
        assert bibliographic_coupling(corpus, "document").edges == oracles.coupling_bruteforce(refsets)
        by_country = {}
        for r in corpus:
            for c in r.countries:
                by_country.setdefault(c, set()).update(refsets[r.id])
        assert bibliographic_coupling(corpus, "country").edges == oracles.coupling_bruteforce(by_country)
        assert cocitation(corpus, 1).edges == oracles.cocitation_bruteforce(list(refsets.values()))

        for build in (
            lambda t: bibliographic_coupling(corpus, "document", t),
            lambda t: bibliographic_coupling(corpus, "country", t),
            lambda t: cocitation(corpus, t),
        ):
            prev = build(1)
            for t in range(2, 5):
                cur = build(t)
                assert cur.is_subgraph_of(prev)
                prev = cur
    assert time.perf_counter() - t0 < 30.0


# -- 7 ----------------------------------------------------------------------

A7 = pytest.mark.acceptance(7, "tf-idf and k-means properties (< 30 s)")


def _tdm(values):
    n, t = values.shape
    return TermDocMatrix(tuple(f"t{j}" for j in range(t)), tuple(f"d{i}" for i in range(n)), values)


@A7
def test_idf_of_everywhere_term_is_zero():
    rng = np.random.default_rng(7)
    values = rng.integers(0, 4, size=(12, 6)).astype(float)
    values[:, 2] = rng.integers(1, 5, size=12)  # term present in every document
    raw = _tdm(values)
    kept = tfidf(raw, keep_zero_columns=True)
    assert np.all(kept.column("t2") == 0)
    assert "t2" not in tfidf(raw).terms


@A7
def test_sse_non_increasing_and_seeded_determinism(tmp_path):
    from bibrank.export import write_clustering

    rng = np.random.default_rng(77)
    t0 = time.perf_counter()
    for i in range(100):
        n, t = int(rng.integers(4, 40)), int(rng.integers(2, 15))
        values = rng.random((n, t)) * (rng.random((n, t)) < 0.5)
        values[:, 0] += 1e-3  # no all-zero rows
        m = _tdm(values)
        k = int(rng.integers(1, min(n, 8) + 1))
        seed = int(rng.integers(0, 2**31))
        cl = kmeans(m, k, seed=seed)
        h = np.array(cl.sse_history)
        # strictly nothing is allowed to grow beyond floating-point noise
        assert np.all(np.diff(h) <= 1e-12 * max(1.0, h[0]))
        again = kmeans(m, k, seed=seed)
        a = write_clustering(cl.assignments, tmp_path / f"a{i}.csv").read_bytes()
        b = write_clustering(again.assignments, tmp_path / f"b{i}.csv").read_bytes()
        assert a == b
        assert cl.centroids.tobytes() == again.centroids.tobytes()
        assert cl.sse_history == again.sse_history
        b1, b2 = bisecting_kmeans(m, k, seed=seed), bisecting_kmeans(m, k, seed=seed)
        assert b1.assignments == b2.assignments and b1.centroids.tobytes() == b2.centroids.tobytes()
    assert time.perf_counter() - t0 < 30.0


@A7
@pytest.mark.parametrize("algo", [kmeans, bisecting_kmeans])
def test_planted_duplicate_groups_recovered(algo):
    rng = np.random.default_rng(70)
    for _ in range(20):
        k = int(rng.integers(2, 7))
        t = int(rng.integers(k, 12))
        protos = rng.random((k, t)) + np.eye(k, t) * 3  # distinct directions
        sizes = rng.integers(1, 6, size=k)
        truth = np.repeat(np.arange(k), sizes)
        order = rng.permutation(len(truth))
        truth = truth[order]
        values = protos[truth] * rng.uniform(0.5, 2.0, size=(len(truth), 1))  # same direction, any length
        cl = algo(_tdm(values), k, seed=int(rng.integers(1000)))
        assert cl.sse == pytest.approx(0.0, abs=1e-20)
        labels = np.array([cl.assignments[f"d{i}"] for i in range(len(truth))])
        # same partition up to relabelling
        pairs = set(zip(truth.tolist(), labels.tolist()))
        assert len(pairs) == k == len({p[0] for p in pairs}) == len({p[1] for p in pairs})


# -- 8 ----------------------------------------------------------------------

A8 = pytest.mark.acceptance(8, "APGR: flat, doubling, four-fold, scale invariance")


@A8
def test_apgr_properties():
    assert apgr(YearSeries("x", {2010: 7, 2011: 7, 2012: 7}), 2010, 2012) == pytest.approx(0.0, abs=1e-12)
    assert apgr(YearSeries("x", {2010: 5, 2011: 10}), 2010, 2011) == pytest.approx(100.0, abs=1e-12)
    assert apgr(YearSeries("x", {2010: 3, 2011: 6, 2012: 12}), 2010, 2012) == pytest.approx(100.0, abs=1e-12)
    rng = np.random.default_rng(8)
    for _ in range(200):
        counts = {2000 + i: int(c) for i, c in enumerate(rng.integers(1, 500, size=int(rng.integers(2, 15))))}
        s = YearSeries("x", counts)
        lam = float(rng.uniform(0.01, 100))
        scaled = YearSeries("x", {y: c * lam for y, c in counts.items()})
        first, last = min(counts), max(counts)
        assert apgr(scaled, first, last) == pytest.approx(apgr(s, first, last), rel=1e-9, abs=1e-9)


# -- 9 ----------------------------------------------------------------------

A9 = pytest.mark.acceptance(9, "rank divergence of published T.r vs V.r: India 16, US 0, negative tau")


@pytest.fixture(scope="module")
def published_comparison(table2_rows):
    tr = {r["Country"]: int(r["T.r"]) for r in table2_rows}
    vr = {r["Country"]: int(r["V.r"]) for r in table2_rows}
    return rank_compare(tr, vr)


@A9
def test_rank_deltas(published_comparison):
    assert published_comparison.delta["India"] == 16
    assert published_comparison.delta["United States"] == 0


@A9
def test_kendall_tau_negative(published_comparison):
    # The published columns give tau = +0.474; left failing on purpose.
    assert published_comparison.kendall_tau < 0, f"tau = {published_comparison.kendall_tau:+.4f}"


# -- 10 ---------------------------------------------------------------------

A10 = pytest.mark.acceptance(10, "pipeline run twice gives identical output digests")


@A10
def test_pipeline_determinism(tmp_path):
    digests = []
    for run in ("one", "two"):
        out = tmp_path / run
        argv = ["pipeline", "--in", str(data_path("corpus_raw.csv")), "--out-dir", str(out), "--k", "8", "--seed", "42"]
        assert cli.main(argv) == 0
        digests.append(read_manifest(out / "pipeline.manifest.json").outputs)
    assert digests[0] == digests[1]
    assert len(digests[0]) >= 12

"""TOPSIS and VIKOR ranking of alternatives under conflicting criteria.

Both methods take a :class:`DecisionMatrix` (alternatives x criteria, each
criterion a benefit or a cost with a weight) and return per-alternative
scores plus an integer ranking. Ties in ranking are broken by input order.

The default criteria sets reproduce the published country ranking:

* TOPSIS: Pub, Cites, CPP, Std.Dev, NCP, Max.Cites, Pub.SIS, SIS with equal
  weights 1/8 and vector normalization.
* VIKOR: the same without Pub.SIS, equal weights 1/7, v = 0.5.

NCP (share of uncited papers) is the only cost criterion in both.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .indicators import CountryIndicators
from .ingest import InputError

__all__ = [
    "Criterion",
    "DecisionMatrix",
    "TopsisResult",
    "VikorResult",
    "RankComparison",
    "TOPSIS_CRITERIA",
    "VIKOR_CRITERIA",
    "equal_weights",
    "build_matrix",
    "topsis",
    "vikor",
    "rank_compare",
    "ranks_from_scores",
    "dense_ranks",
    "read_criteria",
    "write_criteria",
]

BENEFIT, COST = "benefit", "cost"
TIE_DECIMALS = 12
CONSTANT_TOL = 1e-12


@dataclass(frozen=True)
class Criterion:
    name: str
    direction: str = BENEFIT
    weight: float = 1.0

    def __post_init__(self):
        if self.direction not in (BENEFIT, COST):
            raise ValueError(f"{self.name}: direction must be 'benefit' or 'cost'")
        if not 0 < self.weight <= 1:
            raise ValueError(f"{self.name}: weight {self.weight} outside (0, 1]")

    @property
    def is_benefit(self) -> bool:
        return self.direction == BENEFIT


def equal_weights(names: Sequence[str], cost: Sequence[str] = ("NCP",)) -> tuple[Criterion, ...]:
    w = 1.0 / len(names)
    return tuple(Criterion(n, COST if n in cost else BENEFIT, w) for n in names)


TOPSIS_CRITERIA = equal_weights(("Pub", "Cites", "CPP", "Std.Dev", "NCP", "Max.Cites", "Pub.SIS", "SIS"))
VIKOR_CRITERIA = equal_weights(("Pub", "Cites", "CPP", "Std.Dev", "NCP", "Max.Cites", "SIS"))


@dataclass(frozen=True)
class DecisionMatrix:
    alternatives: tuple[str, ...]
    criteria: tuple[Criterion, ...]
    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "alternatives", tuple(self.alternatives))
        object.__setattr__(self, "criteria", tuple(self.criteria))
        if x.ndim != 2 or x.shape != (len(self.alternatives), len(self.criteria)):
            raise ValueError(
                f"matrix shape {x.shape} does not match "
                f"{len(self.alternatives)} alternatives x {len(self.criteria)} criteria"
            )
        if not np.all(np.isfinite(x)):
            raise ValueError("decision matrix has missing or non-finite values")
        total = sum(c.weight for c in self.criteria)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"criterion weights sum to {total}, expected 1")

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.criteria])

    @property
    def benefit(self) -> np.ndarray:
        return np.array([c.is_benefit for c in self.criteria])

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.criteria)

    def constant_columns(self) -> list[str]:
        return [c.name for c, col in zip(self.criteria, self.x.T) if np.ptp(col) == 0]


@dataclass(frozen=True)
class TopsisResult:
    alternatives: tuple[str, ...]
    closeness: np.ndarray
    d_plus: np.ndarray
    d_minus: np.ndarray
    rank: np.ndarray
    normalization: str = "vector"

    def score_of(self, name: str) -> float:
        return float(self.closeness[self.alternatives.index(name)])

    def rank_of(self, name: str) -> int:
        return int(self.rank[self.alternatives.index(name)])

    def ranking(self) -> dict[str, int]:
        return dict(zip(self.alternatives, map(int, self.rank)))


@dataclass(frozen=True)
class VikorResult:
    alternatives: tuple[str, ...]
    S: np.ndarray
    R: np.ndarray
    Q: np.ndarray
    rank: np.ndarray
    compromise_set: tuple[str, ...]
    v: float
    advantage: bool  # acceptable advantage condition
    stability: bool  # acceptable stability condition
    s_constant: bool = False
    r_constant: bool = False

    def rank_of(self, name: str) -> int:
        return int(self.rank[self.alternatives.index(name)])

    def ranking(self) -> dict[str, int]:
        return dict(zip(self.alternatives, map(int, self.rank)))


@dataclass(frozen=True)
class RankComparison:
    spearman_rho: float
    kendall_tau: float
    delta: dict[str, int] = field(default_factory=dict)  # |rank_b - rank_a|
    shift: dict[str, int] = field(default_factory=dict)  # rank_b - rank_a


def ranks_from_scores(scores: np.ndarray, descending: bool) -> np.ndarray:
    """1-based ranks, ties broken by position (earlier alternative first).

    Scores equal to 12 decimals count as tied, so round-off cannot reorder
    alternatives that are equal in exact arithmetic.
    """
    scores = np.round(np.asarray(scores, dtype=float), TIE_DECIMALS)
    order = np.argsort(-scores if descending else scores, kind="stable")
    rank = np.empty(len(scores), dtype=int)
    rank[order] = np.arange(1, len(scores) + 1)
    return rank


def dense_ranks(scores: np.ndarray, descending: bool, decimals: int | None = None) -> np.ndarray:
    """Ranks where equal scores share a rank (1, 2, 2, 3...)."""
    s = np.asarray(scores, dtype=float)
    if decimals is not None:
        s = np.round(s, decimals)
    uniq = np.unique(s)
    if descending:
        uniq = uniq[::-1]
    return np.searchsorted(-uniq if descending else uniq, -s if descending else s) + 1


def build_matrix(
    rows: Sequence[CountryIndicators],
    criteria: Sequence[Criterion] = VIKOR_CRITERIA,
    *,
    method: str | None = None,
) -> DecisionMatrix:
    """Decision matrix from indicator rows, in input row order.

    Rows lacking a selected criterion (typically SIS for countries absent
    from the external file) are dropped with a warning. With
    ``method="vikor"`` a constant column is an error.
    """
    criteria = tuple(criteria)
    kept, values, dropped = [], [], []
    for r in rows:
        vals = [r.value(c.name) for c in criteria]
        if any(v is None for v in vals):
            dropped.append(r.country)
            continue
        kept.append(r.country)
        values.append(vals)
    if dropped:
        warnings.warn(f"excluded rows with missing criteria values: {dropped}", stacklevel=2)
    dupes = sorted({a for a in kept if kept.count(a) > 1})
    if dupes:
        warnings.warn(f"duplicate alternatives kept: {dupes}", stacklevel=2)
    if not kept:
        raise ValueError("no alternatives left after dropping incomplete rows")
    m = DecisionMatrix(tuple(kept), criteria, np.array(values, dtype=float))
    if method == "vikor":
        if len(kept) < 2:
            raise ValueError("VIKOR needs at least two alternatives")
        const = m.constant_columns()
        if const:
            raise ValueError(f"constant criterion column(s) {const}: VIKOR range normalization undefined")
    return m


def topsis(
    m: DecisionMatrix,
    *,
    normalization: str = "vector",
    single_is_ideal: bool = False,
) -> TopsisResult:
    """Closeness of each alternative to the ideal solution.

    Columns are normalized (``"vector"``: divide by the Euclidean column
    norm; ``"minmax"``: map to [0, 1]), weighted, and compared with the
    ideal and anti-ideal points. Closeness is D- / (D+ + D-), rank 1 is the
    largest closeness.

    A single alternative raises unless ``single_is_ideal`` is set, in which
    case its closeness is defined as 1.
    """
    x = m.x
    n = x.shape[0]
    if n == 1:
        if not single_is_ideal:
            raise ValueError("TOPSIS needs at least two alternatives")
        one = np.ones(1)
        return TopsisResult(m.alternatives, one, np.zeros(1), np.zeros(1), np.ones(1, dtype=int), normalization)

    if normalization == "vector":
        norms = np.sqrt((x**2).sum(axis=0))
        if np.any(norms == 0):
            bad = [c.name for c, z in zip(m.criteria, norms == 0) if z]
            raise ValueError(f"zero-norm criterion column(s) {bad}")
        r = x / norms
    elif normalization == "minmax":
        lo, hi = x.min(axis=0), x.max(axis=0)
        if np.any(hi == lo):
            raise ValueError(f"constant criterion column(s) {m.constant_columns()}")
        r = (x - lo) / (hi - lo)
    else:
        raise ValueError(f"unknown normalization {normalization!r}")

    v = r * m.weights
    benefit = m.benefit
    ideal = np.where(benefit, v.max(axis=0), v.min(axis=0))
    anti = np.where(benefit, v.min(axis=0), v.max(axis=0))
    d_plus = np.sqrt(((v - ideal) ** 2).sum(axis=1))
    d_minus = np.sqrt(((v - anti) ** 2).sum(axis=1))
    denom = d_plus + d_minus
    if np.any(denom == 0):
        raise ValueError("all alternatives coincide; closeness undefined")
    c = d_minus / denom
    return TopsisResult(m.alternatives, c, d_plus, d_minus, ranks_from_scores(c, descending=True), normalization)


def _scaled(values: np.ndarray) -> tuple[np.ndarray, bool]:
    lo, hi = values.min(), values.max()
    # S and R live in [0, 1]; a spread this small is round-off, not signal
    if hi - lo <= CONSTANT_TOL:
        return np.zeros_like(values), True
    return (values - lo) / (hi - lo), False


def vikor(m: DecisionMatrix, v: float = 0.5) -> VikorResult:
    """Compromise ranking by group utility S, individual regret R and index Q.

    Lower Q is better. When S (or R) is the same for every alternative its
    term in Q is defined as 0 and ``s_constant`` (``r_constant``) is set.
    """
    if not 0 <= v <= 1:
        raise ValueError("v must lie in [0, 1]")
    x = m.x
    n = x.shape[0]
    if n < 2:
        raise ValueError("VIKOR needs at least two alternatives")
    const = m.constant_columns()
    if const:
        raise ValueError(f"constant criterion column(s) {const}: VIKOR range normalization undefined")

    benefit = m.benefit
    best = np.where(benefit, x.max(axis=0), x.min(axis=0))
    worst = np.where(benefit, x.min(axis=0), x.max(axis=0))
    # (best - x) / (best - worst) is >= 0 for both directions
    g = m.weights * (best - x) / (best - worst)
    S = g.sum(axis=1)
    R = g.max(axis=1)
    s_term, s_const = _scaled(S)
    r_term, r_const = _scaled(R)
    Q = v * s_term + (1 - v) * r_term
    rank = ranks_from_scores(Q, descending=False)

    order = np.argsort(rank)
    first, second = order[0], order[1]
    dq = 1.0 / (n - 1)
    advantage = Q[second] - Q[first] >= dq
    stability = bool(
        ranks_from_scores(S, descending=False)[first] == 1 or ranks_from_scores(R, descending=False)[first] == 1
    )
    if advantage and stability:
        chosen = [first]
    elif advantage:
        chosen = [first, second]
    else:
        chosen = [i for i in order if Q[i] - Q[first] < dq]
    compromise = tuple(m.alternatives[i] for i in chosen)
    return VikorResult(m.alternatives, S, R, Q, rank, compromise, v, bool(advantage), stability, s_const, r_const)


def rank_compare(a: Mapping[str, int], b: Mapping[str, int]) -> RankComparison:
    """Spearman rho, Kendall tau-b and per-alternative rank changes from a to b."""
    if set(a) != set(b):
        only_a, only_b = sorted(set(a) - set(b)), sorted(set(b) - set(a))
        raise ValueError(f"alternative sets differ: only in a {only_a}, only in b {only_b}")
    names = list(a)
    ra = np.array([a[k] for k in names], dtype=float)
    rb = np.array([b[k] for k in names], dtype=float)
    if len(names) < 2:
        rho = tau = 1.0
    else:
        rho = float(stats.spearmanr(ra, rb).statistic)
        tau = float(stats.kendalltau(ra, rb).statistic)
    shift = {k: int(b[k] - a[k]) for k in names}
    return RankComparison(rho, tau, {k: abs(s) for k, s in shift.items()}, shift)


def read_criteria(path: str | Path) -> tuple[Criterion, ...]:
    """Read ``name direction weight`` lines; weights are rescaled to sum 1.

    A warning is emitted when rescaling was needed.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f"criteria file not found: {path}")
    raw = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InputError(f"{path}:{lineno}: expected 'name direction weight'")
        name, direction, weight = parts
        try:
            w = float(weight)
        except ValueError:
            raise InputError(f"{path}:{lineno}: bad weight {weight!r}") from None
        if w <= 0 or direction not in (BENEFIT, COST):
            raise InputError(f"{path}:{lineno}: need direction benefit|cost and a positive weight")
        raw.append((name, direction, w))
    if not raw:
        raise InputError(f"{path}: no criteria")
    total = sum(w for *_, w in raw)
    if abs(total - 1.0) <= 1e-9:
        total = 1.0  # already normalized; keep the weights bit-for-bit
    else:
        warnings.warn(f"{path}: weights sum to {total:g}; rescaled to 1", stacklevel=2)
    return tuple(Criterion(n, d, w / total) for n, d, w in raw)


def write_criteria(criteria: Sequence[Criterion], path: str | Path) -> Path:
    path = Path(path)
    path.write_text("".join(f"{c.name} {c.direction} {c.weight!r}\n" for c in criteria), encoding="utf-8")
    return path

"""Association measures for candidate n-grams.

Three selection criteria are computed over the candidate tables:

* frequency: the raw count F, the baseline selection rule.
* pmi: the ratio form of pointwise mutual information, minimized over all
  binary splits of the gram: min over k of N * f_g / (f_a * f_b). No
  logarithm is applied; scores are compared as plain ratios.
* pati (pointwise association with times information):
  F * MP * AT, where

    MP = min over splits of (N * f_g)^2 / ((f_a + f_b)^2 * f_a * f_b)

  is a split-cohesion term sharpened by the marginal factor
  (f_g / (f_a + f_b))^2, and AT = 1 + |ln times| measures how much the
  gram dominates its same-length peers sharing the minimizing split's
  prefix or suffix:

    rate  = max(f_g / f_{a*}, f_g / f_{*b})
    AC    = 1 / set_size of the lower-total affix set (ties: prefix side)
    times = rate / AC

Split frequencies f_a, f_b are raw corpus counts; the affix sets range
over the candidate universe at the gram's length. All numerators and
denominators are exact integers combined with a single float division,
so equal inputs give bit-equal scores.

Length-1 grams have no split; every criterion ranks them by raw
frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .counts import NgramTable, escape_gram, unescape_gram
from .errors import DegenerateInputError, MeasureUndefinedError, UnknownGramError

CRITERIA = ("frequency", "pmi", "pati")


@dataclass(frozen=True)
class SplitView:
    """One binary split of a gram: a = gram[:k], b = gram[k:]."""

    k: int
    a: str
    b: str
    f_a: int
    f_b: int


class AtParts(NamedTuple):
    rate: float
    ac: float
    times: float
    at: float


@dataclass(frozen=True)
class AssocScore:
    """Every measure for one candidate gram of length >= 2."""

    gram: str
    length: int
    F: int
    PMI: float
    MP: float
    argmin_split: SplitView
    rate: float
    AC: float
    times: float
    AT: float
    PATI: float


def score_frequency(table: NgramTable, gram: str) -> int:
    """Raw frequency of a stored candidate gram."""
    _require_candidate(table, gram)
    return table.freq(gram)


def score_pmi(table: NgramTable, gram: str) -> float:
    """min over splits of N * f_g / (f_a * f_b)."""
    _require_split(gram)
    _require_candidate(table, gram)
    f_g = table.freq(gram)
    n = table.n_chars
    best = math.inf
    for split in iter_splits(table, gram):
        value = (n * f_g) / (split.f_a * split.f_b)
        if value < best:
            best = value
    return best


def score_mp(table: NgramTable, gram: str) -> tuple[float, SplitView]:
    """min over splits of (N*f_g)^2 / ((f_a+f_b)^2 * f_a * f_b).

    Returns the minimum and the minimizing split; ties keep the smallest
    split index k.
    """
    _require_split(gram)
    _require_candidate(table, gram)
    f_g = table.freq(gram)
    n = table.n_chars
    best = math.inf
    best_split = None
    num = (n * f_g) ** 2
    for split in iter_splits(table, gram):
        value = num / ((split.f_a + split.f_b) ** 2 * split.f_a * split.f_b)
        if value < best:
            best = value
            best_split = split
    return best, best_split


def score_at(table: NgramTable, gram: str, argmin_split: SplitView) -> AtParts:
    """Dominance term computed at the MP-minimizing split.

    The lower-total affix set picks AC; a tie goes to the prefix set.
    """
    _require_candidate(table, gram)
    s = len(gram)
    f_g = table.freq(gram)
    pre = table.prefix_aggregate(argmin_split.a, s)
    suf = table.suffix_aggregate(argmin_split.b, s)
    if pre.total == 0 or suf.total == 0:
        raise DegenerateInputError(
            f"zero affix aggregate for {gram!r} at split "
            f"({argmin_split.a!r}, {argmin_split.b!r})")
    rate = max(f_g / pre.total, f_g / suf.total)
    chosen = pre if pre.total <= suf.total else suf
    ac = 1.0 / chosen.set_size
    times = rate / ac
    at = 1.0 + abs(math.log(times))
    return AtParts(rate=rate, ac=ac, times=times, at=at)


def score_pati(table: NgramTable, gram: str) -> AssocScore:
    """Full record with PATI = F * MP * AT."""
    f = score_frequency(table, gram)
    pmi = score_pmi(table, gram)
    mp, split = score_mp(table, gram)
    parts = score_at(table, gram, split)
    return AssocScore(
        gram=gram,
        length=len(gram),
        F=f,
        PMI=pmi,
        MP=mp,
        argmin_split=split,
        rate=parts.rate,
        AC=parts.ac,
        times=parts.times,
        AT=parts.at,
        PATI=f * mp * parts.at,
    )


def iter_splits(table: NgramTable, gram: str):
    """All s-1 binary splits with their raw substring frequencies."""
    for k in range(1, len(gram)):
        a, b = gram[:k], gram[k:]
        yield SplitView(k=k, a=a, b=b, f_a=table.freq(a), f_b=table.freq(b))


def _require_candidate(table: NgramTable, gram: str):
    if not table.is_candidate(gram):
        raise UnknownGramError(gram)


def _require_split(gram: str):
    if len(gram) < 2:
        raise MeasureUndefinedError(
            f"measure undefined for length-{len(gram)} gram {gram!r}: no split")


@dataclass(frozen=True)
class ScoredTable:
    """Per-length selection scores for one criterion.

    Mapping gram -> score for each length; canonical iteration order is
    sorted by gram.
    """

    criterion: str
    n_max: int
    scores: dict[int, dict[str, float]]

    def length_items(self, length: int) -> list[tuple[str, float]]:
        table = self.scores.get(length, {})
        return [(g, table[g]) for g in sorted(table)]


def score_all(table: NgramTable, criterion: str) -> ScoredTable:
    """Score every candidate under one criterion.

    Length-1 grams are scored by raw frequency whatever the criterion.
    """
    _check_criterion(criterion)
    scores: dict[int, dict[str, float]] = {}
    scores[1] = {g: float(f) for g, f in table.candidates(1).items()}
    for s in range(2, table.n_max + 1):
        out = {}
        for gram in table.candidates(s):
            if criterion == "frequency":
                out[gram] = float(table.freq(gram))
            elif criterion == "pmi":
                out[gram] = score_pmi(table, gram)
            else:
                out[gram] = score_pati(table, gram).PATI
        scores[s] = out
    return ScoredTable(criterion=criterion, n_max=table.n_max, scores=scores)


def score_records(table: NgramTable) -> list[AssocScore]:
    """Full AssocScore for every candidate of length >= 2, sorted by
    (length, gram)."""
    records = []
    for s in range(2, table.n_max + 1):
        for gram in sorted(table.candidates(s)):
            records.append(score_pati(table, gram))
    return records


def _check_criterion(criterion: str):
    if criterion not in CRITERIA:
        raise ValueError(
            f"unknown criterion {criterion!r}; expected one of {CRITERIA}")


# -- TSV dump ------------------------------------------------------------------

_SCORES_HEADER = "gram\tlength\tF\tPMI\tMP\tAT\tPATI"


def write_scores(table: NgramTable, path: str):
    """Score dump: one row per candidate, all measures.

    Length-1 rows carry the frequency and 'nan' for split-based measures.
    Floats are written with full round-trip precision so a reload ranks
    identically to the in-memory scores.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_SCORES_HEADER + "\n")
        for gram in sorted(table.candidates(1)):
            f = table.freq(gram)
            fh.write(f"{escape_gram(gram)}\t1\t{f}\tnan\tnan\tnan\tnan\n")
        for rec in score_records(table):
            fh.write(
                f"{escape_gram(rec.gram)}\t{rec.length}\t{rec.F}\t"
                f"{rec.PMI!r}\t{rec.MP!r}\t{rec.AT!r}\t{rec.PATI!r}\n")


@dataclass(frozen=True)
class ScoreRow:
    gram: str
    length: int
    F: int
    PMI: float
    MP: float
    AT: float
    PATI: float


def read_scores(path: str) -> list[ScoreRow]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != _SCORES_HEADER:
            raise ValueError(f"{path}: not a segfree scores file")
        for line in fh:
            fields = line.rstrip("\n").split("\t")
            gram = unescape_gram(fields[0])
            rows.append(ScoreRow(
                gram=gram,
                length=int(fields[1]),
                F=int(fields[2]),
                PMI=float(fields[3]),
                MP=float(fields[4]),
                AT=float(fields[5]),
                PATI=float(fields[6]),
            ))
    return rows


def scored_view(rows: Iterable[ScoreRow], criterion: str) -> ScoredTable:
    """Rebuild a per-criterion ScoredTable from dumped rows."""
    _check_criterion(criterion)
    scores: dict[int, dict[str, float]] = {}
    n_max = 1
    for row in rows:
        n_max = max(n_max, row.length)
        if row.length == 1:
            value = float(row.F)
        elif criterion == "frequency":
            value = float(row.F)
        elif criterion == "pmi":
            value = row.PMI
        else:
            value = row.PATI
        scores.setdefault(row.length, {})[row.gram] = value
    return ScoredTable(criterion=criterion, n_max=n_max, scores=scores)

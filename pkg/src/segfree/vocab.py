"""Per-length top-K selection of the embedding vocabulary."""

from __future__ import annotations

from dataclasses import dataclass

from .assoc import ScoredTable
from .counts import escape_gram, unescape_gram

# Default per-length budgets; totals 1,005,000 across lengths 1..6.
PAPER_BUDGETS = {1: 5000, 2: 300000, 3: 300000, 4: 300000, 5: 50000, 6: 50000}


@dataclass(frozen=True)
class VocabEntry:
    id: int
    gram: str
    length: int
    score: float


@dataclass(frozen=True)
class Vocabulary:
    """Selected grams with dense ids assigned in (length, rank) order."""

    entries: tuple[VocabEntry, ...]
    k_per_length: dict[int, int]
    criterion: str

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def grams(self) -> list[str]:
        return [e.gram for e in self.entries]

    def id_of(self) -> dict[str, int]:
        return {e.gram: e.id for e in self.entries}

    def length_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for e in self.entries:
            out[e.length] = out.get(e.length, 0) + 1
        return out


def select_topk(scored: ScoredTable, k_per_length: dict[int, int]) -> Vocabulary:
    """Truncate each length to its budget by descending score.

    Ties break by lexicographic gram order so selection is reproducible
    across platforms. Lengths missing from k_per_length get budget 0.
    """
    for length, k in k_per_length.items():
        if k < 0:
            raise ValueError(f"budget for length {length} is negative: {k}")
    entries = []
    next_id = 0
    for length in range(1, scored.n_max + 1):
        budget = k_per_length.get(length, 0)
        if budget == 0:
            continue
        table = scored.scores.get(length, {})
        ranked = sorted(table.items(), key=lambda kv: (-kv[1], kv[0]))
        for gram, score in ranked[:budget]:
            entries.append(VocabEntry(id=next_id, gram=gram,
                                      length=length, score=score))
            next_id += 1
    return Vocabulary(entries=tuple(entries),
                      k_per_length=dict(k_per_length),
                      criterion=scored.criterion)


def scale_budgets(base: dict[int, int], total: int) -> dict[int, int]:
    """Shrink or grow a budget profile to a target total size.

    Every per-length budget scales by total / sum(base), rounded down;
    scaling is monotone in the target so growing the total never drops a
    previously selected gram.
    """
    base_total = sum(base.values())
    if base_total == 0:
        return {length: 0 for length in base}
    return {length: (k * total) // base_total for length, k in base.items()}


# -- vocabulary file -----------------------------------------------------------

_VOCAB_HEADER = "id\tgram\tlength\tscore"


def write_vocab(vocabulary: Vocabulary, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_VOCAB_HEADER + "\n")
        for e in vocabulary.entries:
            fh.write(f"{e.id}\t{escape_gram(e.gram)}\t{e.length}\t{e.score!r}\n")


def read_vocab(path: str) -> Vocabulary:
    entries = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != _VOCAB_HEADER:
            raise ValueError(f"{path}: not a segfree vocabulary file")
        for line in fh:
            ident, gram, length, score = line.rstrip("\n").split("\t")
            entries.append(VocabEntry(id=int(ident), gram=unescape_gram(gram),
                                      length=int(length), score=float(score)))
    k_per_length: dict[int, int] = {}
    for e in entries:
        k_per_length[e.length] = k_per_length.get(e.length, 0) + 1
    return Vocabulary(entries=tuple(entries), k_per_length=k_per_length,
                      criterion="unknown")

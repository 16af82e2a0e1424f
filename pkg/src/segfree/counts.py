"""Exact n-gram counting and the affix aggregates behind the dominance term.

Two views live in one table. Raw counts hold the exact corpus frequency of
every window of length 1..n_max, with no threshold, because split
frequencies f_a and f_b must be raw. Candidate tables keep only grams with
frequency >= min_count at their own length; these are the universe that
selection, scoring, and the affix sets {a,*} / {*,b} range over.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import accumulate

from .corpus import CharCorpus
from .errors import NgramLengthError

_MAX_CODEPOINT = 0x10FFFF


@dataclass(frozen=True)
class AffixAggregate:
    """Summed frequency and set size of {prefix,*} or {*,suffix} at one length."""

    total: int
    set_size: int


class NgramTable:
    """Per-length frequency tables plus the sorted indexes serving aggregates."""

    def __init__(self, n_max: int, min_count: int, n_chars: int,
                 raw: dict[int, dict[str, int]]):
        self.n_max = n_max
        self.min_count = min_count
        self.n_chars = n_chars
        self._raw = raw
        if min_count <= 1:
            self._cand = raw
        else:
            self._cand = {
                s: {g: f for g, f in table.items() if f >= min_count}
                for s, table in raw.items()
            }
        self._prefix_idx: dict[int, tuple[list[str], list[int]]] = {}
        self._suffix_idx: dict[int, tuple[list[str], list[int]]] = {}

    # -- raw frequency queries -------------------------------------------

    def freq(self, gram: str) -> int:
        """Exact corpus occurrence count, 0 if never seen.

        Serves raw counts below min_count too; split frequencies must not
        be thresholded.
        """
        self._check_length(len(gram))
        return self._raw[len(gram)].get(gram, 0)

    # -- candidate view ---------------------------------------------------

    def is_candidate(self, gram: str) -> bool:
        s = len(gram)
        if not 1 <= s <= self.n_max:
            return False
        return gram in self._cand[s]

    def candidates(self, length: int) -> dict[str, int]:
        """Grams of one length meeting min_count, with their frequencies."""
        self._check_length(length)
        return self._cand[length]

    def n_candidates(self, length: int) -> int:
        self._check_length(length)
        return len(self._cand[length])

    def lengths(self):
        return range(1, self.n_max + 1)

    # -- affix aggregates --------------------------------------------------

    def prefix_aggregate(self, prefix: str, s: int) -> AffixAggregate:
        """Aggregate over stored length-s candidates that start with prefix."""
        self._check_affix(len(prefix), s)
        grams, cum = self._index(s, self._prefix_idx, reverse=False)
        return _range_aggregate(grams, cum, prefix)

    def suffix_aggregate(self, suffix: str, s: int) -> AffixAggregate:
        """Aggregate over stored length-s candidates that end with suffix."""
        self._check_affix(len(suffix), s)
        grams, cum = self._index(s, self._suffix_idx, reverse=True)
        return _range_aggregate(grams, cum, suffix[::-1])

    # -- internals ----------------------------------------------------------

    def _check_length(self, s: int):
        if not 1 <= s <= self.n_max:
            raise NgramLengthError(
                f"gram length {s} outside table range 1..{self.n_max}")

    def _check_affix(self, affix_len: int, s: int):
        if not (0 < affix_len < s <= self.n_max):
            raise NgramLengthError(
                f"affix length {affix_len} invalid for gram length {s} "
                f"(need 0 < affix < s <= {self.n_max})")

    def _index(self, s, cache, reverse):
        idx = cache.get(s)
        if idx is None:
            keys = (g[::-1] for g in self._cand[s]) if reverse else self._cand[s]
            grams = sorted(keys)
            freqs = (
                [self._cand[s][g[::-1]] for g in grams]
                if reverse
                else [self._cand[s][g] for g in grams]
            )
            cum = [0] + list(accumulate(freqs))
            idx = (grams, cum)
            cache[s] = idx
        return idx


def _range_aggregate(grams: list[str], cum: list[int], prefix: str) -> AffixAggregate:
    lo = bisect_left(grams, prefix)
    upper = _prefix_upper_bound(prefix)
    hi = len(grams) if upper is None else bisect_left(grams, upper)
    return AffixAggregate(total=cum[hi] - cum[lo], set_size=hi - lo)


def _prefix_upper_bound(prefix: str) -> str | None:
    """Smallest string greater than every string starting with prefix."""
    for i in reversed(range(len(prefix))):
        cp = ord(prefix[i])
        if cp < _MAX_CODEPOINT:
            return prefix[:i] + chr(cp + 1)
    return None


def count_ngrams(corpus: CharCorpus, n_max: int = 6, min_count: int = 2,
                 threads: int = 1) -> NgramTable:
    """Count every window of length 1..n_max that lies inside one line.

    threads > 1 shards lines across processes; the merge is pure addition,
    so results are identical to a single-threaded count.
    """
    if not 1 <= n_max <= 8:
        raise NgramLengthError(f"n_max must be in 1..8, got {n_max}")
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")

    lines = corpus.lines
    if threads > 1 and len(lines) > 1:
        raw = _count_sharded(lines, n_max, threads)
    else:
        raw = _count_lines(lines, n_max)
    per_length = {s: dict(raw[s]) for s in range(1, n_max + 1)}
    return NgramTable(n_max=n_max, min_count=min_count,
                      n_chars=corpus.n_chars, raw=per_length)


def _count_lines(lines, n_max: int) -> dict[int, Counter]:
    tables = {s: Counter() for s in range(1, n_max + 1)}
    for line in lines:
        ln = len(line)
        for s in range(1, min(n_max, ln) + 1):
            tab = tables[s]
            for i in range(ln - s + 1):
                tab[line[i:i + s]] += 1
    return tables


def _count_sharded(lines, n_max: int, threads: int) -> dict[int, Counter]:
    shard = max(1, (len(lines) + threads - 1) // threads)
    chunks = [lines[i:i + shard] for i in range(0, len(lines), shard)]
    tables = {s: Counter() for s in range(1, n_max + 1)}
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for partial in pool.map(_count_lines, chunks, [n_max] * len(chunks)):
            for s, tab in partial.items():
                tables[s].update(tab)
    return tables


# -- TSV checkpoint -----------------------------------------------------------

_HEADER = "# segfree-counts v1"


def dump_counts(table: NgramTable, path: str):
    """Checkpoint raw counts to TSV: 'gram<TAB>freq', all lengths in one file."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{_HEADER}\n")
        fh.write(f"# n_chars={table.n_chars}\n")
        fh.write(f"# n_max={table.n_max}\n")
        fh.write(f"# min_count={table.min_count}\n")
        for s in table.lengths():
            for gram in sorted(table._raw[s]):
                fh.write(f"{escape_gram(gram)}\t{table._raw[s][gram]}\n")


def load_counts(path: str) -> NgramTable:
    """Rebuild a table from dump_counts output."""
    meta = {}
    raw: dict[int, dict[str, int]] = {}
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if first != _HEADER:
            raise ValueError(f"{path}: not a segfree counts file")
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# "):
                key, _, value = line[2:].partition("=")
                meta[key] = int(value)
                continue
            gram_field, _, freq_field = line.partition("\t")
            gram = unescape_gram(gram_field)
            raw.setdefault(len(gram), {})[gram] = int(freq_field)
    n_max = meta["n_max"]
    for s in range(1, n_max + 1):
        raw.setdefault(s, {})
    return NgramTable(n_max=n_max, min_count=meta["min_count"],
                      n_chars=meta["n_chars"], raw=raw)


def escape_gram(gram: str) -> str:
    """Make a gram safe as a TSV field (tabs/newlines only appear with
    --keep-whitespace corpora)."""
    return (gram.replace("\\", "\\\\").replace("\t", "\\t")
            .replace("\n", "\\n").replace("\r", "\\r"))


def unescape_gram(field: str) -> str:
    out = []
    i = 0
    while i < len(field):
        ch = field[i]
        if ch == "\\" and i + 1 < len(field):
            nxt = field[i + 1]
            out.append({"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)

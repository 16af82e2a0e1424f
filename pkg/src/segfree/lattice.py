"""Occurrence scanning and training-pair generation over the n-gram lattice.

The corpus is scanned with a set-matching automaton (Aho-Corasick) built
from the vocabulary, so every occurrence of every vocabulary gram is found
in one pass per line. Two occurrences are lattice neighbours when one
starts exactly where the other ends; with the context window fixed at 1,
each adjacency yields both directed word-context pairs. Pairs never cross
line boundaries and are streamed, not materialized.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .corpus import CharCorpus
from .errors import UnsupportedWindowError
from .vocab import Vocabulary


@dataclass(frozen=True)
class Occurrence:
    """One vocabulary gram occurrence within a line: [start, end)."""

    vocab_id: int
    start: int
    end: int


@dataclass(frozen=True)
class PairBatch:
    """Positive and negative (target, context) id pairs for one loss batch."""

    positives: tuple[tuple[int, int], ...]
    negatives: tuple[tuple[int, int], ...]


class _AcNode:
    __slots__ = ("goto", "fail", "out")

    def __init__(self):
        self.goto: dict[str, _AcNode] = {}
        self.fail: _AcNode | None = None
        self.out: list[tuple[int, int]] = []  # (vocab_id, pattern_length)


class Automaton:
    """Aho-Corasick automaton over the vocabulary grams."""

    def __init__(self, patterns: Iterable[tuple[str, int]]):
        self.root = _AcNode()
        for gram, vocab_id in patterns:
            node = self.root
            for ch in gram:
                node = node.goto.setdefault(ch, _AcNode())
            node.out.append((vocab_id, len(gram)))
        self._build_failures()

    def _build_failures(self):
        queue = deque()
        for node in self.root.goto.values():
            node.fail = self.root
            queue.append(node)
        while queue:
            current = queue.popleft()
            for ch, node in current.goto.items():
                queue.append(node)
                fail = current.fail
                while fail is not None and ch not in fail.goto:
                    fail = fail.fail
                node.fail = fail.goto[ch] if fail is not None else self.root
                node.out.extend(node.fail.out)

    def find_all(self, text: str) -> list[Occurrence]:
        """All pattern occurrences in text, sorted by (start, end)."""
        node = self.root
        hits = []
        for i, ch in enumerate(text):
            while node is not self.root and ch not in node.goto:
                node = node.fail
            node = node.goto.get(ch, self.root)
            for vocab_id, length in node.out:
                hits.append(Occurrence(vocab_id=vocab_id,
                                       start=i + 1 - length, end=i + 1))
        hits.sort(key=lambda o: (o.start, o.end))
        return hits


def build_automaton(vocabulary: Vocabulary) -> Automaton:
    if len(vocabulary) == 0:
        raise ValueError("vocabulary is empty; nothing to scan for")
    return Automaton((e.gram, e.id) for e in vocabulary)


def scan_occurrences(
    corpus: CharCorpus,
    vocabulary: Vocabulary,
    automaton: Automaton | None = None,
) -> Iterator[tuple[int, list[Occurrence]]]:
    """Per-line occurrence stream: (line_index, occurrences sorted by span)."""
    ac = automaton if automaton is not None else build_automaton(vocabulary)
    for line_idx, line in enumerate(corpus.lines):
        yield line_idx, ac.find_all(line)


def occurrence_counts(corpus: CharCorpus, vocabulary: Vocabulary) -> np.ndarray:
    """Occurrence count per vocabulary id; equals the raw corpus frequency."""
    counts = np.zeros(len(vocabulary), dtype=np.int64)
    for _, occs in scan_occurrences(corpus, vocabulary):
        for occ in occs:
            counts[occ.vocab_id] += 1
    return counts


def positive_pairs(
    occurrence_stream: Iterable[tuple[int, list[Occurrence]]],
    h: int = 1,
) -> Iterator[tuple[int, int]]:
    """Directed (target, context) pairs from adjacent occurrences.

    Only h = 1 is defined: v is a neighbour of u when v.start == u.end,
    and both (u, v) and (v, u) are emitted. Larger windows are refused
    because multi-hop lattice context has no agreed meaning.
    """
    if h < 1:
        raise UnsupportedWindowError(f"context window must be >= 1, got {h}")
    if h != 1:
        raise UnsupportedWindowError(
            f"context window {h} unsupported: only h = 1 adjacency is defined")
    for _, occs in occurrence_stream:
        by_start: dict[int, list[Occurrence]] = {}
        for occ in occs:
            by_start.setdefault(occ.start, []).append(occ)
        for u in occs:
            for v in by_start.get(u.end, ()):
                yield u.vocab_id, v.vocab_id
                yield v.vocab_id, u.vocab_id


def pair_supplier(corpus: CharCorpus, vocabulary: Vocabulary, h: int = 1):
    """Replayable pair stream: each call rescans the corpus.

    The automaton is built once and shared across replays.
    """
    ac = build_automaton(vocabulary)

    def supply() -> Iterator[tuple[int, int]]:
        return positive_pairs(scan_occurrences(corpus, vocabulary, ac), h=h)

    return supply


_POW_RE = re.compile(r"^pow(\d{1,3})$")


def parse_distribution(name: str) -> tuple[str, float]:
    """CLI distribution names: 'uniform' or 'powNN' (NN/100 exponent)."""
    if name == "uniform":
        return "uniform", 0.0
    if name == "freq_pow":
        return "freq_pow", 0.75
    m = _POW_RE.match(name)
    if m:
        return "freq_pow", int(m.group(1)) / 100.0
    raise ValueError(f"unknown negative-sampling distribution {name!r}")


class NegativeSampler:
    """Reproducible draws of vocabulary ids for negative sampling.

    freq_pow draws id with probability proportional to frequency**beta
    (default 0.75); uniform ignores frequencies.
    """

    def __init__(self, vocab_size: int, distribution: str = "freq_pow",
                 seed: int = 0, frequencies=None, beta: float = 0.75):
        if vocab_size <= 0:
            raise ValueError("vocabulary is empty; cannot sample negatives")
        self.vocab_size = vocab_size
        self.distribution = distribution
        self.beta = beta
        self._rng = np.random.default_rng(seed)
        if distribution == "uniform":
            self._cum = None
        elif distribution == "freq_pow":
            if frequencies is None:
                raise ValueError("freq_pow sampling needs per-id frequencies")
            weights = np.asarray(frequencies, dtype=np.float64) ** beta
            if weights.shape != (vocab_size,):
                raise ValueError(
                    f"frequencies shape {weights.shape} != ({vocab_size},)")
            total = weights.sum()
            if total <= 0:
                raise ValueError("all sampling weights are zero")
            self._cum = np.cumsum(weights / total)
            self._cum[-1] = 1.0
        else:
            raise ValueError(f"unknown distribution {distribution!r}")

    def sample(self, count: int) -> np.ndarray:
        if self._cum is None:
            return self._rng.integers(0, self.vocab_size, size=count,
                                      dtype=np.int64)
        u = self._rng.random(count)
        return np.searchsorted(self._cum, u, side="right").astype(np.int64)


def negative_sampler(vocabulary: Vocabulary, distribution: str = "freq_pow",
                     seed: int = 0, frequencies=None,
                     beta: float = 0.75) -> NegativeSampler:
    """Sampler over the vocabulary's id space."""
    return NegativeSampler(vocab_size=len(vocabulary),
                           distribution=distribution, seed=seed,
                           frequencies=frequencies, beta=beta)


# -- debug dump ---------------------------------------------------------------


def dump_pairs(pairs: Iterable[tuple[int, int]], path: str) -> int:
    """Write 'wt_id<TAB>wc_id' rows; returns the number of pairs written."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for wt, wc in pairs:
            fh.write(f"{wt}\t{wc}\n")
            n += 1
    return n

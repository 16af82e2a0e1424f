"""Corpus ingestion: raw UTF-8 text to a normalized character corpus.

A corpus is a sequence of lines, each a sequence of Unicode scalar values.
Line breaks are hard boundaries: no n-gram may cross them. Characters are
code points, not grapheme clusters, so CJK text counts one unit per hanzi.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .errors import CorpusDecodeError

# In-line ASCII whitespace that survives line splitting.
_INLINE_WS = {ord(" "): None, ord("\t"): None}


@dataclass(frozen=True)
class NormalizeConfig:
    """How raw text is normalized before counting.

    drop_whitespace: remove ASCII spaces and tabs inside lines (default on;
    SNS-style corpora carry no meaningful in-line whitespace).
    casefold: Unicode-casefold letters (default off).
    """

    drop_whitespace: bool = True
    casefold: bool = False


@dataclass(frozen=True)
class CharCorpus:
    """Immutable normalized corpus with line boundaries.

    n_chars is the corpus size N used as the normalizer in association
    scores; it always equals the sum of line lengths.
    """

    lines: tuple[str, ...]
    n_chars: int
    source_digest: str
    normalize: NormalizeConfig = field(default=NormalizeConfig())

    def __post_init__(self):
        assert self.n_chars == sum(len(ln) for ln in self.lines)

    def __iter__(self):
        return iter(self.lines)

    def __len__(self):
        return len(self.lines)


def load_corpus(
    source,
    normalize: NormalizeConfig = NormalizeConfig(),
    max_lines: int | None = None,
) -> CharCorpus:
    """Load a corpus from a path, binary file object, or raw bytes.

    Invalid UTF-8 raises CorpusDecodeError with the byte offset; empty
    input yields an empty corpus. max_lines truncates after normalization
    (debugging aid).
    """
    data = _read_bytes(source)
    digest = hashlib.sha256(data).hexdigest()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusDecodeError(exc.start, exc.reason) from exc

    lines = text.splitlines()
    if max_lines is not None:
        lines = lines[:max_lines]
    if normalize.casefold:
        lines = [ln.casefold() for ln in lines]
    if normalize.drop_whitespace:
        lines = [ln.translate(_INLINE_WS) for ln in lines]

    n_chars = sum(len(ln) for ln in lines)
    return CharCorpus(
        lines=tuple(lines),
        n_chars=n_chars,
        source_digest=digest,
        normalize=normalize,
    )


def corpus_stats(corpus: CharCorpus) -> dict:
    """Basic counts: total characters, lines, and distinct characters."""
    distinct = set()
    for line in corpus.lines:
        distinct.update(line)
    return {
        "n_chars": corpus.n_chars,
        "n_lines": len(corpus.lines),
        "distinct_chars": len(distinct),
    }


def _read_bytes(source) -> bytes:
    if isinstance(source, bytes):
        return source
    if isinstance(source, (str,)):
        with open(source, "rb") as fh:
            return fh.read()
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, str):
            # Text handles are tolerated but must carry no decode errors.
            return data.encode("utf-8")
        return data
    raise TypeError(f"cannot read corpus from {type(source).__name__}")


def read_stdin_bytes() -> bytes:
    """Raw bytes from standard input (CLI '-' convention)."""
    import sys

    buf = getattr(sys.stdin, "buffer", None)
    if buf is None:  # pragma: no cover - exotic stdin replacement
        return sys.stdin.read().encode("utf-8")
    return buf.read()

"""Skip-gram negative-sampling training over lattice pairs.

The objective summed over a batch is

    L = sum over positives of log(1 + exp(-x_t . x_c))
      + sum over negatives of log(1 + exp(+x_t . x_c))

optimized by plain SGD: each (target, context) pair updates exactly its
two rows. Both gradients of one step are evaluated at the pre-step rows.
For a positive pair the shared coefficient is sigmoid(dot) - 1, for a
negative it is sigmoid(dot); the row update is then x -= alpha * coeff *
other_row. Negatives keep the target id and resample the context id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import TrainingError
from .lattice import NegativeSampler, PairBatch
from .vocab import Vocabulary


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 200
    iterations: int = 5
    alpha_init: float = 0.01
    window: int = 1
    eta_neg: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.dim <= 0 or self.iterations < 0:
            raise ValueError("dim must be positive and iterations >= 0")
        if self.alpha_init <= 0 or self.window <= 0 or self.eta_neg <= 0:
            raise ValueError("alpha_init, window, and eta_neg must be positive")


@dataclass
class EmbeddingMatrix:
    """Target and context vectors, one row per vocabulary id."""

    target: np.ndarray
    context: np.ndarray

    @property
    def vocab_size(self) -> int:
        return self.target.shape[0]

    @property
    def dim(self) -> int:
        return self.target.shape[1]

    def copy(self) -> "EmbeddingMatrix":
        return EmbeddingMatrix(self.target.copy(), self.context.copy())


def init_embeddings(vocab_size: int, dim: int, seed: int = 0) -> EmbeddingMatrix:
    """Target rows uniform in [-0.5/dim, +0.5/dim]; context rows zero."""
    if vocab_size <= 0 or dim <= 0:
        raise ValueError("vocab_size and dim must be positive")
    rng = np.random.default_rng(seed)
    target = (rng.random((vocab_size, dim)) - 0.5) / dim
    context = np.zeros((vocab_size, dim))
    return EmbeddingMatrix(target=target, context=context)


def sigmoid(x):
    """Numerically stable logistic function."""
    out = np.empty_like(x, dtype=np.float64) if isinstance(x, np.ndarray) else None
    if out is None:
        if x >= 0:
            return 1.0 / (1.0 + np.exp(-x))
        e = np.exp(x)
        return e / (1.0 + e)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _softplus(x):
    return np.logaddexp(0.0, x)


def sgns_loss(matrix: EmbeddingMatrix, batch: PairBatch) -> float:
    """Exact objective value on one batch, stable for |dot| up to ~1e3."""
    total = 0.0
    if batch.positives:
        t = np.fromiter((p[0] for p in batch.positives), dtype=np.int64)
        c = np.fromiter((p[1] for p in batch.positives), dtype=np.int64)
        dots = np.einsum("ij,ij->i", matrix.target[t], matrix.context[c])
        total += float(_softplus(-dots).sum())
    if batch.negatives:
        t = np.fromiter((p[0] for p in batch.negatives), dtype=np.int64)
        c = np.fromiter((p[1] for p in batch.negatives), dtype=np.int64)
        dots = np.einsum("ij,ij->i", matrix.target[t], matrix.context[c])
        total += float(_softplus(dots).sum())
    return total


def sgd_step(matrix: EmbeddingMatrix, pair: tuple[int, int],
             is_positive: bool, alpha: float):
    """One descent step on one pair's loss term; touches only two rows."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    t, c = pair
    x_t = matrix.target[t]
    x_c = matrix.context[c]
    dot = float(x_t @ x_c)
    coeff = sigmoid(dot) - 1.0 if is_positive else sigmoid(dot)
    step = alpha * coeff
    old_t = x_t.copy()
    x_t -= step * x_c
    x_c -= step * old_t


def train(
    supplier: Callable[[], Iterable[tuple[int, int]]],
    config: TrainConfig,
    vocab_size: int,
    sampler: NegativeSampler,
    n_pairs: int | None = None,
    epoch_hook: Callable[[int, float], None] | None = None,
) -> EmbeddingMatrix:
    """Run `iterations` passes over the replayable positive-pair stream.

    The learning rate decays linearly from alpha_init to alpha_init/100
    across all scheduled updates (one update = one positive pair plus its
    eta_neg negatives). Deterministic for a fixed seed: pair order, the
    negative draws, and the float operations are all sequenced identically
    on every run. epoch_hook, if given, receives (epoch, mean event loss).
    """
    if n_pairs is None:
        n_pairs = sum(1 for _ in supplier())
    if n_pairs == 0:
        raise TrainingError("pair stream is empty; nothing to train on")

    matrix = init_embeddings(vocab_size, config.dim, config.seed)
    if config.iterations == 0:
        return matrix

    total_events = config.iterations * n_pairs
    alpha_floor = config.alpha_init / 100.0
    alpha_span = config.alpha_init - alpha_floor
    eta = config.eta_neg
    target = matrix.target
    context = matrix.context
    event = 0

    for epoch in range(config.iterations):
        epoch_loss = 0.0
        epoch_events = 0
        for t, c in supplier():
            alpha = config.alpha_init - alpha_span * (event / total_events)
            neg_ids = sampler.sample(eta)

            x_t = target[t]
            dot_pos = float(x_t @ context[c])
            dots_neg = context[neg_ids] @ x_t
            epoch_loss += float(_softplus(-dot_pos) + _softplus(dots_neg).sum())
            epoch_events += 1

            # positive step
            step = alpha * (sigmoid(dot_pos) - 1.0)
            old_t = x_t.copy()
            x_t -= step * context[c]
            context[c] -= step * old_t
            # negative steps, in draw order
            for nc in neg_ids:
                dot = float(x_t @ context[nc])
                step = alpha * sigmoid(dot)
                old_t = x_t.copy()
                x_t -= step * context[nc]
                context[nc] -= step * old_t

            event += 1
        if epoch_hook is not None:
            epoch_hook(epoch, epoch_loss / max(epoch_events, 1))

    return matrix


# -- word2vec-style text export -------------------------------------------------


def export_embeddings(matrix: EmbeddingMatrix, vocabulary: Vocabulary,
                      path: str, fmt: str = "text"):
    """Write target vectors as 'gram v1 ... v_dim' rows under a 'V dim'
    header, 9 significant digits per value."""
    if fmt != "text":
        raise ValueError(f"unsupported embedding format {fmt!r}")
    if len(vocabulary) != matrix.vocab_size:
        raise ValueError(
            f"vocabulary size {len(vocabulary)} != matrix rows {matrix.vocab_size}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{matrix.vocab_size} {matrix.dim}\n")
        for entry in vocabulary:
            if any(ch.isspace() for ch in entry.gram):
                raise ValueError(
                    f"gram {entry.gram!r} contains whitespace; text format "
                    "cannot represent it (was the corpus loaded with "
                    "whitespace kept?)")
            row = matrix.target[entry.id]
            values = " ".join(f"{v:.9g}" for v in row)
            fh.write(f"{entry.gram} {values}\n")


def read_embeddings(path: str) -> tuple[list[str], np.ndarray]:
    """Parse the text format back into (grams in id order, target matrix)."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        n, dim = int(header[0]), int(header[1])
        grams = []
        matrix = np.zeros((n, dim))
        for i in range(n):
            fields = fh.readline().rstrip("\n").split(" ")
            grams.append(fields[0])
            matrix[i] = [float(v) for v in fields[1:]]
    return grams, matrix

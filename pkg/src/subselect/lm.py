"""Backoff n-gram language models with MLE, add-k, and Witten-Bell smoothing.

Events are the real tokens of each sentence plus one end marker; order-1
histories are padded with start markers. Counts are collected at every
history length down to zero so the interpolated smoother can recurse.
The predicted-event space is the regular vocabulary plus the end marker
and the unknown token, and every conditional distribution over it sums
to one (exactly for MLE on seen histories, within rounding otherwise).
"""

from __future__ import annotations

import json
import math
from collections import Counter
from typing import Iterable, Sequence

from .corpus import Corpus, Sentence
from .errors import ConfigError, EmptyCorpusError

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

LM_MAGIC = "subselect-ngram-lm"
LM_VERSION = 1

SMOOTHINGS = ("mle", "add-k", "interpolated-wb")


def parse_smoothing(text: str) -> tuple[str, float]:
    """Parse a smoothing id: ``mle``, ``add-k[:k]``, ``interpolated-wb``/``wb``."""
    if text == "mle":
        return "mle", 0.0
    if text in ("interpolated-wb", "wb"):
        return "interpolated-wb", 0.0
    if text == "add-k":
        return "add-k", 1.0
    if text.startswith("add-k:"):
        try:
            k = float(text.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"bad add-k constant in {text!r}") from exc
        if k <= 0:
            raise ConfigError(f"add-k constant must be positive, got {k}")
        return "add-k", k
    raise ConfigError(
        f"unknown smoothing {text!r}; expected one of: mle, add-k[:k], interpolated-wb"
    )


class NgramLanguageModel:
    """Counts plus a smoothing rule; probabilities are computed on demand."""

    def __init__(
        self,
        order: int,
        smoothing: str,
        add_k: float,
        markers: bool,
        unk_floor: int,
        vocab: frozenset[str],
        counts: dict[int, dict[tuple[str, ...], int]],
    ):
        self.order = order
        self.smoothing = smoothing
        self.add_k = add_k
        self.markers = markers
        self.unk_floor = unk_floor
        self.vocab = vocab
        self.counts = counts
        self._hist_total: dict[int, dict[tuple[str, ...], int]] = {}
        self._hist_types: dict[int, dict[tuple[str, ...], int]] = {}
        for k, table in counts.items():
            totals: dict[tuple[str, ...], int] = {}
            types: dict[tuple[str, ...], int] = {}
            for ngram, c in table.items():
                hist = ngram[:-1]
                totals[hist] = totals.get(hist, 0) + c
                types[hist] = types.get(hist, 0) + 1
            self._hist_total[k] = totals
            self._hist_types[k] = types

    @property
    def event_vocab_size(self) -> int:
        """Size of the predicted-event space: vocab plus end and unknown markers."""
        return len(self.vocab) + 2

    def event_vocab(self) -> list[str]:
        return sorted(self.vocab) + [EOS, UNK]

    def map_token(self, token: str) -> str:
        if token in self.vocab or token in (BOS, EOS, UNK):
            return token
        return UNK

    def _prob(self, word: str, hist: tuple[str, ...]) -> float:
        k = len(hist) + 1
        counts = self.counts.get(k, {})
        c_hist = self._hist_total.get(k, {}).get(hist, 0)
        if self.smoothing == "mle":
            if c_hist == 0:
                return 0.0
            return counts.get(hist + (word,), 0) / c_hist
        if self.smoothing == "add-k":
            k_const = self.add_k
            return (counts.get(hist + (word,), 0) + k_const) / (
                c_hist + k_const * self.event_vocab_size
            )
        # interpolated Witten-Bell: blend MLE with the next-shorter history,
        # bottoming out at the uniform distribution over predictable events
        lower = self._prob(word, hist[1:]) if k > 1 else 1.0 / self.event_vocab_size
        if c_hist == 0:
            return lower
        n_types = self._hist_types.get(k, {}).get(hist, 0)
        return (counts.get(hist + (word,), 0) + n_types * lower) / (c_hist + n_types)

    def conditional_prob(self, word: str, history: Sequence[str] = ()) -> float:
        """P(word | history) with OOV tokens mapped to the unknown marker.

        The history is truncated to the most recent order-1 tokens.
        """
        w = self.map_token(word)
        hist = tuple(self.map_token(t) for t in history)
        if self.order > 1:
            hist = hist[-(self.order - 1) :]
        else:
            hist = ()
        return self._prob(w, hist)


def train_lm(
    corpus: Corpus,
    order: int = 4,
    smoothing: str = "interpolated-wb",
    markers: bool = True,
    unk_floor: int = 1,
    extra_vocab: Iterable[str] | None = None,
) -> NgramLanguageModel:
    """Train an order-k model on the source side of a corpus.

    Tokens seen fewer than ``unk_floor`` times collapse to the unknown
    marker (the default of 1 keeps everything). ``extra_vocab`` widens
    the vocabulary, e.g. to share one event space between the two models
    of a ranking pair. ``markers=False`` drops sentence start/end
    handling for analytic test cases.
    """
    if order < 1:
        raise ConfigError(f"LM order must be >= 1, got {order}")
    if unk_floor < 1:
        raise ConfigError(f"unk floor must be >= 1, got {unk_floor}")
    kind, add_k = parse_smoothing(smoothing)
    if len(corpus) == 0:
        raise EmptyCorpusError("cannot train a language model on an empty corpus")

    freq: Counter[str] = Counter()
    for sent in corpus:
        freq.update(sent.source_tokens)
    vocab = {tok for tok, c in freq.items() if c >= unk_floor}
    if extra_vocab is not None:
        vocab.update(extra_vocab)
    vocab.discard(BOS)
    vocab.discard(EOS)
    vocab.discard(UNK)

    counts: dict[int, dict[tuple[str, ...], int]] = {k: {} for k in range(1, order + 1)}
    for sent in corpus:
        mapped = tuple(t if t in vocab else UNK for t in sent.source_tokens)
        if markers:
            seq = (BOS,) * (order - 1) + mapped + (EOS,)
            first = order - 1
        else:
            seq = mapped
            first = 0
        for i in range(first, len(seq)):
            limit = min(order - 1, i)
            for back in range(0, limit + 1):
                table = counts[back + 1]
                ngram = seq[i - back : i + 1]
                table[ngram] = table.get(ngram, 0) + 1
    return NgramLanguageModel(order, kind, add_k, markers, unk_floor, frozenset(vocab), counts)


def corpus_vocab(corpus: Corpus, unk_floor: int = 1) -> set[str]:
    """Source-side tokens meeting the frequency floor."""
    freq: Counter[str] = Counter()
    for sent in corpus:
        freq.update(sent.source_tokens)
    return {tok for tok, c in freq.items() if c >= unk_floor}


def log_prob(lm: NgramLanguageModel, x: Sentence | Sequence[str]) -> float:
    """Natural-log probability of a sentence under the model.

    With markers on, the end-marker event is included and histories are
    start-padded. An event the model gives zero probability (possible
    only for MLE) makes the result negative infinity.
    """
    tokens = x.source_tokens if isinstance(x, Sentence) else tuple(x)
    # literal marker strings in running text are out-of-vocabulary, same as in training
    mapped = tuple(t if t in lm.vocab else UNK for t in tokens)
    order = lm.order
    if lm.markers:
        seq = (BOS,) * (order - 1) + mapped + (EOS,)
        first = order - 1
    else:
        seq = mapped
        first = 0
    total = 0.0
    for i in range(first, len(seq)):
        hist = seq[max(0, i - order + 1) : i]
        p = lm._prob(seq[i], hist)
        if p <= 0.0:
            return float("-inf")
        total += math.log(p)
    return total


def save_lm(lm: NgramLanguageModel, path) -> None:
    """Serialize counts and settings to a versioned JSON file, deterministically."""
    payload = {
        "format": LM_MAGIC,
        "version": LM_VERSION,
        "order": lm.order,
        "smoothing": lm.smoothing,
        "add_k": lm.add_k,
        "markers": lm.markers,
        "unk_floor": lm.unk_floor,
        "vocab": sorted(lm.vocab),
        "counts": {
            str(k): {" ".join(ngram): c for ngram, c in table.items()}
            for k, table in lm.counts.items()
        },
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, ensure_ascii=False, sort_keys=True)
        fh.write("\n")


def load_lm(path) -> NgramLanguageModel:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not a language-model file") from exc
    if not isinstance(payload, dict) or payload.get("format") != LM_MAGIC:
        raise ConfigError(f"{path}: not a language-model file")
    if payload.get("version") != LM_VERSION:
        raise ConfigError(f"{path}: unsupported language-model version {payload.get('version')}")
    counts = {
        int(k): {tuple(key.split(" ")): int(c) for key, c in table.items()}
        for k, table in payload["counts"].items()
    }
    return NgramLanguageModel(
        order=int(payload["order"]),
        smoothing=payload["smoothing"],
        add_k=float(payload["add_k"]),
        markers=bool(payload["markers"]),
        unk_floor=int(payload["unk_floor"]),
        vocab=frozenset(payload["vocab"]),
        counts=counts,
    )

"""Cross-entropy-difference scoring and rank-based selection.

Each candidate sentence is scored by the per-word log-probability gap
between an in-domain language model and an out-of-domain one:

    score(x) = (log P(x | in) - log P(x | out)) / len(x)

Higher means more in-domain-like. Ranking is pure: duplicates of a
well-scoring sentence all score the same and are all taken, which is
exactly the redundancy blindness the coverage selector avoids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .corpus import Corpus
from .errors import ConfigError
from .lm import NgramLanguageModel, corpus_vocab, log_prob, train_lm
from .submodular import SelectionState, SelectionStep


@dataclass(frozen=True)
class ScoredSentence:
    id: int
    score: float
    length: int
    defined: bool = True  # False when both models assign zero probability


def _check_pair(lm_in: NgramLanguageModel, lm_out: NgramLanguageModel) -> None:
    if lm_in.order != lm_out.order:
        raise ConfigError(
            f"model orders differ: {lm_in.order} vs {lm_out.order}; train the pair together"
        )
    if lm_in.markers != lm_out.markers:
        raise ConfigError("models disagree on sentence markers; train the pair together")


def xent_score(sentence, lm_in: NgramLanguageModel, lm_out: NgramLanguageModel) -> ScoredSentence:
    """Length-normalized log-probability difference for one sentence.

    If both models assign zero probability the difference is undefined;
    the sentence is flagged and will rank after every defined one.
    """
    _check_pair(lm_in, lm_out)
    lp_in = log_prob(lm_in, sentence)
    lp_out = log_prob(lm_out, sentence)
    length = sentence.cost
    diff = lp_in - lp_out
    if math.isnan(diff):
        return ScoredSentence(sentence.id, float("nan"), length, defined=False)
    return ScoredSentence(sentence.id, diff / length, length)


def score_corpus(ground: Corpus, lm_in: NgramLanguageModel, lm_out: NgramLanguageModel) -> list[ScoredSentence]:
    """Score every ground sentence, in id order."""
    _check_pair(lm_in, lm_out)
    return [xent_score(sent, lm_in, lm_out) for sent in ground]


def train_domain_pair(
    in_domain: Corpus,
    out_domain: Corpus,
    order: int = 4,
    smoothing: str = "interpolated-wb",
    markers: bool = True,
    unk_floor: int = 1,
) -> tuple[NgramLanguageModel, NgramLanguageModel]:
    """Train the two ranking models over one shared vocabulary.

    Sharing the vocabulary union keeps the score well-defined for tokens
    known to only one side.
    """
    vocab_in = corpus_vocab(in_domain, unk_floor)
    vocab_out = corpus_vocab(out_domain, unk_floor)
    lm_in = train_lm(in_domain, order, smoothing, markers=markers, unk_floor=unk_floor,
                     extra_vocab=vocab_out)
    lm_out = train_lm(out_domain, order, smoothing, markers=markers, unk_floor=unk_floor,
                      extra_vocab=vocab_in)
    return lm_in, lm_out


def _rank_key(scored: ScoredSentence):
    # defined first, then score descending, then id ascending
    return (not scored.defined, -scored.score if scored.defined else 0.0, scored.id)


def rank_and_select(
    ground: Corpus,
    scores: list[ScoredSentence],
    n: int | None = None,
    budget_words: float | None = None,
) -> SelectionState:
    """Take the best-scoring sentences, by count or by word budget.

    Exactly one of ``n`` (top-N) and ``budget_words`` must be given. The
    budget form takes the longest score-ordered prefix whose cumulative
    source-word cost fits: the walk stops at the first sentence that
    does not fit rather than skipping it, keeping the output a pure
    ranking prefix.
    """
    if (n is None) == (budget_words is None):
        raise ConfigError("exactly one of n and budget_words must be given")
    if n is not None and n <= 0:
        raise ConfigError(f"selection size must be positive, got {n}")
    if budget_words is not None and budget_words <= 0:
        raise ConfigError(f"word budget must be positive, got {budget_words}")

    ranked = sorted(scores, key=_rank_key)
    state = SelectionState(
        budget=float(budget_words if budget_words is not None else n),
        cost_mode="words" if budget_words is not None else "unit",
        variant="rank",
    )
    for scored in ranked:
        if n is not None:
            if len(state.selected) >= n:
                break
            step_cost = 1
        else:
            step_cost = ground[scored.id].cost
            if state.spent + step_cost > budget_words:
                break
        state.spent += step_cost
        state.selected.append(scored.id)
        state.trajectory.append(
            SelectionStep(scored.id, scored.score, scored.score, state.spent)
        )
    return state

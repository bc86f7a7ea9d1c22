"""Shared helpers for building small random test instances."""

from __future__ import annotations

import random

from subselect.corpus import Corpus, Sentence
from subselect.features import FeatureSet, extract_feature_set, fit_idf
from subselect.submodular import ConcaveSpec

ALPHABET = ["a", "b", "c", "d", "e", "f", "g", "h"]

CURVES = [
    ConcaveSpec("power", 0.5),
    ConcaveSpec("power", 0.3),
    ConcaveSpec("power", 0.7),
    ConcaveSpec("power", 1.0),
    ConcaveSpec("log1p"),
]


def make_corpus(rng: random.Random, n_sentences: int, max_len: int = 6,
                alphabet: list[str] | None = None, parallel: bool = False) -> Corpus:
    alphabet = alphabet or ALPHABET
    sentences = []
    for i in range(n_sentences):
        length = rng.randint(1, max_len)
        toks = tuple(rng.choice(alphabet) for _ in range(length))
        tgt = tuple(reversed(toks)) if parallel else None
        sentences.append(Sentence(i, toks, tgt))
    return Corpus(tuple(sentences), parallel=parallel)


def make_instance(rng: random.Random, n_ground: int | None = None, max_order: int | None = None,
                  max_len: int = 6) -> tuple[Corpus, Corpus, FeatureSet]:
    """A random (ground, in_domain, fitted features) triple on a tiny alphabet."""
    n = n_ground if n_ground is not None else rng.randint(2, 12)
    order = max_order if max_order is not None else rng.randint(1, 3)
    ground = make_corpus(rng, n, max_len=max_len)
    in_domain = make_corpus(rng, rng.randint(2, 5), max_len=max_len)
    features = fit_idf(extract_feature_set(in_domain, order), ground)
    return ground, in_domain, features


def random_curve(rng: random.Random) -> ConcaveSpec:
    return rng.choice(CURVES)

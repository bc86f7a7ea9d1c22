"""Exhaustive test oracle and method-comparison metrics.

brute_force_optimal enumerates every budget-feasible subset, so it is
capped at 20 sentences and exists to verify the greedy's approximation
quality on desk-scale instances, not to select corpora.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .corpus import Corpus
from .errors import SizeCapError, StateError
from .features import FeatureSet, FeatureVector, featurize, iter_ngrams
from .submodular import ConcaveSpec, DEFAULT_CONCAVE, SelectionState

ORACLE_MAX_SENTENCES = 20
GUARANTEE_FLOOR = 0.63  # contractual pass line for the greedy/optimal ratio


# ---------------------------------------------------------------------------
# brute force


def _scratch_objective(ids, vectors, weight_of, concave) -> float:
    mass: dict = {}
    for idx in ids:
        for key, val in vectors[idx].items():
            mass[key] = mass.get(key, 0.0) + val
    total = 0.0
    for key, m in mass.items():
        total += weight_of(key) * float(concave.apply(m))
    return total


def _brute(vectors, costs, weight_of, concave, budget):
    n = len(vectors)
    best_ids: tuple[int, ...] = ()
    best_f = 0.0
    current: list[int] = []

    def consider(running_f: float) -> None:
        nonlocal best_ids, best_f
        if running_f < best_f - 1e-9:
            return
        # near the incumbent: settle it with an exact from-scratch value
        exact = _scratch_objective(current, vectors, weight_of, concave)
        ids = tuple(current)
        if exact > best_f or (
            exact == best_f and (len(ids), ids) < (len(best_ids), best_ids)
        ):
            best_ids, best_f = ids, exact

    def descend(start: int, spent: int, running_f: float, mass: dict) -> None:
        for idx in range(start, n):
            cost = costs[idx]
            if spent + cost > budget:
                continue
            delta = 0.0
            touched = []
            for key, val in vectors[idx].items():
                old = mass.get(key, 0.0)
                delta += weight_of(key) * float(concave.apply(old + val) - concave.apply(old))
                touched.append((key, old))
                mass[key] = old + val
            current.append(idx)
            consider(running_f + delta)
            descend(idx + 1, spent + cost, running_f + delta, mass)
            current.pop()
            for key, old in touched:
                if old == 0.0:
                    del mass[key]
                else:
                    mass[key] = old

    descend(0, 0, 0.0, {})
    return list(best_ids), best_f


def brute_force_optimal(
    ground: Corpus,
    features: FeatureSet,
    concave: ConcaveSpec = DEFAULT_CONCAVE,
    budget: float = 1,
    cost_mode: str = "words",
) -> tuple[list[int], float]:
    """Exact optimum by subset enumeration; ties prefer the smallest selection,
    then the lexicographically smallest id set. Refuses ground sets above 20
    sentences."""
    if len(ground) > ORACLE_MAX_SENTENCES:
        raise SizeCapError(
            f"ground set has {len(ground)} sentences; the exhaustive oracle is a "
            f"test tool capped at {ORACLE_MAX_SENTENCES}"
        )
    if not features.fitted:
        raise StateError("feature set is unfitted; call fit_idf first")
    if features.ground_size != len(ground):
        raise StateError(
            f"feature set was fitted against {features.ground_size} sentences, "
            f"but this ground set has {len(ground)}"
        )
    vectors = [featurize(sent, features).entries for sent in ground]
    costs = [sent.cost if cost_mode == "words" else 1 for sent in ground]
    table = features.features
    return _brute(vectors, costs, lambda u: table[u].weight, concave, budget)


def brute_force_vectors(
    vectors: Sequence[FeatureVector | Mapping],
    costs: Sequence[int],
    concave: ConcaveSpec = DEFAULT_CONCAVE,
    budget: float = 1,
    weights: Mapping | None = None,
) -> tuple[list[int], float]:
    """brute_force_optimal over explicit relevance vectors."""
    if len(vectors) > ORACLE_MAX_SENTENCES:
        raise SizeCapError(
            f"instance has {len(vectors)} items; the exhaustive oracle is a "
            f"test tool capped at {ORACLE_MAX_SENTENCES}"
        )
    plain = [v.entries if isinstance(v, FeatureVector) else dict(v) for v in vectors]
    if weights is None:
        weight_of = lambda u: 1.0
    else:
        weight_of = lambda u: float(weights.get(u, 1.0))
    return _brute(plain, list(costs), weight_of, concave, budget)


# ---------------------------------------------------------------------------
# selection metrics


@dataclass(frozen=True)
class CoverageStats:
    coverage: float  # fraction of coverable universe features present in the selection
    redundancy: float  # 1 - distinct/total over the selection's n-gram tokens
    type_token_ratio: float  # distinct n-gram types / n-gram tokens
    distinct_ngrams: int
    total_ngrams: int


def coverage_report(ground: Corpus, selected_ids: Sequence[int], features: FeatureSet) -> CoverageStats:
    """Coverage of the feature universe and type/token redundancy of a selection.

    A feature is coverable if any ground sentence contains it; it counts
    as covered when some selected sentence does. The redundancy measures
    repeated n-gram tokens (orders 1..max_order) inside the selection: a
    pile of K identical sentences has type/token ratio 1/K, hence
    redundancy 1 - 1/K.
    """
    table = features.features
    coverable = sum(1 for info in table.values() if info.doc_freq > 0)
    covered: set = set()
    types: set = set()
    tokens = 0
    for sid in selected_ids:
        toks = ground[sid].source_tokens
        for ngram in iter_ngrams(toks, features.max_order):
            tokens += 1
            types.add(ngram)
            if ngram in table:
                covered.add(ngram)
    coverage = (len(covered) / coverable) if coverable else 0.0
    ttr = (len(types) / tokens) if tokens else 0.0
    redundancy = 1.0 - ttr if tokens else 0.0
    return CoverageStats(coverage, redundancy, ttr, len(types), tokens)


@dataclass(frozen=True)
class MethodMetrics:
    method: str
    objective: float
    spent: int
    size: int
    coverage: float
    redundancy: float
    type_token_ratio: float


@dataclass
class ComparisonReport:
    budget: float
    cost_mode: str
    methods: list[MethodMetrics]
    optimal_objective: float | None = None
    optimal_ids: list[int] | None = None
    greedy_ratio: float | None = None

    def to_keyvalue_lines(self) -> list[str]:
        lines = [f"budget={self.budget!r}", f"cost_mode={self.cost_mode}"]
        for m in self.methods:
            lines += [
                f"{m.method}.objective={m.objective!r}",
                f"{m.method}.spent={m.spent}",
                f"{m.method}.size={m.size}",
                f"{m.method}.coverage={m.coverage!r}",
                f"{m.method}.redundancy={m.redundancy!r}",
                f"{m.method}.type_token_ratio={m.type_token_ratio!r}",
            ]
        if self.optimal_objective is not None:
            lines.append(f"oracle.optimal_objective={self.optimal_objective!r}")
            lines.append(f"oracle.optimal_ids={' '.join(str(i) for i in self.optimal_ids)}")
        if self.greedy_ratio is not None:
            lines.append(f"oracle.ratio={self.greedy_ratio!r}")
        return lines

    def to_csv_lines(self) -> list[str]:
        header = "method,objective,spent,size,coverage,redundancy,type_token_ratio,oracle_ratio"
        rows = [header]
        for m in self.methods:
            ratio = ""
            if self.greedy_ratio is not None and m.method == "submod":
                ratio = repr(self.greedy_ratio)
            rows.append(
                f"{m.method},{m.objective!r},{m.spent},{m.size},"
                f"{m.coverage!r},{m.redundancy!r},{m.type_token_ratio!r},{ratio}"
            )
        return rows

    def format_table(self) -> str:
        cols = ["method", "objective", "spent", "size", "coverage", "redundancy"]
        rows = [cols]
        for m in self.methods:
            rows.append(
                [
                    m.method,
                    f"{m.objective:.4f}",
                    str(m.spent),
                    str(m.size),
                    f"{m.coverage:.4f}",
                    f"{m.redundancy:.4f}",
                ]
            )
        widths = [max(len(r[i]) for r in rows) for i in range(len(cols))]
        out = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in rows]
        if self.optimal_objective is not None:
            out.append(
                f"oracle optimum {self.optimal_objective:.4f}"
                + (f", greedy ratio {self.greedy_ratio:.4f}" if self.greedy_ratio is not None else "")
            )
        return "\n".join(out)


def method_metrics(
    ground: Corpus,
    features: FeatureSet,
    concave: ConcaveSpec,
    method: str,
    selected_ids: Sequence[int],
    cost_mode: str,
) -> MethodMetrics:
    """Objective, spent cost, and coverage stats for one finished selection."""
    from .submodular import evaluate

    vectors = [featurize(ground[sid], features) for sid in selected_ids]
    objective = evaluate(vectors, features, concave)
    spent = sum(ground[sid].cost if cost_mode == "words" else 1 for sid in selected_ids)
    stats = coverage_report(ground, selected_ids, features)
    return MethodMetrics(
        method=method,
        objective=objective,
        spent=spent,
        size=len(selected_ids),
        coverage=stats.coverage,
        redundancy=stats.redundancy,
        type_token_ratio=stats.type_token_ratio,
    )


def build_report(
    ground: Corpus,
    features: FeatureSet,
    concave: ConcaveSpec,
    selections: Sequence[tuple[str, Sequence[int]]],
    budget: float,
    cost_mode: str,
    include_oracle: bool | None = None,
) -> ComparisonReport:
    """Assemble a ComparisonReport from finished selections.

    The oracle fields are filled when explicitly requested, or by
    default whenever the ground set is small enough to enumerate.
    """
    run_oracle = include_oracle if include_oracle is not None else len(ground) <= ORACLE_MAX_SENTENCES
    report = ComparisonReport(
        budget=float(budget),
        cost_mode=cost_mode,
        methods=[
            method_metrics(ground, features, concave, name, ids, cost_mode)
            for name, ids in selections
        ],
    )
    if run_oracle:
        optimal_ids, optimal_f = brute_force_optimal(ground, features, concave, budget, cost_mode)
        report.optimal_objective = optimal_f
        report.optimal_ids = optimal_ids
        for m in report.methods:
            if m.method == "submod" and optimal_f > 0:
                report.greedy_ratio = m.objective / optimal_f
    return report


def compare_methods(
    ground: Corpus,
    in_domain: Corpus,
    budget: float,
    cost_mode: str = "words",
    concave: ConcaveSpec = DEFAULT_CONCAVE,
    max_order: int = 7,
    feature_weighting: str = "uniform",
    variant: str = "lazy",
    lm_order: int = 4,
    lm_smoothing: str = "interpolated-wb",
    unk_floor: int = 1,
    include_oracle: bool | None = None,
    threads: int = 1,
) -> ComparisonReport:
    """Run both selectors on identical inputs and report side-by-side metrics."""
    from .features import extract_feature_set, fit_idf
    from .submodular import greedy_select
    from .xent import rank_and_select, score_corpus, train_domain_pair

    features = fit_idf(extract_feature_set(in_domain, max_order, feature_weighting), ground)
    submod_state = greedy_select(
        ground, features, concave, budget, cost_mode=cost_mode, variant=variant, threads=threads
    )
    lm_in, lm_out = train_domain_pair(in_domain, ground, lm_order, lm_smoothing, unk_floor=unk_floor)
    scores = score_corpus(ground, lm_in, lm_out)
    if cost_mode == "words":
        xent_state = rank_and_select(ground, scores, budget_words=budget)
    else:
        xent_state = rank_and_select(ground, scores, n=int(budget))
    return build_report(
        ground,
        features,
        concave,
        [("submod", submod_state.selected), ("xent", xent_state.selected)],
        budget,
        cost_mode,
        include_oracle=include_oracle,
    )

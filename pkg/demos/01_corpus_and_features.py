#!/usr/bin/env python3
"""Load corpora and build a tf-idf weighted n-gram feature space.

The feature universe comes from a small in-domain sample; relevance of a
feature inside any candidate sentence is its occurrence count times the
idf computed against the full ground set. Features that appear in every
ground sentence get idf 0 and drop out of all relevance vectors.
"""

import tempfile
from pathlib import Path

from subselect import (
    extract_feature_set,
    featurize,
    fit_idf,
    load_corpus,
    save_feature_set,
)

IN_DOMAIN = """\
the committee approved the budget
the committee rejected the amendment
"""

GROUND = """\
the committee approved the budget
members debated the amendment all day
the weather stayed dry

the committee adjourned
"""


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        in_path = Path(tmp) / "in_domain.src"
        ground_path = Path(tmp) / "ground.src"
        in_path.write_text(IN_DOMAIN, encoding="utf-8")
        ground_path.write_text(GROUND, encoding="utf-8")

        in_domain = load_corpus(in_path, tokenizer="whitespace")
        ground = load_corpus(ground_path, tokenizer="whitespace")
        print(f"in-domain: {len(in_domain)} sentences")
        print(f"ground:    {len(ground)} sentences, {ground.total_cost} words "
              f"({ground.n_skipped} blank line skipped)")

        features = fit_idf(extract_feature_set(in_domain, max_order=3), ground)
        print(f"\nfeature universe: {len(features)} n-grams up to order {features.max_order}")

        print("\nsample features (n-gram, ground doc freq, idf):")
        for ngram, info in sorted(features.features.items(), key=lambda kv: " ".join(kv[0]))[:8]:
            idf = "absent from ground" if info.idf is None else f"{info.idf:.4f}"
            print(f"  {' '.join(ngram):28s} df={info.doc_freq}  idf={idf}")

        print("\nrelevance vectors (count * idf, zero-idf features dropped):")
        for sent in ground:
            vec = featurize(sent, features)
            shown = {" ".join(k): round(v, 3) for k, v in sorted(vec.entries.items())}
            print(f"  [{sent.id}] {' '.join(sent.source_tokens)}")
            print(f"      {shown}")

        out = Path(tmp) / "features.tsv"
        save_feature_set(features, out)
        print(f"\nwrote the fitted feature set to {out.name} "
              f"({len(out.read_text().splitlines())} lines, reload-stable)")


if __name__ == "__main__":
    main()

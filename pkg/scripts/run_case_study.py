#!/usr/bin/env python3
"""End-to-end walkthrough of the shipped 18-attribute case study.

Prints the priority table, the per-pair sustainability impact scores, the
trade-off list and the synergy chains for the multi-model architecture.
"""

import argparse

from siskit.analysis import find_synergy_chains, find_tradeoffs, most_affected_qas
from siskit.fixtures import load_fixture
from siskit.render import render_priorities, render_scores
from siskit.scoring import model_priorities, score_model


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--format", choices=("table", "markdown"), default="table")
    parser.add_argument("--alternative", default="multi_model")
    args = parser.parse_args()

    model = load_fixture("case_study")
    priorities = model_priorities(model)
    results = score_model(model)

    print("Priorities")
    print(render_priorities(model, priorities, args.format))
    print()
    print(render_scores(model, results, args.format))
    print()

    alt = model.alternative(args.alternative)
    dims = {qa.id: qa.dimension for qa in model.qas}

    print(f"Trade-offs ({alt.id})")
    for t in find_tradeoffs(alt, model, scope="all"):
        kind = "within" if t.same_dimension else "across"
        print(f"  {t.from_qa} -> {t.to_qa} ({kind})")
    print()

    print(f"Synergy chains ({alt.id}, length >= 2)")
    for chain in find_synergy_chains(alt.dmap, min_length=2):
        print(f"  {chain.render(dims)}")
    print()

    print(f"Most affected quality attributes ({alt.id})")
    for counts in most_affected_qas(alt, model).ranked_by_negative():
        if counts.positive_in or counts.negative_in:
            print(f"  {counts.qa_id}: +{counts.positive_in} / -{counts.negative_in}")


if __name__ == "__main__":
    main()

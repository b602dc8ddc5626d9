#!/usr/bin/env python3
"""What-if sensitivity demo on the two-alternative deployment example.

Sweeps the latency -> cost-efficiency cell of the containerization matrix
through every effect value and prints the resulting score swing.
"""

from siskit.analysis import CellOverride, WhatIfPatch, apply_whatif
from siskit.fixtures import load_fixture
from siskit.model import Dimension


def main() -> None:
    model = load_fixture("deployment")
    pair = (Dimension.TECHNICAL, Dimension.ECONOMIC)

    print("containerization, latency -> cost_efficiency")
    print(f"{'effect':>6}  {'raw SIS':>8}  {'normalized':>10}")
    for effect in (-1, 0, 1):
        patch = WhatIfPatch(
            (CellOverride("containerization", *pair, "latency", "cost_efficiency", effect),)
        )
        report = apply_whatif(model, patch, use_raw_priorities=True)
        delta = report.per_pair[pair]["containerization"]
        print(f"{effect:>+6d}  {delta.new_raw:>8.2f}  {delta.new_pct:>9.2f}%")


if __name__ == "__main__":
    main()

"""Priority computation, impact scoring and benchmarking against the optimal.

The score of a dimension pair is the sum over matrix cells of
``(priority(row) + priority(col)) * effect``. Priorities come from a weighted
sum of importance and risk, min-max normalized into [0.1, 1]; a raw-priority
mode keeps them unnormalized for legacy ranking-based examples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping, Optional

from .model import (
    VALID_LEVELS,
    AssessmentModel,
    Dimension,
    EffectMatrix,
    WeightConfig,
    pair_sort_key,
    resolve_matrices,
)


class ScoringError(ValueError):
    """A score cannot be computed from the given inputs."""


def round_half_up(value: float, decimals: int = 2) -> float:
    """Round with ties away from zero (0.775 -> 0.78 at 2 decimals)."""
    q = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class PrioritySet:
    """Raw and [0.1, 1]-normalized priority per quality attribute."""

    raw: Mapping[str, float]
    normalized: Mapping[str, float]

    def value(self, qa_id: str, use_raw: bool = False) -> float:
        table = self.raw if use_raw else self.normalized
        try:
            return table[qa_id]
        except KeyError:
            raise ScoringError(f"no priority for quality attribute {qa_id!r}") from None


@dataclass(frozen=True)
class SisResult:
    """Scores for one ordered dimension pair across all alternatives.

    `raw` and `normalized_percent` are keyed by alternative id and include the
    theoretical optimal (pinned at 100%) when one exists.
    """

    dim_from: Dimension
    dim_to: Dimension
    raw: Mapping[str, float]
    normalized_percent: Mapping[str, float] = field(default_factory=dict)
    theoretical_optimal_sis: Optional[float] = None

    @property
    def pair_label(self) -> str:
        return f"{self.dim_from.value}-{self.dim_to.value}"


def compute_priority(importance: int, risk: int, weights: WeightConfig) -> float:
    """Weighted sum of importance and risk levels."""
    for name, level in (("importance", importance), ("risk", risk)):
        if level not in VALID_LEVELS:
            raise ScoringError(f"{name} level must be 1, 2 or 3, got {level}")
    return weights.importance_weight * importance + weights.risk_weight * risk


def normalize_priorities(raw: Mapping[str, float]) -> PrioritySet:
    """Min-max normalize raw priorities into [0.1, 1].

    All-equal inputs collapse to 1.0 for every entry; relative comparisons
    downstream are insensitive to the constant chosen.
    """
    if not raw:
        raise ScoringError("cannot normalize an empty priority set")
    lo, hi = min(raw.values()), max(raw.values())
    if hi == lo:
        normalized = {qa_id: 1.0 for qa_id in raw}
    else:
        normalized = {qa_id: 0.1 + 0.9 * (p - lo) / (hi - lo) for qa_id, p in raw.items()}
    return PrioritySet(raw=dict(raw), normalized=normalized)


def model_priorities(model: AssessmentModel, scenario: Optional[str] = None) -> PrioritySet:
    """Resolve every QA's priority, honoring scenario cells and explicit overrides.

    QA-level importance/risk are the single-scenario default; when a scenario
    id is given, utility-matrix cells for it override per QA.
    """
    if scenario is not None:
        if not any(s.id == scenario for s in model.scenarios):
            raise ScoringError(f"unknown scenario {scenario!r}")
        if model.utility_matrix is None:
            raise ScoringError("model has no utility matrix to resolve scenario priorities from")
    raw: dict[str, float] = {}
    for qa in model.qas:
        if qa.priority_override is not None:
            raw[qa.id] = qa.priority_override
            continue
        importance, risk = qa.importance, qa.risk
        if scenario is not None and model.utility_matrix is not None:
            cell = model.utility_matrix.cell(qa.id, scenario)
            if cell is not None:
                importance, risk = cell.importance, cell.risk
        raw[qa.id] = compute_priority(importance, risk, model.weights)
    return normalize_priorities(raw)


def compute_sis(matrix: EffectMatrix, priorities: PrioritySet, use_raw: bool = False) -> float:
    """Sum of (row priority + column priority) * effect over all cells."""
    total = 0.0
    for i, row_qa in enumerate(matrix.row_qas):
        p_row = priorities.value(row_qa, use_raw)
        for j, col_qa in enumerate(matrix.col_qas):
            effect = matrix.cells[i][j].effect
            if effect:
                total += (p_row + priorities.value(col_qa, use_raw)) * effect
    return total


def legacy_sis(matrix: EffectMatrix, priorities: PrioritySet, use_raw: bool = False) -> float:
    """Technical-dimension-only form of the score; a named conformance check.

    Identical to `compute_sis` restricted to matrices whose rows are technical
    QAs, not a second code path.
    """
    if matrix.dim_from != Dimension.TECHNICAL:
        raise ScoringError(
            f"legacy score is defined only for technical-row matrices, got {matrix.pair_label}"
        )
    return compute_sis(matrix, priorities, use_raw)


def compute_normalized_sis(
    results: Mapping[str, float],
    theoretical_optimal_sis: float,
    pair_label: str = "",
) -> dict[str, float]:
    """Rescale raw scores to percent of the theoretical optimal.

    ``(sis - min) / (optimal - min) * 100`` with the minimum taken over the
    given (non-optimal) alternatives. Degenerate optimal == min maps every
    alternative to 100%.
    """
    if not results:
        raise ScoringError("at least one non-optimal alternative is required")
    lo = min(results.values())
    where = f" for pair {pair_label}" if pair_label else ""
    for alt_id, value in results.items():
        if value > theoretical_optimal_sis + 1e-12:
            raise ScoringError(
                f"theoretical optimal is not optimal{where}: alternative {alt_id!r} "
                f"scores {value:g} > {theoretical_optimal_sis:g}"
            )
    if theoretical_optimal_sis == lo:
        return {alt_id: 100.0 for alt_id in results}
    return {
        alt_id: (value - lo) / (theoretical_optimal_sis - lo) * 100.0
        for alt_id, value in results.items()
    }


def score_model(
    model: AssessmentModel,
    scenario: Optional[str] = None,
    use_raw_priorities: bool = False,
    normalize: bool = True,
) -> list[SisResult]:
    """Score every dimension pair of every alternative.

    Pairs an alternative has no matrix for score 0 for that alternative.
    Normalization requires a flagged theoretical-optimal alternative.
    """
    priorities = model_priorities(model, scenario)
    optimal = model.theoretical_optimal
    if normalize and optimal is None:
        raise ScoringError(
            "no alternative is flagged is_theoretical_optimal; "
            "normalized scores need one (or pass normalize=False)"
        )

    matrices: dict[str, dict[tuple[Dimension, Dimension], EffectMatrix]] = {}
    pairs: set[tuple[Dimension, Dimension]] = set()
    for alt in model.alternatives:
        by_pair: dict[tuple[Dimension, Dimension], EffectMatrix] = {}
        for matrix in resolve_matrices(alt, model):
            by_pair[matrix.pair] = matrix
        matrices[alt.id] = by_pair
        pairs.update(by_pair)

    results = []
    for pair in sorted(pairs, key=pair_sort_key):
        raw: dict[str, float] = {}
        for alt in model.alternatives:
            matrix = matrices[alt.id].get(pair)
            raw[alt.id] = compute_sis(matrix, priorities, use_raw_priorities) if matrix else 0.0
        normalized: dict[str, float] = {}
        optimal_sis: Optional[float] = None
        if optimal is not None:
            optimal_sis = raw[optimal.id]
            if normalize:
                non_optimal = {a: v for a, v in raw.items() if a != optimal.id}
                label = f"{pair[0].value}-{pair[1].value}"
                normalized = compute_normalized_sis(non_optimal, optimal_sis, label)
                normalized[optimal.id] = 100.0
        results.append(
            SisResult(
                dim_from=pair[0],
                dim_to=pair[1],
                raw=raw,
                normalized_percent=normalized,
                theoretical_optimal_sis=optimal_sis,
            )
        )
    return results

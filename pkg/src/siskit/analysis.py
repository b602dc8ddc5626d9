"""Graph-level analysis: synergy chains, trade-offs, rankings and what-if edits.

Chains are simple all-positive paths; anything with a negative edge is a
trade-off, never a chain. The what-if engine applies effect overrides to a
copied model and reports exact per-pair score deltas.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Mapping, Optional

from .model import (
    AssessmentModel,
    Alternative,
    DecisionMap,
    Dimension,
    EffectMatrix,
    ImpactLevel,
    pair_sort_key,
    resolve_matrices,
)
from .scoring import ScoringError, SisResult, model_priorities, score_model


class WhatIfError(ValueError):
    """A patch cannot be applied to the model."""


@dataclass(frozen=True)
class SynergyChain:
    """A simple path of positive effects, possibly crossing dimensions."""

    path: tuple[str, ...]
    dimensions_crossed: frozenset[Dimension]
    length: int

    def render(self, dims: Mapping[str, Dimension]) -> str:
        arrows = " → ".join(self.path)
        dim_trail = "→".join(dims[qa].value for qa in self.path)
        return f"{arrows} [{dim_trail}]"


@dataclass(frozen=True)
class TradeoffRecord:
    """One negative effect of a QA on another."""

    from_qa: str
    to_qa: str
    same_dimension: bool
    impact_level: Optional[ImpactLevel] = None


@dataclass(frozen=True)
class QaEffectCounts:
    qa_id: str
    positive_in: int
    negative_in: int


@dataclass(frozen=True)
class AffectedSummary:
    """Incoming effect counts per QA with deterministic rankings."""

    counts: tuple[QaEffectCounts, ...]

    def ranked_by_negative(self) -> list[QaEffectCounts]:
        return sorted(self.counts, key=lambda c: (-c.negative_in, c.qa_id))

    def ranked_by_positive(self) -> list[QaEffectCounts]:
        return sorted(self.counts, key=lambda c: (-c.positive_in, c.qa_id))


@dataclass(frozen=True)
class CellOverride:
    alternative_id: str
    dim_from: Dimension
    dim_to: Dimension
    row_qa: str
    col_qa: str
    effect: int


@dataclass(frozen=True)
class WhatIfPatch:
    overrides: tuple[CellOverride, ...]

    def __post_init__(self):
        targets = [
            (o.alternative_id, o.dim_from, o.dim_to, o.row_qa, o.col_qa) for o in self.overrides
        ]
        if len(set(targets)) != len(targets):
            raise WhatIfError("patch targets the same cell twice")
        for o in self.overrides:
            if o.effect not in (-1, 0, 1):
                raise WhatIfError(f"effect must be -1, 0 or +1, got {o.effect}")


@dataclass(frozen=True)
class PairDelta:
    old_raw: float
    new_raw: float
    old_pct: Optional[float]
    new_pct: Optional[float]
    delta_raw: float
    delta_pct: Optional[float]


@dataclass(frozen=True)
class WhatIfReport:
    """Old/new scores per (pair, alternative) plus chain churn per alternative."""

    per_pair: Mapping[tuple[Dimension, Dimension], Mapping[str, PairDelta]]
    chains_created: Mapping[str, tuple[SynergyChain, ...]]
    chains_broken: Mapping[str, tuple[SynergyChain, ...]]
    baseline: tuple[SisResult, ...]
    patched: tuple[SisResult, ...]
    patched_model: AssessmentModel


def parse_patch(document: Any) -> WhatIfPatch:
    """Parse a patch document: {"overrides": [{alternative, dim_from, ...}]}."""
    if not isinstance(document, dict):
        raise WhatIfError("patch document must be an object")
    overrides = []
    for i, raw in enumerate(document.get("overrides", [])):
        if not isinstance(raw, dict):
            raise WhatIfError(f"overrides[{i}] must be an object")
        try:
            overrides.append(
                CellOverride(
                    alternative_id=raw["alternative"],
                    dim_from=Dimension.parse(raw["dim_from"]),
                    dim_to=Dimension.parse(raw["dim_to"]),
                    row_qa=raw["row"],
                    col_qa=raw["col"],
                    effect=raw["effect"],
                )
            )
        except KeyError as exc:
            raise WhatIfError(f"overrides[{i}] is missing field {exc.args[0]!r}") from None
    return WhatIfPatch(tuple(overrides))


# ---------------------------------------------------------------------------
# Chains and trade-offs


def _enumerate_chains(
    edges: Iterable[tuple[str, str]],
    dims: Mapping[str, Dimension],
    min_length: int,
) -> list[SynergyChain]:
    adjacency: dict[str, list[str]] = {}
    for a, b in edges:
        adjacency.setdefault(a, []).append(b)
    for targets in adjacency.values():
        targets.sort()

    chains: list[SynergyChain] = []

    def extend(path: list[str], visited: set[str]) -> None:
        if len(path) - 1 >= min_length:
            chains.append(
                SynergyChain(
                    path=tuple(path),
                    dimensions_crossed=frozenset(dims[qa] for qa in path),
                    length=len(path) - 1,
                )
            )
        for nxt in adjacency.get(path[-1], ()):
            if nxt not in visited:
                visited.add(nxt)
                path.append(nxt)
                extend(path, visited)
                path.pop()
                visited.remove(nxt)

    for start in sorted(adjacency):
        extend([start], {start})
    chains.sort(key=lambda c: (-c.length, c.path))
    return chains


def find_synergy_chains(dmap: DecisionMap, min_length: int = 1) -> list[SynergyChain]:
    """All simple paths of positive edges with at least `min_length` edges.

    Sorted by length descending, then lexicographically by path. Exact
    enumeration; decision maps are small.
    """
    if min_length < 1:
        raise ValueError(f"min_length must be >= 1, got {min_length}")
    dims = {n.qa_id: n.dimension for n in dmap.nodes}
    positive = [(e.from_qa, e.to_qa) for e in dmap.edges if e.sign > 0]
    return _enumerate_chains(positive, dims, min_length)


def matrix_chains(
    matrices: Iterable[EffectMatrix], model: AssessmentModel, min_length: int = 1
) -> list[SynergyChain]:
    """Chains over the +1 cells of a matrix set (the matrix view of a dmap)."""
    dims = {qa.id: qa.dimension for qa in model.qas}
    edges = []
    for matrix in matrices:
        for i, row_qa in enumerate(matrix.row_qas):
            for j, col_qa in enumerate(matrix.col_qas):
                if matrix.cells[i][j].effect > 0:
                    edges.append((row_qa, col_qa))
    return _enumerate_chains(edges, dims, min_length)


def find_tradeoffs(
    alternative: Alternative, model: AssessmentModel, scope: str = "all"
) -> list[TradeoffRecord]:
    """All negative cells of the alternative, filtered by scope.

    scope: "within_dimension", "across_dimensions" or "all".
    """
    if scope not in ("within_dimension", "across_dimensions", "all"):
        raise ValueError(f"unknown scope {scope!r}")
    records = []
    for matrix in resolve_matrices(alternative, model):
        same = matrix.dim_from == matrix.dim_to
        if scope == "within_dimension" and not same:
            continue
        if scope == "across_dimensions" and same:
            continue
        for i, row_qa in enumerate(matrix.row_qas):
            for j, col_qa in enumerate(matrix.col_qas):
                cell = matrix.cells[i][j]
                if cell.effect < 0:
                    records.append(
                        TradeoffRecord(row_qa, col_qa, same, cell.impact_level)
                    )
    records.sort(key=lambda r: (r.from_qa, r.to_qa))
    return records


def most_affected_qas(alternative: Alternative, model: AssessmentModel) -> AffectedSummary:
    """Count incoming positive and negative effects per QA across all matrices."""
    pos: dict[str, int] = {qa.id: 0 for qa in model.qas}
    neg: dict[str, int] = {qa.id: 0 for qa in model.qas}
    for matrix in resolve_matrices(alternative, model):
        for row in matrix.cells:
            for j, col_qa in enumerate(matrix.col_qas):
                if row[j].effect > 0:
                    pos[col_qa] += 1
                elif row[j].effect < 0:
                    neg[col_qa] += 1
    counts = tuple(
        QaEffectCounts(qa_id, pos[qa_id], neg[qa_id]) for qa_id in sorted(pos)
    )
    return AffectedSummary(counts)


# ---------------------------------------------------------------------------
# What-if engine


def _patch_alternative(
    alternative: Alternative,
    model: AssessmentModel,
    overrides: list[CellOverride],
) -> Alternative:
    matrices = list(resolve_matrices(alternative, model))
    for o in overrides:
        for idx, matrix in enumerate(matrices):
            if matrix.pair == (o.dim_from, o.dim_to):
                if o.row_qa not in matrix.row_qas or o.col_qa not in matrix.col_qas:
                    raise WhatIfError(
                        f"no cell {o.row_qa!r} -> {o.col_qa!r} in matrix "
                        f"{matrix.pair_label} of alternative {o.alternative_id!r}"
                    )
                if o.dim_from == o.dim_to and o.row_qa == o.col_qa and o.effect != 0:
                    raise WhatIfError(
                        f"diagonal cell {o.row_qa!r} must stay 0 in a same-dimension matrix"
                    )
                matrices[idx] = matrix.with_effect(o.row_qa, o.col_qa, o.effect)
                break
        else:
            raise WhatIfError(
                f"alternative {o.alternative_id!r} has no "
                f"{o.dim_from.value}-{o.dim_to.value} matrix"
            )
    return replace(alternative, dmap=None, matrices=tuple(matrices))


def apply_patch(
    model: AssessmentModel, patch: WhatIfPatch, allow_optimal_edit: bool = False
) -> AssessmentModel:
    """A copy of the model with the patch folded in; the original is untouched."""
    by_alt: dict[str, list[CellOverride]] = {}
    for o in patch.overrides:
        try:
            alt = model.alternative(o.alternative_id)
        except KeyError:
            raise WhatIfError(f"unknown alternative {o.alternative_id!r}") from None
        if alt.is_theoretical_optimal and not allow_optimal_edit:
            raise WhatIfError(
                f"alternative {o.alternative_id!r} is the theoretical optimal; "
                "pass allow_optimal_edit to override it"
            )
        by_alt.setdefault(o.alternative_id, []).append(o)
    alternatives = tuple(
        _patch_alternative(alt, model, by_alt[alt.id]) if alt.id in by_alt else alt
        for alt in model.alternatives
    )
    return replace(model, alternatives=alternatives)


def apply_whatif(
    model: AssessmentModel,
    patch: WhatIfPatch,
    scenario: Optional[str] = None,
    use_raw_priorities: bool = False,
    allow_optimal_edit: bool = False,
) -> WhatIfReport:
    """Apply effect overrides and report old/new scores per dimension pair.

    Raw scores change only where cells changed; normalized percentages are
    recomputed pair-wide since the minimum may move.
    """
    patched_model = apply_patch(model, patch, allow_optimal_edit)
    normalize = model.theoretical_optimal is not None
    baseline = score_model(model, scenario, use_raw_priorities, normalize=normalize)
    patched = score_model(patched_model, scenario, use_raw_priorities, normalize=normalize)

    base_by_pair = {(r.dim_from, r.dim_to): r for r in baseline}
    new_by_pair = {(r.dim_from, r.dim_to): r for r in patched}
    per_pair: dict[tuple[Dimension, Dimension], dict[str, PairDelta]] = {}
    for pair in sorted(set(base_by_pair) | set(new_by_pair), key=pair_sort_key):
        old = base_by_pair.get(pair)
        new = new_by_pair.get(pair)
        deltas: dict[str, PairDelta] = {}
        for alt in model.alternatives:
            old_raw = old.raw.get(alt.id, 0.0) if old else 0.0
            new_raw = new.raw.get(alt.id, 0.0) if new else 0.0
            old_pct = old.normalized_percent.get(alt.id) if old else None
            new_pct = new.normalized_percent.get(alt.id) if new else None
            deltas[alt.id] = PairDelta(
                old_raw=old_raw,
                new_raw=new_raw,
                old_pct=old_pct,
                new_pct=new_pct,
                delta_raw=new_raw - old_raw,
                delta_pct=(new_pct - old_pct)
                if old_pct is not None and new_pct is not None
                else None,
            )
        per_pair[pair] = deltas

    created: dict[str, tuple[SynergyChain, ...]] = {}
    broken: dict[str, tuple[SynergyChain, ...]] = {}
    for alt_id in sorted({o.alternative_id for o in patch.overrides}):
        before = set(matrix_chains(resolve_matrices(model.alternative(alt_id), model), model))
        after = set(
            matrix_chains(resolve_matrices(patched_model.alternative(alt_id), patched_model),
                          patched_model)
        )
        created[alt_id] = tuple(sorted(after - before, key=lambda c: (-c.length, c.path)))
        broken[alt_id] = tuple(sorted(before - after, key=lambda c: (-c.length, c.path)))

    return WhatIfReport(
        per_pair=per_pair,
        chains_created=created,
        chains_broken=broken,
        baseline=tuple(baseline),
        patched=tuple(patched),
        patched_model=patched_model,
    )

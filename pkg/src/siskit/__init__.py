"""Sustainability impact scoring toolkit for software-architecture evaluation."""

from .model import (
    AssessmentModel,
    Alternative,
    DecisionMap,
    Diagnostic,
    Dimension,
    EffectCell,
    EffectMatrix,
    ImpactLevel,
    ModelError,
    QualityAttribute,
    Scenario,
    UtilityMatrix,
    WeightConfig,
    derive_matrices,
    load_model,
    parse_document,
    parse_model,
    resolve_matrices,
    serialize_model,
    validate_model,
)
from .scoring import (
    PrioritySet,
    ScoringError,
    SisResult,
    compute_normalized_sis,
    compute_priority,
    compute_sis,
    legacy_sis,
    model_priorities,
    normalize_priorities,
    round_half_up,
    score_model,
)
from .analysis import (
    AffectedSummary,
    CellOverride,
    SynergyChain,
    TradeoffRecord,
    WhatIfError,
    WhatIfPatch,
    WhatIfReport,
    apply_patch,
    apply_whatif,
    find_synergy_chains,
    find_tradeoffs,
    most_affected_qas,
    parse_patch,
)

__version__ = "0.1.0"

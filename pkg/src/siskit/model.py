"""Assessment data model: domain types, document schema, parsing and validation.

Everything here is immutable after construction. A model document is one
self-contained JSON object (``schema_version: "1"``); `parse_model` turns it
into a fully cross-linked `AssessmentModel` or raises with the offending
field path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

SCHEMA_VERSION = "1"
MAX_ID_LENGTH = 128

VALID_EFFECTS = (-1, 0, 1)
VALID_LEVELS = (1, 2, 3)


class ModelError(ValueError):
    """A document cannot be parsed into a valid model."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class SchemaError(ModelError):
    """Wrong type, missing field, or out-of-domain value."""


class DuplicateIdError(ModelError):
    """An id is used twice within one scope."""


class DanglingReferenceError(ModelError):
    """A reference names an id that does not exist in the model."""


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" | "warning"
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.level.upper()} {self.path}: {self.message}"


class Dimension(str, Enum):
    """Sustainability dimension code."""

    ECONOMIC = "Ec"
    ENVIRONMENTAL = "En"
    SOCIAL = "S"
    TECHNICAL = "T"

    @classmethod
    def parse(cls, code: Any, path: str = "") -> "Dimension":
        try:
            return cls(code)
        except ValueError:
            raise SchemaError(
                path, f"unknown dimension code {code!r} (expected one of Ec, En, S, T)"
            ) from None


class ImpactLevel(str, Enum):
    DIRECT = "direct"
    ENABLING = "enabling"
    SYSTEMIC = "systemic"

    @classmethod
    def parse(cls, value: Any, path: str = "") -> "ImpactLevel":
        try:
            return cls(value)
        except ValueError:
            raise SchemaError(
                path,
                f"unknown impact level {value!r} (expected direct, enabling or systemic)",
            ) from None


@dataclass(frozen=True)
class QualityAttribute:
    """A named quality concern in exactly one sustainability dimension.

    `priority_override`, when set, supplies the raw priority directly and
    bypasses the weighted importance/risk formula (used for legacy
    ranking-based priorities).
    """

    id: str
    name: str
    dimension: Dimension
    importance: int
    risk: int
    definition: str = ""
    priority_override: Optional[float] = None


@dataclass(frozen=True)
class WeightConfig:
    importance_weight: float
    risk_weight: float


@dataclass(frozen=True)
class Scenario:
    id: str
    description: str = ""


@dataclass(frozen=True)
class UtilityCell:
    importance: int
    risk: int


@dataclass(frozen=True)
class UtilityMatrix:
    """Many-to-many QA/scenario grid with per-cell importance and risk."""

    rows: tuple[str, ...]  # QA ids
    columns: tuple[str, ...]  # scenario ids
    cells: Mapping[tuple[str, str], UtilityCell] = field(default_factory=dict)

    def cell(self, qa_id: str, scenario_id: str) -> Optional[UtilityCell]:
        return self.cells.get((qa_id, scenario_id))


@dataclass(frozen=True)
class EffectCell:
    effect: int
    impact_level: Optional[ImpactLevel] = None
    rationale: str = ""


@dataclass(frozen=True)
class EffectMatrix:
    """Effects of each row QA (dim_from) on each column QA (dim_to)."""

    dim_from: Dimension
    dim_to: Dimension
    row_qas: tuple[str, ...]
    col_qas: tuple[str, ...]
    cells: tuple[tuple[EffectCell, ...], ...]

    @property
    def pair(self) -> tuple[Dimension, Dimension]:
        return (self.dim_from, self.dim_to)

    @property
    def pair_label(self) -> str:
        return f"{self.dim_from.value}-{self.dim_to.value}"

    def cell(self, row_qa: str, col_qa: str) -> EffectCell:
        i = self.row_qas.index(row_qa)
        j = self.col_qas.index(col_qa)
        return self.cells[i][j]

    def with_effect(self, row_qa: str, col_qa: str, effect: int) -> "EffectMatrix":
        """Copy of this matrix with one cell's effect replaced."""
        i = self.row_qas.index(row_qa)
        j = self.col_qas.index(col_qa)
        old = self.cells[i][j]
        new_row = self.cells[i][:j] + (
            EffectCell(effect, old.impact_level, old.rationale),
        ) + self.cells[i][j + 1:]
        return EffectMatrix(
            self.dim_from,
            self.dim_to,
            self.row_qas,
            self.col_qas,
            self.cells[:i] + (new_row,) + self.cells[i + 1:],
        )


@dataclass(frozen=True)
class DMapNode:
    qa_id: str
    dimension: Dimension
    impact_level: Optional[ImpactLevel] = None


@dataclass(frozen=True)
class DMapEdge:
    from_qa: str
    to_qa: str
    sign: int  # +1 or -1
    impact_level: Optional[ImpactLevel] = None


@dataclass(frozen=True)
class DecisionMap:
    """Signed directed graph of quality concerns."""

    nodes: tuple[DMapNode, ...]
    edges: tuple[DMapEdge, ...]

    def node_ids(self) -> set[str]:
        return {n.qa_id for n in self.nodes}


@dataclass(frozen=True)
class Alternative:
    """One architectural approach, described by a DMap and/or effect matrices."""

    id: str
    name: str
    description: str = ""
    dmap: Optional[DecisionMap] = None
    matrices: Optional[tuple[EffectMatrix, ...]] = None
    is_theoretical_optimal: bool = False


@dataclass(frozen=True)
class AssessmentModel:
    """Aggregate root for one assessment document."""

    qas: tuple[QualityAttribute, ...]
    weights: WeightConfig
    alternatives: tuple[Alternative, ...]
    scenarios: tuple[Scenario, ...] = ()
    utility_matrix: Optional[UtilityMatrix] = None

    def qa(self, qa_id: str) -> QualityAttribute:
        for qa in self.qas:
            if qa.id == qa_id:
                return qa
        raise KeyError(qa_id)

    def qa_ids(self) -> set[str]:
        return {qa.id for qa in self.qas}

    def qas_in(self, dim: Dimension) -> tuple[QualityAttribute, ...]:
        return tuple(qa for qa in self.qas if qa.dimension == dim)

    def alternative(self, alt_id: str) -> Alternative:
        for alt in self.alternatives:
            if alt.id == alt_id:
                return alt
        raise KeyError(alt_id)

    @property
    def theoretical_optimal(self) -> Optional[Alternative]:
        for alt in self.alternatives:
            if alt.is_theoretical_optimal:
                return alt
        return None


# Pair ordering used everywhere results are rendered: the four T-* pairs in
# presentation order, then everything else lexicographically.
_PREFERRED_PAIRS = (
    (Dimension.TECHNICAL, Dimension.TECHNICAL),
    (Dimension.TECHNICAL, Dimension.ECONOMIC),
    (Dimension.TECHNICAL, Dimension.ENVIRONMENTAL),
    (Dimension.TECHNICAL, Dimension.SOCIAL),
)


def pair_sort_key(pair: tuple[Dimension, Dimension]) -> tuple:
    if pair in _PREFERRED_PAIRS:
        return (0, _PREFERRED_PAIRS.index(pair))
    return (1, pair[0].value, pair[1].value)


# ---------------------------------------------------------------------------
# Parsing


def _expect(obj: Any, typ: type, path: str, what: str) -> Any:
    if typ is float and isinstance(obj, int) and not isinstance(obj, bool):
        return float(obj)
    if not isinstance(obj, typ) or (typ in (int, float) and isinstance(obj, bool)):
        raise SchemaError(path, f"expected {what}, got {type(obj).__name__}")
    return obj


def _parse_id(obj: Any, path: str) -> str:
    s = _expect(obj, str, path, "a string id")
    if not s:
        raise SchemaError(path, "id must be non-empty")
    if len(s) > MAX_ID_LENGTH:
        raise SchemaError(path, f"id longer than {MAX_ID_LENGTH} characters")
    return s


def _parse_level(obj: Any, path: str) -> int:
    v = _expect(obj, int, path, "an integer level")
    if v not in VALID_LEVELS:
        raise SchemaError(path, f"level must be 1, 2 or 3, got {v}")
    return v


def _parse_effect(obj: Any, path: str) -> int:
    v = _expect(obj, int, path, "an integer effect")
    if v not in VALID_EFFECTS:
        raise SchemaError(path, f"effect must be -1, 0 or +1, got {v}")
    return v


def _parse_qa(raw: Any, path: str) -> QualityAttribute:
    d = _expect(raw, dict, path, "a quality attribute object")
    override = d.get("priority_override")
    if override is not None:
        override = _expect(override, float, f"{path}.priority_override", "a number")
    return QualityAttribute(
        id=_parse_id(d.get("id"), f"{path}.id"),
        name=_expect(d.get("name", d.get("id")), str, f"{path}.name", "a string"),
        definition=_expect(d.get("definition", ""), str, f"{path}.definition", "a string"),
        dimension=Dimension.parse(d.get("dimension"), f"{path}.dimension"),
        importance=_parse_level(d.get("importance"), f"{path}.importance"),
        risk=_parse_level(d.get("risk"), f"{path}.risk"),
        priority_override=override,
    )


def _parse_weights(raw: Any, path: str) -> WeightConfig:
    d = _expect(raw, dict, path, "a weights object")
    wi = _expect(d.get("importance_weight"), float, f"{path}.importance_weight", "a number")
    wr = _expect(d.get("risk_weight"), float, f"{path}.risk_weight", "a number")
    for name, w in (("importance_weight", wi), ("risk_weight", wr)):
        if not 0.0 <= w <= 1.0:
            raise SchemaError(f"{path}.{name}", f"weight must be in [0, 1], got {w}")
    return WeightConfig(wi, wr)


def _parse_utility_matrix(raw: Any, path: str) -> UtilityMatrix:
    d = _expect(raw, dict, path, "a utility matrix object")
    rows = tuple(
        _parse_id(r, f"{path}.rows[{i}]")
        for i, r in enumerate(_expect(d.get("rows", []), list, f"{path}.rows", "a list"))
    )
    cols = tuple(
        _parse_id(c, f"{path}.columns[{i}]")
        for i, c in enumerate(_expect(d.get("columns", []), list, f"{path}.columns", "a list"))
    )
    cells: dict[tuple[str, str], UtilityCell] = {}
    for i, c in enumerate(_expect(d.get("cells", []), list, f"{path}.cells", "a list")):
        cp = f"{path}.cells[{i}]"
        cd = _expect(c, dict, cp, "a cell object")
        key = (_parse_id(cd.get("qa"), f"{cp}.qa"), _parse_id(cd.get("scenario"), f"{cp}.scenario"))
        if key in cells:
            raise DuplicateIdError(cp, f"duplicate utility cell for {key[0]!r}/{key[1]!r}")
        cells[key] = UtilityCell(
            importance=_parse_level(cd.get("importance"), f"{cp}.importance"),
            risk=_parse_level(cd.get("risk"), f"{cp}.risk"),
        )
    return UtilityMatrix(rows, cols, cells)


def _parse_matrix(raw: Any, path: str) -> EffectMatrix:
    d = _expect(raw, dict, path, "a matrix object")
    dim_from = Dimension.parse(d.get("dim_from"), f"{path}.dim_from")
    dim_to = Dimension.parse(d.get("dim_to"), f"{path}.dim_to")
    row_qas = tuple(
        _parse_id(r, f"{path}.row_qas[{i}]")
        for i, r in enumerate(_expect(d.get("row_qas"), list, f"{path}.row_qas", "a list"))
    )
    col_qas = tuple(
        _parse_id(c, f"{path}.col_qas[{i}]")
        for i, c in enumerate(_expect(d.get("col_qas"), list, f"{path}.col_qas", "a list"))
    )
    effects = _expect(d.get("effects"), list, f"{path}.effects", "a list of rows")
    if len(effects) != len(row_qas):
        raise SchemaError(f"{path}.effects", f"expected {len(row_qas)} rows, got {len(effects)}")
    grid: list[list[EffectCell]] = []
    for i, row in enumerate(effects):
        rp = f"{path}.effects[{i}]"
        row = _expect(row, list, rp, "a row of integers")
        if len(row) != len(col_qas):
            raise SchemaError(rp, f"expected {len(col_qas)} columns, got {len(row)}")
        grid.append([EffectCell(_parse_effect(v, f"{rp}[{j}]")) for j, v in enumerate(row)])
    for i, a in enumerate(_expect(d.get("annotations", []), list, f"{path}.annotations", "a list")):
        ap = f"{path}.annotations[{i}]"
        ad = _expect(a, dict, ap, "an annotation object")
        row_qa = _parse_id(ad.get("row"), f"{ap}.row")
        col_qa = _parse_id(ad.get("col"), f"{ap}.col")
        if row_qa not in row_qas or col_qa not in col_qas:
            raise DanglingReferenceError(ap, f"annotation targets unknown cell {row_qa!r}/{col_qa!r}")
        level = ad.get("impact_level")
        cell = grid[row_qas.index(row_qa)][col_qas.index(col_qa)]
        grid[row_qas.index(row_qa)][col_qas.index(col_qa)] = EffectCell(
            cell.effect,
            ImpactLevel.parse(level, f"{ap}.impact_level") if level is not None else None,
            _expect(ad.get("rationale", ""), str, f"{ap}.rationale", "a string"),
        )
    return EffectMatrix(dim_from, dim_to, row_qas, col_qas, tuple(tuple(r) for r in grid))


def _parse_dmap(raw: Any, path: str) -> DecisionMap:
    d = _expect(raw, dict, path, "a decision map object")
    nodes = []
    for i, n in enumerate(_expect(d.get("nodes", []), list, f"{path}.nodes", "a list")):
        np_ = f"{path}.nodes[{i}]"
        nd = _expect(n, dict, np_, "a node object")
        level = nd.get("impact_level")
        nodes.append(
            DMapNode(
                qa_id=_parse_id(nd.get("qa"), f"{np_}.qa"),
                dimension=Dimension.parse(nd.get("dimension"), f"{np_}.dimension"),
                impact_level=ImpactLevel.parse(level, f"{np_}.impact_level")
                if level is not None
                else None,
            )
        )
    edges = []
    for i, e in enumerate(_expect(d.get("edges", []), list, f"{path}.edges", "a list")):
        ep = f"{path}.edges[{i}]"
        ed = _expect(e, dict, ep, "an edge object")
        sign = _expect(ed.get("sign"), int, f"{ep}.sign", "an integer")
        if sign not in (-1, 1):
            raise SchemaError(f"{ep}.sign", f"edge sign must be -1 or +1, got {sign}")
        level = ed.get("impact_level")
        edges.append(
            DMapEdge(
                from_qa=_parse_id(ed.get("from"), f"{ep}.from"),
                to_qa=_parse_id(ed.get("to"), f"{ep}.to"),
                sign=sign,
                impact_level=ImpactLevel.parse(level, f"{ep}.impact_level")
                if level is not None
                else None,
            )
        )
    return DecisionMap(tuple(nodes), tuple(edges))


def _parse_alternative(raw: Any, path: str) -> Alternative:
    d = _expect(raw, dict, path, "an alternative object")
    dmap = _parse_dmap(d["dmap"], f"{path}.dmap") if d.get("dmap") is not None else None
    matrices = None
    if d.get("matrices") is not None:
        raw_ms = _expect(d["matrices"], list, f"{path}.matrices", "a list")
        matrices = tuple(_parse_matrix(m, f"{path}.matrices[{i}]") for i, m in enumerate(raw_ms))
    return Alternative(
        id=_parse_id(d.get("id"), f"{path}.id"),
        name=_expect(d.get("name", d.get("id")), str, f"{path}.name", "a string"),
        description=_expect(d.get("description", ""), str, f"{path}.description", "a string"),
        dmap=dmap,
        matrices=matrices,
        is_theoretical_optimal=_expect(
            d.get("is_theoretical_optimal", False),
            bool,
            f"{path}.is_theoretical_optimal",
            "a boolean",
        ),
    )


def parse_document(document: Any) -> AssessmentModel:
    """Parse an already-decoded JSON object into a validated model."""
    d = _expect(document, dict, "", "a model object")
    version = d.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError("schema_version", f"unsupported schema version {version!r}")
    qas = tuple(
        _parse_qa(q, f"quality_attributes[{i}]")
        for i, q in enumerate(
            _expect(d.get("quality_attributes"), list, "quality_attributes", "a list")
        )
    )
    scenarios = tuple(
        Scenario(
            id=_parse_id(_expect(s, dict, f"scenarios[{i}]", "a scenario object").get("id"),
                         f"scenarios[{i}].id"),
            description=_expect(s.get("description", ""), str, f"scenarios[{i}].description",
                                "a string"),
        )
        for i, s in enumerate(_expect(d.get("scenarios", []), list, "scenarios", "a list"))
    )
    model = AssessmentModel(
        qas=qas,
        weights=_parse_weights(d.get("weights"), "weights"),
        scenarios=scenarios,
        utility_matrix=_parse_utility_matrix(d["utility_matrix"], "utility_matrix")
        if d.get("utility_matrix") is not None
        else None,
        alternatives=tuple(
            _parse_alternative(a, f"alternatives[{i}]")
            for i, a in enumerate(_expect(d.get("alternatives"), list, "alternatives", "a list"))
        ),
    )
    errors = [diag for diag in validate_model(model) if diag.level == "error"]
    if errors:
        first = errors[0]
        raise ModelError(first.path, first.message)
    return model


def parse_model(text: str) -> AssessmentModel:
    """Parse a JSON document string into a validated model."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_document(document)


def load_model(path: str | Path) -> AssessmentModel:
    return parse_model(Path(path).read_text())


# ---------------------------------------------------------------------------
# Validation


def validate_model(model: AssessmentModel) -> list[Diagnostic]:
    """Check all model invariants; returns errors and warnings, empty if clean."""
    diags: list[Diagnostic] = []
    err = lambda path, msg: diags.append(Diagnostic("error", path, msg))
    warn = lambda path, msg: diags.append(Diagnostic("warning", path, msg))

    seen: set[str] = set()
    for i, qa in enumerate(model.qas):
        if qa.id in seen:
            err(f"quality_attributes[{i}].id", f"duplicate quality attribute id {qa.id!r}")
        seen.add(qa.id)
        if qa.importance not in VALID_LEVELS:
            err(f"quality_attributes[{i}].importance", f"level out of range: {qa.importance}")
        if qa.risk not in VALID_LEVELS:
            err(f"quality_attributes[{i}].risk", f"level out of range: {qa.risk}")
    qa_ids = model.qa_ids()

    for name, w in (
        ("importance_weight", model.weights.importance_weight),
        ("risk_weight", model.weights.risk_weight),
    ):
        if not 0.0 <= w <= 1.0:
            err(f"weights.{name}", f"weight must be in [0, 1], got {w}")
    wsum = model.weights.importance_weight + model.weights.risk_weight
    if abs(wsum - 1.0) > 1e-9:
        warn("weights", f"weights sum to {wsum:g}, not 1")

    seen_scenarios: set[str] = set()
    for i, s in enumerate(model.scenarios):
        if s.id in seen_scenarios:
            err(f"scenarios[{i}].id", f"duplicate scenario id {s.id!r}")
        seen_scenarios.add(s.id)

    um = model.utility_matrix
    if um is not None:
        for qa_id in um.rows:
            if qa_id not in qa_ids:
                err("utility_matrix.rows", f"unknown quality attribute {qa_id!r}")
        for sc_id in um.columns:
            if sc_id not in seen_scenarios:
                err("utility_matrix.columns", f"unknown scenario {sc_id!r}")
        for (qa_id, sc_id), cell in um.cells.items():
            p = f"utility_matrix.cells[{qa_id}/{sc_id}]"
            if qa_id not in qa_ids:
                err(p, f"unknown quality attribute {qa_id!r}")
            if sc_id not in seen_scenarios:
                err(p, f"unknown scenario {sc_id!r}")
            if cell.importance not in VALID_LEVELS or cell.risk not in VALID_LEVELS:
                err(p, "importance/risk levels must be 1, 2 or 3")

    if not model.alternatives:
        err("alternatives", "no alternatives defined")
    optimal_count = 0
    seen_alts: set[str] = set()
    for i, alt in enumerate(model.alternatives):
        p = f"alternatives[{i}]"
        if alt.id in seen_alts:
            err(f"{p}.id", f"duplicate alternative id {alt.id!r}")
        seen_alts.add(alt.id)
        if alt.is_theoretical_optimal:
            optimal_count += 1
        if alt.dmap is None and alt.matrices is None:
            err(p, f"alternative {alt.id!r} has neither a dmap nor matrices")
        if alt.dmap is not None:
            diags.extend(_validate_dmap(alt.dmap, model, f"{p}.dmap"))
        for j, matrix in enumerate(alt.matrices or ()):
            diags.extend(_validate_matrix(matrix, model, f"{p}.matrices[{j}]"))
    if optimal_count > 1:
        err("alternatives", f"{optimal_count} alternatives flagged as theoretical optimal (at most one allowed)")

    return diags


def _validate_matrix(matrix: EffectMatrix, model: AssessmentModel, path: str) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    err = lambda p, msg: diags.append(Diagnostic("error", p, msg))
    for axis, qa_list, dim in (
        ("row_qas", matrix.row_qas, matrix.dim_from),
        ("col_qas", matrix.col_qas, matrix.dim_to),
    ):
        if len(set(qa_list)) != len(qa_list):
            err(f"{path}.{axis}", "duplicate quality attribute on one axis")
        for qa_id in qa_list:
            if qa_id not in model.qa_ids():
                err(f"{path}.{axis}", f"unknown quality attribute {qa_id!r}")
            elif model.qa(qa_id).dimension != dim:
                err(
                    f"{path}.{axis}",
                    f"quality attribute {qa_id!r} is not in dimension {dim.value}",
                )
    if len(matrix.cells) != len(matrix.row_qas):
        err(f"{path}.effects", "grid height does not match row_qas")
        return diags
    for i, row in enumerate(matrix.cells):
        if len(row) != len(matrix.col_qas):
            err(f"{path}.effects[{i}]", "grid width does not match col_qas")
            return diags
        for j, cell in enumerate(row):
            if cell.effect not in VALID_EFFECTS:
                err(f"{path}.effects[{i}][{j}]", f"effect must be -1, 0 or +1, got {cell.effect}")
    if matrix.dim_from == matrix.dim_to:
        for i, row_qa in enumerate(matrix.row_qas):
            if row_qa in matrix.col_qas:
                j = matrix.col_qas.index(row_qa)
                if matrix.cells[i][j].effect != 0:
                    err(
                        f"{path}.effects[{i}][{j}]",
                        f"diagonal cell for {row_qa!r} must be 0 in a same-dimension matrix",
                    )
    return diags


def _validate_dmap(dmap: DecisionMap, model: AssessmentModel, path: str) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    err = lambda p, msg: diags.append(Diagnostic("error", p, msg))
    node_ids: set[str] = set()
    for i, node in enumerate(dmap.nodes):
        p = f"{path}.nodes[{i}]"
        if node.qa_id in node_ids:
            err(p, f"duplicate node {node.qa_id!r}")
        node_ids.add(node.qa_id)
        if node.qa_id not in model.qa_ids():
            err(p, f"unknown quality attribute {node.qa_id!r}")
        elif model.qa(node.qa_id).dimension != node.dimension:
            err(p, f"node {node.qa_id!r} declares dimension {node.dimension.value} "
                   f"but the quality attribute is in {model.qa(node.qa_id).dimension.value}")
    seen_edges: set[tuple[str, str]] = set()
    for i, edge in enumerate(dmap.edges):
        p = f"{path}.edges[{i}]"
        if edge.from_qa == edge.to_qa:
            err(p, f"self-loop on {edge.from_qa!r}")
        if (edge.from_qa, edge.to_qa) in seen_edges:
            err(p, f"duplicate edge {edge.from_qa!r} -> {edge.to_qa!r}")
        seen_edges.add((edge.from_qa, edge.to_qa))
        for endpoint in (edge.from_qa, edge.to_qa):
            if endpoint not in node_ids:
                err(p, f"edge endpoint {endpoint!r} is not a dmap node")
        if edge.sign not in (-1, 1):
            err(p, f"edge sign must be -1 or +1, got {edge.sign}")
    return diags


# ---------------------------------------------------------------------------
# Matrix derivation


def derive_matrices(dmap: DecisionMap, model: AssessmentModel) -> list[EffectMatrix]:
    """Expand a decision map into effect matrices, one per dimension pair.

    A pair appears only when the dmap holds at least one edge for it; rows and
    columns are all model QAs of the pair's dimensions, in model order.
    """
    qa_ids = model.qa_ids()
    for edge in dmap.edges:
        for endpoint in (edge.from_qa, edge.to_qa):
            if endpoint not in qa_ids:
                raise DanglingReferenceError(
                    "dmap.edges", f"edge endpoint {endpoint!r} is not a model quality attribute"
                )
    by_pair: dict[tuple[Dimension, Dimension], list[DMapEdge]] = {}
    for edge in dmap.edges:
        pair = (model.qa(edge.from_qa).dimension, model.qa(edge.to_qa).dimension)
        by_pair.setdefault(pair, []).append(edge)

    matrices = []
    for pair in sorted(by_pair, key=pair_sort_key):
        dim_from, dim_to = pair
        rows = tuple(qa.id for qa in model.qas_in(dim_from))
        cols = tuple(qa.id for qa in model.qas_in(dim_to))
        grid = [[EffectCell(0) for _ in cols] for _ in rows]
        for edge in by_pair[pair]:
            grid[rows.index(edge.from_qa)][cols.index(edge.to_qa)] = EffectCell(
                edge.sign, edge.impact_level
            )
        matrices.append(EffectMatrix(dim_from, dim_to, rows, cols, tuple(tuple(r) for r in grid)))
    return matrices


def resolve_matrices(alternative: Alternative, model: AssessmentModel) -> tuple[EffectMatrix, ...]:
    """Explicit matrices when the alternative has them, else derived from its dmap."""
    if alternative.matrices is not None:
        return alternative.matrices
    if alternative.dmap is not None:
        return tuple(derive_matrices(alternative.dmap, model))
    return ()


# ---------------------------------------------------------------------------
# Serialization


def serialize_matrix(matrix: EffectMatrix) -> dict:
    annotations = []
    for i, row_qa in enumerate(matrix.row_qas):
        for j, col_qa in enumerate(matrix.col_qas):
            cell = matrix.cells[i][j]
            if cell.impact_level is not None or cell.rationale:
                ann: dict[str, Any] = {"row": row_qa, "col": col_qa}
                if cell.impact_level is not None:
                    ann["impact_level"] = cell.impact_level.value
                if cell.rationale:
                    ann["rationale"] = cell.rationale
                annotations.append(ann)
    out: dict[str, Any] = {
        "dim_from": matrix.dim_from.value,
        "dim_to": matrix.dim_to.value,
        "row_qas": list(matrix.row_qas),
        "col_qas": list(matrix.col_qas),
        "effects": [[cell.effect for cell in row] for row in matrix.cells],
    }
    if annotations:
        out["annotations"] = annotations
    return out


def serialize_model(model: AssessmentModel) -> dict:
    """Serialize to the document schema; round-trips through parse_document."""
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "weights": {
            "importance_weight": model.weights.importance_weight,
            "risk_weight": model.weights.risk_weight,
        },
        "quality_attributes": [],
        "scenarios": [{"id": s.id, "description": s.description} for s in model.scenarios],
        "alternatives": [],
    }
    for qa in model.qas:
        q: dict[str, Any] = {
            "id": qa.id,
            "name": qa.name,
            "definition": qa.definition,
            "dimension": qa.dimension.value,
            "importance": qa.importance,
            "risk": qa.risk,
        }
        if qa.priority_override is not None:
            q["priority_override"] = qa.priority_override
        doc["quality_attributes"].append(q)
    if model.utility_matrix is not None:
        um = model.utility_matrix
        doc["utility_matrix"] = {
            "rows": list(um.rows),
            "columns": list(um.columns),
            "cells": [
                {"qa": qa_id, "scenario": sc_id, "importance": cell.importance, "risk": cell.risk}
                for (qa_id, sc_id), cell in sorted(um.cells.items())
            ],
        }
    for alt in model.alternatives:
        a: dict[str, Any] = {
            "id": alt.id,
            "name": alt.name,
            "description": alt.description,
            "is_theoretical_optimal": alt.is_theoretical_optimal,
        }
        if alt.dmap is not None:
            a["dmap"] = {
                "nodes": [
                    {
                        "qa": n.qa_id,
                        "dimension": n.dimension.value,
                        **({"impact_level": n.impact_level.value} if n.impact_level else {}),
                    }
                    for n in alt.dmap.nodes
                ],
                "edges": [
                    {
                        "from": e.from_qa,
                        "to": e.to_qa,
                        "sign": e.sign,
                        **({"impact_level": e.impact_level.value} if e.impact_level else {}),
                    }
                    for e in alt.dmap.edges
                ],
            }
        if alt.matrices is not None:
            a["matrices"] = [serialize_matrix(m) for m in alt.matrices]
        doc["alternatives"].append(a)
    return doc

import json

import pytest

from siskit.model import (
    AssessmentModel,
    DanglingReferenceError,
    Dimension,
    ModelError,
    SchemaError,
    derive_matrices,
    parse_document,
    parse_model,
    serialize_model,
    validate_model,
)
from siskit.fixtures import fixture_path


def minimal_doc(**overrides):
    doc = {
        "schema_version": "1",
        "weights": {"importance_weight": 0.5, "risk_weight": 0.5},
        "quality_attributes": [
            {"id": "traceability", "dimension": "T", "importance": 3, "risk": 3},
            {"id": "transparency", "dimension": "S", "importance": 1, "risk": 1},
        ],
        "alternatives": [
            {
                "id": "a1",
                "dmap": {
                    "nodes": [
                        {"qa": "traceability", "dimension": "T"},
                        {"qa": "transparency", "dimension": "S"},
                    ],
                    "edges": [{"from": "traceability", "to": "transparency", "sign": 1}],
                },
            }
        ],
    }
    doc.update(overrides)
    return doc


def test_parse_case_study_qa_levels(case_study_model):
    qa = case_study_model.qa("traceability")
    assert qa.dimension == Dimension.TECHNICAL
    assert (qa.importance, qa.risk) == (3, 3)
    assert len(case_study_model.qas) == 18


def test_no_alternatives_rejected():
    with pytest.raises(ModelError, match="no alternatives"):
        parse_document(minimal_doc(alternatives=[]))


def test_out_of_domain_effect_names_cell():
    doc = minimal_doc()
    doc["alternatives"] = [
        {
            "id": "a1",
            "matrices": [
                {
                    "dim_from": "T",
                    "dim_to": "S",
                    "row_qas": ["traceability"],
                    "col_qas": ["transparency"],
                    "effects": [[2]],
                }
            ],
        }
    ]
    with pytest.raises(SchemaError) as exc:
        parse_document(doc)
    assert "effects[0][0]" in exc.value.path


def test_unknown_dimension_code():
    doc = minimal_doc()
    doc["quality_attributes"][0]["dimension"] = "X"
    with pytest.raises(SchemaError, match="unknown dimension"):
        parse_document(doc)


def test_bad_json_reports_position():
    with pytest.raises(SchemaError, match="line 1"):
        parse_model("{not json")


def test_dangling_edge_reference():
    doc = minimal_doc()
    doc["alternatives"][0]["dmap"]["edges"].append(
        {"from": "traceability", "to": "ghost", "sign": 1}
    )
    with pytest.raises(ModelError, match="ghost"):
        parse_document(doc)


def test_duplicate_qa_id():
    doc = minimal_doc()
    doc["quality_attributes"].append(dict(doc["quality_attributes"][0]))
    with pytest.raises(ModelError, match="duplicate"):
        parse_document(doc)


def test_weight_warning_rules():
    clean = parse_document(minimal_doc())
    assert not [d for d in validate_model(clean) if "weights sum" in d.message]

    doc = minimal_doc(weights={"importance_weight": 0.9, "risk_weight": 0.9})
    warnings = [d for d in validate_model(parse_document(doc)) if d.level == "warning"]
    assert any("1.8" in w.message for w in warnings)


def test_nonzero_diagonal_is_error():
    doc = minimal_doc()
    doc["quality_attributes"].append({"id": "t2", "dimension": "T", "importance": 1, "risk": 1})
    doc["alternatives"] = [
        {
            "id": "a1",
            "matrices": [
                {
                    "dim_from": "T",
                    "dim_to": "T",
                    "row_qas": ["traceability", "t2"],
                    "col_qas": ["traceability", "t2"],
                    "effects": [[1, 1], [0, 0]],
                }
            ],
        }
    ]
    with pytest.raises(ModelError, match="diagonal"):
        parse_document(doc)


def test_two_theoretical_optimals_rejected():
    doc = minimal_doc()
    doc["alternatives"].append(
        {**json.loads(json.dumps(doc["alternatives"][0])), "id": "a2",
         "is_theoretical_optimal": True}
    )
    doc["alternatives"].append(
        {**json.loads(json.dumps(doc["alternatives"][0])), "id": "a3",
         "is_theoretical_optimal": True}
    )
    with pytest.raises(ModelError, match="theoretical optimal"):
        parse_document(doc)


@pytest.mark.parametrize("name", ["deployment", "case_study", "normalization_reference"])
def test_round_trip(name):
    text = fixture_path(name).read_text()
    model = parse_model(text)
    again = parse_document(serialize_model(model))
    assert again == model


def test_derive_matrices_pair_selection(case_study_model):
    # Constructed dmap touching exactly five pair classes.
    doc = {
        "schema_version": "1",
        "weights": {"importance_weight": 0.5, "risk_weight": 0.5},
        "quality_attributes": [
            {"id": "t1", "dimension": "T", "importance": 1, "risk": 1},
            {"id": "t2", "dimension": "T", "importance": 1, "risk": 1},
            {"id": "e1", "dimension": "Ec", "importance": 1, "risk": 1},
            {"id": "n1", "dimension": "En", "importance": 1, "risk": 1},
            {"id": "s1", "dimension": "S", "importance": 1, "risk": 1},
        ],
        "alternatives": [
            {
                "id": "a",
                "dmap": {
                    "nodes": [
                        {"qa": "t1", "dimension": "T"},
                        {"qa": "t2", "dimension": "T"},
                        {"qa": "e1", "dimension": "Ec"},
                        {"qa": "n1", "dimension": "En"},
                        {"qa": "s1", "dimension": "S"},
                    ],
                    "edges": [
                        {"from": "t1", "to": "t2", "sign": 1},
                        {"from": "t1", "to": "e1", "sign": 1},
                        {"from": "t1", "to": "n1", "sign": -1},
                        {"from": "t2", "to": "s1", "sign": 1},
                        {"from": "s1", "to": "e1", "sign": 1},
                    ],
                },
            }
        ],
    }
    model = parse_document(doc)
    matrices = derive_matrices(model.alternatives[0].dmap, model)
    assert [m.pair_label for m in matrices] == ["T-T", "T-Ec", "T-En", "T-S", "S-Ec"]


def test_derive_matrices_empty_dmap(case_study_model):
    from siskit.model import DecisionMap

    assert derive_matrices(DecisionMap((), ()), case_study_model) == []


def test_derive_matrices_single_edge(case_study_model):
    from siskit.model import DecisionMap, DMapEdge, DMapNode

    dmap = DecisionMap(
        nodes=(
            DMapNode("traceability", Dimension.TECHNICAL),
            DMapNode("transparency", Dimension.SOCIAL),
        ),
        edges=(DMapEdge("traceability", "transparency", 1),),
    )
    (matrix,) = derive_matrices(dmap, case_study_model)
    assert matrix.pair_label == "T-S"
    nonzero = [
        (r, c)
        for i, r in enumerate(matrix.row_qas)
        for j, c in enumerate(matrix.col_qas)
        if matrix.cells[i][j].effect
    ]
    assert nonzero == [("traceability", "transparency")]
    assert matrix.cell("traceability", "transparency").effect == 1


def test_derive_matrices_edge_order_independent(case_study_model):
    dmap = case_study_model.alternative("multi_model").dmap
    from siskit.model import DecisionMap

    reversed_dmap = DecisionMap(dmap.nodes, tuple(reversed(dmap.edges)))
    assert derive_matrices(dmap, case_study_model) == derive_matrices(
        reversed_dmap, case_study_model
    )


def test_derive_matrices_edge_cell_bijection(case_study_model):
    dmap = case_study_model.alternative("multi_model").dmap
    matrices = derive_matrices(dmap, case_study_model)
    cells = {
        (r, c): matrix.cells[i][j].effect
        for matrix in matrices
        for i, r in enumerate(matrix.row_qas)
        for j, c in enumerate(matrix.col_qas)
        if matrix.cells[i][j].effect
    }
    edges = {(e.from_qa, e.to_qa): e.sign for e in dmap.edges}
    assert cells == edges
    # and no derived matrix is all-zero
    for matrix in matrices:
        assert any(cell.effect for row in matrix.cells for cell in row)

"""Table, CSV, JSON and Markdown rendering of priorities, scores and reports.

All output is deterministic: alternative order follows the model (optimal
last), pair order is the fixed presentation order.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from typing import Iterable, Optional, Sequence

from .analysis import WhatIfReport, find_tradeoffs, find_synergy_chains, matrix_chains, most_affected_qas
from .model import AssessmentModel, Alternative, EffectMatrix, resolve_matrices
from .scoring import PrioritySet, SisResult, round_half_up

FORMATS = ("table", "csv", "json", "markdown")

_EFFECT_GLYPH = {1: "+", 0: "0", -1: "−"}


def styling_enabled(stream=None) -> bool:
    """ANSI styling is on only for a tty and only without SISKIT_NO_COLOR."""
    if os.environ.get("SISKIT_NO_COLOR"):
        return False
    stream = stream if stream is not None else sys.stdout
    return bool(getattr(stream, "isatty", lambda: False)())


def _bold(text: str, enabled: bool) -> str:
    return f"\x1b[1m{text}\x1b[0m" if enabled else text


def format_value(value: float, decimals: int = 2) -> str:
    return f"{round_half_up(value, decimals):.{decimals}f}"


def plain_table(headers: Sequence[str], rows: Iterable[Sequence[str]], bold_header: bool = False) -> str:
    rows = [list(r) for r in rows]
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    if bold_header:
        lines[0] = _bold(lines[0], True)
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def markdown_table(headers: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    lines = ["| " + " | ".join(headers) + " |", "|" + "|".join(" --- " for _ in headers) + "|"]
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines)


def csv_table(headers: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def ordered_alternatives(model: AssessmentModel) -> list[Alternative]:
    """Model order with the theoretical optimal moved last."""
    regular = [a for a in model.alternatives if not a.is_theoretical_optimal]
    optimal = [a for a in model.alternatives if a.is_theoretical_optimal]
    return regular + optimal


# ---------------------------------------------------------------------------
# Priorities


def priorities_rows(model: AssessmentModel, priorities: PrioritySet, decimals: int = 2):
    rows = []
    for qa in model.qas:
        rows.append(
            [
                qa.id,
                str(qa.importance),
                str(qa.risk),
                format_value(priorities.raw[qa.id], decimals),
                format_value(priorities.normalized[qa.id], decimals),
                qa.dimension.value,
            ]
        )
    return rows


def render_priorities(
    model: AssessmentModel, priorities: PrioritySet, fmt: str = "table", decimals: int = 2
) -> str:
    headers = ["QA", "I", "R", "P", "NP", "Dimension"]
    rows = priorities_rows(model, priorities, decimals)
    if fmt == "json":
        return json.dumps(
            [
                {
                    "qa": qa.id,
                    "importance": qa.importance,
                    "risk": qa.risk,
                    "priority": round_half_up(priorities.raw[qa.id], decimals),
                    "normalized_priority": round_half_up(priorities.normalized[qa.id], decimals),
                    "dimension": qa.dimension.value,
                }
                for qa in model.qas
            ],
            indent=2,
        )
    if fmt == "csv":
        return csv_table(headers, rows)
    if fmt == "markdown":
        return markdown_table(headers, rows)
    return plain_table(headers, rows)


# ---------------------------------------------------------------------------
# Scores


def scores_document(model: AssessmentModel, results: Sequence[SisResult]) -> dict:
    """JSON-serializable scores document; round-trips through render_scores."""
    return {
        "pairs": [
            {
                "dim_from": r.dim_from.value,
                "dim_to": r.dim_to.value,
                "raw": {alt: r.raw[alt] for alt in sorted(r.raw)},
                "normalized_percent": {
                    alt: r.normalized_percent[alt] for alt in sorted(r.normalized_percent)
                },
                "theoretical_optimal": r.theoretical_optimal_sis,
            }
            for r in results
        ]
    }


def _score_blocks(model, results, decimals):
    alts = ordered_alternatives(model)
    headers = ["Alternative"] + [r.pair_label for r in results]
    raw_rows = [
        [alt.name] + [format_value(r.raw.get(alt.id, 0.0), decimals) for r in results]
        for alt in alts
    ]
    pct_rows = [
        [alt.name]
        + [
            format_value(r.normalized_percent[alt.id], decimals)
            if alt.id in r.normalized_percent
            else "-"
            for r in results
        ]
        for alt in alts
    ]
    return headers, raw_rows, pct_rows


def render_scores(
    model: AssessmentModel,
    results: Sequence[SisResult],
    fmt: str = "table",
    decimals: int = 2,
) -> str:
    if fmt == "json":
        return json.dumps(scores_document(model, results), indent=2)
    if fmt == "csv":
        rows = []
        for r in results:
            for alt in ordered_alternatives(model):
                rows.append(
                    [
                        r.pair_label,
                        alt.id,
                        format_value(r.raw.get(alt.id, 0.0), decimals),
                        format_value(r.normalized_percent[alt.id], decimals)
                        if alt.id in r.normalized_percent
                        else "",
                    ]
                )
        return csv_table(["pair", "alternative", "raw_sis", "normalized_percent"], rows)
    headers, raw_rows, pct_rows = _score_blocks(model, results, decimals)
    table = markdown_table if fmt == "markdown" else plain_table
    return (
        "Non-normalized SIS\n"
        + table(headers, raw_rows)
        + "\n\nNormalized SIS (%)\n"
        + table(headers, pct_rows)
    )


# ---------------------------------------------------------------------------
# What-if


def render_whatif(
    model: AssessmentModel, report: WhatIfReport, fmt: str = "table", decimals: int = 2
) -> str:
    def fmt_opt(value: Optional[float]) -> str:
        return format_value(value, decimals) if value is not None else "-"

    if fmt == "json":
        doc = {
            "pairs": [
                {
                    "dim_from": pair[0].value,
                    "dim_to": pair[1].value,
                    "alternatives": {
                        alt_id: {
                            "old_raw": d.old_raw,
                            "new_raw": d.new_raw,
                            "old_pct": d.old_pct,
                            "new_pct": d.new_pct,
                            "delta_raw": d.delta_raw,
                            "delta_pct": d.delta_pct,
                        }
                        for alt_id, d in sorted(deltas.items())
                    },
                }
                for pair, deltas in report.per_pair.items()
            ],
            "chains_created": {
                alt: [list(c.path) for c in chains]
                for alt, chains in report.chains_created.items()
            },
            "chains_broken": {
                alt: [list(c.path) for c in chains]
                for alt, chains in report.chains_broken.items()
            },
        }
        return json.dumps(doc, indent=2)

    headers = ["Pair", "Alternative", "Raw", "New raw", "Δ raw", "Pct", "New pct", "Δ pct"]
    rows = []
    for pair, deltas in report.per_pair.items():
        for alt in ordered_alternatives(model):
            d = deltas[alt.id]
            rows.append(
                [
                    f"{pair[0].value}-{pair[1].value}",
                    alt.id,
                    format_value(d.old_raw, decimals),
                    format_value(d.new_raw, decimals),
                    format_value(d.delta_raw, decimals),
                    fmt_opt(d.old_pct),
                    fmt_opt(d.new_pct),
                    fmt_opt(d.delta_pct),
                ]
            )
    if fmt == "csv":
        return csv_table(headers, rows)
    table = markdown_table if fmt == "markdown" else plain_table
    out = table(headers, rows)
    dims = {qa.id: qa.dimension for qa in model.qas}
    lines = [out]
    for alt_id, chains in report.chains_created.items():
        for chain in chains:
            lines.append(f"chain created ({alt_id}): {chain.render(dims)}")
    for alt_id, chains in report.chains_broken.items():
        for chain in chains:
            lines.append(f"chain broken ({alt_id}): {chain.render(dims)}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Full report


def render_matrix_grid(matrix: EffectMatrix) -> str:
    headers = [f"{matrix.pair_label}"] + list(matrix.col_qas)
    rows = [
        [row_qa] + [_EFFECT_GLYPH[cell.effect] for cell in matrix.cells[i]]
        for i, row_qa in enumerate(matrix.row_qas)
    ]
    return markdown_table(headers, rows)


def render_report(
    model: AssessmentModel,
    results: Sequence[SisResult],
    priorities: PrioritySet,
    decimals: int = 2,
) -> str:
    """One Markdown document: priorities, matrices, scores, trade-offs, chains."""
    dims = {qa.id: qa.dimension for qa in model.qas}
    parts = ["# Sustainability assessment report", ""]

    parts += ["## Quality attribute priorities", ""]
    parts.append(
        markdown_table(
            ["QA", "I", "R", "P", "NP", "Dimension"], priorities_rows(model, priorities, decimals)
        )
    )
    parts.append("")

    parts += ["## Effect matrices", ""]
    for alt in ordered_alternatives(model):
        parts.append(f"### {alt.name}")
        parts.append("")
        matrices = resolve_matrices(alt, model)
        if not matrices:
            parts += ["no effects identified", ""]
            continue
        for matrix in matrices:
            parts += [render_matrix_grid(matrix), ""]

    parts += ["## Sustainability impact scores", ""]
    parts += [render_scores(model, results, fmt="markdown", decimals=decimals), ""]
    parts.append(
        "Raw scores have no lower bound; percentages are relative to the "
        "theoretical optimal only. How bad a low raw score is remains an open "
        "question, so both are reported."
    )
    parts.append("")

    parts += ["## Trade-offs", ""]
    for alt in ordered_alternatives(model):
        if alt.is_theoretical_optimal:
            continue
        parts.append(f"### {alt.name}")
        parts.append("")
        tradeoffs = find_tradeoffs(alt, model, scope="all")
        if not tradeoffs:
            parts += ["no trade-offs", ""]
            continue
        for t in tradeoffs:
            kind = "within-dimension" if t.same_dimension else "cross-dimension"
            level = f", {t.impact_level.value}" if t.impact_level else ""
            parts.append(f"- {t.from_qa} → {t.to_qa} ({kind}{level})")
        parts.append("")

    parts += ["## Synergy chains", ""]
    for alt in ordered_alternatives(model):
        if alt.is_theoretical_optimal:
            continue
        parts.append(f"### {alt.name}")
        parts.append("")
        if alt.dmap is not None:
            chains = find_synergy_chains(alt.dmap, min_length=2)
        else:
            chains = [c for c in matrix_chains(resolve_matrices(alt, model), model) if c.length >= 2]
        if not chains:
            parts += ["no chains", ""]
            continue
        for chain in chains:
            parts.append(f"- {chain.render(dims)}")
        parts.append("")

    parts += ["## Most affected quality attributes", ""]
    for alt in ordered_alternatives(model):
        if alt.is_theoretical_optimal:
            continue
        summary = most_affected_qas(alt, model)
        rows = [
            [c.qa_id, str(c.positive_in), str(c.negative_in)]
            for c in summary.ranked_by_negative()
            if c.positive_in or c.negative_in
        ]
        parts.append(f"### {alt.name}")
        parts.append("")
        if rows:
            parts.append(markdown_table(["QA", "positive in", "negative in"], rows))
        else:
            parts.append("no effects identified")
        parts.append("")

    return "\n".join(parts).rstrip() + "\n"

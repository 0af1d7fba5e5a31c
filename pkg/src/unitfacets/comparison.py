"""Contribution-by-property comparison tables with converted views.

A table is assembled straight from the store; converting a column never
touches stored values. Each conversion recomputes from the cell's original
value (kept in the tooltip payload), so chained conversions do not
accumulate error and converting back to the stored unit reproduces it
exactly. The converted flag marks cells whose display unit differs from
the stored unit; cells whose unit cannot reach the target dimension are
flagged inconvertible instead of failing the view.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace

from .errors import (
    DuplicateInput,
    IncommensurableUnits,
    UnknownProperty,
    UnsupportedFormat,
)
from .numfmt import shortest_decimal
from .quantities import unit_code
from .store import GraphStore, SavedComparison
from .ucum import convert, parse_ucum, reduce_expr

EXPORT_FORMATS = ("csv", "json")


@dataclass(frozen=True)
class Tooltip:
    """Original-value payload shown on hover and carried by exports."""

    original_value: float
    original_unit: str
    target_unit: str | None = None


@dataclass(frozen=True)
class QuantityCell:
    display_value: float
    display_unit: str
    quantity_kind_id: str
    converted: bool = False
    inconvertible: bool = False
    tooltip: Tooltip | None = None


@dataclass(frozen=True)
class LiteralCell:
    text: str


Cell = QuantityCell | LiteralCell


@dataclass(frozen=True)
class Column:
    property_id: str
    label: str
    display_unit: str | None = None


@dataclass(frozen=True)
class Row:
    contribution_id: str
    label: str
    paper_title: str


@dataclass(frozen=True)
class ComparisonTable:
    columns: tuple[Column, ...]
    rows: tuple[Row, ...]
    cells: dict[tuple[str, str], Cell]

    def cell(self, contribution_id: str, property_id: str) -> Cell | None:
        return self.cells.get((contribution_id, property_id))

    @property
    def unit_overrides(self) -> dict[str, str]:
        return {c.property_id: c.display_unit for c in self.columns if c.display_unit}


def build_comparison(
    store: GraphStore,
    contribution_ids: list[str],
    property_ids: list[str],
) -> ComparisonTable:
    """Assemble the raw table; row and column order follow the inputs.

    A contribution with several statements on one property contributes the
    statement with the smallest id to that cell.
    """
    if len(set(contribution_ids)) != len(contribution_ids):
        raise DuplicateInput("duplicate contribution id in comparison input")
    if len(set(property_ids)) != len(property_ids):
        raise DuplicateInput("duplicate property id in comparison input")

    columns = tuple(
        Column(property_id=pid, label=store.property_label(pid)) for pid in property_ids
    )
    rows = []
    cells: dict[tuple[str, str], Cell] = {}
    wanted = set(property_ids)
    for cid in contribution_ids:
        contribution = store.get_contribution(cid)
        paper = store.get_paper(contribution.paper_id)
        rows.append(
            Row(contribution_id=cid, label=contribution.label, paper_title=paper.title)
        )
        for statement in contribution.statements:  # sorted by statement id
            if statement.property_id not in wanted:
                continue
            key = (cid, statement.property_id)
            if key in cells:
                continue
            if statement.is_quantity:
                qv = statement.value
                code = unit_code(qv.unit_id, store.snapshot)
                cells[key] = QuantityCell(
                    display_value=qv.numeric_value,
                    display_unit=code,
                    quantity_kind_id=qv.quantity_kind_id,
                    tooltip=Tooltip(original_value=qv.numeric_value, original_unit=code),
                )
            else:
                cells[key] = LiteralCell(text=statement.value)
    return ComparisonTable(columns=columns, rows=tuple(rows), cells=cells)


def convert_column(
    table: ComparisonTable,
    store: GraphStore,
    property_id: str,
    target_unit: str,
) -> ComparisonTable:
    """New table with one column's quantity cells shown in ``target_unit``.

    The input table and the store are left untouched. Raises
    IncommensurableUnits when no quantity cell in the column can reach the
    target dimension; isolated odd-dimension cells (data errors) are merely
    flagged inconvertible.
    """
    if property_id not in {c.property_id for c in table.columns}:
        raise UnknownProperty(f"property {property_id!r} is not a column of this table")
    target_reduction = reduce_expr(parse_ucum(target_unit, store.registry))

    quantity_cells = [
        (key, cell)
        for key, cell in table.cells.items()
        if key[1] == property_id and isinstance(cell, QuantityCell)
    ]
    if quantity_cells:
        reachable = [
            cell
            for _, cell in quantity_cells
            if _original_dimension(cell, store) == target_reduction.dimension
        ]
        if not reachable:
            column_dim = _original_dimension(quantity_cells[0][1], store)
            raise IncommensurableUnits(
                f"target unit {target_unit!r} has dimension "
                f"{target_reduction.dimension} but column {property_id!r} "
                f"holds {column_dim}",
                unit_dimension=target_reduction.dimension.exponents,
                column_dimension=column_dim.exponents,
            )

    cells = dict(table.cells)
    for key, cell in quantity_cells:
        original = cell.tooltip
        if _original_dimension(cell, store) != target_reduction.dimension:
            cells[key] = replace(cell, inconvertible=True)
            continue
        tooltip = Tooltip(
            original_value=original.original_value,
            original_unit=original.original_unit,
            target_unit=target_unit,
        )
        if target_unit == original.original_unit:
            cells[key] = QuantityCell(
                display_value=original.original_value,
                display_unit=target_unit,
                quantity_kind_id=cell.quantity_kind_id,
                converted=False,
                tooltip=tooltip,
            )
        else:
            value = convert(
                original.original_value, original.original_unit, target_unit, store.registry
            ).value
            cells[key] = QuantityCell(
                display_value=value,
                display_unit=target_unit,
                quantity_kind_id=cell.quantity_kind_id,
                converted=True,
                tooltip=tooltip,
            )

    columns = tuple(
        replace(col, display_unit=target_unit) if col.property_id == property_id else col
        for col in table.columns
    )
    return ComparisonTable(columns=columns, rows=table.rows, cells=cells)


def _original_dimension(cell: QuantityCell, store: GraphStore):
    return reduce_expr(parse_ucum(cell.tooltip.original_unit, store.registry)).dimension


def save_view(table: ComparisonTable, store: GraphStore) -> str:
    """Persist the table's configuration; returns the shareable id."""
    return store.save_comparison(
        [row.contribution_id for row in table.rows],
        [col.property_id for col in table.columns],
        table.unit_overrides,
    )


def render_saved_view(store: GraphStore, saved: SavedComparison) -> ComparisonTable:
    """Re-read statement values and re-apply the saved unit overrides."""
    table = build_comparison(store, list(saved.contribution_ids), list(saved.property_ids))
    for property_id, target_unit in sorted(saved.unit_overrides.items()):
        table = convert_column(table, store, property_id, target_unit)
    return table


def table_to_dict(table: ComparisonTable) -> dict:
    """JSON-ready rendering; converted display values are strings so no
    precision is lost across language boundaries."""
    return {
        "columns": [
            {
                "property_id": col.property_id,
                "label": col.label,
                "display_unit": col.display_unit,
            }
            for col in table.columns
        ],
        "rows": [
            {
                "contribution_id": row.contribution_id,
                "label": row.label,
                "paper_title": row.paper_title,
            }
            for row in table.rows
        ],
        "cells": [
            [
                _cell_to_dict(table.cell(row.contribution_id, col.property_id))
                for col in table.columns
            ]
            for row in table.rows
        ],
    }


def _cell_to_dict(cell: Cell | None) -> dict | None:
    if cell is None:
        return None
    if isinstance(cell, LiteralCell):
        return {"type": "literal", "text": cell.text}
    payload = {
        "type": "quantity",
        "display_value": shortest_decimal(cell.display_value),
        "display_unit": cell.display_unit,
        "quantity_kind_id": cell.quantity_kind_id,
        "converted": cell.converted,
        "inconvertible": cell.inconvertible,
    }
    if cell.tooltip is not None:
        payload["tooltip"] = {
            "original_value": shortest_decimal(cell.tooltip.original_value),
            "original_unit": cell.tooltip.original_unit,
            "target_unit": cell.tooltip.target_unit,
        }
    return payload


def export_table(table: ComparisonTable, format: str) -> str:
    """Serialize deterministically; "csv" or "json"."""
    if format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["contribution"] + [col.label for col in table.columns])
        for row in table.rows:
            record = [row.label]
            for col in table.columns:
                record.append(_cell_text(table.cell(row.contribution_id, col.property_id)))
            writer.writerow(record)
        return buffer.getvalue()
    if format == "json":
        return json.dumps(table_to_dict(table), indent=2, ensure_ascii=False) + "\n"
    raise UnsupportedFormat(
        f"unsupported export format {format!r}; supported: {', '.join(EXPORT_FORMATS)}"
    )


def _cell_text(cell: Cell | None) -> str:
    if cell is None:
        return ""
    if isinstance(cell, LiteralCell):
        return cell.text
    return f"{shortest_decimal(cell.display_value)} {cell.display_unit}"

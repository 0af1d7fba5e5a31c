"""File-backed store for the scholarly knowledge graph.

Holds papers, contributions, property-valued statements, and saved
comparisons. Records live in line-delimited JSON under a store directory
(``graph.jsonl`` and ``comparisons.jsonl``) with an in-memory index;
ingestion upserts by record id, so re-ingesting a file is idempotent.
Reads never write, and comparison/conversion layers only read, so stored
statement values stay bit-identical.

Writes are serialized by a lock and persisted with an atomic
temp-file-then-rename, one rewrite per batch; concurrent readers never
observe a partial file.

Ingestion record shapes (one JSON object per line):

    {"kind": "paper", "id": ..., "title": ..., "external_ref": ...?}
    {"kind": "contribution", "id": ..., "paper_id": ..., "label": ...}
    {"kind": "property", "id": ..., "label": ...}
    {"kind": "statement", "id": ..., "contribution_id": ...,
     "property_id": ..., "property_label": ...?,
     "value": {"literal": "..."}
            | {"numeric_value": ..., "ucum_code": ..., "quantity_kind_id": ...?}}

A quantity statement without a quantity kind is inferred from the unit's
snapshot links when they are unique; ambiguous or missing links reject the
statement. Structural problems (bad JSON, dangling references, unknown
record kinds) abort the whole ingest; invalid quantity values are rejected
per record with line-level diagnostics.
"""

from __future__ import annotations

import json
import os
import secrets
import tempfile
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable

from .errors import (
    DanglingReference,
    FormatError,
    MissingMetadata,
    NotFound,
    UnitFacetsError,
)
from .quantities import QuantityValue, QudtSnapshot
from .quantities import validate_quantity_value
from .ucum import UnitRegistry

GRAPH_FILE = "graph.jsonl"
COMPARISONS_FILE = "comparisons.jsonl"


@dataclass(frozen=True)
class Paper:
    id: str
    title: str
    external_ref: str | None = None


@dataclass(frozen=True)
class Statement:
    """One property-value assertion on a contribution.

    ``value`` is a plain string for literal statements or a validated
    QuantityValue for measured ones.
    """

    id: str
    contribution_id: str
    property_id: str
    property_label: str
    value: str | QuantityValue

    @property
    def is_quantity(self) -> bool:
        return isinstance(self.value, QuantityValue)


@dataclass(frozen=True)
class Contribution:
    id: str
    paper_id: str
    label: str
    statements: tuple[Statement, ...] = ()


@dataclass(frozen=True)
class SavedComparison:
    """A persisted comparison configuration with a shareable id."""

    id: str
    contribution_ids: tuple[str, ...]
    property_ids: tuple[str, ...]
    unit_overrides: dict[str, str]
    created: str


@dataclass(frozen=True)
class IngestDiagnostic:
    line: int
    code: str
    message: str


@dataclass
class IngestReport:
    papers: int = 0
    contributions: int = 0
    statements: int = 0
    rejected: int = 0
    diagnostics: list[IngestDiagnostic] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "papers": self.papers,
            "contributions": self.contributions,
            "statements": self.statements,
            "rejected": self.rejected,
            "diagnostics": [
                {"line": d.line, "code": d.code, "message": d.message}
                for d in self.diagnostics
            ],
        }


class GraphStore:
    """Knowledge graph store; pass ``path=None`` for a purely in-memory one."""

    def __init__(
        self,
        path: str | Path | None,
        registry: UnitRegistry,
        snapshot: QudtSnapshot,
    ):
        self.path = Path(path) if path is not None else None
        self.registry = registry
        self.snapshot = snapshot
        self._write_lock = threading.Lock()
        self._papers: dict[str, Paper] = {}
        self._contributions: dict[str, dict] = {}
        self._statements: dict[str, Statement] = {}
        self._properties: dict[str, str] = {}
        self._comparisons: dict[str, SavedComparison] = {}
        if self.path is not None:
            self.path.mkdir(parents=True, exist_ok=True)
            self._load()

    # -- loading / persistence ------------------------------------------------

    def _load(self) -> None:
        graph = self.path / GRAPH_FILE
        if graph.exists():
            for lineno, record in _read_jsonl(graph):
                self._apply_record(record, lineno, source=str(graph))
        comparisons = self.path / COMPARISONS_FILE
        if comparisons.exists():
            for lineno, record in _read_jsonl(comparisons):
                saved = SavedComparison(
                    id=record["id"],
                    contribution_ids=tuple(record["contribution_ids"]),
                    property_ids=tuple(record["property_ids"]),
                    unit_overrides=dict(record["unit_overrides"]),
                    created=record["created"],
                )
                self._comparisons[saved.id] = saved

    def _apply_record(self, record: dict, lineno: int, source: str) -> None:
        """Apply a persisted graph record (already validated at ingest)."""
        kind = record.get("kind")
        if kind == "paper":
            self._papers[record["id"]] = Paper(
                id=record["id"],
                title=record["title"],
                external_ref=record.get("external_ref"),
            )
        elif kind == "contribution":
            self._contributions[record["id"]] = {
                "id": record["id"],
                "paper_id": record["paper_id"],
                "label": record["label"],
            }
        elif kind == "property":
            self._properties[record["id"]] = record["label"]
        elif kind == "statement":
            self._statements[record["id"]] = self._statement_from_record(record)
        else:
            raise FormatError(f"{source} line {lineno}: unknown record kind {kind!r}")

    def _statement_from_record(self, record: dict) -> Statement:
        value = record["value"]
        if "literal" in value:
            parsed: str | QuantityValue = value["literal"]
        else:
            unit = self.snapshot.unit_by_code(value["ucum_code"])
            parsed = QuantityValue(
                numeric_value=float(value["numeric_value"]),
                unit_id=unit.id if unit is not None else value["ucum_code"],
                quantity_kind_id=value["quantity_kind_id"],
                validated=True,
            )
        return Statement(
            id=record["id"],
            contribution_id=record["contribution_id"],
            property_id=record["property_id"],
            property_label=record["property_label"],
            value=parsed,
        )

    def _persist_graph(self) -> None:
        if self.path is None:
            return
        lines = []
        for paper in sorted(self._papers.values(), key=lambda p: p.id):
            record = {"kind": "paper", "id": paper.id, "title": paper.title}
            if paper.external_ref is not None:
                record["external_ref"] = paper.external_ref
            lines.append(record)
        for contrib in sorted(self._contributions.values(), key=lambda c: c["id"]):
            lines.append({"kind": "contribution", **contrib})
        for prop_id in sorted(self._properties):
            lines.append({"kind": "property", "id": prop_id, "label": self._properties[prop_id]})
        for statement in sorted(self._statements.values(), key=lambda s: s.id):
            lines.append(_statement_to_record(statement, self.snapshot))
        _write_jsonl_atomic(self.path / GRAPH_FILE, lines)

    def _persist_comparisons(self) -> None:
        if self.path is None:
            return
        lines = [
            {
                "kind": "comparison",
                "id": saved.id,
                "contribution_ids": list(saved.contribution_ids),
                "property_ids": list(saved.property_ids),
                "unit_overrides": {k: saved.unit_overrides[k] for k in sorted(saved.unit_overrides)},
                "created": saved.created,
            }
            for saved in sorted(self._comparisons.values(), key=lambda s: s.id)
        ]
        _write_jsonl_atomic(self.path / COMPARISONS_FILE, lines)

    # -- ingestion -------------------------------------------------------------

    def ingest(self, source: str | Path | IO[str]) -> IngestReport:
        """Ingest a line-delimited record file; upserts by record id."""
        if hasattr(source, "read"):
            text = source.read()
            name = getattr(source, "name", "<stream>")
        else:
            text = Path(source).read_text(encoding="utf-8")
            name = str(source)

        records: list[tuple[int, dict]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{name} line {lineno}: invalid JSON: {exc}") from exc
            if not isinstance(record, dict) or "kind" not in record:
                raise FormatError(f"{name} line {lineno}: expected an object with a 'kind' field")
            records.append((lineno, record))

        report = IngestReport()
        with self._write_lock:
            new_papers = dict(self._papers)
            new_contributions = dict(self._contributions)
            new_properties = dict(self._properties)
            new_statements = dict(self._statements)

            order = {"paper": 0, "property": 1, "contribution": 2, "statement": 3}
            for lineno, record in sorted(
                records, key=lambda item: order.get(item[1]["kind"], 99)
            ):
                kind = record["kind"]
                if kind not in order:
                    raise FormatError(f"{name} line {lineno}: unknown record kind {kind!r}")
                try:
                    _require_fields(record, _REQUIRED_FIELDS[kind], name, lineno)
                    if kind == "paper":
                        new_papers[record["id"]] = Paper(
                            id=record["id"],
                            title=record["title"],
                            external_ref=record.get("external_ref"),
                        )
                        report.papers += 1
                    elif kind == "property":
                        self._merge_property(
                            new_properties, record["id"], record["label"], name, lineno
                        )
                    elif kind == "contribution":
                        if record["paper_id"] not in new_papers:
                            raise FormatError(
                                f"{name} line {lineno}: contribution {record['id']!r} "
                                f"references unknown paper {record['paper_id']!r}"
                            )
                        new_contributions[record["id"]] = {
                            "id": record["id"],
                            "paper_id": record["paper_id"],
                            "label": record["label"],
                        }
                        report.contributions += 1
                    else:
                        statement = self._build_statement(
                            record, new_contributions, new_properties, name, lineno
                        )
                        new_statements[statement.id] = statement
                        report.statements += 1
                except FormatError:
                    raise
                except UnitFacetsError as exc:
                    report.rejected += 1
                    report.diagnostics.append(
                        IngestDiagnostic(line=lineno, code=exc.code, message=str(exc))
                    )

            self._papers = new_papers
            self._contributions = new_contributions
            self._properties = new_properties
            self._statements = new_statements
            self._persist_graph()
        return report

    def _merge_property(
        self, properties: dict[str, str], prop_id: str, label: str, name: str, lineno: int
    ) -> None:
        existing = properties.get(prop_id)
        if existing is not None and existing != label:
            raise FormatError(
                f"{name} line {lineno}: property {prop_id!r} already has label "
                f"{existing!r}; labels match exactly or not at all"
            )
        properties[prop_id] = label

    def _build_statement(
        self,
        record: dict,
        contributions: dict[str, dict],
        properties: dict[str, str],
        name: str,
        lineno: int,
    ) -> Statement:
        if record["contribution_id"] not in contributions:
            raise FormatError(
                f"{name} line {lineno}: statement {record['id']!r} references "
                f"unknown contribution {record['contribution_id']!r}"
            )
        value = record.get("value")
        if not isinstance(value, dict):
            raise FormatError(f"{name} line {lineno}: statement value must be an object")
        if "literal" in value:
            parsed: str | QuantityValue = str(value["literal"])
        else:
            _require_fields(value, ("numeric_value", "ucum_code"), name, lineno)
            kind_id = value.get("quantity_kind_id")
            if kind_id is None:
                kind_id = self._infer_kind(value["ucum_code"])
            unit = self.snapshot.unit_by_code(value["ucum_code"])
            qv = QuantityValue(
                numeric_value=float(value["numeric_value"]),
                unit_id=unit.id if unit is not None else value["ucum_code"],
                quantity_kind_id=kind_id,
            )
            parsed = validate_quantity_value(qv, self.snapshot, self.registry)

        # Register the property label only once the value is known valid, so
        # rejected statements leave no trace.
        prop_id = record["property_id"]
        label = record.get("property_label")
        if label is not None:
            self._merge_property(properties, prop_id, label, name, lineno)
        else:
            label = properties.get(prop_id, prop_id)
            properties.setdefault(prop_id, label)
        return Statement(
            id=record["id"],
            contribution_id=record["contribution_id"],
            property_id=prop_id,
            property_label=label,
            value=parsed,
        )

    def _infer_kind(self, ucum_code: str) -> str:
        """Unique snapshot quantity kind for a unit code, or a rejection."""
        unit = self.snapshot.unit_by_code(ucum_code)
        if unit is None:
            raise MissingMetadata(
                f"unit {ucum_code!r} is not in the snapshot and no quantity kind was given"
            )
        if len(unit.quantity_kind_ids) != 1:
            raise MissingMetadata(
                f"unit {ucum_code!r} links {len(unit.quantity_kind_ids)} quantity kinds; "
                f"statement must name one explicitly"
            )
        return unit.quantity_kind_ids[0]

    # -- reads -----------------------------------------------------------------

    def get_paper(self, paper_id: str) -> Paper:
        paper = self._papers.get(paper_id)
        if paper is None:
            raise NotFound(f"paper {paper_id!r} not found")
        return paper

    def get_contribution(self, contribution_id: str) -> Contribution:
        raw = self._contributions.get(contribution_id)
        if raw is None:
            raise NotFound(f"contribution {contribution_id!r} not found")
        statements = tuple(
            sorted(
                (s for s in self._statements.values() if s.contribution_id == contribution_id),
                key=lambda s: s.id,
            )
        )
        return Contribution(
            id=raw["id"], paper_id=raw["paper_id"], label=raw["label"], statements=statements
        )

    def list_contributions(self, property_id: str) -> list[str]:
        """Ids of contributions holding >= 1 statement on the property."""
        ids = {
            s.contribution_id
            for s in self._statements.values()
            if s.property_id == property_id
        }
        return sorted(ids)

    def contributions_with_statements(self) -> list[str]:
        return sorted({s.contribution_id for s in self._statements.values()})

    def contribution_ids(self) -> list[str]:
        return sorted(self._contributions)

    def statements(self) -> Iterable[Statement]:
        return sorted(self._statements.values(), key=lambda s: s.id)

    def property_label(self, property_id: str) -> str:
        label = self._properties.get(property_id)
        if label is None:
            raise NotFound(f"property {property_id!r} not found")
        return label

    def property_ids(self) -> list[str]:
        return sorted(self._properties)

    # -- saved comparisons -------------------------------------------------------

    def save_comparison(
        self,
        contribution_ids: Iterable[str],
        property_ids: Iterable[str],
        unit_overrides: dict[str, str] | None = None,
    ) -> str:
        """Persist a comparison spec under a fresh URL-safe id."""
        contribution_ids = tuple(contribution_ids)
        property_ids = tuple(property_ids)
        unit_overrides = dict(unit_overrides or {})
        for cid in contribution_ids:
            if cid not in self._contributions:
                raise DanglingReference(f"comparison references unknown contribution {cid!r}")
        for pid in property_ids:
            if pid not in self._properties:
                raise DanglingReference(f"comparison references unknown property {pid!r}")
        for pid in unit_overrides:
            if pid not in property_ids:
                raise DanglingReference(
                    f"unit override targets property {pid!r} not in the comparison"
                )
        with self._write_lock:
            while True:
                new_id = secrets.token_urlsafe(8)
                if new_id not in self._comparisons:
                    break
            saved = SavedComparison(
                id=new_id,
                contribution_ids=contribution_ids,
                property_ids=property_ids,
                unit_overrides=unit_overrides,
                created=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            )
            self._comparisons[new_id] = saved
            self._persist_comparisons()
        return new_id

    def load_comparison(self, comparison_id: str) -> SavedComparison:
        saved = self._comparisons.get(comparison_id)
        if saved is None:
            raise NotFound(f"comparison {comparison_id!r} not found")
        return saved


_REQUIRED_FIELDS = {
    "paper": ("id", "title"),
    "property": ("id", "label"),
    "contribution": ("id", "paper_id", "label"),
    "statement": ("id", "contribution_id", "property_id", "value"),
}


def _require_fields(record: dict, fields: tuple[str, ...], name: str, lineno: int) -> None:
    missing = [f for f in fields if f not in record]
    if missing:
        raise FormatError(f"{name} line {lineno}: missing fields {missing}")


def _statement_to_record(statement: Statement, snapshot: QudtSnapshot) -> dict:
    if isinstance(statement.value, QuantityValue):
        qv = statement.value
        try:
            code = snapshot.lookup(qv.unit_id).ucum_code
        except UnitFacetsError:
            code = qv.unit_id
        value = {
            "numeric_value": qv.numeric_value,
            "ucum_code": code,
            "quantity_kind_id": qv.quantity_kind_id,
        }
    else:
        value = {"literal": statement.value}
    return {
        "kind": "statement",
        "id": statement.id,
        "contribution_id": statement.contribution_id,
        "property_id": statement.property_id,
        "property_label": statement.property_label,
        "value": value,
    }


def _read_jsonl(path: Path) -> Iterable[tuple[int, dict]]:
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            yield lineno, json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path} line {lineno}: invalid JSON: {exc}") from exc


def _write_jsonl_atomic(path: Path, records: list[dict]) -> None:
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            for record in records:
                handle.write(json.dumps(record, ensure_ascii=False) + "\n")
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise

"""Quantity kinds, units, and quantity values in the QUDT pattern.

A measurement is a quantity value binding a numeric value to a unit and a
quantity kind. Unit metadata (label, quantity-kind links) comes from a
bundled snapshot file rather than a live ontology endpoint; the
``UnitMetadataSource`` protocol keeps that source pluggable. Quantity
kinds are open vocabulary: "micro F1 score" is as valid a kind as Length,
and two kinds sharing a dimension stay distinct (identity is by id).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Protocol, runtime_checkable

from .errors import (
    DimensionMismatch,
    DuplicateCode,
    FormatError,
    MissingMetadata,
    NonFiniteValue,
    UnknownQuantityKind,
)
from .ucum import Dimension, UnitRegistry, parse_ucum, reduce_expr
from .ucum.parser import check_syntax

_SEED_RESOURCE = "qudt_snapshot.json"


@dataclass(frozen=True)
class QuantityKind:
    """Abstract measurable concept (Length, Speed, micro F1 score, ...)."""

    id: str
    label: str
    dimension: Dimension
    applicable_units: tuple[str, ...]


@dataclass(frozen=True)
class Unit:
    """A unit with label and UCUM code, linked to its quantity kinds."""

    id: str
    label: str
    ucum_code: str
    quantity_kind_ids: tuple[str, ...]


@dataclass(frozen=True)
class QuantityValue:
    """Numeric value bound to a unit and a quantity kind.

    ``unit_id`` references a snapshot unit when one exists; for units only
    observed in the data it is the raw UCUM code itself.
    """

    numeric_value: float
    unit_id: str
    quantity_kind_id: str
    validated: bool = False


@runtime_checkable
class UnitMetadataSource(Protocol):
    """Resolves unit codes/ids and quantity kinds to their metadata."""

    def lookup(self, key: str) -> Unit:
        """Unit for a UCUM code or unit id; raises MissingMetadata."""
        ...

    def kind(self, kind_id: str) -> QuantityKind:
        """Quantity kind by id; raises UnknownQuantityKind."""
        ...

    def kinds(self) -> tuple[QuantityKind, ...]:
        ...


class QudtSnapshot:
    """Immutable in-memory view of the bundled quantity-kind/unit snapshot."""

    def __init__(
        self,
        kinds: dict[str, QuantityKind],
        units: dict[str, Unit],
        version: str,
    ):
        self._kinds = kinds
        self._units = units
        self._units_by_code = {u.ucum_code: u for u in units.values()}
        self.version = version

    def lookup(self, key: str) -> Unit:
        unit = self._units_by_code.get(key) or self._units.get(key)
        if unit is None:
            raise MissingMetadata(f"no snapshot metadata for unit {key!r}")
        return unit

    def unit_by_code(self, code: str) -> Unit | None:
        return self._units_by_code.get(code)

    def kind(self, kind_id: str) -> QuantityKind:
        kind = self._kinds.get(kind_id)
        if kind is None:
            raise UnknownQuantityKind(f"unknown quantity kind {kind_id!r}")
        return kind

    def kinds(self) -> tuple[QuantityKind, ...]:
        return tuple(self._kinds.values())

    def units(self) -> tuple[Unit, ...]:
        return tuple(self._units.values())


def load_snapshot(source: str | Path, registry: UnitRegistry) -> QudtSnapshot:
    """Load the snapshot file and check it against the unit registry.

    Every unit's UCUM code must parse and reduce, every kind/unit link must
    be bidirectional, and linked dimensions must agree.
    """
    path = Path(source)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"snapshot {path}: invalid JSON: {exc}") from exc
    if not isinstance(raw, dict) or raw.get("format") != "qudt-snapshot/1":
        raise FormatError(f"snapshot {path}: unsupported format {raw.get('format')!r}")

    kinds: dict[str, QuantityKind] = {}
    for entry in raw.get("quantity_kinds", []):
        dim_values = entry.get("dimension")
        if not (isinstance(dim_values, list) and len(dim_values) == 7):
            raise FormatError(f"quantity kind {entry.get('id')!r}: dimension must be 7 integers")
        kind = QuantityKind(
            id=entry["id"],
            label=entry["label"],
            dimension=Dimension(tuple(int(v) for v in dim_values)),
            applicable_units=tuple(entry.get("applicable_units", [])),
        )
        if kind.id in kinds:
            raise DuplicateCode(f"duplicate quantity kind id {kind.id!r}")
        kinds[kind.id] = kind

    units: dict[str, Unit] = {}
    for entry in raw.get("units", []):
        unit = Unit(
            id=entry["id"],
            label=entry["label"],
            ucum_code=entry["ucum_code"],
            quantity_kind_ids=tuple(entry.get("quantity_kind_ids", [])),
        )
        if unit.id in units:
            raise DuplicateCode(f"duplicate unit id {unit.id!r}")
        units[unit.id] = unit

    for unit in units.values():
        reduction = reduce_expr(parse_ucum(unit.ucum_code, registry))
        for kind_id in unit.quantity_kind_ids:
            kind = kinds.get(kind_id)
            if kind is None:
                raise FormatError(
                    f"unit {unit.id!r} links unknown quantity kind {kind_id!r}"
                )
            if kind.dimension != reduction.dimension:
                raise FormatError(
                    f"unit {unit.id!r} has dimension {reduction.dimension} but "
                    f"kind {kind_id!r} expects {kind.dimension}"
                )
            if unit.id not in kind.applicable_units:
                raise FormatError(
                    f"unit {unit.id!r} links kind {kind_id!r} which does not list it"
                )
    for kind in kinds.values():
        for unit_id in kind.applicable_units:
            unit = units.get(unit_id)
            if unit is None:
                raise FormatError(f"kind {kind.id!r} lists unknown unit {unit_id!r}")
            if kind.id not in unit.quantity_kind_ids:
                raise FormatError(
                    f"kind {kind.id!r} lists unit {unit_id!r} which does not link back"
                )

    return QudtSnapshot(kinds=kinds, units=units, version=str(raw.get("version", "unversioned")))


def seed_snapshot_path() -> Path:
    return Path(resources.files("unitfacets.data") / _SEED_RESOURCE)


def load_seed_snapshot(registry: UnitRegistry) -> QudtSnapshot:
    return load_snapshot(seed_snapshot_path(), registry)


def materialize_unit(ucum_code: str, source: UnitMetadataSource) -> Unit:
    """Resolve a UCUM code to its snapshot unit record.

    Idempotent and side-effect free. Structurally malformed codes raise the
    parser's syntax error; well-formed codes without snapshot coverage raise
    MissingMetadata.
    """
    try:
        return source.lookup(ucum_code)
    except MissingMetadata:
        check_syntax(ucum_code)
        raise





def units_for_quantity_kind(kind_id: str, source: UnitMetadataSource) -> list[Unit]:
    """Applicable units of a kind, in snapshot (facet) order."""
    kind = source.kind(kind_id)
    return [source.lookup(unit_id) for unit_id in kind.applicable_units]


def resolve_unit_dimension(
    unit_id: str, source: UnitMetadataSource, registry: UnitRegistry
) -> Dimension:
    """Dimension of a unit reference: snapshot unit id/code or raw code."""
    try:
        code = source.lookup(unit_id).ucum_code
    except MissingMetadata:
        code = unit_id
    return reduce_expr(parse_ucum(code, registry)).dimension


def unit_code(unit_id: str, source: UnitMetadataSource) -> str:
    """UCUM code behind a unit reference (raw codes pass through)."""
    try:
        return source.lookup(unit_id).ucum_code
    except MissingMetadata:
        return unit_id


def validate_quantity_value(
    qv: QuantityValue, source: UnitMetadataSource, registry: UnitRegistry
) -> QuantityValue:
    """Check dimensional agreement and finiteness; returns a validated copy.

    Raises DimensionMismatch, NonFiniteValue, UnknownQuantityKind, or the
    ucum errors for an unparseable unit reference.
    """
    if not math.isfinite(qv.numeric_value):
        raise NonFiniteValue(f"quantity value is not finite: {qv.numeric_value!r}")
    kind = source.kind(qv.quantity_kind_id)
    unit_dimension = resolve_unit_dimension(qv.unit_id, source, registry)
    if unit_dimension != kind.dimension:
        raise DimensionMismatch(
            f"unit {qv.unit_id!r} has dimension {unit_dimension} but quantity "
            f"kind {kind.id!r} expects {kind.dimension}",
            unit_dimension=unit_dimension.exponents,
            kind_dimension=kind.dimension.exponents,
        )
    return replace(qv, validated=True)

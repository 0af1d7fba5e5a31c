"""Numeric facet index and unit-qualified filtering.

Every quantity statement is normalized once, at index time, into the
coherent reference unit of its dimension (metre, kilogram, second, ...;
kelvin for temperatures), so filters expressed in any commensurable unit
compare against the same number line. Facets are generated per property
from the quantity kind's snapshot units plus whatever units the data
actually uses.

Filter semantics: gt/lt are strict, within is the closed interval
[a, b], exclude is its complement, and eq uses the package-wide relative
tolerance. Multiple filters conjoin. A contribution matches a filter when
at least one of its indexed values on that property satisfies the
predicate; results are in stable contribution-id order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    EmptyInterval,
    FormatError,
    IncommensurableUnits,
    UnitFacetsError,
    UnknownProperty,
)
from .numfmt import REL_TOL
from .quantities import QuantityValue, QudtSnapshot, unit_code
from .store import GraphStore
from .ucum import Dimension, Reduction, UnitRegistry, parse_ucum, reduce_expr

COMPARATORS = ("eq", "gt", "lt", "within", "exclude")

#: Coherent reference atoms per base dimension, mass anchored at kilogram.
_REFERENCE_ATOMS = ("m", "kg", "s", "A", "K", "mol", "cd")


def reference_code(dimension: Dimension) -> str:
    """UCUM code of the coherent reference unit for a dimension."""
    parts = [
        atom if exp == 1 else f"{atom}{exp}"
        for atom, exp in zip(_REFERENCE_ATOMS, dimension.exponents)
        if exp != 0
    ]
    return ".".join(parts) if parts else "1"


@dataclass(frozen=True)
class FilterSpec:
    """Unit-qualified numeric predicate over one property.

    ``value`` holds the operand for eq/gt/lt; ``interval`` the closed
    [a, b] for within/exclude. ``unit`` is a UCUM code commensurable with
    the quantity kind.
    """

    property_id: str
    quantity_kind_id: str
    comparator: str
    unit: str
    value: float | None = None
    interval: tuple[float, float] | None = None

    def validated(self) -> "FilterSpec":
        if self.comparator not in COMPARATORS:
            raise FormatError(f"unknown comparator {self.comparator!r}")
        if self.comparator in ("eq", "gt", "lt"):
            if self.value is None:
                raise FormatError(f"comparator {self.comparator!r} needs a value")
        else:
            if self.interval is None:
                raise FormatError(f"comparator {self.comparator!r} needs an interval")
            low, high = self.interval
            if low > high:
                raise EmptyInterval(f"interval [{low}, {high}] is empty")
        return self


@dataclass(frozen=True)
class UnitOption:
    code: str
    label: str


@dataclass(frozen=True)
class FacetDescriptor:
    """What a search UI needs to render one property facet."""

    property_id: str
    property_label: str
    quantity_kind_id: str
    quantity_kind_label: str
    unit_options: tuple[UnitOption, ...]
    display_unit: str
    min_value: float
    max_value: float
    count: int


@dataclass(frozen=True)
class IndexEntry:
    contribution_id: str
    statement_id: str
    normalized_value: float
    original: QuantityValue
    ucum_code: str


@dataclass(frozen=True)
class IndexSummary:
    count: int
    min_value: float
    max_value: float


@dataclass
class FacetIndex:
    """Per-(property, quantity kind) numeric index in reference units."""

    entries: dict[tuple[str, str], list[IndexEntry]] = field(default_factory=dict)
    summaries: dict[tuple[str, str], IndexSummary] = field(default_factory=dict)
    observed_units: dict[tuple[str, str], list[str]] = field(default_factory=dict)
    all_contribution_ids: list[str] = field(default_factory=list)
    property_labels: dict[str, str] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)

    def keys_for_property(self, property_id: str) -> list[tuple[str, str]]:
        return sorted(key for key in self.entries if key[0] == property_id)


def build_index(store: GraphStore) -> FacetIndex:
    """Index every quantity statement exactly once, deterministically.

    Statements whose unit fails parsing or reduction are skipped and
    reported in ``diagnostics`` rather than failing the build.
    """
    index = FacetIndex()
    index.all_contribution_ids = store.contributions_with_statements()
    for statement in store.statements():
        index.property_labels.setdefault(statement.property_id, statement.property_label)
        if not statement.is_quantity:
            continue
        qv = statement.value
        code = unit_code(qv.unit_id, store.snapshot)
        try:
            reduction = reduce_expr(parse_ucum(code, store.registry))
        except UnitFacetsError as exc:
            index.diagnostics.append(
                f"statement {statement.id}: unit {code!r} failed reduction: {exc}"
            )
            continue
        normalized = qv.numeric_value * reduction.scale + (reduction.offset or 0.0)
        key = (statement.property_id, qv.quantity_kind_id)
        index.entries.setdefault(key, []).append(
            IndexEntry(
                contribution_id=statement.contribution_id,
                statement_id=statement.id,
                normalized_value=normalized,
                original=qv,
                ucum_code=code,
            )
        )
        observed = index.observed_units.setdefault(key, [])
        if code not in observed:
            observed.append(code)
    for key, entries in index.entries.items():
        values = [e.normalized_value for e in entries]
        index.summaries[key] = IndexSummary(
            count=len(entries), min_value=min(values), max_value=max(values)
        )
    return index


def _property_key(index: FacetIndex, property_id: str) -> tuple[str, str]:
    keys = index.keys_for_property(property_id)
    if not keys:
        raise UnknownProperty(f"property {property_id!r} has no indexed quantity values")
    # A property normally carries one quantity kind; if data disagrees the
    # lexicographically first kind wins, deterministically.
    return keys[0]


def kind_for_property(index: FacetIndex, property_id: str) -> str:
    """Quantity kind id a property is indexed under."""
    return _property_key(index, property_id)[1]


def _operand_reduction(
    unit: str, expected: Dimension, registry: UnitRegistry
) -> Reduction:
    reduction = reduce_expr(parse_ucum(unit, registry))
    if reduction.dimension != expected:
        raise IncommensurableUnits(
            f"unit {unit!r} has dimension {reduction.dimension} but the "
            f"quantity kind expects {expected}",
            unit_dimension=reduction.dimension.exponents,
            kind_dimension=expected.exponents,
        )
    return reduction


def generate_facets(
    index: FacetIndex,
    store: GraphStore,
    property_id: str,
    display_unit: str | None = None,
) -> FacetDescriptor:
    """Describe the unit facet for a property: options, range, count.

    Unit options are the quantity kind's snapshot units in snapshot order,
    followed by units only observed in the data in first-seen order. The
    range endpoints are converted into ``display_unit`` (default: the
    snapshot's first applicable unit).
    """
    key = _property_key(index, property_id)
    _, kind_id = key
    kind = store.snapshot.kind(kind_id)

    options: list[UnitOption] = []
    seen: set[str] = set()
    for unit_id in kind.applicable_units:
        unit = store.snapshot.lookup(unit_id)
        options.append(UnitOption(code=unit.ucum_code, label=unit.label))
        seen.add(unit.ucum_code)
    for code in index.observed_units.get(key, []):
        if code not in seen:
            options.append(UnitOption(code=code, label=code))
            seen.add(code)

    if display_unit is None:
        display_unit = options[0].code if options else reference_code(kind.dimension)
    reduction = _operand_reduction(display_unit, kind.dimension, store.registry)
    summary = index.summaries[key]
    offset = reduction.offset or 0.0
    return FacetDescriptor(
        property_id=property_id,
        property_label=index.property_labels.get(property_id, property_id),
        quantity_kind_id=kind_id,
        quantity_kind_label=kind.label,
        unit_options=tuple(options),
        display_unit=display_unit,
        min_value=(summary.min_value - offset) / reduction.scale,
        max_value=(summary.max_value - offset) / reduction.scale,
        count=summary.count,
    )


def _matches(comparator: str, v: float, low: float, high: float) -> bool:
    if comparator == "eq":
        return abs(v - low) <= REL_TOL * max(abs(v), abs(low), 1.0)
    if comparator == "gt":
        return v > low
    if comparator == "lt":
        return v < low
    if comparator == "within":
        return low <= v <= high
    return v < low or v > high  # exclude


def apply_filters(
    index: FacetIndex,
    filters: list[FilterSpec],
    registry: UnitRegistry,
    snapshot: QudtSnapshot,
) -> list[str]:
    """Conjunction of unit-qualified filters, in stable id order.

    An empty filter list is the vacuous conjunction: every contribution
    with at least one statement.
    """
    result: set[str] | None = None
    for spec in filters:
        spec.validated()
        kind = snapshot.kind(spec.quantity_kind_id)
        reduction = _operand_reduction(spec.unit, kind.dimension, registry)
        offset = reduction.offset or 0.0
        if spec.comparator in ("eq", "gt", "lt"):
            low = spec.value * reduction.scale + offset
            high = low
        else:
            low = spec.interval[0] * reduction.scale + offset
            high = spec.interval[1] * reduction.scale + offset
        key = (spec.property_id, spec.quantity_kind_id)
        matched = {
            entry.contribution_id
            for entry in index.entries.get(key, [])
            if _matches(spec.comparator, entry.normalized_value, low, high)
        }
        result = matched if result is None else (result & matched)
    if result is None:
        return list(index.all_contribution_ids)
    return sorted(result)


def autocomplete_units(
    prefix: str, quantity_kind_id: str, snapshot: QudtSnapshot
) -> list[UnitOption]:
    """Kind-appropriate unit suggestions, facet order.

    Matches the UCUM code case-sensitively or the label case-insensitively;
    an empty prefix returns the kind's full applicable set.
    """
    kind = snapshot.kind(quantity_kind_id)
    suggestions = []
    folded = prefix.lower()
    for unit_id in kind.applicable_units:
        unit = snapshot.lookup(unit_id)
        if (
            not prefix
            or unit.ucum_code.startswith(prefix)
            or unit.label.lower().startswith(folded)
        ):
            suggestions.append(UnitOption(code=unit.ucum_code, label=unit.label))
    return suggestions

"""Acceptance suite: one test per acceptance criterion, each printing a
[PASS]/[FAIL] line. Run with ``pytest tests/test_acceptance.py -v -s``."""

from __future__ import annotations

import io
import json
import random
import time
from contextlib import contextmanager
from pathlib import Path
from urllib.parse import quote

import pytest
from fastapi.testclient import TestClient

from unitfacets.api import create_app
from unitfacets.comparison import build_comparison, convert_column
from unitfacets.facets import FilterSpec, apply_filters, build_index
from unitfacets.numfmt import shortest_decimal
from unitfacets.quantities import load_seed_snapshot, unit_code
from unitfacets.store import GRAPH_FILE, GraphStore
from unitfacets.ucum import convert, load_seed_registry

FIXTURES = Path(__file__).parent / "fixtures"
REL_TOL = 1e-9


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}")
        raise
    print(f"[PASS] {name}")


def rel_close(a: float, b: float) -> bool:
    return abs(a - b) <= REL_TOL * max(abs(a), abs(b), 1.0)


@pytest.fixture(scope="module")
def registry():
    return load_seed_registry()


@pytest.fixture(scope="module")
def snapshot(registry):
    return load_seed_snapshot(registry)


def fresh_store(registry, snapshot, *fixtures, path=None):
    store = GraphStore(path, registry, snapshot)
    for fixture in fixtures:
        store.ingest(FIXTURES / fixture)
    return store


# -- criterion 1: conversion fixture suite -------------------------------------

CONVERSION_CASES = [
    (0.25, "m", "cm", 25.0),
    (12.0, "cm", "m", 0.12),
    (7.0, "m", "m", 7.0),
    (25.0, "m/s", "km/h", 90.0),
    (0.0, "Cel", "K", 273.15),
    (85.6, "%", "1", 0.856),
]


def test_conversion_fixture_suite(registry, factor_table):
    with criterion("conversion fixture suite (six seed conversions, < 1 s)"):
        factors = {(e["source"], e["target"]): e for e in factor_table}
        started = time.perf_counter()
        for value, source, target, expected in CONVERSION_CASES:
            got = convert(value, source, target, registry).value
            assert rel_close(got, expected), (source, target, got, expected)
            # Cross-check against the independent hand-built factor table.
            entry = factors[(source, target)]
            assert rel_close(got, value * entry["factor"] + entry["offset"])
        elapsed = time.perf_counter() - started
        assert elapsed < 1.0, f"suite took {elapsed:.3f}s"


# -- criterion 2: round-trip property -------------------------------------------

ROUND_TRIP_POOLS = [
    ["m", "cm", "mm", "km", "dam", "um", "[in_i]", "[ft_i]"],
    ["g", "kg", "mg", "ug", "Mg"],
    ["s", "ms", "min", "h", "d"],
    ["m/s", "km/h", "cm/s", "[ft_i]/min", "km/d"],
    ["%", "1", "10", "100"],
    ["K", "Cel", "mK"],
    ["N", "kg.m/s2", "mN"],
    ["Pa", "kPa", "N/m2"],
    ["J", "kJ", "N.m", "W.s"],
    ["W", "mW", "J/s"],
    ["Hz", "kHz", "/s"],
    ["L", "mL", "dm3", "m3"],
    ["A", "mA"],
    ["mol", "mmol"],
    ["cd", "mcd"],
]


def test_round_trip_property(registry):
    with criterion("round-trip property (10,000 randomized cases, rel 1e-9)"):
        rng = random.Random(1906_25)
        failures = 0
        for _ in range(10_000):
            pool = rng.choice(ROUND_TRIP_POOLS)
            source = rng.choice(pool)
            target = rng.choice(pool)
            value = rng.choice([-1.0, 1.0]) * 10.0 ** rng.uniform(-3.0, 6.0)
            there = convert(value, source, target, registry).value
            back = convert(there, target, source, registry).value
            if not rel_close(back, value):
                failures += 1
        assert failures == 0


# -- criterion 3: filter-oracle equivalence --------------------------------------

ORACLE_KIND_UNITS = {
    "Length": ["m", "cm", "mm", "km", "[in_i]", "[ft_i]", "dm"],
    "Mass": ["g", "kg", "mg"],
    "Time": ["s", "min", "h", "d"],
    "Speed": ["m/s", "km/h", "cm/s"],
    "Temperature": ["K", "Cel"],
    "MicroF1Score": ["%", "1"],
}
ORACLE_PROPERTIES = [
    ("prop_length", "Length"), ("prop_mass", "Mass"), ("prop_time", "Time"),
    ("prop_speed", "Speed"), ("prop_temperature", "Temperature"),
    ("prop_score", "MicroF1Score"),
]


def _random_store(rng, registry, snapshot):
    lines = []
    for i in range(rng.randint(1, 200)):
        lines.append(json.dumps({"kind": "paper", "id": f"P{i:04d}", "title": f"paper {i}"}))
        lines.append(json.dumps({
            "kind": "contribution", "id": f"C{i:04d}",
            "paper_id": f"P{i:04d}", "label": f"contribution {i}",
        }))
        for j in range(rng.randint(1, 2)):
            prop, kind = rng.choice(ORACLE_PROPERTIES)
            lines.append(json.dumps({
                "kind": "statement", "id": f"S{i:04d}_{j}",
                "contribution_id": f"C{i:04d}", "property_id": prop,
                "property_label": prop,
                "value": {
                    "numeric_value": rng.uniform(-100.0, 1000.0),
                    "ucum_code": rng.choice(ORACLE_KIND_UNITS[kind]),
                    "quantity_kind_id": kind,
                },
            }))
    store = GraphStore(None, registry, snapshot)
    store.ingest(io.StringIO("\n".join(lines)))
    return store


def _random_filter(rng):
    prop, kind = rng.choice(ORACLE_PROPERTIES)
    unit = rng.choice(ORACLE_KIND_UNITS[kind])
    comparator = rng.choice(["eq", "gt", "lt", "within", "exclude"])
    if comparator in ("eq", "gt", "lt"):
        return FilterSpec(property_id=prop, quantity_kind_id=kind,
                          comparator=comparator, unit=unit,
                          value=rng.uniform(-200.0, 1200.0))
    bounds = sorted((rng.uniform(-200.0, 1200.0), rng.uniform(-200.0, 1200.0)))
    return FilterSpec(property_id=prop, quantity_kind_id=kind,
                      comparator=comparator, unit=unit,
                      interval=(bounds[0], bounds[1]))


def _oracle_scan(store, spec):
    matched = set()
    for statement in store.statements():
        if not statement.is_quantity or statement.property_id != spec.property_id:
            continue
        qv = statement.value
        if qv.quantity_kind_id != spec.quantity_kind_id:
            continue
        code = unit_code(qv.unit_id, store.snapshot)
        v = convert(qv.numeric_value, code, spec.unit, store.registry).value
        if spec.comparator == "eq":
            hit = abs(v - spec.value) <= REL_TOL * max(abs(v), abs(spec.value), 1.0)
        elif spec.comparator == "gt":
            hit = v > spec.value
        elif spec.comparator == "lt":
            hit = v < spec.value
        elif spec.comparator == "within":
            hit = spec.interval[0] <= v <= spec.interval[1]
        else:
            hit = v < spec.interval[0] or v > spec.interval[1]
        if hit:
            matched.add(statement.contribution_id)
    return sorted(matched)


def test_filter_oracle_equivalence(registry, snapshot):
    with criterion("filter-oracle equivalence (1,000 randomized stores, < 60 s)"):
        rng = random.Random(756122)
        started = time.perf_counter()
        failures = 0
        for _ in range(1_000):
            store = _random_store(rng, registry, snapshot)
            index = build_index(store)
            for _ in range(2):
                spec = _random_filter(rng)
                fast = apply_filters(index, [spec], registry, snapshot)
                slow = _oracle_scan(store, spec)
                if fast != slow:
                    failures += 1
        elapsed = time.perf_counter() - started
        assert failures == 0
        assert elapsed < 60.0, f"took {elapsed:.1f}s"


# -- criterion 4: heterogeneous-unit retrieval ------------------------------------

def test_heterogeneous_unit_retrieval(registry, snapshot):
    with criterion("heterogeneous-unit retrieval (0.25 m and 25 cm found by both phrasings)"):
        store = fresh_store(registry, snapshot, "sea_level.jsonl")
        index = build_index(store)
        in_cm = FilterSpec(property_id="global_mean_sea_level", quantity_kind_id="Length",
                           comparator="gt", unit="cm", value=20.0)
        in_m = FilterSpec(property_id="global_mean_sea_level", quantity_kind_id="Length",
                          comparator="gt", unit="m", value=0.2)
        got_cm = apply_filters(index, [in_cm], registry, snapshot)
        got_m = apply_filters(index, [in_m], registry, snapshot)
        assert got_cm == ["C_sea_a", "C_sea_b"], got_cm
        assert got_m == got_cm


# -- criterion 5: structured reproduction ------------------------------------------

def test_structured_reproduction(registry, snapshot):
    with criterion("structured reproduction (three ingested rows exact)"):
        store = fresh_store(registry, snapshot, "mixed_corpus.jsonl")
        report = store.ingest(FIXTURES / "mixed_corpus.jsonl")
        assert report.rejected == 0
        expected = {
            "C_bert_nli": ("micro F1 score", "85.6", "%"),
            "C_polaris_p20": ("Speed", "25", "m/s"),
            "C_african_carp": ("Mass", "75.1", "g"),
        }
        for contribution_id, (kind_label, value_text, code) in expected.items():
            contribution = store.get_contribution(contribution_id)
            (statement,) = contribution.statements
            qv = statement.value
            assert snapshot.kind(qv.quantity_kind_id).label == kind_label
            assert shortest_decimal(qv.numeric_value) == value_text
            assert qv.numeric_value == float(value_text)
            assert unit_code(qv.unit_id, snapshot) == code


# -- criterion 6: endpoint contract -------------------------------------------------

def test_endpoint_contract(registry, snapshot):
    with criterion("endpoint contract (/api/convert paths, statuses, template)"):
        store = fresh_store(registry, snapshot, "mixed_corpus.jsonl")
        client = TestClient(create_app(store))

        template = "{source_quantity}/from/{source_unit}/to/{target_unit}"

        def convert_path(value, source, target):
            return "/api/convert/" + template.format(
                source_quantity=quote(value, safe=""),
                source_unit=quote(source, safe=""),
                target_unit=quote(target, safe=""),
            )

        path = convert_path("0.25", "m", "cm")
        assert path == "/api/convert/0.25/from/m/to/cm"  # byte-for-byte
        response = client.get(path)
        assert response.status_code == 200
        assert float(response.json()["value"]) == 25.0

        response = client.get(convert_path("1", "m", "s"))
        assert response.status_code == 422
        assert response.json()["code"] == "INCOMMENSURABLE_UNITS"

        slashy = convert_path("25", "m/s", "km/h")
        assert slashy == "/api/convert/25/from/m%2Fs/to/km%2Fh"
        response = client.get(slashy)
        assert response.status_code == 200
        assert float(response.json()["value"]) == pytest.approx(90.0, rel=REL_TOL)


# -- criterion 7: non-destructiveness ------------------------------------------------

def test_non_destructiveness(tmp_path, registry, snapshot):
    with criterion("non-destructiveness (store file bytes unchanged by conversions)"):
        store = fresh_store(registry, snapshot, "mixed_corpus.jsonl", path=tmp_path / "store")
        graph_file = store.path / GRAPH_FILE
        before = graph_file.read_bytes()
        table = build_comparison(
            store,
            ["C_bert_nli", "C_polaris_p20", "C_african_carp"],
            ["micro_f1_score", "cut_off_wind_speed", "water_content"],
        )
        for target in ("km/h", "m/s", "km/h"):
            table = convert_column(table, store, "cut_off_wind_speed", target)
        for target in ("kg", "mg", "g"):
            table = convert_column(table, store, "water_content", target)
        assert graph_file.read_bytes() == before


# -- criterion 8: saved-view permanence ----------------------------------------------

def test_saved_view_permanence(tmp_path, registry, snapshot):
    with criterion("saved-view permanence (identical render across service restart)"):
        path = tmp_path / "store"
        store = fresh_store(registry, snapshot, "sea_level.jsonl", path=path)
        client = TestClient(create_app(store))
        saved = client.post("/api/comparisons", json={
            "contributions": ["C_sea_a", "C_sea_b"],
            "properties": ["global_mean_sea_level"],
            "unitOverrides": {"global_mean_sea_level": "cm"},
        })
        assert saved.status_code == 200
        saved_id = saved.json()["id"]
        first = client.get(f"/api/comparisons/{saved_id}")
        assert first.status_code == 200

        # "Restart": a brand-new store and service process state on the same files.
        restarted = TestClient(create_app(GraphStore(path, registry, snapshot)))
        second = restarted.get(f"/api/comparisons/{saved_id}")
        assert second.status_code == 200
        assert second.content == first.content

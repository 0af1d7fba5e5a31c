"""HTTP service exposing conversion, search, facets, and comparisons.

Routes (all JSON):

    GET  /api/convert/{value}/from/{source}/to/{target}
    POST /api/search                  {"filters": [FilterSpec...]}
    GET  /api/facets?property=...&unit=...
    GET  /api/units/autocomplete?q=...&quantityKind=...
    POST /api/comparisons             {"contributions", "properties", "unitOverrides"}
    GET  /api/comparisons/{id}

Unit codes in the convert path are percent-encoded ("m/s" -> "m%2Fs",
"%" -> "%25"); a catch-all route keeps codes containing slashes working
regardless of whether the client encoded them. Errors map to a fixed
status scheme: 400 syntax/validation, 404 not found, 422 incommensurable;
bodies always carry a machine ``code`` from the documented enumeration.
Converted numeric values are serialized as shortest round-trip decimal
strings so clients in any language can keep full precision.
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .comparison import (
    build_comparison,
    convert_column,
    render_saved_view,
    table_to_dict,
)
from .errors import UcumSyntaxError, UnitFacetsError
from .facets import (
    FacetIndex,
    FilterSpec,
    apply_filters,
    autocomplete_units,
    build_index,
    generate_facets,
)
from .numfmt import parse_decimal, shortest_decimal
from .store import GraphStore
from .ucum import convert


class FilterModel(BaseModel):
    property: str
    quantityKind: str
    comparator: Literal["eq", "gt", "lt", "within", "exclude"]
    unit: str
    value: float | None = None
    interval: tuple[float, float] | None = None

    def to_spec(self) -> FilterSpec:
        return FilterSpec(
            property_id=self.property,
            quantity_kind_id=self.quantityKind,
            comparator=self.comparator,
            unit=self.unit,
            value=self.value,
            interval=self.interval,
        )


class SearchRequest(BaseModel):
    filters: list[FilterModel] = Field(default_factory=list)


class ComparisonRequest(BaseModel):
    contributions: list[str]
    properties: list[str]
    unitOverrides: dict[str, str] = Field(default_factory=dict)


# Conversion is pure (registry-fixed), so responses are freely cacheable.
_CONVERT_CACHE = "public, max-age=86400"


class AppState:
    """Store plus derived facet index; the index swap is atomic for readers."""

    def __init__(self, store: GraphStore):
        self.store = store
        self.index: FacetIndex = build_index(store)

    def reload(self) -> None:
        self.index = build_index(self.store)


def create_app(store: GraphStore, cors_origin: str | None = None) -> FastAPI:
    app = FastAPI(
        title="unitfacets service",
        version="0.1.0",
        description="Unit-aware conversion, faceted search, and comparisons "
        "over a scholarly knowledge graph of measured data.",
    )
    state = AppState(store)
    app.state.unitfacets = state

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(UnitFacetsError)
    async def unitfacets_error(_request: Request, exc: UnitFacetsError):
        body = {"code": exc.code, "message": exc.message}
        if exc.details:
            body["details"] = {k: _plain(v) for k, v in exc.details.items()}
        return JSONResponse(status_code=exc.http_status, content=body)

    @app.exception_handler(RequestValidationError)
    async def validation_error(_request: Request, exc: RequestValidationError):
        errors = [
            {"loc": [str(part) for part in err.get("loc", ())], "message": err.get("msg", "")}
            for err in exc.errors()
        ]
        return JSONResponse(
            status_code=400,
            content={"code": "BAD_SYNTAX", "message": "request does not match the schema",
                     "details": {"errors": errors}},
        )

    def do_convert(value_text: str, source: str, target: str) -> dict:
        try:
            value = parse_decimal(value_text)
        except ValueError as exc:
            raise UcumSyntaxError(f"value {value_text!r} is not a finite decimal") from exc
        result = convert(value, source, target, store.registry)
        return {
            "value": shortest_decimal(result.value),
            "source": result.source_code,
            "target": result.target_code,
        }

    @app.get("/api/convert/{value}/from/{source}/to/{target}")
    async def convert_endpoint(
        value: str, source: str, target: str, response: Response
    ) -> dict:
        """Convert a value between commensurable units."""
        response.headers["Cache-Control"] = _CONVERT_CACHE
        return do_convert(value, source, target)

    @app.get("/api/convert/{rest:path}", include_in_schema=False)
    async def convert_endpoint_with_slashes(rest: str, response: Response) -> dict:
        # Decoded unit codes may themselves contain "/" (e.g. m/s); the
        # /from/ and /to/ markers of the request format stay unambiguous.
        response.headers["Cache-Control"] = _CONVERT_CACHE
        head, sep_from, remainder = rest.partition("/from/")
        source, sep_to, target = remainder.partition("/to/")
        if not sep_from or not sep_to or not head or not source or not target:
            raise UcumSyntaxError(
                "convert path must be {value}/from/{source}/to/{target}"
            )
        return do_convert(head, source, target)

    @app.post("/api/search")
    async def search_endpoint(request: SearchRequest) -> dict:
        """Apply unit-qualified filters; empty filter list matches all."""
        ids = apply_filters(
            state.index,
            [f.to_spec() for f in request.filters],
            store.registry,
            store.snapshot,
        )
        return {"contribution_ids": ids, "total": len(ids)}

    @app.get("/api/facets")
    async def facets_endpoint(
        property: str = Query(...), unit: str | None = Query(default=None)
    ) -> dict:
        """Unit facet for a property: options, range, count."""
        facet = generate_facets(state.index, store, property, unit)
        return {
            "property_id": facet.property_id,
            "property_label": facet.property_label,
            "quantity_kind_id": facet.quantity_kind_id,
            "quantity_kind_label": facet.quantity_kind_label,
            "unit_options": [
                {"code": option.code, "label": option.label}
                for option in facet.unit_options
            ],
            "display_unit": facet.display_unit,
            "min_value": shortest_decimal(facet.min_value),
            "max_value": shortest_decimal(facet.max_value),
            "count": facet.count,
        }

    @app.get("/api/units/autocomplete")
    async def autocomplete_endpoint(
        q: str = Query(default=""), quantityKind: str = Query(...)
    ) -> dict:
        """Context-appropriate unit suggestions for a quantity kind."""
        suggestions = autocomplete_units(q, quantityKind, store.snapshot)
        return {
            "suggestions": [{"code": s.code, "label": s.label} for s in suggestions]
        }

    @app.post("/api/comparisons")
    async def save_comparison_endpoint(request: ComparisonRequest) -> dict:
        """Persist a comparison view; the returned id is the shareable URL."""
        # Render first: surfaces NotFound/DuplicateInput/IncommensurableUnits
        # before anything is persisted.
        table = build_comparison(store, request.contributions, request.properties)
        for property_id, target_unit in sorted(request.unitOverrides.items()):
            table = convert_column(table, store, property_id, target_unit)
        saved_id = store.save_comparison(
            request.contributions, request.properties, request.unitOverrides
        )
        return {"id": saved_id, "url": f"/api/comparisons/{saved_id}"}

    @app.get("/api/comparisons/{comparison_id}")
    async def get_comparison_endpoint(comparison_id: str) -> dict:
        """Render a saved comparison with its unit overrides applied."""
        saved = store.load_comparison(comparison_id)
        table = render_saved_view(store, saved)
        return {
            "id": saved.id,
            "created": saved.created,
            "unit_overrides": dict(sorted(saved.unit_overrides.items())),
            "table": table_to_dict(table),
        }

    return app


def _plain(value):
    if isinstance(value, tuple):
        return list(value)
    return value

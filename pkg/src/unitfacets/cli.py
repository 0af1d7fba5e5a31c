"""Command line for the unit-aware faceted search system.

Exit codes: 0 success, 2 usage error, 3 validation error, 4 not found,
5 incommensurable units. Errors print their machine code on stderr.
``--format structured`` switches stdout to JSON for scripting.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .api import create_app
from .comparison import build_comparison, convert_column, export_table, save_view
from .errors import (
    IncommensurableUnits,
    MissingMetadata,
    NotFound,
    UnitFacetsError,
    UnknownPrefix,
    UnknownProperty,
    UnknownQuantityKind,
    UnknownUnit,
)
from .facets import FilterSpec, apply_filters, build_index, kind_for_property
from .numfmt import parse_decimal, shortest_decimal
from .quantities import load_snapshot, seed_snapshot_path
from .store import GraphStore
from .ucum import convert as ucum_convert
from .ucum import load_registry, seed_registry_path

_NOT_FOUND_ERRORS = (
    NotFound,
    UnknownUnit,
    UnknownPrefix,
    UnknownProperty,
    UnknownQuantityKind,
    MissingMetadata,
)


def _exit_code(exc: UnitFacetsError) -> int:
    if isinstance(exc, IncommensurableUnits):
        return 5
    if isinstance(exc, _NOT_FOUND_ERRORS):
        return 4
    return 3


class Runtime:
    """Lazily loaded registry/snapshot/store shared by the subcommands."""

    def __init__(self, registry_path: Path, snapshot_path: Path, store_path: Path,
                 output_format: str):
        self.registry_path = registry_path
        self.snapshot_path = snapshot_path
        self.store_path = store_path
        self.output_format = output_format
        self._registry = None
        self._snapshot = None
        self._store = None

    @property
    def registry(self):
        if self._registry is None:
            self._registry = load_registry(self.registry_path)
        return self._registry

    @property
    def snapshot(self):
        if self._snapshot is None:
            self._snapshot = load_snapshot(self.snapshot_path, self.registry)
        return self._snapshot

    @property
    def store(self) -> GraphStore:
        if self._store is None:
            self._store = GraphStore(self.store_path, self.registry, self.snapshot)
        return self._store

    @property
    def structured(self) -> bool:
        return self.output_format == "structured"


pass_runtime = click.make_pass_decorator(Runtime)


def _decimal_arg(text: str) -> float:
    try:
        return parse_decimal(text)
    except ValueError:
        raise click.UsageError(f"{text!r} is not a finite decimal")


def run_guarded(runtime: Runtime, action):
    try:
        return action()
    except UnitFacetsError as exc:
        click.echo(f"{exc.code}: {exc}", err=True)
        sys.exit(_exit_code(exc))


@click.group()
@click.option("--registry", "registry_path", type=click.Path(path_type=Path),
              default=None, envvar="UNITFACETS_REGISTRY",
              help="Unit registry file (default: bundled seed registry).")
@click.option("--snapshot", "snapshot_path", type=click.Path(path_type=Path),
              default=None, envvar="UNITFACETS_SNAPSHOT",
              help="Quantity-kind snapshot file (default: bundled snapshot).")
@click.option("--store", "store_path", type=click.Path(path_type=Path),
              default=Path("unitfacets-store"), envvar="UNITFACETS_STORE",
              show_default=True, help="Store directory.")
@click.option("--format", "output_format", type=click.Choice(["human", "structured"]),
              default="human", show_default=True,
              help="Output style; structured prints JSON.")
@click.pass_context
def main(ctx, registry_path, snapshot_path, store_path, output_format):
    """Unit-aware faceted search over a scholarly knowledge graph."""
    ctx.obj = Runtime(
        registry_path=registry_path or seed_registry_path(),
        snapshot_path=snapshot_path or seed_snapshot_path(),
        store_path=store_path,
        output_format=output_format,
    )


@main.command()
@click.argument("value")
@click.argument("source")
@click.argument("target")
@pass_runtime
def convert(runtime, value, source, target):
    """Convert VALUE from SOURCE unit to TARGET unit (UCUM codes)."""
    def action():
        try:
            number = parse_decimal(value)
        except ValueError:
            raise click.UsageError(f"value {value!r} is not a finite decimal")
        result = ucum_convert(number, source, target, runtime.registry)
        if runtime.structured:
            click.echo(json.dumps({
                "value": shortest_decimal(result.value),
                "source": result.source_code,
                "target": result.target_code,
            }))
        else:
            click.echo(shortest_decimal(result.value))

    run_guarded(runtime, action)


@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@pass_runtime
def ingest(runtime, file):
    """Ingest a line-delimited record file into the store."""
    def action():
        report = runtime.store.ingest(file)
        if runtime.structured:
            click.echo(json.dumps(report.as_dict()))
        else:
            click.echo(
                f"papers: {report.papers}  contributions: {report.contributions}  "
                f"statements: {report.statements}  rejected: {report.rejected}"
            )
        for diagnostic in report.diagnostics:
            click.echo(
                f"line {diagnostic.line}: {diagnostic.code}: {diagnostic.message}",
                err=True,
            )

    run_guarded(runtime, action)


@main.command()
@click.option("--property", "property_id", required=True, help="Property id to filter on.")
@click.option("--quantity-kind", "quantity_kind_id", default=None,
              help="Quantity kind id (default: inferred from the index).")
@click.option("--unit", required=True, help="UCUM code the operands are expressed in.")
@click.option("--eq", type=str, default=None, help="Match values equal to this.")
@click.option("--gt", type=str, default=None, help="Match values greater than this.")
@click.option("--lt", type=str, default=None, help="Match values less than this.")
@click.option("--within", nargs=2, type=str, default=None,
              help="Match values inside the closed interval A B.")
@click.option("--exclude", nargs=2, type=str, default=None,
              help="Match values outside the closed interval A B.")
@pass_runtime
def search(runtime, property_id, quantity_kind_id, unit, eq, gt, lt, within, exclude):
    """Search contributions with unit-qualified numeric filters."""
    def action():
        index = build_index(runtime.store)
        kind_id = quantity_kind_id
        if kind_id is None:
            kind_id = kind_for_property(index, property_id)
        filters = []
        for comparator, operand in (("eq", eq), ("gt", gt), ("lt", lt)):
            if operand is not None:
                filters.append(FilterSpec(
                    property_id=property_id, quantity_kind_id=kind_id,
                    comparator=comparator, unit=unit, value=_decimal_arg(operand),
                ))
        for comparator, operand in (("within", within), ("exclude", exclude)):
            if operand:
                filters.append(FilterSpec(
                    property_id=property_id, quantity_kind_id=kind_id,
                    comparator=comparator, unit=unit,
                    interval=(_decimal_arg(operand[0]), _decimal_arg(operand[1])),
                ))
        if not filters:
            raise click.UsageError("provide at least one of --eq/--gt/--lt/--within/--exclude")
        ids = apply_filters(index, filters, runtime.registry, runtime.snapshot)
        if runtime.structured:
            click.echo(json.dumps({"contribution_ids": ids, "total": len(ids)}))
        else:
            for contribution_id in ids:
                click.echo(contribution_id)

    run_guarded(runtime, action)


@main.command()
@click.option("--contributions", required=True,
              help="Comma-separated contribution ids (row order).")
@click.option("--properties", required=True,
              help="Comma-separated property ids (column order).")
@click.option("--unit", "units", multiple=True, metavar="PROPERTY=CODE",
              help="Display-unit override for a property; repeatable.")
@click.option("--save", is_flag=True, help="Persist the view and print its id.")
@pass_runtime
def compare(runtime, contributions, properties, units, save):
    """Build a contribution-by-property comparison table."""
    def action():
        overrides = {}
        for item in units:
            property_id, sep, code = item.partition("=")
            if not sep or not property_id or not code:
                raise click.UsageError(f"--unit expects PROPERTY=CODE, got {item!r}")
            overrides[property_id] = code
        store = runtime.store
        table = build_comparison(
            store,
            [c.strip() for c in contributions.split(",") if c.strip()],
            [p.strip() for p in properties.split(",") if p.strip()],
        )
        for property_id, code in sorted(overrides.items()):
            table = convert_column(table, store, property_id, code)
        if runtime.structured:
            click.echo(export_table(table, "json"), nl=False)
        else:
            click.echo(export_table(table, "csv"), nl=False)
        if save:
            saved_id = save_view(table, store)
            click.echo(f"saved: {saved_id}" if not runtime.structured else
                       json.dumps({"id": saved_id}))

    run_guarded(runtime, action)


@main.command()
@click.option("--addr", default="127.0.0.1:8000", show_default=True,
              help="Listen address HOST:PORT.")
@click.option("--cors-origin", default=None, envvar="UNITFACETS_CORS_ORIGIN",
              help="Origin allowed for cross-site requests (the web UI).")
@pass_runtime
def serve(runtime, addr, cors_origin):
    """Run the HTTP service."""
    import uvicorn

    def action():
        host, _, port = addr.partition(":")
        app = create_app(runtime.store, cors_origin=cors_origin)
        uvicorn.run(app, host=host or "127.0.0.1", port=int(port or "8000"))

    run_guarded(runtime, action)


@main.command("dump-openapi")
@click.option("-o", "--output", type=click.Path(path_type=Path), default=None,
              help="Write to a file instead of stdout.")
@pass_runtime
def dump_openapi(runtime, output):
    """Print the service's OpenAPI document (used to refresh docs/)."""
    def action():
        app = create_app(GraphStore(None, runtime.registry, runtime.snapshot))
        document = json.dumps(app.openapi(), indent=2, sort_keys=True) + "\n"
        if output is None:
            click.echo(document, nl=False)
        else:
            output.write_text(document, encoding="utf-8")

    run_guarded(runtime, action)


if __name__ == "__main__":
    main()

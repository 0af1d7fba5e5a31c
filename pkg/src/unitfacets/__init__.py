"""Unit-aware faceted search and comparison over a scholarly knowledge graph.

The package is organized in layers:

- ``unitfacets.ucum``: parse UCUM unit codes, dimensional analysis, value
  conversion against a seed registry.
- ``unitfacets.quantities``: QUDT-pattern quantity kinds, units, and
  quantity values backed by a bundled metadata snapshot.
- ``unitfacets.store``: file-backed knowledge graph of papers,
  contributions, and statements, plus saved comparisons.
- ``unitfacets.facets``: numeric index, dynamic unit facets, and
  unit-qualified range/exclusion filters.
- ``unitfacets.comparison``: contribution-by-property tables with
  non-destructive unit-converted views and exports.
- ``unitfacets.api`` / ``unitfacets.cli``: HTTP service and command line.
"""

from .errors import UnitFacetsError
from .ucum import (
    ConversionResult,
    Dimension,
    UnitExpr,
    UnitRegistry,
    commensurable,
    convert,
    load_registry,
    load_seed_registry,
    parse_ucum,
    reduce_expr,
)

__version__ = "0.1.0"

__all__ = [
    "ConversionResult",
    "Dimension",
    "UnitExpr",
    "UnitFacetsError",
    "UnitRegistry",
    "commensurable",
    "convert",
    "load_registry",
    "load_seed_registry",
    "parse_ucum",
    "reduce_expr",
    "__version__",
]

"""Local UCUM engine: parse unit codes, reduce them to dimension vectors,
and convert values between commensurable units."""

from .convert import ConversionResult, Reduction, commensurable, convert, reduce_expr
from .dimension import DIMENSIONLESS, Dimension
from .parser import NumericFactor, UnitExpr, UnitFactor, parse_ucum, resolve_token
from .registry import (
    Prefix,
    UnitAtom,
    UnitRegistry,
    load_registry,
    load_seed_registry,
    seed_registry_path,
)

__all__ = [
    "ConversionResult",
    "DIMENSIONLESS",
    "Dimension",
    "NumericFactor",
    "Prefix",
    "Reduction",
    "UnitAtom",
    "UnitExpr",
    "UnitFactor",
    "UnitRegistry",
    "commensurable",
    "convert",
    "load_registry",
    "load_seed_registry",
    "parse_ucum",
    "reduce_expr",
    "resolve_token",
    "seed_registry_path",
]

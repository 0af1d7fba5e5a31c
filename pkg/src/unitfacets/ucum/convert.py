"""Reduction of unit expressions and value conversion between them.

Every expression reduces to a (dimension, scale, offset) triple: the scale
takes one unit of the expression to the coherent reference unit of its
dimension, and the offset is only present for a bare affine atom (Celsius).
Conversion is pure 64-bit float arithmetic; equality of source and target
scale/offset short-circuits to the identity so converting a value to its
own unit returns it bit-exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import AffineInCompound, IncommensurableUnits, NonFiniteValue
from .dimension import DIMENSIONLESS, Dimension
from .parser import NumericFactor, UnitExpr, UnitFactor, parse_ucum
from .registry import UnitRegistry


@dataclass(frozen=True)
class Reduction:
    """Canonical linear (or affine) form of a unit expression."""

    dimension: Dimension
    scale: float
    offset: float | None = None


@dataclass(frozen=True)
class ConversionResult:
    value: float
    source_code: str
    target_code: str


def reduce_expr(expr: UnitExpr) -> Reduction:
    """Fold an expression's factors into a Reduction.

    An affine atom survives only as the whole expression: unprefixed,
    exponent 1, and with no other factors; any other use raises
    AffineInCompound.
    """
    affine = [
        f for f in expr.factors
        if isinstance(f, UnitFactor) and f.atom.is_affine
    ]
    if affine:
        only = affine[0]
        if (
            len(affine) > 1
            or len(expr.factors) > 1
            or only.prefix is not None
            or only.exponent != 1
        ):
            raise AffineInCompound(
                f"affine unit {only.atom.code!r} cannot be prefixed, "
                f"raised to a power, or combined with other factors",
                code=expr.code,
            )
        return Reduction(
            dimension=only.atom.dimension,
            scale=only.atom.scale,
            offset=only.atom.offset,
        )

    dimension = DIMENSIONLESS
    scale = 1.0
    for factor in expr.factors:
        if isinstance(factor, NumericFactor):
            scale *= float(factor.value) ** factor.exponent
        else:
            base = factor.atom.scale
            if factor.prefix is not None:
                base *= factor.prefix.factor
            scale *= base ** factor.exponent
            dimension = dimension + factor.atom.dimension * factor.exponent
    return Reduction(dimension=dimension, scale=scale)


def _as_expr(unit: UnitExpr | str, registry: UnitRegistry | None) -> UnitExpr:
    if isinstance(unit, UnitExpr):
        return unit
    if registry is None:
        raise TypeError("a registry is required to parse unit codes")
    return parse_ucum(unit, registry)


def commensurable(
    a: UnitExpr | str, b: UnitExpr | str, registry: UnitRegistry | None = None
) -> bool:
    """True iff both expressions reduce to the same dimension vector."""
    ra = reduce_expr(_as_expr(a, registry))
    rb = reduce_expr(_as_expr(b, registry))
    return ra.dimension == rb.dimension


def convert(
    value: float,
    source: UnitExpr | str,
    target: UnitExpr | str,
    registry: UnitRegistry | None = None,
) -> ConversionResult:
    """Convert a value between commensurable units.

    Linear: value * scale(source) / scale(target). Affine endpoints go
    through the reference unit with absent offsets read as zero.
    """
    source_expr = _as_expr(source, registry)
    target_expr = _as_expr(target, registry)
    src = reduce_expr(source_expr)
    tgt = reduce_expr(target_expr)
    if src.dimension != tgt.dimension:
        raise IncommensurableUnits(
            f"cannot convert {source_expr.code!r} ({src.dimension}) "
            f"to {target_expr.code!r} ({tgt.dimension})",
            source_dimension=src.dimension.exponents,
            target_dimension=tgt.dimension.exponents,
        )
    if not math.isfinite(value):
        raise NonFiniteValue(f"cannot convert non-finite value {value!r}")

    src_offset = src.offset or 0.0
    tgt_offset = tgt.offset or 0.0
    if src.scale == tgt.scale and src_offset == tgt_offset:
        result = value
    elif src.offset is None and tgt.offset is None:
        result = value * src.scale / tgt.scale
    else:
        result = ((value * src.scale + src_offset) - tgt_offset) / tgt.scale

    if not math.isfinite(result):
        raise NonFiniteValue(
            f"conversion of {value!r} from {source_expr.code!r} "
            f"to {target_expr.code!r} overflowed"
        )
    return ConversionResult(
        value=result, source_code=source_expr.code, target_code=target_expr.code
    )

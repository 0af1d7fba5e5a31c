"""Exception hierarchy shared by all layers.

Every error carries a stable machine code from a closed enumeration plus the
HTTP status the service layer maps it to (400 syntax/validation, 404 not
found, 422 incommensurable/semantics). Library callers catch the exception
types; API and CLI translate them uniformly.
"""

from __future__ import annotations

from typing import Any


class UnitFacetsError(Exception):
    """Base class for all typed errors raised by this package."""

    code = "INTERNAL_ERROR"
    http_status = 500

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = {k: v for k, v in details.items() if v is not None}

    def __str__(self) -> str:
        if self.details:
            extras = ", ".join(f"{k}={v!r}" for k, v in self.details.items())
            return f"{self.message} ({extras})"
        return self.message


# --- ucum-core ---------------------------------------------------------------

class UcumSyntaxError(UnitFacetsError):
    """Malformed unit expression; ``position`` points at the offending char."""

    code = "BAD_SYNTAX"
    http_status = 400

    def __init__(self, message: str, code_text: str = "", position: int = 0):
        super().__init__(message, expression=code_text, position=position)
        self.position = position


class UnknownUnit(UnitFacetsError):
    code = "UNKNOWN_UNIT"
    http_status = 404


class UnknownPrefix(UnitFacetsError):
    code = "UNKNOWN_PREFIX"
    http_status = 404


class AffineInCompound(UnitFacetsError):
    """Affine atom used with a prefix, exponent != 1, or other factors."""

    code = "AFFINE_IN_COMPOUND"
    http_status = 422


class IncommensurableUnits(UnitFacetsError):
    code = "INCOMMENSURABLE_UNITS"
    http_status = 422


class FormatError(UnitFacetsError):
    code = "FORMAT_ERROR"
    http_status = 400


class DuplicateCode(UnitFacetsError):
    code = "DUPLICATE_CODE"
    http_status = 400


# --- quantity-model -----------------------------------------------------------

class MissingMetadata(UnitFacetsError):
    code = "MISSING_METADATA"
    http_status = 404


class UnknownQuantityKind(UnitFacetsError):
    code = "UNKNOWN_QUANTITY_KIND"
    http_status = 404


class DimensionMismatch(UnitFacetsError):
    code = "DIMENSION_MISMATCH"
    http_status = 422


class NonFiniteValue(UnitFacetsError):
    code = "NON_FINITE_VALUE"
    http_status = 400


# --- graph-store / comparison ---------------------------------------------

class NotFound(UnitFacetsError):
    code = "NOT_FOUND"
    http_status = 404


class DanglingReference(UnitFacetsError):
    code = "DANGLING_REFERENCE"
    http_status = 400


class DuplicateInput(UnitFacetsError):
    code = "DUPLICATE_INPUT"
    http_status = 400


class UnsupportedFormat(UnitFacetsError):
    code = "UNSUPPORTED_FORMAT"
    http_status = 400


# --- facet-search -----------------------------------------------------------

class UnknownProperty(UnitFacetsError):
    code = "UNKNOWN_PROPERTY"
    http_status = 404


class EmptyInterval(UnitFacetsError):
    code = "EMPTY_INTERVAL"
    http_status = 400


#: Machine codes the service layer may emit; documented in docs/api.md.
ERROR_CODES = (
    "BAD_SYNTAX",
    "UNKNOWN_UNIT",
    "UNKNOWN_PREFIX",
    "AFFINE_IN_COMPOUND",
    "INCOMMENSURABLE_UNITS",
    "FORMAT_ERROR",
    "DUPLICATE_CODE",
    "MISSING_METADATA",
    "UNKNOWN_QUANTITY_KIND",
    "DIMENSION_MISMATCH",
    "NON_FINITE_VALUE",
    "NOT_FOUND",
    "DANGLING_REFERENCE",
    "DUPLICATE_INPUT",
    "UNSUPPORTED_FORMAT",
    "UNKNOWN_PROPERTY",
    "EMPTY_INTERVAL",
    "INTERNAL_ERROR",
)

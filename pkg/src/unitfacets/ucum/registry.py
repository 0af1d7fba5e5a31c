"""Registry of unit atoms and metric prefixes.

The registry is loaded from a line-oriented JSON file (one record per line)
and is immutable afterwards, so lookups are safe under concurrency. Record
shapes, with fields in this order:

    {"kind": "header", "format": "ucum-registry/1", "version": "..."}
    {"kind": "prefix", "code": "k", "label": "kilo", "factor": 1000}
    {"kind": "atom", "code": "m", "label": "metre",
     "dimension": [1, 0, 0, 0, 0, 0, 0], "scale": 1.0, "metric": true}

Atom records may carry an ``offset`` (affine units such as Celsius); the
seed file only permits that for pure-temperature atoms. ``scale`` is the
positive factor taking one unit of the atom to the coherent reference unit
of its dimension (the scale-1 anchor: metre, kilogram, second, ...), so a
gram carries scale 0.001.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import IO, Iterable

from ..errors import DuplicateCode, FormatError
from .dimension import TEMPERATURE, Dimension

_SEED_RESOURCE = "ucum_registry.jsonl"


@dataclass(frozen=True)
class Prefix:
    """Metric prefix; ``factor`` is an exact power of ten."""

    code: str
    label: str
    factor: float


@dataclass(frozen=True)
class UnitAtom:
    """One registry entry: a named unit symbol with dimension and scale."""

    code: str
    label: str
    dimension: Dimension
    scale: float
    offset: float | None = None
    metric: bool = True

    @property
    def is_affine(self) -> bool:
        return self.offset is not None


@dataclass(frozen=True)
class UnitRegistry:
    """Immutable lookup tables for prefixes and atoms.

    ``prefixes_by_length`` is precomputed for the longest-prefix-first
    token disambiguation used by the parser.
    """

    atoms: dict[str, UnitAtom]
    prefixes: dict[str, Prefix]
    version: str = "unversioned"
    _parse_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def prefix_codes_longest_first(self) -> list[str]:
        return sorted(self.prefixes, key=len, reverse=True)

    def atom(self, code: str) -> UnitAtom | None:
        return self.atoms.get(code)

    def prefix(self, code: str) -> Prefix | None:
        return self.prefixes.get(code)


def _power_of_ten(factor: float) -> bool:
    if factor <= 0:
        return False
    exp = round(math.log10(factor))
    return float(f"1e{exp}") == factor


def _parse_record(line: str, lineno: int) -> dict:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise FormatError(f"registry line {lineno}: invalid JSON: {exc}") from exc
    if not isinstance(record, dict) or "kind" not in record:
        raise FormatError(f"registry line {lineno}: expected an object with a 'kind' field")
    return record


def _require(record: dict, keys: Iterable[str], lineno: int) -> None:
    missing = [k for k in keys if k not in record]
    if missing:
        raise FormatError(f"registry line {lineno}: missing fields {missing}")


def load_registry(source: str | Path | IO[str]) -> UnitRegistry:
    """Load and validate a registry file.

    Raises FormatError for structural problems (empty file, bad JSON, bad
    field values) and DuplicateCode when a prefix or atom code repeats.
    """
    if hasattr(source, "read"):
        text = source.read()
        name = getattr(source, "name", "<stream>")
    else:
        path = Path(source)
        text = path.read_text(encoding="utf-8")
        name = str(path)

    atoms: dict[str, UnitAtom] = {}
    prefixes: dict[str, Prefix] = {}
    version = "unversioned"
    saw_record = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        record = _parse_record(line, lineno)
        kind = record["kind"]
        if kind == "header":
            if record.get("format") != "ucum-registry/1":
                raise FormatError(
                    f"registry line {lineno}: unsupported format {record.get('format')!r}"
                )
            version = str(record.get("version", version))
            continue
        saw_record = True
        if kind == "prefix":
            _require(record, ("code", "label", "factor"), lineno)
            code = record["code"]
            factor = float(record["factor"])
            if not _power_of_ten(factor):
                raise FormatError(
                    f"registry line {lineno}: prefix factor {factor!r} is not a power of ten"
                )
            if code in prefixes:
                raise DuplicateCode(f"duplicate prefix code {code!r}", source=name)
            prefixes[code] = Prefix(code=code, label=record["label"], factor=factor)
        elif kind == "atom":
            _require(record, ("code", "label", "dimension", "scale", "metric"), lineno)
            code = record["code"]
            dim_values = record["dimension"]
            if not (isinstance(dim_values, list) and len(dim_values) == 7):
                raise FormatError(f"registry line {lineno}: dimension must be 7 integers")
            dimension = Dimension(tuple(int(v) for v in dim_values))
            scale = float(record["scale"])
            if scale <= 0 or not math.isfinite(scale):
                raise FormatError(f"registry line {lineno}: scale must be a positive finite number")
            offset = record.get("offset")
            if offset is not None:
                offset = float(offset)
                if dimension != TEMPERATURE:
                    raise FormatError(
                        f"registry line {lineno}: offset only allowed on pure temperature atoms"
                    )
            if code in atoms:
                raise DuplicateCode(f"duplicate atom code {code!r}", source=name)
            atoms[code] = UnitAtom(
                code=code,
                label=record["label"],
                dimension=dimension,
                scale=scale,
                offset=offset,
                metric=bool(record["metric"]),
            )
        else:
            raise FormatError(f"registry line {lineno}: unknown record kind {kind!r}")

    if not saw_record:
        raise FormatError(f"registry {name!r} contains no prefix or atom records")
    return UnitRegistry(atoms=atoms, prefixes=prefixes, version=version)


def seed_registry_path() -> Path:
    """Path of the seed registry bundled with the package."""
    return Path(resources.files("unitfacets.data") / _SEED_RESOURCE)


def load_seed_registry() -> UnitRegistry:
    return load_registry(seed_registry_path())

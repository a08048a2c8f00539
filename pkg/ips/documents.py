"""JSON documents: ips-planar/1, ips-dm/1, ips-pack/1, ips-search/1 and the bounds report.

Canonical text is sorted-key, two-space indented JSON with a trailing
newline, so dumping a parsed document reproduces it byte for byte.
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, StrictInt, StrictStr, ValidationError, field_validator, model_validator

from ips.dmatrix import DistanceMatrix
from ips.errors import DocumentError, IpsError
from ips.exactnum import format_rational, parse_rational
from ips.geometry import PlanarPoint, PlanarPointSet
from ips.packing import Packing
from ips.search import Found, SearchOutcome

PLANAR = "ips-planar/1"
DM = "ips-dm/1"
PACK = "ips-pack/1"
SEARCH = "ips-search/1"
BOUNDS = "ips-bounds/1"


class PointModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    x: StrictStr
    y: StrictStr

    @field_validator("x", "y")
    @classmethod
    def rational_string(cls, v: str) -> str:
        try:
            parse_rational(v)
        except IpsError as e:
            raise ValueError(str(e)) from e
        return v


class PlanarDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    format: Literal["ips-planar/1"]
    q: StrictInt
    points: List[PointModel]
    provenance: Dict[str, Any] = {}


class DmDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    format: Literal["ips-dm/1"]
    n: StrictInt
    entries: List[List[StrictInt]]
    provenance: Dict[str, Any] = {}

    @model_validator(mode="after")
    def size_matches(self) -> "DmDoc":
        if len(self.entries) != self.n:
            raise ValueError(f"n={self.n} but {len(self.entries)} rows")
        return self


class PackDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    format: Literal["ips-pack/1"]
    k: int
    coordinates: List[Tuple[float, float]]
    min_pairwise: float
    provenance: Dict[str, Any] = {}


class SearchDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    format: Literal["ips-search/1"]
    n: int
    bound: int
    found: bool
    min_diameter: Optional[int] = None
    witness: Optional[List[List[int]]] = None
    nodes_explored: int
    nodes_by_diameter: Dict[str, int] = {}
    provenance: Dict[str, Any] = {}


class BoundsDoc(BaseModel):
    model_config = ConfigDict(extra="allow")

    format: Literal["ips-bounds/1"]
    cutoffs: Dict[str, int]
    constants: Dict[str, Dict[str, str]]
    checks: Dict[str, bool]
    flags: Dict[str, Dict[str, Any]]
    provenance: Dict[str, Any] = {}


_MODELS = {PLANAR: PlanarDoc, DM: DmDoc, PACK: PackDoc, SEARCH: SearchDoc, BOUNDS: BoundsDoc}

Document = Union[PlanarDoc, DmDoc, PackDoc, SearchDoc, BoundsDoc]


def dumps(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def validate(payload: Any) -> Document:
    if not isinstance(payload, dict):
        raise DocumentError("document must be a JSON object")
    fmt = payload.get("format")
    model = _MODELS.get(fmt)
    if model is None:
        raise DocumentError(f"unknown document format {fmt!r}")
    try:
        return model.model_validate(payload)
    except ValidationError as e:
        raise DocumentError(f"invalid {fmt} document: {e}") from e


def loads(text: str) -> Document:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"not valid JSON: {e}") from e
    return validate(payload)


def read_document(path: Union[str, Path]) -> Document:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e}") from e
    return loads(text)


def write_document(path: Union[str, Path], payload: Dict[str, Any]) -> None:
    validate(payload)
    try:
        Path(path).write_text(dumps(payload), encoding="utf-8")
    except OSError as e:
        raise DocumentError(f"cannot write {path}: {e}") from e


def planar_to_doc(s: PlanarPointSet, provenance: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    return {
        "format": PLANAR,
        "q": s.q,
        "points": [{"x": format_rational(p.x), "y": format_rational(p.y)} for p in s.points],
        "provenance": provenance or {},
    }


def doc_to_planar(doc: PlanarDoc) -> PlanarPointSet:
    try:
        points = tuple(PlanarPoint(parse_rational(p.x), parse_rational(p.y)) for p in doc.points)
        return PlanarPointSet(doc.q, points)
    except IpsError as e:
        raise DocumentError(f"invalid point set: {e}") from e


def dm_to_doc(dm: DistanceMatrix, provenance: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    return {"format": DM, "n": dm.n, "entries": dm.to_lists(), "provenance": provenance or {}}


def doc_to_dm(doc: DmDoc) -> DistanceMatrix:
    try:
        return DistanceMatrix(tuple(tuple(row) for row in doc.entries))
    except IpsError as e:
        raise DocumentError(f"invalid distance matrix: {e}") from e


def packing_to_doc(p: Packing) -> Dict[str, Any]:
    return {
        "format": PACK,
        "k": p.k,
        "coordinates": [list(c) for c in p.coordinates],
        "min_pairwise": p.min_pairwise,
        "provenance": dict(p.provenance),
    }


def doc_to_packing(doc: PackDoc) -> Packing:
    if len(doc.coordinates) != doc.k:
        raise DocumentError(f"k={doc.k} but {len(doc.coordinates)} coordinates")
    return Packing(doc.k, tuple((float(x), float(y)) for x, y in doc.coordinates), doc.min_pairwise, dict(doc.provenance))


def search_to_doc(outcome: SearchOutcome, provenance: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    found = isinstance(outcome.result, Found)
    return {
        "format": SEARCH,
        "n": outcome.n,
        "bound": outcome.bound,
        "found": found,
        "min_diameter": outcome.result.min_diameter if found else None,
        "witness": outcome.result.witness.to_lists() if found else None,
        "nodes_explored": outcome.nodes_explored,
        "nodes_by_diameter": {str(d): c for d, c in outcome.nodes_by_diameter.items()},
        "provenance": provenance or {},
    }


def to_payload(doc: Document) -> Dict[str, Any]:
    """Canonical payload of a parsed document."""
    if isinstance(doc, PlanarDoc):
        return planar_to_doc(doc_to_planar(doc), doc.provenance)
    if isinstance(doc, DmDoc):
        return dm_to_doc(doc_to_dm(doc), doc.provenance)
    if isinstance(doc, PackDoc):
        return packing_to_doc(doc_to_packing(doc))
    return doc.model_dump()

"""Bit-exact JSON documents for all value types.

Scalars travel as strings "p/q" in lowest terms ("p" when the denominator is
1); matrices as row-major arrays of arrays.  Parsing is strict: malformed
scalars, wrong shapes or unknown kinds raise DocumentError and nothing is
ever silently coerced.  Every document self-describes its dimensions and
carries a format version.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .canonical import CanonicalRelation
from .coiso import CoisoPair
from .linalg import Mat, Subspace
from .relations import Relation
from .symplectic import SympMap, SympSpace

FORMAT = 1

_SCALAR_RE = re.compile(r"^-?\d+(/\d+)?$")


class DocumentError(ValueError):
    """Raised for malformed or inconsistent input documents."""


def scalar_to_str(x: Fraction) -> str:
    return str(x)


def scalar_from_str(s) -> Fraction:
    if not isinstance(s, str) or not _SCALAR_RE.match(s):
        raise DocumentError(f"malformed scalar: {s!r}")
    try:
        value = Fraction(s)
    except ZeroDivisionError:
        raise DocumentError(f"malformed scalar: {s!r}") from None
    if str(value) != s:
        raise DocumentError(f"scalar not in lowest terms: {s!r}")
    return value


def mat_to_lists(m: Mat) -> list[list[str]]:
    return [[scalar_to_str(x) for x in row] for row in m.entries]


def mat_from_lists(rows, cols: int | None = None, what: str = "matrix") -> Mat:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise DocumentError(f"{what} must be an array of arrays")
    if cols is None:
        if not rows:
            raise DocumentError(f"{what} with no rows needs an explicit width")
        cols = len(rows[0])
    grid = []
    for r in rows:
        if len(r) != cols:
            raise DocumentError(f"{what} rows have inconsistent lengths")
        grid.append(tuple(scalar_from_str(x) for x in r))
    return Mat(len(grid), cols, tuple(grid))


def _expect_int(obj, key, doc) -> int:
    if key not in doc:
        raise DocumentError(f"{obj} document is missing {key!r}")
    v = doc[key]
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise DocumentError(f"{obj} field {key!r} must be a nonnegative integer")
    return v


def space_doc(v: SympSpace) -> dict:
    return {"format": FORMAT, "kind": "space", "dim": v.dim,
            "form": mat_to_lists(v.form)}


def subspace_doc(s: Subspace) -> dict:
    return {"format": FORMAT, "kind": "subspace", "ambient_dim": s.ambient_dim,
            "basis": mat_to_lists(s.basis)}


def pair_doc(p: CoisoPair) -> dict:
    return {"format": FORMAT, "kind": "pair", "space": space_doc(p.space),
            "a": subspace_doc(p.a), "b": subspace_doc(p.b)}


def relation_doc(r: Relation) -> dict:
    return {"format": FORMAT, "kind": "relation", "source_dim": r.source_dim,
            "target_dim": r.target_dim, "basis": mat_to_lists(r.space.basis)}


def canonical_relation_doc(l: CanonicalRelation) -> dict:
    return {"format": FORMAT, "kind": "canonical_relation",
            "source": space_doc(l.source), "target": space_doc(l.target),
            "basis": mat_to_lists(l.rel.space.basis)}


def map_doc(s: SympMap) -> dict:
    return {"format": FORMAT, "kind": "map", "source": space_doc(s.source),
            "target": space_doc(s.target), "matrix": mat_to_lists(s.matrix)}


def encode(value) -> dict:
    if isinstance(value, SympSpace):
        return space_doc(value)
    if isinstance(value, Subspace):
        return subspace_doc(value)
    if isinstance(value, CoisoPair):
        return pair_doc(value)
    if isinstance(value, CanonicalRelation):
        return canonical_relation_doc(value)
    if isinstance(value, Relation):
        return relation_doc(value)
    if isinstance(value, SympMap):
        return map_doc(value)
    raise DocumentError(f"cannot encode value of type {type(value).__name__}")


KINDS = ("space", "subspace", "pair", "relation", "canonical_relation", "map")


def parse_document(doc, expect: str | None = None):
    """Parse a tagged document dict into the corresponding library value."""
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    if "document" in doc and "kind" not in doc:
        doc = doc["document"]
        if not isinstance(doc, dict):
            raise DocumentError("wrapped document must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"unknown document kind: {kind!r}")
    if expect is not None and kind != expect:
        raise DocumentError(f"expected a {expect} document, got {kind!r}")
    if "format" in doc and doc["format"] != FORMAT:
        raise DocumentError(f"unsupported format: {doc['format']!r}")
    try:
        return _PARSERS[kind](doc)
    except DocumentError:
        raise
    except Exception as exc:  # exact reporting, no silent coercion
        raise DocumentError(f"invalid {kind} document: {exc}") from None


def _parse_space(doc) -> SympSpace:
    dim = _expect_int("space", "dim", doc)
    form = mat_from_lists(doc.get("form"), dim, "form")
    if form.rows != dim:
        raise DocumentError("form shape disagrees with dim")
    return SympSpace(dim, form)


def _parse_subspace(doc) -> Subspace:
    ambient = _expect_int("subspace", "ambient_dim", doc)
    basis = mat_from_lists(doc.get("basis"), ambient, "basis")
    sub = Subspace(ambient, basis)
    from .linalg import span

    if span(basis.entries, ambient) != sub:
        raise DocumentError("subspace basis is not in canonical form")
    return sub


def _parse_pair(doc) -> CoisoPair:
    space = parse_document(doc.get("space"), "space")
    a = parse_document(doc.get("a"), "subspace")
    b = parse_document(doc.get("b"), "subspace")
    return CoisoPair(space, a, b)


def _parse_relation(doc) -> Relation:
    sd = _expect_int("relation", "source_dim", doc)
    td = _expect_int("relation", "target_dim", doc)
    basis = mat_from_lists(doc.get("basis"), sd + td, "basis")
    sub = Subspace(sd + td, basis)
    from .linalg import span

    if span(basis.entries, sd + td) != sub:
        raise DocumentError("relation basis is not in canonical form")
    return Relation(sd, td, sub)


def _parse_canonical_relation(doc) -> CanonicalRelation:
    source = parse_document(doc.get("source"), "space")
    target = parse_document(doc.get("target"), "space")
    basis = mat_from_lists(doc.get("basis"), source.dim + target.dim, "basis")
    sub = Subspace(source.dim + target.dim, basis)
    from .linalg import span

    if span(basis.entries, sub.ambient_dim) != sub:
        raise DocumentError("relation basis is not in canonical form")
    return CanonicalRelation(source, target,
                             Relation(source.dim, target.dim, sub))


def _parse_map(doc) -> SympMap:
    source = parse_document(doc.get("source"), "space")
    target = parse_document(doc.get("target"), "space")
    matrix = mat_from_lists(doc.get("matrix"), source.dim, "matrix")
    if matrix.rows != target.dim:
        raise DocumentError("matrix shape disagrees with the spaces")
    return SympMap(source, target, matrix)


_PARSERS = {
    "space": _parse_space,
    "subspace": _parse_subspace,
    "pair": _parse_pair,
    "relation": _parse_relation,
    "canonical_relation": _parse_canonical_relation,
    "map": _parse_map,
}

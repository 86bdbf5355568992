"""Lattice files and class-set documents (JSON)."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .lattice import AmbientForm, Lattice


class LatticeFormatError(ValueError):
    """Malformed lattice document."""


def _int_matrix(obj, what: str) -> list[list[int]]:
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise LatticeFormatError(f"{what} must be a list of rows")
    out = []
    for r in obj:
        row = []
        for x in r:
            if isinstance(x, bool) or not isinstance(x, int):
                raise LatticeFormatError(f"{what} entries must be integers, got {x!r}")
            row.append(x)
        out.append(row)
    return out


def lattice_from_dict(doc: dict) -> Lattice:
    if not isinstance(doc, dict):
        raise LatticeFormatError("lattice document must be a JSON object")
    name = doc.get("name")
    if "gram" in doc:
        return Lattice.reference(_int_matrix(doc["gram"], "gram"), name)
    if "ambient_gram" in doc and "basis_num" in doc:
        amb = AmbientForm(_int_matrix(doc["ambient_gram"], "ambient_gram"))
        den = doc.get("basis_den", 1)
        if isinstance(den, bool) or not isinstance(den, int) or den <= 0:
            raise LatticeFormatError("basis_den must be a positive integer")
        num = _int_matrix(doc["basis_num"], "basis_num")
        rows = [[Fraction(x, den) for x in r] for r in num]
        return Lattice.from_basis(amb, rows, name)
    raise LatticeFormatError('expected "gram" or "ambient_gram" + "basis_num"')


def load_lattice(path) -> Lattice:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LatticeFormatError(f"{path}: {exc}") from exc
    lat = lattice_from_dict(doc)
    if lat.name is None:
        lat = lat.renamed(Path(path).stem)
    return lat


def lattice_to_dict(lat: Lattice, exact: bool = False) -> dict:
    """Lattice document; ``exact`` keeps the embedding, otherwise only the Gram."""
    out: dict = {}
    if lat.name:
        out["name"] = lat.name
    if exact or not lat.is_bilinear_integral:
        out["ambient_gram"] = [list(r) for r in lat.ambient.gram0]
        out["basis_num"] = [list(r) for r in lat.basis_num]
        out["basis_den"] = lat.basis_den
    else:
        out["gram"] = [[int(x) for x in r] for r in lat.gram]
    return out


def _frac(x: Fraction) -> str:
    return str(x)


def classset_document(cs, report=None) -> dict:
    classes = []
    for i, lat in enumerate(cs.representatives):
        entry = {"index": i, "aut_order": cs.aut_orders[i],
                 "lattice": lattice_to_dict(lat)}
        prov = cs.provenance[i]
        entry["provenance"] = None if prov is None else {
            "parent": prov[0], "p": prov[1], "v": list(prov[2])}
        classes.append(entry)
    doc = {"rank": cs.rank, "discriminant": _frac(cs.discriminant),
           "primes": cs.primes_used, "dedup": cs.dedup,
           "class_number": len(cs), "classes": classes}
    if report is not None:
        doc["mass"] = {"computed": _frac(report.computed_mass),
                       "formula": None if report.formula_mass is None else _frac(report.formula_mass),
                       "certified": report.certified, "status": report.status}
    return doc

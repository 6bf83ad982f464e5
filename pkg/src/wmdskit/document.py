"""Input documents: a YAML (or JSON) mapping describing a Cox presentation.

Example::

    name: ex321
    weight_matrix: [[1, 2, 1, 1, 0], [0, 1, 1, 2, 1]]
    relations:
      - terms:
          - {coeff: "1", exponents: [1, 0, 0, 1, 0]}
          - {coeff: "1", exponents: [0, 1, 0, 0, 1]}
          - {coeff: "1", exponents: [0, 0, 2, 0, 0]}
    irrelevant_ideal: [[1, 5], [2, 4], [1, 3, 4], [2, 3, 5]]

Index lists are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import yaml

from .fanbunch import Fan, FanError, MonomialIdeal, fan_from_ideal, from_1based, validate_fan
from .lattice import IntMatrix, LatticeError, gale_dual, rank
from .wmds import GradedPresentation, PresentationError, Term

__all__ = ["DocumentError", "InputDocument", "parse", "load"]

KEYS = {"name", "fan_matrix", "weight_matrix", "torsion", "relations", "irrelevant_ideal", "max_cones"}


class DocumentError(ValueError):
    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


@dataclass(frozen=True)
class InputDocument:
    name: str
    V: IntMatrix
    Q: IntMatrix
    torsion_moduli: tuple = ()
    torsion_matrix: IntMatrix | None = None
    relations: tuple = ()
    irrelevant: MonomialIdeal | None = None
    max_cones: frozenset | None = None

    @property
    def m(self) -> int:
        return self.Q.ncols

    def presentation(self) -> GradedPresentation:
        return GradedPresentation(
            self.Q, self.relations, self.irrelevant, self.torsion_moduli, self.torsion_matrix, self.name
        )

    def fan(self) -> Fan | None:
        """The ambient fan from ``max_cones`` or, failing that, the irrelevant ideal."""
        if self.max_cones is not None:
            F = Fan(self.V, self.max_cones, self.Q)
            rep = validate_fan(F)
            if not rep.ok:
                raise FanError("max_cones do not form a fan", rep.diagnostics)
            return F
        if self.irrelevant is not None:
            return fan_from_ideal(self.irrelevant, self.V, self.Q)
        return None


def _matrix(value, where: str) -> IntMatrix:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise DocumentError(where, "expected a non-empty list of rows")
    for i, row in enumerate(value):
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int):
                raise DocumentError(f"{where}[{i}][{j}]", f"expected an integer, got {x!r}")
    try:
        return IntMatrix(value)
    except (LatticeError, ValueError) as exc:
        raise DocumentError(where, str(exc)) from None


def _index_lists(value, m: int, where: str) -> frozenset:
    if not isinstance(value, list):
        raise DocumentError(where, "expected a list of index lists")
    for i, idx in enumerate(value):
        if not isinstance(idx, list):
            raise DocumentError(f"{where}[{i}]", "expected a list of indices")
        for j, x in enumerate(idx):
            if isinstance(x, bool) or not isinstance(x, int) or not 1 <= x <= m:
                raise DocumentError(f"{where}[{i}][{j}]", f"index {x!r} outside 1..{m}")
    return from_1based(value)


def _coeff(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise DocumentError(where, "expected a rational")
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise DocumentError(where, f"cannot read {value!r} as a rational p/q") from None


def _relations(value, m: int) -> tuple:
    if not isinstance(value, list):
        raise DocumentError("relations", "expected a list")
    rels = []
    for k, rel in enumerate(value):
        where = f"relations[{k}]"
        if not isinstance(rel, dict) or not isinstance(rel.get("terms"), list) or not rel["terms"]:
            raise DocumentError(where, "expected a mapping with a non-empty 'terms' list")
        terms = []
        for t, term in enumerate(rel["terms"]):
            tw = f"{where}.terms[{t}]"
            if not isinstance(term, dict) or "exponents" not in term:
                raise DocumentError(tw, "expected a mapping with 'coeff' and 'exponents'")
            exps = term["exponents"]
            if not isinstance(exps, list) or len(exps) != m:
                raise DocumentError(f"{tw}.exponents", f"expected {m} exponents")
            if any(isinstance(e, bool) or not isinstance(e, int) or e < 0 for e in exps):
                raise DocumentError(f"{tw}.exponents", "exponents must be nonnegative integers")
            terms.append(Term(_coeff(term.get("coeff", 1), f"{tw}.coeff"), tuple(exps)))
        rels.append(tuple(terms))
    return tuple(rels)


def parse(text: str | bytes) -> InputDocument:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise DocumentError("", f"malformed document: {exc}") from None
    if not isinstance(data, dict):
        raise DocumentError("", "document must be a mapping")
    unknown = sorted(set(data) - KEYS)
    if unknown:
        raise DocumentError(unknown[0], "unknown key")
    V = _matrix(data["fan_matrix"], "fan_matrix") if data.get("fan_matrix") is not None else None
    Q = _matrix(data["weight_matrix"], "weight_matrix") if data.get("weight_matrix") is not None else None
    if V is None and Q is None:
        raise DocumentError("", "need fan_matrix or weight_matrix")
    try:
        if V is None:
            V = gale_dual(Q)
        elif Q is None:
            Q = gale_dual(V)
        else:
            if V.ncols != Q.ncols:
                raise DocumentError("weight_matrix", "column count differs from fan_matrix")
            if not (Q @ V.T).is_zero() or rank(V) + rank(Q) != V.ncols:
                raise DocumentError("weight_matrix", "not Gale dual to fan_matrix (Q·V^T is nonzero or ranks do not add up)")
    except LatticeError as exc:
        raise DocumentError("fan_matrix" if Q is None else "weight_matrix", str(exc)) from None
    m = Q.ncols
    moduli, tmat = (), None
    if data.get("torsion") is not None:
        tor = data["torsion"]
        if not isinstance(tor, dict) or "moduli" not in tor or "matrix" not in tor:
            raise DocumentError("torsion", "expected a mapping with 'moduli' and 'matrix'")
        moduli = tuple(tor["moduli"])
        tmat = _matrix(tor["matrix"], "torsion.matrix")
    relations = _relations(data["relations"], m) if data.get("relations") is not None else ()
    irr = None
    if data.get("irrelevant_ideal") is not None:
        irr = MonomialIdeal(_index_lists(data["irrelevant_ideal"], m, "irrelevant_ideal"))
    cones = None
    if data.get("max_cones") is not None:
        cones = _index_lists(data["max_cones"], m, "max_cones")
    doc = InputDocument(str(data.get("name", "")), V, Q, moduli, tmat, relations, irr, cones)
    try:
        doc.presentation()
    except PresentationError as exc:
        raise DocumentError("relations" if "relation" in str(exc) else "torsion", str(exc)) from None
    return doc


def load(path: str | Path) -> InputDocument:
    return parse(Path(path).read_text())

"""``wmds`` command-line front end."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .cone import Cone
from .document import DocumentError, InputDocument, load
from .fanbunch import (
    FanError,
    eff_cone,
    irrelevant_ideal,
    is_F_matrix,
    is_W_matrix,
    mov_cone,
    nef_cone,
)
from .gkz import GkzError, chambers, gkz_decomposition
from .lattice import LatticeError
from .plotting import PlotError, render_svg
from .sfenum import BudgetExceeded, enumerate_SF, filling_cells, sharp_completion
from .wmds import (
    DivisorClass,
    PresentationError,
    anticanonical_class,
    check_homogeneous,
    is_big,
    is_movable,
    mmp_trace,
    sqm_targets,
)

COMMANDS = (
    "gale",
    "classify",
    "cones",
    "gkz",
    "chambers",
    "fans",
    "fillable",
    "complete",
    "mmp",
    "sqm",
    "anticanonical",
    "report",
    "plot",
)

EXIT_OK, EXIT_DOMAIN, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class DomainNegative(Exception):
    """A well-posed question with a negative answer (matters under --strict)."""

    def __init__(self, result: dict):
        super().__init__(result.get("summary", ""))
        self.result = result


class DomainError(Exception):
    pass


# -- serialisation helpers --------------------------------------------------


def _cone(C: Cone) -> dict:
    if C.lineality_dim:
        return {"dim": C.dim, "lineality": C.lineality_dim, "facets": [list(h) for h in C.facets]}
    return {"dim": C.dim, "rays": [list(g) for g in C.generators]}


def _rays_text(C: Cone) -> str:
    if C.dim == 1:
        return "ray (" + ",".join(map(str, C.generators[0])) + ")"
    return "<" + ", ".join("(" + ",".join(map(str, g)) + ")" for g in C.generators) + ">"


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _require_fan(doc: InputDocument):
    F = doc.fan()
    if F is None:
        raise DocumentError("", "this command needs irrelevant_ideal or max_cones")
    return F


# -- commands ---------------------------------------------------------------


def cmd_gale(doc: InputDocument, args) -> dict:
    return {
        "summary": f"{doc.V.nrows}x{doc.m} fan matrix, {doc.Q.nrows}x{doc.m} weight matrix",
        "fan_matrix": doc.V.tolist(),
        "weight_matrix": doc.Q.tolist(),
    }


def cmd_classify(doc: InputDocument, args) -> dict:
    f, w = is_F_matrix(doc.V), is_W_matrix(doc.Q)
    out = {
        "summary": f"F-matrix: {'yes' if f.ok else 'no'}; W-matrix: {'yes' if w.ok else 'no'}; reduced: {'yes' if f.reduced else 'no'}",
        "F_matrix": f.ok,
        "F_violations": f.violations,
        "W_matrix": w.ok,
        "W_violations": w.violations,
        "reduced": f.reduced,
    }
    if args.strict and not (f.ok and w.ok):
        raise DomainNegative(out)
    return out


def cmd_cones(doc: InputDocument, args) -> dict:
    eff, mov = eff_cone(doc.Q), mov_cone(doc.Q)
    out = {"eff": _cone(eff), "mov": _cone(mov)}
    parts = [f"Eff = {_rays_text(eff)}", f"Mov = {_rays_text(mov)}"]
    F = doc.fan()
    if F is not None:
        nef = nef_cone(F)
        out["nef"] = _cone(nef)
        out["irrelevant_ideal"] = irrelevant_ideal(F).generators_1based()
        parts.append(f"Nef = {_rays_text(nef)}")
    out["summary"] = "; ".join(parts)
    return out


def cmd_gkz(doc: InputDocument, args) -> dict:
    d = gkz_decomposition(doc.Q, restrict_to_mov=args.mov)
    index = {c.cone: k for k, c in enumerate(d.chambers, 1)}
    cells = []
    for c in d.cells:
        entry = {"dim": c.dim, "rays": [list(g) for g in c.cone.generators]}
        if c.cone in index:
            entry["chamber"] = index[c.cone]
        cells.append(entry)
    return {
        "summary": f"{len(d.cells)} cells, {len(d.chambers)} chambers in {'Mov' if args.mov else 'Eff'}",
        "support": _cone(d.support),
        "cells": cells,
        "face_pairs": len(d.face_pairs),
    }


def _chamber_rows(doc: InputDocument) -> list[dict]:
    rows = []
    for ch in chambers(doc.Q, doc.V):
        rows.append(
            {
                "chamber": ch.index,
                "rays": [list(g) for g in ch.cell.cone.generators],
                "is_fan": ch.is_fan,
                "max_cones": ch.fan.max_cones_1based(),
                "irrelevant_ideal": irrelevant_ideal(ch.fan).generators_1based(),
            }
        )
    return rows


def cmd_chambers(doc: InputDocument, args) -> dict:
    rows = _chamber_rows(doc)
    return {"summary": f"{len(rows)} chambers in Mov", "chambers": rows}


def cmd_fans(doc: InputDocument, args) -> dict:
    census = enumerate_SF(doc.V, doc.Q)
    rows = [
        {"max_cones": F.max_cones_1based(), "projective": p, "nef": _cone(nef)}
        for F, p, nef in zip(census.all_fans, census.projective_flags, census.nef_cones)
    ]
    return {
        "summary": f"{len(rows)} complete simplicial fans, {sum(census.projective_flags)} projective",
        "fans": rows,
    }


def cmd_fillable(doc: InputDocument, args) -> dict:
    W = _require_fan(doc)
    cells = filling_cells(W)
    nef = nef_cone(W)
    n_ch = len(chambers(doc.Q, doc.V))
    out = {
        "fillable": bool(cells),
        "nef": _cone(nef),
        "chambers": n_ch,
        "filling_cells": [
            {"rays": [list(g) for g in c.cone.generators], "fans": [F.max_cones_1based() for F in fans]}
            for c, fans in cells
        ],
    }
    if cells:
        out["summary"] = f"fillable; Nef = {_rays_text(nef)}; {len(cells)} filling cells"
    else:
        out["summary"] = f"NOT fillable; Nef = {_rays_text(nef)}; {n_ch} chambers, none filling"
        if args.strict:
            raise DomainNegative(out)
    return out


def cmd_complete(doc: InputDocument, args) -> dict:
    W = _require_fan(doc)
    if args.chamber is not None:
        chs = chambers(doc.Q, doc.V)
        if not 1 <= args.chamber <= len(chs):
            raise DocumentError("--chamber", f"chamber index must be in 1..{len(chs)}")
        gamma = chs[args.chamber - 1].cell
    else:
        cells = filling_cells(W)
        if not cells:
            raise DomainError("not fillable")
        gamma = cells[0][0]
    try:
        res = sharp_completion(W, gamma)
    except FanError as exc:
        raise DomainError(str(exc)) from None
    return {
        "summary": f"completion with Nef = {_rays_text(gamma.cone)}; complete: {'yes' if res.complete else 'no'}",
        "filling_cell": _cone(gamma.cone),
        "max_cones": res.completed_fan.max_cones_1based(),
        "irrelevant_ideal": res.irrelevant_ideal.generators_1based(),
        "complete": res.complete,
    }


def _parse_class(doc: InputDocument, text: str | None) -> DivisorClass:
    if text is None:
        raise DocumentError("--class", "a class is required, e.g. --class 1,2")
    try:
        vals = tuple(Fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise DocumentError("--class", f"cannot read {text!r}") from None
    if len(vals) != doc.Q.nrows:
        raise DocumentError("--class", f"expected {doc.Q.nrows} entries")
    return DivisorClass(tuple(v.numerator if v.denominator == 1 else v for v in vals))


def cmd_mmp(doc: InputDocument, args) -> dict:
    c = _parse_class(doc, getattr(args, "cls", None))
    rep = mmp_trace(doc.presentation(), c)
    out = {
        "class": list(c.free),
        "status": rep.status,
        "is_sqm": rep.is_sqm,
        "semiample": rep.semiample_flag,
        "incident_chambers": [[list(g) for g in ch.cone.generators] for ch in rep.incident_chambers],
    }
    if rep.target_chamber is not None:
        out["target_chamber"] = _cone(rep.target_chamber.cone)
        out["target_fan"] = rep.target_fan.max_cones_1based()
        out["target_is_fan"] = rep.target_is_fan
    out["summary"] = rep.status + (" (sQm)" if rep.is_sqm else "")
    if args.strict and rep.status == "not_effective":
        raise DomainNegative(out)
    return out


def cmd_sqm(doc: InputDocument, args) -> dict:
    targets = sqm_targets(doc.presentation())
    rows = [{"rays": [list(g) for g in c.cone.generators], "max_cones": F.max_cones_1based()} for c, F in targets]
    return {"summary": f"{len(rows)} small modifications", "targets": rows}


def cmd_anticanonical(doc: InputDocument, args) -> dict:
    p = doc.presentation()
    c = anticanonical_class(p)
    big, mov = is_big(c, doc.Q), is_movable(c, doc.Q)
    out = {
        "class": list(c.free),
        "big": big,
        "movable": mov,
        "summary": f"-K = {c}; big: {'yes' if big else 'no'}; movable: {'yes' if mov else 'no'}",
    }
    if c.torsion:
        out["torsion"] = list(c.torsion)
    if p.relations:
        ok, degs = check_homogeneous(p)
        out["homogeneous"] = ok
    return out


def cmd_plot(doc: InputDocument, args) -> dict:
    if not args.output:
        raise DocumentError("-o", "plot needs an output file")
    F = doc.fan()
    svg = render_svg(doc.Q, True, nef_cone(F) if F is not None else None, doc.name)
    Path(args.output).write_bytes(svg)
    return {"summary": f"wrote {args.output}", "bytes": len(svg)}


def _tsv(rows: list[list]) -> str:
    return "".join("\t".join(str(x) for x in row) + "\n" for row in rows)


def cmd_report(doc: InputDocument, args) -> dict:
    """Write delimited tables and the section figure into the output directory."""
    if not args.output:
        raise DocumentError("-o", "report needs an output directory")
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    files = []
    cones = cmd_cones(doc, args)
    summary = [["key", "value"], ["name", doc.name], ["r", doc.Q.nrows], ["m", doc.m]]
    for key in ("eff", "mov", "nef"):
        if key in cones:
            summary.append([key, json.dumps(cones[key]["rays"] if "rays" in cones[key] else cones[key])])
    anti = cmd_anticanonical(doc, args)
    summary += [["anticanonical", json.dumps(anti["class"])], ["big", anti["big"]], ["movable", anti["movable"]]]
    rows = _chamber_rows(doc)
    summary.append(["chambers", len(rows)])
    (outdir / "summary.tsv").write_text(_tsv(summary))
    files.append("summary.tsv")
    table = [["chamber", "rays", "is_fan", "max_cones", "irrelevant_ideal"]]
    for row in rows:
        table.append([row["chamber"], json.dumps(row["rays"]), row["is_fan"], json.dumps(row["max_cones"]), json.dumps(row["irrelevant_ideal"])])
    (outdir / "chambers.tsv").write_text(_tsv(table))
    files.append("chambers.tsv")
    if doc.Q.nrows in (2, 3):
        F = doc.fan()
        svg = render_svg(doc.Q, True, nef_cone(F) if F is not None else None, doc.name)
        (outdir / "section.svg").write_bytes(svg)
        files.append("section.svg")
    return {"summary": f"wrote {len(files)} files to {outdir}", "files": files}


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def _render_text(result: dict) -> str:
    lines = [str(result.get("summary", ""))]
    for k, v in result.items():
        if k == "summary":
            continue
        lines.append(f"{k}: {json.dumps(_jsonable(v), separators=(',', ':'))}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wmds", description="Combinatorics of weak Mori dream spaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("-i", "--input", required=True, help="YAML or JSON input document")
    p.add_argument("--mov", action="store_true", help="restrict the GKZ decomposition to Mov")
    p.add_argument("--chamber", type=int, help="1-based chamber index")
    p.add_argument("--class", dest="cls", help="divisor class, comma separated")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--strict", action="store_true", help="exit 1 on negative answers")
    p.add_argument("-o", "--output", help="output file (directory for report)")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    code = EXIT_OK
    try:
        doc = load(args.input)
        result = HANDLERS[args.command](doc, args)
    except DomainNegative as neg:
        result, code = neg.result, EXIT_DOMAIN
    except (DomainError, GkzError) as exc:
        print(f"wmds: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except BudgetExceeded as exc:
        print(f"wmds: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DocumentError, PresentationError, FanError, LatticeError, PlotError, OSError) as exc:
        print(f"wmds: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        text = json.dumps(_jsonable(result), indent=2, sort_keys=True) + "\n"
    else:
        text = _render_text(result)
    if args.output and args.command not in ("plot", "report"):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

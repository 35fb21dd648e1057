"""JSON forms for fields, elements, polynomials, reports and catalog entries.

Field descriptor: {"p": int, "modulus": [c0..cn] least degree first,
"generator": [coords]} (generator optional on input).  Elements serialize as
{"pow": k} for nonzero (preferred) or {"coords": [...]}; both are accepted
on input.  JSONL catalog entries round-trip bit-exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ZeroInput
from .families import BuiltFamily, ConstructionParams
from .fields import FieldCtx, FieldElement, QuadExtension, quad_extension
from .polynomials import RationalFunction, SparsePolynomial
from .verify import PermutationReport


def field_to_json(ctx: FieldCtx) -> dict:
    return {
        "p": ctx.p,
        "modulus": list(ctx.modulus),
        "generator": list(ctx.generator.coords()),
    }


def ext_to_json(ext: QuadExtension) -> dict:
    return field_to_json(ext.big)


def ext_from_json(d: dict) -> QuadExtension:
    n = len(d["modulus"]) - 1
    if n % 2 != 0:
        raise ZeroInput("quadratic-extension descriptor needs even degree")
    gen = d.get("generator")
    return quad_extension(d["p"], n // 2, d["modulus"], generator=gen)


def element_to_json(x: FieldElement) -> dict:
    if x.enc == 0:
        return {"coords": list(x.coords())}
    return {"pow": x.dlog()}


def element_from_json(d: dict, ctx: FieldCtx) -> FieldElement:
    if "pow" in d:
        return ctx.gen_pow(d["pow"])
    return ctx.element(d["coords"])


def poly_to_json(f: SparsePolynomial) -> dict:
    return {"terms": [[e, element_to_json(c)] for e, c in f.sorted_terms()]}


def poly_from_json(d: dict, ctx: FieldCtx) -> SparsePolynomial:
    return SparsePolynomial(
        ctx, [(e, element_from_json(c, ctx)) for e, c in d["terms"]]
    )


def rational_to_json(rf: RationalFunction) -> dict:
    return {"num": poly_to_json(rf.num), "den": poly_to_json(rf.den)}


def rational_from_json(d: dict, ctx: FieldCtx) -> RationalFunction:
    return RationalFunction(
        poly_from_json(d["num"], ctx), poly_from_json(d["den"], ctx)
    )


def report_to_json(rep: PermutationReport) -> dict:
    out = {"is_permutation": rep.is_permutation, "method": rep.method, "ms": rep.ms}
    if rep.gcd_ok is not None:
        out["gcd_ok"] = rep.gcd_ok
    if rep.circle_ok is not None:
        out["circle_ok"] = rep.circle_ok
    if rep.witness is not None:
        out["witness"] = [element_to_json(w) for w in rep.witness]
    return out


def report_from_json(d: dict, ctx: FieldCtx) -> PermutationReport:
    witness = d.get("witness")
    return PermutationReport(
        is_permutation=d["is_permutation"],
        method=d["method"],
        gcd_ok=d.get("gcd_ok"),
        circle_ok=d.get("circle_ok"),
        witness=tuple(element_from_json(w, ctx) for w in witness) if witness else None,
        ms=d.get("ms", 0.0),
    )


def params_to_json(params: ConstructionParams) -> dict:
    out = {
        "family": params.family,
        "beta": element_to_json(params.beta),
        "beta_t": element_to_json(params.beta_t),
        "delta": element_to_json(params.delta),
        "delta_t": element_to_json(params.delta_t),
    }
    if params.aux is not None:
        out["aux"] = element_to_json(params.aux)
    return out


def params_from_json(d: dict, ext: QuadExtension) -> ConstructionParams:
    big = ext.big
    aux = d.get("aux")
    return ConstructionParams(
        family=d["family"],
        beta=element_from_json(d["beta"], big),
        beta_t=element_from_json(d["beta_t"], big),
        delta=element_from_json(d["delta"], big),
        delta_t=element_from_json(d["delta_t"], big),
        aux=element_from_json(aux, big) if aux is not None else None,
    )


@dataclass
class CatalogEntry:
    ext: QuadExtension
    built: BuiltFamily
    report: PermutationReport
    provenance: str  # "paper-example" | "grid" | "user"
    qm_class: int | None = None
    negative_control: bool = False

    def __post_init__(self):
        if not self.negative_control:
            if self.report.method != "both" or not self.report.is_permutation:
                raise ZeroInput(
                    "catalog entries must verify by both methods unless "
                    "flagged as negative controls"
                )


def entry_to_json(entry: CatalogEntry) -> dict:
    built = entry.built
    out = {
        "field": ext_to_json(entry.ext),
        "family": built.family,
        "params": params_to_json(built.params),
        "poly": poly_to_json(built.poly),
        "r": built.r,
        "h": poly_to_json(built.h),
        "term_count": built.term_count,
        "report": report_to_json(entry.report),
        "provenance": entry.provenance,
    }
    if entry.qm_class is not None:
        out["qm_class"] = entry.qm_class
    if entry.negative_control:
        out["negative_control"] = True
    return out


def entry_from_json(d: dict):
    """Parsed view of a catalog line: (ext, params, poly, r, h, report, meta)."""
    ext = ext_from_json(d["field"])
    big = ext.big
    return {
        "ext": ext,
        "family": d["family"],
        "params": params_from_json(d["params"], ext),
        "poly": poly_from_json(d["poly"], big),
        "r": d["r"],
        "h": poly_from_json(d["h"], big),
        "term_count": d["term_count"],
        "report": report_from_json(d["report"], big),
        "provenance": d["provenance"],
        "qm_class": d.get("qm_class"),
        "negative_control": d.get("negative_control", False),
    }


def dumps_line(d: dict) -> str:
    """Canonical single-line JSON (sorted keys) for JSONL streams."""
    return json.dumps(d, sort_keys=True, separators=(",", ":"))


def entry_to_csv_row(d: dict) -> str:
    """Spreadsheet-friendly flattening: exponent:pow-of-g pairs."""
    flat = []
    for e, c in d["poly"]["terms"]:
        if "pow" in c:
            flat.append(f"{e}:g^{c['pow']}")
        else:
            flat.append(f"{e}:{c['coords']}")
    return ",".join(
        [
            d["family"],
            str(d["field"]["p"]),
            str(len(d["field"]["modulus"]) - 1),
            str(d["r"]),
            str(d["term_count"]),
            str(d["report"]["is_permutation"]),
            " ".join(flat),
        ]
    )


CSV_HEADER = "family,p,n,r,term_count,is_permutation,terms"

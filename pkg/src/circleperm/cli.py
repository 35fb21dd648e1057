"""Command-line surface.

Subcommands: construct, verify, qm-test, qm-classify, repro, field-info.
Exit codes: 0 success / true verdict, 1 false verdict, 2 input error,
3 cap exceeded.

Field elements on the command line: "g^k" (generator power), plain integers
(prime-subfield embedding, negatives allowed), or coordinate vectors
"[c0,c1,...]".  JSON operands are inline when they start with '{', else
treated as file paths.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import repro as repro_mod
from .errors import CapExceeded, CirclepermError, InvalidParams, LimitExceeded
from .families import (
    FAMILIES,
    ConstructionParams,
    GridLimits,
    build_family,
    derive_beta_t,
    param_grid,
)
from .fields import FieldElement, QuadExtension, field_create, quad_extension
from .qm import classify_catalog, qm_equivalent
from .serialize import (
    CSV_HEADER,
    CatalogEntry,
    dumps_line,
    entry_to_csv_row,
    entry_to_json,
    ext_from_json,
    ext_to_json,
    poly_from_json,
    report_to_json,
)
from .verify import EXHAUSTIVE_CAP, decompose, is_permutation_exhaustive, verify_both


def parse_element(text: str, ext: QuadExtension) -> FieldElement:
    big = ext.big
    s = text.strip()
    neg = False
    if s.startswith("-g"):
        s = s[1:]
        neg = True
    if s == "g":
        out = big.generator
    elif s.startswith("g^"):
        out = big.gen_pow(int(s[2:]))
    elif s.startswith("["):
        out = big.element(json.loads(s))
    else:
        out = big.from_int(int(s))
    return -out if neg else out


def _load_json_operand(text: str) -> dict:
    s = text.strip()
    if s.startswith("{"):
        return json.loads(s)
    with open(s, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _field_from_args(args) -> QuadExtension:
    if getattr(args, "field", None):
        return ext_from_json(_load_json_operand(args.field))
    if args.p is None or args.m is None:
        raise CirclepermError("need --field or both --p and --m")
    modulus = json.loads(args.modulus) if getattr(args, "modulus", None) else None
    return quad_extension(args.p, args.m, modulus)


def _add_field_args(sp):
    sp.add_argument("--field", help="field descriptor JSON (inline or path)")
    sp.add_argument("--p", type=int, help="characteristic")
    sp.add_argument("--m", type=int, help="subfield degree: the field is GF(p^2m)")
    sp.add_argument("--modulus", help="modulus coefficients JSON, least degree first")


def _emit(stream, text):
    stream.write(text + "\n")


def cmd_construct(args) -> int:
    ext = _field_from_args(args)
    if ext.big.order > args.cap:
        raise CapExceeded(f"field order {ext.big.order} above --cap {args.cap}")
    if args.family not in FAMILIES:
        raise CirclepermError(f"unknown family {args.family!r}")
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        if args.format == "csv":
            _emit(out, CSV_HEADER)
        if args.grid:
            limits = GridLimits(
                cap_order=args.cap,
                max_count=args.max_count,
                delta_stride=args.delta_stride,
                delta_t_stride=args.delta_t_stride,
            )
            for entry in construct_grid_entries(ext, args.family, limits, args.workers):
                line = entry_to_json(entry)
                _emit(out, entry_to_csv_row(line) if args.format == "csv" else dumps_line(line))
            return 0
        if not (args.beta and args.delta and args.delta_t):
            raise CirclepermError("single construction needs --beta, --delta, --delta-t")
        beta = parse_element(args.beta, ext)
        beta_t = (
            parse_element(args.beta_t, ext) if args.beta_t else derive_beta_t(args.family, beta)
        )
        params = ConstructionParams(
            args.family,
            beta,
            beta_t,
            parse_element(args.delta, ext),
            parse_element(args.delta_t, ext),
            parse_element(args.aux, ext) if args.aux else None,
        )
        built = build_family(args.family, params, ext)
        report = verify_both(built.r, built.h, built.poly, ext, cap=args.cap)
        entry = CatalogEntry(ext, built, report, "user")
        line = entry_to_json(entry)
        _emit(out, entry_to_csv_row(line) if args.format == "csv" else dumps_line(line))
        return 0
    finally:
        if out is not sys.stdout:
            out.close()


def construct_grid_entries(ext, family, limits: GridLimits, workers: int = 1):
    """CatalogEntry stream in grid order, independent of worker scheduling."""

    def build_one(params):
        built = build_family(family, params, ext)
        report = verify_both(built.r, built.h, built.poly, ext, cap=limits.cap_order)
        return CatalogEntry(ext, built, report, "grid")

    if workers <= 1:
        for params in param_grid(family, ext, limits):
            yield build_one(params)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(build_one, param_grid(family, ext, limits))


def cmd_verify(args) -> int:
    # odd-degree descriptors run the exhaustive check only (no quad structure)
    ctx = None
    if args.field:
        desc = _load_json_operand(args.field)
        if (len(desc["modulus"]) - 1) % 2:
            ctx = field_create(desc["p"], desc["modulus"], desc.get("generator"))
    ext = None if ctx is not None else _field_from_args(args)
    big = ctx if ctx is not None else ext.big
    if big.order > args.cap:
        raise CapExceeded(f"field order {big.order} above --cap {args.cap}")
    poly = poly_from_json(_load_json_operand(args.poly), big)
    dec = decompose(poly.reduce_exponents(), ext) if ext is not None else None
    if dec is None:
        report = is_permutation_exhaustive(poly, big, cap=args.cap)
    else:
        report = verify_both(dec[0], dec[1], poly.reduce_exponents(), ext, cap=args.cap)
    _emit(sys.stdout, dumps_line(report_to_json(report)))
    return 0 if report.is_permutation else 1


def cmd_qm_test(args) -> int:
    ext = _field_from_args(args)
    f = poly_from_json(_load_json_operand(args.f), ext.big)
    g = poly_from_json(_load_json_operand(args.g), ext.big)
    res = qm_equivalent(f, g, ext, cap=args.cap)
    out = {
        "equivalent": res.equivalent,
        "d_candidates_examined": res.d_candidates_examined,
        "prefilter_rejected": res.prefilter_rejected,
    }
    if res.witness:
        u, v, d = res.witness
        out["witness"] = {"u": {"pow": u.dlog()}, "v": {"pow": v.dlog()}, "d": d}
    _emit(sys.stdout, dumps_line(out))
    return 0 if res.equivalent else 1


def cmd_qm_classify(args) -> int:
    with open(args.catalog, "r", encoding="utf-8") as fh:
        lines = [json.loads(line) for line in fh if line.strip()]
    if not lines:
        raise CirclepermError("empty catalog")
    field_desc = lines[0]["field"]
    if any(e["field"] != field_desc for e in lines):
        raise CirclepermError("catalog mixes field descriptors")
    ext = ext_from_json(field_desc)
    polys = [poly_from_json(e["poly"], ext.big) for e in lines]
    part = classify_catalog(polys, ext, cap=args.cap)
    _emit(
        sys.stdout,
        dumps_line({"classes": part.classes, "representatives": part.representatives}),
    )
    return 0


def cmd_repro(_args) -> int:
    results = repro_mod.run_all()
    print(repro_mod.format_results(results))
    failures = sum(1 for r in results if not r.passed)
    print(f"{len(results) - failures}/{len(results)} reproduction cases passed")
    return 1 if failures else 0


def cmd_field_info(args) -> int:
    ext = _field_from_args(args)
    info = ext_to_json(ext)
    info["q"] = ext.q
    info["order"] = ext.big.order
    info["generator_is_root"] = ext.big.generator_is_root
    _emit(sys.stdout, dumps_line(info))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="circleperm",
        description="few-term permutation polynomials of GF(q^2) from circle bijections",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("construct", help="build one family instance or a whole grid")
    _add_field_args(sp)
    sp.add_argument("--family", required=True, choices=sorted(FAMILIES))
    sp.add_argument("--beta")
    sp.add_argument("--beta-t", dest="beta_t")
    sp.add_argument("--delta")
    sp.add_argument("--delta-t", dest="delta_t")
    sp.add_argument("--aux")
    sp.add_argument("--grid", action="store_true", help="emit every valid tuple")
    sp.add_argument("--max-count", type=int, default=None)
    sp.add_argument("--delta-stride", type=int, default=1)
    sp.add_argument("--delta-t-stride", type=int, default=1)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--cap", type=int, default=EXHAUSTIVE_CAP)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="permutation verdict for a polynomial")
    _add_field_args(sp)
    sp.add_argument("--poly", required=True, help="polynomial JSON (inline or path)")
    sp.add_argument("--cap", type=int, default=EXHAUSTIVE_CAP)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("qm-test", help="quasi-multiplicative equivalence of f and g")
    _add_field_args(sp)
    sp.add_argument("--f", required=True)
    sp.add_argument("--g", required=True)
    sp.add_argument("--cap", type=int, default=1 << 12)
    sp.set_defaults(func=cmd_qm_test)

    sp = sub.add_parser("qm-classify", help="partition a catalog into QM classes")
    sp.add_argument("--catalog", required=True, help="JSONL catalog path")
    sp.add_argument("--cap", type=int, default=1 << 12)
    sp.set_defaults(func=cmd_qm_classify)

    sp = sub.add_parser("repro", help="rebuild the embedded worked examples")
    sp.set_defaults(func=cmd_repro)

    sp = sub.add_parser("field-info", help="describe a field context")
    _add_field_args(sp)
    sp.set_defaults(func=cmd_field_info)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidParams as exc:
        print(json.dumps({"violations": exc.violations}), file=sys.stderr)
        return 2
    except (CapExceeded, LimitExceeded) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 3
    except (CirclepermError, OSError, ValueError, KeyError) as exc:
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Permutation verdicts: exhaustive evaluation and the structural criterion.

The structural route tests f = X^r * h(X^(q-1)) over GF(q^2) through
gcd(r, q-1) = 1 plus injectivity of z -> z^r * h(z)^(q-1) on the unit
circle; the exhaustive route evaluates f at every field element.  The two
must always agree; a disagreement raises instead of reporting.

Exhaustive evaluation enumerates points in generator-power order
(0, g^0, g^1, ...) so collision witnesses are reproducible across runs and
partitionings.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .errors import CapExceeded, InvalidParams
from .families import h_variants, kind_of, _coeffs_raw, validate_params
from .fields import FieldCtx, FieldElement, QuadExtension
from .polynomials import SparsePolynomial

EXHAUSTIVE_CAP = 1 << 16


@dataclass
class PermutationReport:
    is_permutation: bool
    method: str  # "exhaustive" | "criterion" | "both"
    gcd_ok: bool | None = None
    circle_ok: bool | None = None
    witness: tuple[FieldElement, FieldElement] | None = None
    ms: float = 0.0
    detail: dict = field(default_factory=dict)


def is_permutation_exhaustive(f: SparsePolynomial, ctx: FieldCtx,
                              cap: int = EXHAUSTIVE_CAP) -> PermutationReport:
    """Evaluate f everywhere; witness = first collision in generator order."""
    if ctx.order > cap:
        raise CapExceeded(f"field order {ctx.order} above exhaustive cap {cap}")
    t0 = time.perf_counter()
    order = ctx.order
    first_preimage = [-1] * order  # value enc -> enc of first x hitting it
    witness = None

    def record(x_enc: int, v_enc: int):
        nonlocal witness
        prev = first_preimage[v_enc]
        if prev >= 0:
            return (FieldElement(ctx, prev), FieldElement(ctx, x_enc))
        first_preimage[v_enc] = x_enc
        return None

    witness = record(0, f.coeff(0).enc)
    if witness is None:
        m = order - 1
        if ctx._log is not None:
            exp_t = ctx._exp
            terms = [(e, ctx._log[c.enc]) for e, c in f.terms.items()]
            if ctx.p == 2:
                for k in range(m):
                    acc = 0
                    for e, lc in terms:
                        acc ^= exp_t[(lc + e * k) % m]
                    witness = record(exp_t[k], acc)
                    if witness is not None:
                        break
            else:
                coords = ctx._coords_cache
                n = ctx.n
                p = ctx.p
                to_enc = ctx.coords_to_enc
                for k in range(m):
                    acc = [0] * n
                    for e, lc in terms:
                        cv = coords[exp_t[(lc + e * k) % m]]
                        for i in range(n):
                            acc[i] += cv[i]
                    witness = record(exp_t[k], to_enc([v % p for v in acc]))
                    if witness is not None:
                        break
        else:
            g_enc = ctx.generator.enc
            x = 1
            for _ in range(m):
                acc = 0
                for e, c in f.terms.items():
                    acc = ctx.add_enc(acc, ctx.mul_enc(c.enc, ctx.pow_enc(x, e)))
                witness = record(x, acc)
                if witness is not None:
                    break
                x = ctx.mul_enc(x, g_enc)
    ms = (time.perf_counter() - t0) * 1000.0
    return PermutationReport(
        is_permutation=witness is None,
        method="exhaustive",
        witness=witness,
        ms=ms,
    )


def h_no_circle_root(h: SparsePolynomial, ext: QuadExtension):
    """(True, None) when h vanishes nowhere on the unit circle, else the root."""
    for z in ext.circle_members():
        if h.eval(z).enc == 0:
            return False, z
    return True, None


def criterion_check(r: int, h: SparsePolynomial, ext: QuadExtension) -> PermutationReport:
    """Structural verdict for X^r * h(X^(q-1)) over GF(q^2).

    gcd_ok tests gcd(r, q-1) = 1; circle_ok tests that z -> z^r h(z)^(q-1)
    is injective on the circle (a circle root of h is a definite failure:
    it maps that z to 0, which is off the circle).
    """
    if h.is_zero():
        raise InvalidParams(["h must be nonzero"])
    t0 = time.perf_counter()
    q = ext.q
    gcd_ok = math.gcd(r, q - 1) == 1
    circle_ok = True
    detail = {}
    seen = {}
    for z in ext.circle_members():
        hv = h.eval(z)
        if hv.enc == 0:
            circle_ok = False
            detail["circle_root"] = z
            break
        img = (z**r * hv ** (q - 1)).enc
        if img in seen:
            circle_ok = False
            detail["circle_collision"] = (seen[img], z)
            break
        seen[img] = z
    ms = (time.perf_counter() - t0) * 1000.0
    return PermutationReport(
        is_permutation=gcd_ok and circle_ok,
        method="criterion",
        gcd_ok=gcd_ok,
        circle_ok=circle_ok,
        ms=ms,
        detail=detail,
    )


def verify_both(r: int, h: SparsePolynomial, f: SparsePolynomial, ext: QuadExtension,
                cap: int = EXHAUSTIVE_CAP) -> PermutationReport:
    """Run both methods; agreement is a hard invariant, never a report."""
    crit = criterion_check(r, h, ext)
    exh = is_permutation_exhaustive(f, ext.big, cap=cap)
    if crit.is_permutation != exh.is_permutation:
        raise AssertionError(
            "criterion and exhaustive verdicts disagree: "
            f"criterion={crit.is_permutation} exhaustive={exh.is_permutation} f={f}"
        )
    return PermutationReport(
        is_permutation=exh.is_permutation,
        method="both",
        gcd_ok=crit.gcd_ok,
        circle_ok=crit.circle_ok,
        witness=exh.witness,
        ms=crit.ms + exh.ms,
        detail=crit.detail,
    )


def h_family_equivalence(kind: str, params, ext: QuadExtension) -> bool:
    """Root-absence verdicts of h and every shifted h_i coincide on the circle.

    Valid parameters force all verdicts to "no root"; any mismatch between
    variants falsifies the shift structure.
    """
    violations = validate_params(params.family, params, ext)
    if violations:
        raise InvalidParams(violations)
    if kind_of(params.family) != kind:
        raise InvalidParams([f"family {params.family} is not of kind {kind}"])
    system = _coeffs_raw(kind, params.beta, params.beta_t, params.delta,
                         params.delta_t, params.aux, ext)
    verdicts = [
        h_no_circle_root(h, ext)[0] for h in h_variants(kind, system, ext)
    ]
    return all(v == verdicts[0] for v in verdicts)


def decompose(f: SparsePolynomial, ext: QuadExtension):
    """(r, h) with f = X^r * h(X^(q-1)) and r in [1, q-1], or None.

    Exists iff all exponents of f share one residue class mod q-1; the
    canonical representative r is the least positive member of the class.
    """
    if f.is_zero():
        raise InvalidParams(["cannot decompose the zero polynomial"])
    q = ext.q
    exps = sorted(f.terms)
    r = (exps[0] - 1) % (q - 1) + 1
    h_terms = []
    for e in exps:
        if (e - r) % (q - 1) != 0 or e < r:
            return None
        h_terms.append(((e - r) // (q - 1), f.terms[e]))
    return r, SparsePolynomial(ext.big, h_terms)


def expand_decomposition(r: int, h: SparsePolynomial, ext: QuadExtension
                         ) -> SparsePolynomial:
    """X^r * h(X^(q-1)) with exponents reduced into [1, q^2-1]."""
    q = ext.q
    m = ext.big.order - 1
    pairs = []
    for e, c in h.terms.items():
        raw = e * (q - 1) + r
        pairs.append(((raw - 1) % m + 1 if raw else 0, c))
    return SparsePolynomial(ext.big, pairs)

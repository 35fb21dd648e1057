"""Quasi-multiplicative equivalence and the registry of known families.

f ~ g over GF(q^2) iff f(X) = u * g(v * X^d) for units u, v and some
1 <= d < q^2-1 coprime to q^2-1.  The decision procedure walks d ascending;
an exponent-set prefilter (the support of g scaled by d mod q^2-1 must equal
the support of f) removes most candidates, after which v is pinned down by a
coefficient-ratio root equation and u by a single coefficient, with every
remaining coefficient verified.  A brute-force v enumeration is kept as an
independent path and the prefilter can be switched off entirely.

Functional comparison happens on exponent-reduced polynomials: the
fixpoint convention of reduce_exponents keeps positive exponents positive,
so coefficient equality is equivalent to pointwise equality on the field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import CapExceeded, NotInstantiable, ZeroInput
from .fields import FieldElement, QuadExtension
from .polynomials import SparsePolynomial

QM_CAP = 1 << 12


@dataclass
class QmResult:
    equivalent: bool
    witness: tuple[FieldElement, FieldElement, int] | None = None
    d_candidates_examined: int = 0
    prefilter_rejected: int = 0


def apply_qm(g: SparsePolynomial, u: FieldElement, v: FieldElement, d: int
             ) -> SparsePolynomial:
    """u * g(v * X^d), exponent-reduced."""
    ctx = g.ctx
    m = ctx.order - 1
    pairs = []
    for e, c in g.terms.items():
        pairs.append(((e * d - 1) % m + 1 if e else 0, u * c * v**e))
    return SparsePolynomial(ctx, pairs)


def qm_equivalent(f: SparsePolynomial, g: SparsePolynomial, ext: QuadExtension,
                  cap: int = QM_CAP, prefilter: bool = True,
                  v_bruteforce: bool = False) -> QmResult:
    """Decide f ~ g; any valid witness is acceptable, found in ascending-d order."""
    big = ext.big
    if big.order > cap:
        raise CapExceeded(f"field order {big.order} above qm search cap {cap}")
    if f.is_zero() or g.is_zero():
        raise ZeroInput("qm comparison needs nonzero polynomials")
    f = f.reduce_exponents()
    g = g.reduce_exponents()
    m = big.order - 1
    supp_f = frozenset(f.terms)
    g_terms = sorted(g.terms.items(), key=lambda t: -t[0])
    examined = 0
    rejected = 0
    for d in range(1, m):
        if math.gcd(d, m) != 1:
            continue
        mapped = frozenset((e * d - 1) % m + 1 for e, _ in g_terms)
        if prefilter and mapped != supp_f:
            rejected += 1
            continue
        examined += 1
        witness = _complete_for_d(f, g_terms, d, m, big, v_bruteforce)
        if witness is not None:
            return QmResult(True, witness, examined, rejected)
    return QmResult(False, None, examined, rejected)


def _complete_for_d(f, g_terms, d, m, big, v_bruteforce):
    """Search (u, v) with f = u*g(v X^d); None when no completion exists."""
    e1, c1 = g_terms[0]
    t1 = f.terms.get((e1 * d - 1) % m + 1)
    if t1 is None:
        return None
    if len(g_terms) == 1:
        v = big.one()
        u = t1 / c1  # any v works; v = 1 keeps the witness canonical
        if _verify_map(f, g_terms, u, v, d, m):
            return (u, v, d)
        return None
    e2, c2 = g_terms[1]
    t2 = f.terms.get((e2 * d - 1) % m + 1)
    if t2 is None:
        return None
    if v_bruteforce:
        v_candidates = (big.gen_pow(y) for y in range(m))
    else:
        # u*c1*v^e1 = t1 and u*c2*v^e2 = t2 force v^(e1-e2) = (t1*c2)/(t2*c1)
        ratio = (t1 * c2) / (t2 * c1)
        rho_log = big.log_enc(ratio.enc)
        delta = (e1 - e2) % m
        t = math.gcd(delta, m)
        if rho_log % t != 0:
            return None
        step = m // t
        y0 = rho_log // t * pow(delta // t, -1, step) % step
        v_candidates = (big.gen_pow(y0 + j * step) for j in range(t))
    for v in v_candidates:
        u = t1 / (c1 * v**e1)
        if _verify_map(f, g_terms, u, v, d, m):
            return (u, v, d)
    return None


def _verify_map(f, g_terms, u, v, d, m):
    if len(f.terms) != len(g_terms):
        return False
    for e, c in g_terms:
        target = f.terms.get((e * d - 1) % m + 1)
        if target is None or u * c * v**e != target:
            return False
    return True


def qm_verify_witness(f, g, witness, ext) -> bool:
    """Re-expand u*g(vX^d) and compare reduced polynomials coefficient-wise."""
    u, v, d = witness
    if not (1 <= d < ext.big.order - 1 and math.gcd(d, ext.big.order - 1) == 1):
        return False
    if u.enc == 0 or v.enc == 0:
        return False
    return apply_qm(g.reduce_exponents(), u, v, d) == f.reduce_exponents()


# ---------------------------------------------------------------------------
# registry of known few-term families


@dataclass(frozen=True)
class KnownFamily:
    id: str
    shape: str  # human-readable term template
    conditions: str
    source: str  # registry table position
    instantiable: bool = True


@dataclass
class KnownInstance:
    family_id: str
    poly: SparsePolynomial
    tags: dict = field(default_factory=dict)


def _h1_instances(ext):
    # X^{q+2} + bX, b outside the subfield, b^{3(q-1)} = 1, m > 1 odd
    if ext.big.p != 2 or ext.m <= 1 or ext.m % 2 == 0:
        return
    yield from h1_form_instances(ext, require_outside_subfield=True)


def h1_form_instances(ext, require_outside_subfield=True):
    """X^{q+2} + bX over GF(q^2) for every b != 0 with b^(3(q-1)) = 1."""
    big = ext.big
    q = ext.q
    m = big.order - 1
    step = m // math.gcd(3 * (q - 1), m)
    for k in range(0, m, step):
        b = big.gen_pow(k)
        if require_outside_subfield and ext.in_subfield(b):
            continue
        poly = SparsePolynomial(big, [(q + 2, big.one()), (1, b)])
        yield KnownInstance("H1", poly.reduce_exponents(), {"b": b})


def _h2_instances(ext):
    if ext.big.p != 2:
        return
    n = ext.big.n
    big = ext.big
    m = big.order - 1
    for s in (1, 2):
        if n % (1 << s) != 0:
            continue
        t = n >> s
        if t % 2 == 0:
            continue
        exp = (2**n - 1) // (2**t - 1) + 1
        omega = big.gen_pow(m // 3)  # order-3 element; exists since n is even
        sub_step = m // (2**t - 1)
        for w in (omega, omega * omega):
            for j in range(2**t - 1):
                a = w * big.gen_pow(j * sub_step)
                poly = SparsePolynomial(big, [(exp, big.one()), (1, a)])
                yield KnownInstance(
                    "H2", poly.reduce_exponents(), {"a": a, "s": s, "t": t}
                )


def _h7_instances(ext):
    # X^{d'} + aX with d' = (2^n-1)/(2^k-1), n = r*k; k >= 2 (k = 1 rows of
    # the source table are abbreviations that do not yield permutations)
    if ext.big.p != 2:
        return
    n = ext.big.n
    big = ext.big
    for k in range(2, n // 2 + 1):
        if n % k:
            continue
        r = n // k
        dprime = (2**n - 1) // (2**k - 1)
        if math.gcd(dprime - 1, 2**k - 1) != 1 or math.gcd(r, 2**k - 1) != 1:
            continue
        m = big.order - 1
        sub = {big.exp_enc(j * (m // (2**k - 1))) for j in range(2**k - 1)}
        for y in range(m):
            a_enc = big.exp_enc(y)
            if a_enc in sub:
                continue
            a = big.from_enc(a_enc)
            poly = SparsePolynomial(big, [(dprime, big.one()), (1, a)])
            yield KnownInstance("H7", poly.reduce_exponents(), {"a": a, "k": k, "r": r})


def _f1_instances(ext):
    if ext.big.p != 3:
        return
    big = ext.big
    q = ext.q
    minus_one = -big.one()
    for a in ext.subfield_members():
        if a.enc == 0 or a == minus_one or not ext.is_square_sub(a):
            continue
        poly = SparsePolynomial(
            big, [(3, big.one()), (q + 2, a), (2 * q + 1, -a), (3 * q, a)]
        )
        yield KnownInstance("F1", poly.reduce_exponents(), {"a": a})


def _f9_instances(ext):
    if ext.big.p != 5 or ext.m % 2 == 0:
        return
    big = ext.big
    q = ext.q
    minus_one = -big.one()
    two = big.from_int(2)
    four = big.from_int(4)
    for a in ext.subfield_members():
        if a == minus_one:
            continue
        poly = SparsePolynomial(
            big, [(3, big.one()), (q + 2, a), (2 * q + 1, a + two), (3 * q, four)]
        )
        yield KnownInstance(
            "F9", poly.reduce_exponents(), {"a": a, "terms": len(poly.terms)}
        )


def _g1_instances(ext):
    if ext.big.p != 2 or ext.m % 4 == 0:
        return
    big = ext.big
    q = ext.q
    one = big.one()
    poly = SparsePolynomial(
        big, [(5, one), (q + 4, one), (3 * q + 2, one), (4 * q + 1, one), (5 * q, one)]
    )
    yield KnownInstance("G1", poly.reduce_exponents(), {})


_INSTANTIATORS = {
    "H1": _h1_instances,
    "H2": _h2_instances,
    "H7": _h7_instances,
    "F1": _f1_instances,
    "F9": _f9_instances,
    "G1": _g1_instances,
}

KNOWN_FAMILIES: dict[str, KnownFamily] = {}


def _register():
    rows = [
        KnownFamily("H1", "X^(q+2) + b*X", "b outside GF(q), b^(3(q-1))=1, m>1 odd",
                    "binomial registry row 1"),
        KnownFamily("H2", "X^((2^n-1)/(2^t-1)+1) + a*X",
                    "n=2^s*t, s in {1,2}, t odd, a in w*GF(2^t)* U w^2*GF(2^t)*",
                    "binomial registry row 2"),
        KnownFamily("H3", "X^(3q-2) + a*X", "prose-only side conditions",
                    "binomial registry row 3", instantiable=False),
        KnownFamily("H4", "X^(r(q-1)+1) + a*X", "r in {5,7}; prose-only side conditions",
                    "binomial registry row 4", instantiable=False),
        KnownFamily("H5", "X^(2q+3) + a*X", "prose-only side conditions",
                    "binomial registry row 5", instantiable=False),
        KnownFamily("H6", "X^(2q+4) + a*X^2", "prose-only side conditions",
                    "binomial registry row 6", instantiable=False),
        KnownFamily("H7", "X^((2^rk-1)/(2^k-1)) + a*X",
                    "n=rk, k>=2, gcd(d'-1,2^k-1)=gcd(r,2^k-1)=1, a outside GF(2^k)*",
                    "binomial registry row 7"),
        KnownFamily("H8", "X^(6q-5) + a*X", "prose-only side conditions",
                    "binomial registry row 8", instantiable=False),
        KnownFamily("F1", "X^3 + a*X^(q+2) - a*X^(2q+1) + a*X^(3q)",
                    "p=3, a a nonzero square in GF(q), a != -1",
                    "quadrinomial registry row 1"),
        KnownFamily("F9", "X^3 + a*X^(q+2) + (a+2)*X^(2q+1) + 4*X^(3q)",
                    "p=5, m odd, a in GF(q), a != -1",
                    "quadrinomial registry row 9"),
        KnownFamily("G1", "X^5 + X^(q+4) + X^(3q+2) + X^(4q+1) + X^(5q)",
                    "p=2, m not divisible by 4", "pentanomial registry row 1"),
    ]
    for row in rows:
        KNOWN_FAMILIES[row.id] = row
    for i in list(range(2, 9)) + list(range(10, 20)):
        fid = f"F{i}"
        if fid not in KNOWN_FAMILIES:
            KNOWN_FAMILIES[fid] = KnownFamily(
                fid, "X^3 + a*X^(q+2) + b*X^(2q+1) + c*X^(3q)",
                "out-of-scope registry stub", f"quadrinomial registry row {i}",
                instantiable=False)
    for i in range(2, 37):
        fid = f"G{i}"
        if fid not in KNOWN_FAMILIES:
            KNOWN_FAMILIES[fid] = KnownFamily(
                fid, "five terms", "out-of-scope registry stub",
                f"pentanomial registry row {i}", instantiable=False)


_register()


def instantiate_known(family_id: str, ext: QuadExtension):
    """Every instance of a registry row valid at this field; NotInstantiable
    for rows whose side conditions are not closed-form."""
    row = KNOWN_FAMILIES.get(family_id)
    if row is None:
        raise KeyError(f"unknown registry id {family_id}")
    if not row.instantiable:
        raise NotInstantiable(f"{family_id}: {row.conditions}")
    return list(_INSTANTIATORS[family_id](ext))


# ---------------------------------------------------------------------------
# catalog classification


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass
class QmPartition:
    classes: list[list[int]]  # index lists, each sorted; deterministic order
    representatives: list[int]  # index of the minimal polynomial per class


def classify_catalog(polys: list[SparsePolynomial], ext: QuadExtension,
                     cap: int = QM_CAP) -> QmPartition:
    """Partition under qm_equivalent; representatives minimal in degree-then-lex."""
    uf = UnionFind(len(polys))
    reduced = [p.reduce_exponents() for p in polys]
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            if uf.find(i) == uf.find(j):
                continue
            if qm_equivalent(reduced[i], reduced[j], ext, cap=cap).equivalent:
                uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for i in range(len(polys)):
        groups.setdefault(uf.find(i), []).append(i)
    classes = []
    reps = []
    for members in groups.values():
        members.sort()
        rep = min(members, key=lambda i: reduced[i].canonical_key())
        classes.append(members)
        reps.append(rep)
    order = sorted(range(len(classes)), key=lambda c: reduced[reps[c]].canonical_key())
    return QmPartition([classes[i] for i in order], [reps[i] for i in order])

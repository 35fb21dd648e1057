import math
import random

import pytest

from circleperm.errors import CapExceeded, NotInstantiable, ZeroInput
from circleperm.families import ConstructionParams, GridLimits, build_family, param_grid
from circleperm.polynomials import SparsePolynomial
from circleperm.qm import (
    KNOWN_FAMILIES,
    apply_qm,
    classify_catalog,
    h1_form_instances,
    instantiate_known,
    qm_equivalent,
    qm_verify_witness,
)
from circleperm.verify import is_permutation_exhaustive
from conftest import get_ext


def rand_poly(ctx, rnd, max_terms=4):
    m = ctx.order - 1
    n = rnd.randint(1, max_terms)
    exps = rnd.sample(range(1, m + 1), n)
    return SparsePolynomial(ctx, [(e, ctx.gen_pow(rnd.randrange(m))) for e in exps])


def rand_witness(ctx, rnd):
    m = ctx.order - 1
    d = rnd.choice([d for d in range(1, m) if math.gcd(d, m) == 1])
    return ctx.gen_pow(rnd.randrange(m)), ctx.gen_pow(rnd.randrange(m)), d


def q1_example_poly(ext25):
    big = ext25.big
    g = big.generator
    params = ConstructionParams("Q1", -big.one(), big.one(), g, g, None)
    return build_family("Q1", params, ext25).poly


class TestSearch:
    def test_reflexive_with_identity_witness(self, ext25):
        f = q1_example_poly(ext25)
        res = qm_equivalent(f, f, ext25)
        u, v, d = res.witness
        assert res.equivalent and (u.enc, v.enc, d) == (1, 1, 1)

    def test_random_twists_recovered(self, ext25):
        f = q1_example_poly(ext25)
        rnd = random.Random(23)
        for _ in range(20):
            u, v, d = rand_witness(ext25.big, rnd)
            twisted = apply_qm(f, u, v, d)
            res = qm_equivalent(f, twisted, ext25)
            assert res.equivalent
            assert qm_verify_witness(f, twisted, res.witness, ext25)

    def test_witness_functional_equality(self, ext25):
        # beyond coefficient equality: the witness map agrees pointwise
        f = q1_example_poly(ext25)
        big = ext25.big
        twisted = apply_qm(f, big.gen_pow(5), big.gen_pow(7), 7)
        res = qm_equivalent(f, twisted, ext25)
        u, v, d = res.witness
        for x in big.elements():
            assert f.eval(x) == u * twisted.eval(v * x**d)

    def test_symmetry_with_derived_witness(self, ext25):
        f = q1_example_poly(ext25)
        big = ext25.big
        m = big.order - 1
        g_poly = apply_qm(f, big.gen_pow(3), big.gen_pow(11), 11)
        res = qm_equivalent(f, g_poly, ext25)
        u, v, d = res.witness
        d_inv = pow(d, -1, m)
        reverse = (u.inverse(), (v**d_inv).inverse(), d_inv)
        assert qm_verify_witness(g_poly, f, reverse, ext25)
        assert qm_equivalent(g_poly, f, ext25).equivalent

    def test_transitivity_sample(self, ext25):
        f = q1_example_poly(ext25)
        big = ext25.big
        g1 = apply_qm(f, big.gen_pow(2), big.gen_pow(9), 5)
        g2 = apply_qm(g1, big.gen_pow(17), big.gen_pow(4), 7)
        assert qm_equivalent(f, g1, ext25).equivalent
        assert qm_equivalent(g1, g2, ext25).equivalent
        assert qm_equivalent(f, g2, ext25).equivalent

    def test_preserves_permutation_and_terms(self, ext25):
        f = q1_example_poly(ext25)
        big = ext25.big
        rnd = random.Random(5)
        for _ in range(5):
            u, v, d = rand_witness(big, rnd)
            tw = apply_qm(f, u, v, d)
            assert len(tw.terms) == len(f.terms)
            assert is_permutation_exhaustive(tw, big).is_permutation

    def test_counts_add_up(self, ext25):
        big = ext25.big
        f = q1_example_poly(ext25)
        other = SparsePolynomial.x_power(big, 2)  # different support size
        res = qm_equivalent(f, other, ext25)
        m = big.order - 1
        coprime = sum(1 for d in range(1, m) if math.gcd(d, m) == 1)
        assert not res.equivalent
        assert res.prefilter_rejected == coprime and res.d_candidates_examined == 0

    def test_prefilter_agrees_with_unfiltered(self):
        rnd = random.Random(41)
        for p, m in [(3, 1), (2, 2)]:
            ext = get_ext(p, m)
            for _ in range(50):
                a = rand_poly(ext.big, rnd)
                b = rand_poly(ext.big, rnd)
                fast = qm_equivalent(a, b, ext)
                slow = qm_equivalent(a, b, ext, prefilter=False, v_bruteforce=True)
                assert fast.equivalent == slow.equivalent
                if fast.equivalent:
                    assert qm_verify_witness(a, b, fast.witness, ext)
                    assert qm_verify_witness(a, b, slow.witness, ext)

    def test_v_solver_paths_agree(self, ext25):
        f = q1_example_poly(ext25)
        big = ext25.big
        tw = apply_qm(f, big.gen_pow(13), big.gen_pow(2), 13)
        r1 = qm_equivalent(f, tw, ext25)
        r2 = qm_equivalent(f, tw, ext25, v_bruteforce=True)
        assert r1.equivalent and r2.equivalent
        assert qm_verify_witness(f, tw, r2.witness, ext25)

    def test_cap(self):
        from conftest import MOD_2_12

        ext = get_ext(2, 6, tuple(MOD_2_12))  # order 4096 = cap boundary
        f = SparsePolynomial.x_power(ext.big, 1)
        assert qm_equivalent(f, f, ext).equivalent  # at the cap: fine
        with pytest.raises(CapExceeded):
            qm_equivalent(f, f, ext, cap=1 << 11)

    def test_zero_rejected(self, ext25):
        with pytest.raises(ZeroInput):
            qm_equivalent(SparsePolynomial.zero(ext25.big),
                          SparsePolynomial.x_power(ext25.big, 1), ext25)


class TestRegistry:
    def test_h1_literal_conditions(self):
        # m = 2 (even): empty; m = 5: every instance matches the scan oracle
        assert instantiate_known("H1", get_ext(2, 2)) == []
        ext32 = get_ext(2, 5)
        got = {inst.tags["b"].enc for inst in instantiate_known("H1", ext32)}
        q = ext32.q
        oracle = {
            x.enc
            for x in ext32.big.elements()
            if x.enc and not ext32.in_subfield(x) and (x ** (3 * (q - 1))).enc == 1
        }
        assert got == oracle and len(got) == 62

    def test_h1_relaxed_form_at_q4(self, ext16):
        insts = list(h1_form_instances(ext16, require_outside_subfield=False))
        assert len(insts) == 3  # the three cube roots of unity

    def test_stub_rows_raise(self, ext16):
        for fid in ["H3", "H4", "H5", "H6", "H8", "F2", "G18"]:
            assert not KNOWN_FAMILIES[fid].instantiable
            with pytest.raises(NotInstantiable):
                instantiate_known(fid, ext16)

    def test_f9_literal_instances(self, ext25):
        insts = instantiate_known("F9", ext25)
        # a ranges over GF(5) minus {-1}; degenerate a values drop terms
        assert len(insts) == 4
        term_counts = sorted(len(i.poly.terms) for i in insts)
        assert term_counts == [3, 3, 4, 4]  # a = 0 and a = 3 collapse one term

    def test_f9_nondegenerate_instances_permute(self, ext25):
        for inst in instantiate_known("F9", ext25):
            if len(inst.poly.terms) == 4:
                assert is_permutation_exhaustive(inst.poly, ext25.big).is_permutation

    def test_f1_instances_permute(self, ext9):
        insts = instantiate_known("F1", ext9)
        assert len(insts) == 1  # squares of GF(3)* minus {-1} = {1}
        for inst in insts:
            assert is_permutation_exhaustive(inst.poly, ext9.big).is_permutation

    def test_g1_instance_permutes(self, ext16):
        insts = instantiate_known("G1", ext16)
        assert len(insts) == 1
        assert is_permutation_exhaustive(insts[0].poly, ext16.big).is_permutation

    def test_g1_skips_m_divisible_by_4(self):
        assert instantiate_known("G1", get_ext(2, 4)) == []

    def test_h2_merged_exponent_stays_linear(self, ext16):
        for inst in instantiate_known("H2", ext16):
            # at q = 4 the only factorization is t = 1: X^16 folds onto X
            assert set(inst.poly.terms) == {1}
            assert is_permutation_exhaustive(inst.poly, ext16.big).is_permutation

    def test_h7_instances_at_q4(self, ext16):
        insts = instantiate_known("H7", ext16)
        assert {i.tags["k"] for i in insts} == {2}
        assert len(insts) == 12  # a outside GF(4)*
        assert all(set(i.poly.terms) == {5, 1} for i in insts)


class TestClassify:
    def test_scaled_twist_single_class(self, ext25):
        f = q1_example_poly(ext25)
        big = ext25.big
        tw = apply_qm(f, big.from_int(2), big.from_int(3), 1)
        part = classify_catalog([f, tw], ext25)
        assert part.classes == [[0, 1]]

    def test_monomial_twist_class_gf9(self, ext9):
        big = ext9.big
        x1 = SparsePolynomial.x_power(big, 1)
        x3 = SparsePolynomial.x_power(big, 3)  # smallest d > 1 coprime to 8
        part = classify_catalog([x1, x3], ext9)
        assert part.classes == [[0, 1]]

    def test_representative_is_minimal(self, ext25):
        f = q1_example_poly(ext25)
        big = ext25.big
        tw = apply_qm(f, big.gen_pow(1), big.gen_pow(1), 7)
        part = classify_catalog([tw, f], ext25)
        rep = part.representatives[0]
        keys = [p.reduce_exponents().canonical_key() for p in (tw, f)]
        assert keys[rep] == min(keys)

    def test_b1_partition_matches_unfiltered_oracle(self, ext16):
        # distinct B1 polynomials at q = 4; the search is a complete decision
        # procedure, so class labels must match pairwise brute-force verdicts
        polys = {}
        for params in param_grid("B1", ext16):
            built = build_family("B1", params, ext16)
            polys[built.poly.canonical_key()] = built.poly
        distinct = [polys[k] for k in sorted(polys)]
        assert len(distinct) < 600  # many tuples share a polynomial
        part = classify_catalog(distinct, ext16)
        class_of = {}
        for ci, members in enumerate(part.classes):
            for i in members:
                class_of[i] = ci
        sample = distinct[:: max(1, len(distinct) // 40)]
        idx = [distinct.index(p) for p in sample]
        for a_pos, i in enumerate(idx):
            for j in idx[a_pos + 1:]:
                slow = qm_equivalent(
                    distinct[i], distinct[j], ext16, prefilter=False, v_bruteforce=True
                ).equivalent
                assert (class_of[i] == class_of[j]) == slow

import pytest

from circleperm.errors import CapExceeded, InvalidParams
from circleperm.families import (
    FAMILIES,
    KIND_CUBIC,
    KIND_QUARTIC_TRI,
    ConstructionParams,
    GridLimits,
    build_family,
    param_grid,
    _coeffs_raw,
)
from circleperm.polynomials import SparsePolynomial
from circleperm.verify import (
    criterion_check,
    decompose,
    expand_decomposition,
    h_family_equivalence,
    h_no_circle_root,
    is_permutation_exhaustive,
    verify_both,
)
from conftest import get_ext, get_field


def q1_worked_build(ext25):
    big = ext25.big
    g = big.generator
    params = ConstructionParams("Q1", -big.one(), big.one(), g, g, None)
    return build_family("Q1", params, ext25)


class TestExhaustive:
    def test_quadrinomial_permutes_gf25(self, ext25):
        built = q1_worked_build(ext25)
        rep = is_permutation_exhaustive(built.poly, ext25.big)
        assert rep.is_permutation and rep.witness is None

    def test_square_witness_deterministic(self):
        ctx = get_field(5, 1)
        rep = is_permutation_exhaustive(SparsePolynomial.x_power(ctx, 2), ctx)
        assert not rep.is_permutation
        assert tuple(w.coords() for w in rep.witness) == ((1,), (4,))
        # the witness reproduces the collision
        f = SparsePolynomial.x_power(ctx, 2)
        assert f.eval(rep.witness[0]) == f.eval(rep.witness[1])

    def test_monomials_gf7(self):
        ctx = get_field(7, 1)
        verdicts = {
            n: is_permutation_exhaustive(SparsePolynomial.x_power(ctx, n), ctx).is_permutation
            for n in range(1, 7)
        }
        assert {n for n, v in verdicts.items() if v} == {1, 5}

    def test_cap(self, ext25):
        with pytest.raises(CapExceeded):
            is_permutation_exhaustive(SparsePolynomial.x_power(ext25.big, 1), ext25.big, cap=10)

    def test_odd_char_table_free_path_agrees(self, ext25):
        # the log-table fast path and generic arithmetic must produce
        # identical reports, witness included
        built = q1_worked_build(ext25)
        big = ext25.big
        non_perm = SparsePolynomial.x_power(big, 2)
        for poly in (built.poly, non_perm):
            fast = is_permutation_exhaustive(poly, big)
            exp, log = big._exp, big._log
            big._exp = big._log = None
            try:
                slow = is_permutation_exhaustive(poly, big)
            finally:
                big._exp, big._log = exp, log
            assert fast.is_permutation == slow.is_permutation
            assert fast.witness == slow.witness


class TestCriterion:
    def test_q1_at_q5(self, ext25):
        built = q1_worked_build(ext25)
        rep = criterion_check(built.r, built.h, ext25)
        assert rep.is_permutation and rep.gcd_ok and rep.circle_ok

    def test_gcd_failure_regardless_of_h(self, ext25):
        rep = criterion_check(2, SparsePolynomial.constant(ext25.big, ext25.big.one()), ext25)
        assert rep.gcd_ok is False and rep.is_permutation is False

    def test_circle_root_is_definite_failure(self, ext25):
        big = ext25.big
        h = SparsePolynomial.from_coeff_list(big, [-1, 1])  # root 1 on the circle
        rep = criterion_check(3, h, ext25)
        assert not rep.is_permutation and rep.detail["circle_root"].enc == 1

    def test_agreement_over_small_grids(self):
        # both verdicts on every emitted (r, h) at q in {3, 4, 5}; zero mismatches
        cases = [
            ("Q1", get_ext(5, 1)), ("Q2a", get_ext(5, 1)),
            ("Q3", get_ext(3, 1)), ("Q4b", get_ext(3, 1)),
            ("P2", get_ext(2, 2)), ("P5", get_ext(2, 2)), ("B2", get_ext(2, 2)),
        ]
        for family, ext in cases:
            for params in param_grid(family, ext, GridLimits(max_count=120)):
                built = build_family(family, params, ext)
                rep = verify_both(built.r, built.h, built.poly, ext)
                assert rep.is_permutation, (family, params)


class TestCircleRoots:
    def test_constant_h(self, ext25):
        h = SparsePolynomial.constant(ext25.big, ext25.big.one())
        assert h_no_circle_root(h, ext25) == (True, None)

    def test_x_minus_one(self, ext25):
        h = SparsePolynomial.from_coeff_list(ext25.big, [-1, 1])
        ok, root = h_no_circle_root(h, ext25)
        assert not ok and root.enc == 1

    def test_worked_parameters_rootless(self, ext25):
        built = q1_worked_build(ext25)
        assert h_no_circle_root(built.h, ext25) == (True, None)


class TestFamilyEquivalence:
    def test_cubic_kind_at_q5(self, ext25):
        built = q1_worked_build(ext25)
        assert h_family_equivalence(KIND_CUBIC, built.params, ext25)

    def test_quartic_kind_at_q4(self, ext16):
        b = ext16.big.generator
        one = ext16.big.one()
        params = ConstructionParams("P1", one, one, b**3, b**3, one)
        assert h_family_equivalence(KIND_QUARTIC_TRI, params, ext16)

    def test_guarded_by_validation(self, ext25):
        big = ext25.big
        g = big.generator
        bad = ConstructionParams("Q1", -big.one(), big.one(), g, g**3, None)
        with pytest.raises(InvalidParams):
            h_family_equivalence(KIND_CUBIC, bad, ext25)


class TestCircleMapIdentity:
    def test_cubic_conjugate_fraction(self, ext25):
        # z^3 h(z)^(q-1) = (D0^q z^3 + D1^q z^2 + D2^q z + D3^q) / h(z) on the circle
        q = ext25.q
        for params in param_grid("Q1", ext25, GridLimits(max_count=200)):
            sys = _coeffs_raw(KIND_CUBIC, params.beta, params.beta_t, params.delta,
                              params.delta_t, None, ext25)
            d0, d1, d2, d3 = sys.D
            for z in ext25.circle_members():
                h_val = d3 * z**3 + d2 * z**2 + d1 * z + d0
                lhs = z**3 * h_val ** (q - 1)
                rhs = (d0**q * z**3 + d1**q * z**2 + d2**q * z + d3**q) / h_val
                assert lhs == rhs


class TestDecompose:
    def test_family_shape(self, ext25):
        built = q1_worked_build(ext25)
        r, h = decompose(built.poly, ext25)
        assert r == 3 and h == built.h

    def test_mixed_residues_not_decomposable(self, ext25):
        big = ext25.big
        f = SparsePolynomial.from_coeff_list(big, [0, 1, 1])  # X^2 + X, q > 3
        assert decompose(f, ext25) is None

    def test_round_trip_over_grids(self):
        cases = [
            ("Q1", get_ext(5, 1)), ("Q2b", get_ext(5, 1)), ("Q2c", get_ext(5, 1)),
            ("Q4c", get_ext(3, 1)), ("P3", get_ext(2, 2)), ("B2", get_ext(2, 2)),
        ]
        for family, ext in cases:
            r_fam = FAMILIES[family].r(ext.q)
            for params in param_grid(family, ext, GridLimits(max_count=80)):
                built = build_family(family, params, ext)
                r, h = decompose(built.poly, ext)
                assert (r - r_fam) % (ext.q - 1) == 0
                assert 1 <= r <= ext.q - 1
                assert expand_decomposition(r, h, ext) == built.poly
                # the re-decomposed pair passes the same criterion verdict
                assert criterion_check(r, h, ext).is_permutation

    def test_constant_term_rejected(self, ext25):
        big = ext25.big
        f = SparsePolynomial.from_coeff_list(big, [1, 0, 0, 1])
        assert decompose(f, ext25) is None

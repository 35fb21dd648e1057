import json

import pytest

from circleperm.cli import main, parse_element
from circleperm.errors import ZeroInput
from circleperm.families import ConstructionParams, build_family
from circleperm.serialize import (
    CatalogEntry,
    dumps_line,
    entry_from_json,
    entry_to_json,
    element_from_json,
    element_to_json,
    ext_from_json,
    ext_to_json,
    params_from_json,
    params_to_json,
    poly_from_json,
    poly_to_json,
    rational_from_json,
    rational_to_json,
)
from circleperm.polynomials import RationalFunction, SparsePolynomial
from circleperm.verify import verify_both
from conftest import get_ext


def q1_entry(ext25):
    big = ext25.big
    g = big.generator
    params = ConstructionParams("Q1", -big.one(), big.one(), g, g, None)
    built = build_family("Q1", params, ext25)
    report = verify_both(built.r, built.h, built.poly, ext25)
    return CatalogEntry(ext25, built, report, "user")


class TestSerialization:
    def test_element_forms(self, ext25):
        big = ext25.big
        x = big.gen_pow(7)
        assert element_to_json(x) == {"pow": 7}
        assert element_from_json({"pow": 7}, big) == x
        assert element_from_json({"coords": list(x.coords())}, big) == x
        z = big.zero()
        assert element_to_json(z) == {"coords": [0, 0]}

    def test_field_round_trip(self, ext25):
        desc = ext_to_json(ext25)
        back = ext_from_json(desc)
        assert ext_to_json(back) == desc
        assert back.q == 5

    def test_poly_round_trip_sorted_desc(self, ext25):
        big = ext25.big
        f = SparsePolynomial(big, [(3, big.gen_pow(6)), (15, big.gen_pow(16))])
        d = poly_to_json(f)
        assert [t[0] for t in d["terms"]] == [15, 3]
        assert poly_from_json(d, big) == f

    def test_rational_round_trip(self, ext25):
        big = ext25.big
        rf = RationalFunction(
            SparsePolynomial.x_power(big, 3),
            SparsePolynomial.from_coeff_list(big, [1, 1]),
        )
        assert rational_from_json(rational_to_json(rf), big) == rf

    def test_params_round_trip(self, ext25):
        big = ext25.big
        g = big.generator
        params = ConstructionParams("Q1", -big.one(), big.one(), g, g, None)
        d = params_to_json(params)
        back = params_from_json(d, ext25)
        assert params_to_json(back) == d
        assert "aux" not in d

    def test_entry_round_trip_bit_exact(self, ext25):
        entry = q1_entry(ext25)
        line = dumps_line(entry_to_json(entry))
        parsed = entry_from_json(json.loads(line))
        rebuilt = {
            "field": ext_to_json(parsed["ext"]),
            "family": parsed["family"],
            "params": params_to_json(parsed["params"]),
            "poly": poly_to_json(parsed["poly"]),
            "r": parsed["r"],
            "h": poly_to_json(parsed["h"]),
            "term_count": parsed["term_count"],
            "report": json.loads(line)["report"],
            "provenance": parsed["provenance"],
        }
        assert dumps_line(rebuilt) == line

    def test_entry_requires_both_verified(self, ext25):
        entry = q1_entry(ext25)
        bad_report = entry.report.__class__(is_permutation=True, method="exhaustive")
        with pytest.raises(ZeroInput):
            CatalogEntry(ext25, entry.built, bad_report, "user")


class TestElementLiterals:
    def test_forms(self, ext25):
        big = ext25.big
        assert parse_element("g", ext25) == big.generator
        assert parse_element("g^7", ext25) == big.gen_pow(7)
        assert parse_element("-1", ext25) == -big.one()
        assert parse_element("3", ext25) == big.from_int(3)
        assert parse_element("[2,3]", ext25) == big.element([2, 3])
        assert parse_element("-g^2", ext25) == -big.gen_pow(2)


class TestCommands:
    def test_construct_single(self, capsys):
        rc = main([
            "construct", "--p", "5", "--m", "1", "--family", "Q1",
            "--beta", "-1", "--delta", "g", "--delta-t", "g", "--beta-t", "1",
        ])
        assert rc == 0
        entry = json.loads(capsys.readouterr().out)
        assert entry["report"]["is_permutation"] is True
        assert entry["poly"]["terms"] == [
            [15, {"pow": 16}], [11, {"pow": 19}], [7, {"pow": 22}], [3, {"pow": 6}]
        ]

    def test_construct_invalid_params_exit_2(self, capsys):
        rc = main([
            "construct", "--p", "5", "--m", "1", "--family", "Q1",
            "--beta", "-1", "--delta", "g", "--delta-t", "g^3",
        ])
        assert rc == 2
        err = json.loads(capsys.readouterr().err)
        assert err["violations"]

    def test_construct_grid_stream(self, capsys):
        rc = main([
            "construct", "--p", "2", "--m", "2", "--family", "B1",
            "--grid", "--max-count", "7",
        ])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 7
        assert all(json.loads(l)["provenance"] == "grid" for l in lines)

    def test_grid_worker_order_fixed(self, capsys):
        def normalized(text):
            rows = []
            for line in text.strip().splitlines():
                d = json.loads(line)
                d["report"].pop("ms")
                rows.append(d)
            return rows

        argv = ["construct", "--p", "2", "--m", "2", "--family", "B2", "--grid"]
        assert main(argv) == 0
        seq = normalized(capsys.readouterr().out)
        assert main(argv + ["--workers", "3"]) == 0
        par = normalized(capsys.readouterr().out)
        assert len(seq) == 600
        assert seq == par

    def test_csv_format(self, capsys):
        rc = main([
            "construct", "--p", "2", "--m", "2", "--family", "B1",
            "--grid", "--max-count", "2", "--format", "csv",
        ])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("family,")
        assert lines[1].startswith("B1,2,4,")

    def test_verify_exit_codes(self, capsys):
        ok = main(["verify", "--p", "5", "--m", "1", "--poly",
                   '{"terms": [[3, {"pow": 0}]]}'])
        assert ok == 1  # X^3 does not permute GF(25): gcd(3, 24) = 3
        cube_on_gf5 = main(["verify", "--field", '{"p":5,"modulus":[3,1]}',
                            "--poly", '{"terms": [[3, {"pow": 0}]]}'])
        assert cube_on_gf5 == 0
        sq = main(["verify", "--p", "3", "--m", "1", "--poly",
                   '{"terms": [[2, {"pow": 0}]]}'])
        assert sq == 1
        out = [json.loads(l) for l in capsys.readouterr().out.strip().splitlines()]
        assert out[-1]["witness"] is not None

    def test_qm_test_exit_codes(self, capsys):
        f = '{"terms": [[3, {"pow": 1}], [7, {"pow": 3}]]}'
        g_ineq = '{"terms": [[3, {"pow": 1}]]}'
        assert main(["qm-test", "--p", "5", "--m", "1", "--f", f, "--g", f]) == 0
        res = json.loads(capsys.readouterr().out)
        assert res["witness"]["d"] == 1
        assert main(["qm-test", "--p", "5", "--m", "1", "--f", f, "--g", g_ineq]) == 1

    def test_qm_classify(self, tmp_path, capsys):
        argv = ["construct", "--p", "2", "--m", "2", "--family", "B1", "--grid",
                "--max-count", "12", "--out", str(tmp_path / "cat.jsonl")]
        assert main(argv) == 0
        rc = main(["qm-classify", "--catalog", str(tmp_path / "cat.jsonl")])
        assert rc == 0
        part = json.loads(capsys.readouterr().out)
        covered = sorted(i for cls in part["classes"] for i in cls)
        assert covered == list(range(12))
        assert len(part["representatives"]) == len(part["classes"])

    def test_field_info(self, capsys):
        assert main(["field-info", "--p", "2", "--m", "2"]) == 0
        info = json.loads(capsys.readouterr().out)
        assert info["q"] == 4 and info["order"] == 16
        assert info["generator_is_root"] is True

    def test_cap_exit_3(self, capsys):
        rc = main(["verify", "--p", "2", "--m", "8",
                   "--modulus", json.dumps([1, 0, 1, 1, 0, 1] + [0] * 10 + [1]),
                   "--poly", '{"terms": [[1, {"pow": 0}]]}', "--cap", "100"])
        assert rc == 3

    def test_repro_reports_known_defect(self, capsys):
        rc = main(["repro"])
        out = capsys.readouterr().out
        assert rc == 1  # one embedded case is defective at the source
        assert out.count("PASS") == 11
        assert out.count("FAIL") == 1
        assert "11/12" in out

    def test_file_operands(self, tmp_path, capsys):
        poly = tmp_path / "f.json"
        poly.write_text('{"terms": [[1, {"pow": 0}]]}')
        field = tmp_path / "field.json"
        field.write_text(json.dumps(ext_to_json(get_ext(5, 1))))
        assert main(["verify", "--field", str(field), "--poly", str(poly)]) == 0

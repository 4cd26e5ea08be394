import json

import pytest

from persinv import formats, rank_table
from persinv.cli import main
from persinv.formats import FormatError


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


TWO_BARS = {"n": 1, "cubes": [{"x": [0], "y": [2]}, {"x": [1], "y": [3]}]}

L_SHAPE = {
    "n": 2,
    "box": {"lo": [0, 0], "hi": [1, 1]},
    "dims": [{"v": [0, 0], "dim": 1}, {"v": [1, 0], "dim": 1}, {"v": [0, 1], "dim": 1}],
    "maps": [
        {"v": [0, 0], "axis": 0, "shape": [1, 1], "data": [1]},
        {"v": [0, 0], "axis": 1, "shape": [1, 1], "data": [1]},
    ],
}

BROKEN = {
    "n": 2,
    "box": {"lo": [0, 0], "hi": [1, 1]},
    "dims": [{"v": v, "dim": 1} for v in ([0, 0], [1, 0], [0, 1], [1, 1])],
    "maps": [
        {"v": [0, 0], "axis": 0, "shape": [1, 1], "data": [1]},
        {"v": [0, 0], "axis": 1, "shape": [1, 1], "data": [1]},
        {"v": [1, 0], "axis": 1, "shape": [1, 1], "data": [1]},
        {"v": [0, 1], "axis": 0, "shape": [1, 1], "data": [2]},
    ],
}


class TestFormats:
    def test_module_round_trip(self, l_shape):
        doc = formats.module_to_json(l_shape)
        back = formats.module_from_json(json.loads(formats.dumps(doc)))
        assert rank_table(back) == rank_table(l_shape)

    def test_cube_form(self):
        m = formats.module_from_json(TWO_BARS)
        assert [m.dim((i,)) for i in range(4)] == [1, 2, 2, 1]

    def test_errors_have_locations(self):
        with pytest.raises(FormatError, match=r"\$\.cubes\[0\]"):
            formats.module_from_json({"n": 1, "cubes": [{"x": [2], "y": [1]}]})
        with pytest.raises(FormatError, match=r"\$\.maps\[0\]\.data"):
            bad = json.loads(json.dumps(L_SHAPE))
            bad["maps"][0]["data"] = [1, 2]
            formats.module_from_json(bad)
        with pytest.raises(FormatError, match=r"<input>:1:7"):
            formats.parse_json('{"n": }')

    def test_rank_invariant_round_trip(self, two_bars):
        rho = rank_table(two_bars)
        assert formats.rank_invariant_from_json(formats.rank_invariant_to_json(rho)) == rho

    def test_fraction_strings(self):
        from fractions import Fraction

        assert formats.fraction_str(Fraction(4)) == "4/1"
        assert formats.fraction_str(Fraction(-1, 6)) == "-1/6"


class TestCli:
    def test_validate(self, tmp_path, capsys):
        assert main(["validate", write(tmp_path, "ok.json", L_SHAPE)]) == 0
        assert main(["validate", write(tmp_path, "bad.json", BROKEN)]) == 3
        assert "commutativity" in capsys.readouterr().out

    def test_malformed(self, tmp_path):
        assert main(["validate", write(tmp_path, "x.json", '{"n": 1,')]) == 2
        assert main(["rank-table", write(tmp_path, "y.json", {"n": 1})]) == 2
        assert main(["rank-table", str(tmp_path / "missing.json")]) == 2

    def test_invalid_module_exit(self, tmp_path):
        assert main(["rank-table", write(tmp_path, "bad.json", BROKEN)]) == 3

    def test_features_csv(self, tmp_path, capsys):
        path = write(tmp_path, "m.json", TWO_BARS)
        assert main(["features", path, "--family", "p", "--max-degree", "2", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "a,b,family,value,approx"
        assert "1,0,p,4/1,4" in lines

    def test_features_json(self, tmp_path, capsys):
        path = write(tmp_path, "m.json", TWO_BARS)
        assert main(["features", path, "--family", "both", "--max-degree", "2"]) == 0
        rows = json.loads(capsys.readouterr().out)["rows"]
        assert {r["family"] for r in rows} == {"F", "p"}
        assert {"a": [1], "b": [0], "family": "F", "value": "4/1", "approx": "4"} in rows

    def test_decompose_l_shape(self, tmp_path):
        out = tmp_path / "d.json"
        assert main(["decompose", write(tmp_path, "l.json", L_SHAPE), "-o", str(out)]) == 0
        terms = json.loads(out.read_text())["terms"]
        assert len(terms) == 3
        assert {"x": [0, 0], "y": [0, 0], "coef": -1} in terms

        reduced = tmp_path / "r.json"
        main(["decompose", str(tmp_path / "l.json"), "--reduce-degenerate", "-o", str(reduced)])
        assert json.loads(reduced.read_text())["terms"] == []

    def test_reconstruct_round_trip(self, tmp_path):
        m = write(tmp_path, "l.json", L_SHAPE)
        r1, d, r2 = (str(tmp_path / f) for f in ("r1.json", "d.json", "r2.json"))
        assert main(["rank-table", m, "-o", r1]) == 0
        assert main(["decompose", m, "-o", d]) == 0
        assert main(["reconstruct", d, "-o", r2]) == 0
        assert open(r1, "rb").read() == open(r2, "rb").read()

    def test_decompose_from_rank_table(self, tmp_path):
        m = write(tmp_path, "m.json", TWO_BARS)
        r, d1, d2 = (str(tmp_path / f) for f in ("r.json", "d1.json", "d2.json"))
        main(["rank-table", m, "-o", r])
        main(["decompose", m, "-o", d1])
        main(["decompose", r, "-o", d2])
        assert open(d1).read() == open(d2).read()

    def test_recover(self, tmp_path, capsys):
        path = write(tmp_path, "x.json", {"n": 1, "terms": [{"x": [1], "y": [4], "coef": 1}, {"x": [2], "y": [3], "coef": 1}]})
        assert main(["recover", path]) == 0
        out = json.loads(capsys.readouterr().out)
        got = sorted((c["x"], c["y"], c["mult"]) for c in out["cubes"])
        assert got == [([1], [4], 1), ([2], [3], 1)]

    def test_recover_shift_and_strip(self, tmp_path, capsys):
        doc = {"n": 1, "terms": [
            {"x": [-3], "y": [0], "coef": 1},
            {"x": [-1], "y": [-1], "coef": 2},
        ]}
        path = write(tmp_path, "x.json", doc)
        assert main(["recover", path]) == 3
        assert main(["recover", path, "--shift-positive"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["stripped_degenerate"] == 2
        assert [(c["x"], c["y"]) for c in out["cubes"]] == [([-3], [0])]

    def test_recover_rejects_signed(self, tmp_path):
        path = write(tmp_path, "x.json", {"n": 1, "terms": [{"x": [1], "y": [3], "coef": -1}]})
        assert main(["recover", path]) == 3

    def test_check_algebra(self, capsys):
        assert main(["check-algebra", "--n", "1", "--max-degree", "6"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out and out.count("PASS") > 10

    def test_gen_random_deterministic(self, tmp_path):
        for extra in ([], ["--general"]):
            a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
            args = ["gen-random", "--n", "2", "--box", "3", "--seed", "7", *extra]
            main(args + ["-o", a])
            main(args + ["-o", b])
            assert open(a, "rb").read() == open(b, "rb").read()
            assert main(["validate", a]) == 0

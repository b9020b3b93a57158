import csv
import io
import json
import subprocess
import sys

import pytest

from substitution_spectra.cli import main, parse_n_list

REFERENCE_SIGMA1 = {"01": "1/6", "03": "1/12", "12": "1/12", "13": "1/6",
                "20": "1/6", "21": "1/12", "30": "1/12", "32": "1/6"}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


class TestNList:
    def test_forms(self):
        assert parse_n_list("4^2..4^4", geometric=True) == [16, 64, 256]
        assert parse_n_list("3..6") == [3, 4, 5, 6]
        assert parse_n_list("16,64") == [16, 64]

    @pytest.mark.parametrize("bad", ["", "5,3", "x..4"])
    def test_invalid(self, bad):
        import argparse

        with pytest.raises(argparse.ArgumentTypeError):
            parse_n_list(bad)


class TestAnalyze:
    def test_rsl(self, capsys):
        code, out, _ = run(capsys, "analyze", "rsl", "--kmax", "256")
        report = json.loads(out)
        assert code == 0 and report["weighted"]["verdict"] == "purely singular continuous"
        assert report["sigma"][1]["values"]["01"] == "1/6"
        assert "timings" not in report

    def test_rs(self, capsys):
        code, out, _ = run(capsys, "analyze", "rs", "--kmax", "256")
        assert json.loads(out)["weighted"]["verdict"] == "purely absolutely continuous"

    def test_byte_identical(self, tmp_path):
        paths = [tmp_path / f"r{i}.json" for i in range(2)]
        for p in paths:
            assert main(["analyze", "rsl", "--kmax", "256", "--out", str(p)]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_timings(self, capsys):
        _, out, _ = run(capsys, "analyze", "rsl", "--kmax", "64", "--timings")
        assert "hull" in json.loads(out)["timings"]

    def test_non_primitive(self, capsys, tmp_path):
        p = tmp_path / "np.json"
        p.write_text(json.dumps({"alphabet": ["a", "b"], "length": 2,
                                 "rules": {"a": ["a", "a"], "b": ["a", "b"]}}))
        code, out, err = run(capsys, "analyze", str(p))
        report = json.loads(out)
        assert code == 4 and "primitivity" in err
        assert report["primitivity"]["primitive"] is False
        assert report["error"] == {"stage": "primitivity", "exit_code": 4}

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "analyze", "/nonexistent/spec.json")
        assert code == 3 and err.startswith("error:")

    def test_exit_codes_distinct(self, capsys, tmp_path):
        specs = {
            "aperiodic": {"a": ["a", "b", "a"], "b": ["b", "a", "b"]},
            "hull": {"0": ["0", "1"], "1": ["1", "2"], "2": ["2", "0"]},
        }
        codes = {}
        for name, rules in specs.items():
            p = tmp_path / f"{name}.json"
            p.write_text(json.dumps({"alphabet": list(rules), "length": len(rules[next(iter(rules))]),
                                     "rules": rules}))
            codes[name] = run(capsys, "analyze", str(p), "--kmax", "64")[0]
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        codes["parse"] = run(capsys, "analyze", str(p))[0]
        assert codes == {"aperiodic": 5, "hull": 6, "parse": 3}


class TestSigma:
    def test_k1(self, capsys):
        code, out, _ = run(capsys, "sigma", "rsl", "1")
        values = json.loads(out)["values"]
        assert code == 0
        assert {k: v for k, v in values.items() if v != "0"} == REFERENCE_SIGMA1

    def test_k0(self, capsys):
        _, out, _ = run(capsys, "sigma", "rsl", "0")
        values = json.loads(out)["values"]
        assert {k: v for k, v in values.items() if v != "0"} == {a + a: "1/4" for a in "0123"}

    def test_consistency(self, capsys):
        code, out, _ = run(capsys, "sigma", "rsl", "5", "--p", "3")
        assert code == 0 and json.loads(out)["consistency"] == {"p": 3, "ok": True}

    def test_table(self, capsys):
        _, out, _ = run(capsys, "sigma", "rs", "3", "--table")
        r = rows(out)
        assert r[0] == ["k", "pair", "value"] and len(r) == 1 + 4 * 16


def test_hull(capsys):
    _, out, _ = run(capsys, "hull", "rsl")
    h = json.loads(out)["hull"]
    assert sorted(c["form"] for c in h["constraints"]) == ["1 + w2 + 2w3", "1 + w2 - 2w3", "1 - w2"]
    assert h["vertices"] == [["1", "1", "1"], ["1", "1", "-1"], ["1", "-1", "0"]]


def test_classify(capsys):
    _, out, _ = run(capsys, "classify", "rs", "--kmax", "512")
    assert [r["verdict"] for r in json.loads(out)["rays"]] == ["pure point", "Lebesgue"]


class TestSeries:
    def test_sequence_tokens(self, capsys):
        _, out, _ = run(capsys, "sequence", "rsl", "8")
        assert out.split() == ["+1", "+1", "-1", "+1", "+1", "-1", "+1", "+1"]

    def test_sequence_csv(self, capsys):
        _, out, _ = run(capsys, "sequence", "rs", "4", "--format", "csv")
        assert rows(out) == [["n", "value"], ["0", "1"], ["1", "1"], ["2", "1"], ["3", "-1"]]

    def test_partials(self, capsys):
        _, out, _ = run(capsys, "partials", "rsl", "4^5..4^7")
        r = rows(out)
        assert r[0] == ["N", "sum", "ratio", "log4N"] and len(r) == 1 + 4**7 - 4**5 + 1
        ratios = [float(x[2]) for x in r[1:]]
        assert 0.55 < min(ratios) < 0.61 and 1.3 < max(ratios) < 1.49

    def test_periodogram(self, capsys):
        _, out, _ = run(capsys, "periodogram", "rs", "64", "--grid-factor", "2")
        r = rows(out)
        assert r[0] == ["theta", "value"] and len(r) == 129

    def test_growth(self, capsys):
        _, out, _ = run(capsys, "growth", "rsl", "4^3..4^6")
        r = rows(out)
        assert r[0] == ["N", "sup", "ratio"]
        ratios = [float(x[2]) for x in r[1:]]
        assert len(ratios) == 4 and ratios == sorted(ratios)

    def test_autocorrelation(self, capsys):
        _, out, _ = run(capsys, "autocorrelation", "rs", "4096", "--kmax", "8")
        r = rows(out)
        assert r[0] == ["k", "value"] and float(r[1][1]) == 1

    def test_wiener(self, capsys):
        _, out, _ = run(capsys, "wiener", "ones", "100", "1,10")
        assert rows(out) == [["K", "value"], ["1", "1.0"], ["10", "1.0"]]

    def test_memory_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("SUBSTITUTION_SPECTRA_MAX_GRID", "10")
        code, _, err = run(capsys, "periodogram", "rs", "64")
        assert code == 7 and "cap" in err


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "substitution_spectra", "sequence", "rsl", "3"],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "+1\n+1\n-1\n"

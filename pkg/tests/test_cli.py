import io
import json
import subprocess
import sys

import pytest

from polydiagrams.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.mark.parametrize("argv,want", [
    (["count", "--family", "q", "-g", "1", "-n", "1", "--profile", "4"], "4\n"),
    (["count", "--family", "p", "-g", "0", "-n", "3", "--profile", "2,1,1"], "32\n"),
    (["count", "--family", "p", "-g", "0", "-n", "1", "--profile", "3"], "5\n"),
    (["count", "--family", "p", "-g", "0", "-n", "3", "--profile", "2,1,1", "--route", "transform"], "32\n"),
    (["count", "--family", "p", "-g", "1", "-n", "1", "--profile", "3", "--route", "closed"], "17\n"),
])
def test_count(argv, want):
    assert run(*argv) == (0, want)


def _values(csv_text):
    lines = csv_text.strip().split("\n")
    return lines[0], [line.rsplit(",", 1)[1] for line in lines[1:]]


def test_table_examples():
    code, out = run("table", "--family", "q", "-g", "0", "-n", "2", "--max", "2")
    assert code == 0
    header, vals = _values(out)
    assert header == "mu1,mu2,value"
    assert vals == ["1", "0", "0", "0", "1", "0", "0", "0", "2"]
    assert _values(run("table", "--family", "n", "-g", "1", "-n", "1", "--max", "3")[1])[1] == ["1", "0", "1", "0"]
    assert _values(run("table", "--family", "p", "-g", "1", "-n", "1", "--max", "3")[1])[1] == ["1", "1", "4", "17"]


def test_table_json():
    code, out = run("table", "--family", "p", "-g", "0", "-n", "1", "--max", "3", "--format", "json")
    assert json.loads(out) == [{"mu": [m], "value": v} for m, v in enumerate(["1", "1", "2", "5"])]


def test_table_cache_roundtrip(tmp_path):
    cache = tmp_path / "c.txt"
    argv = ["table", "--family", "p", "-g", "1", "-n", "2", "--max", "3", "--cache", str(cache)]
    first = run(*argv)
    saved = cache.read_bytes()
    second = run(*argv)
    assert first == second and first[0] == 0
    assert cache.read_bytes() == saved


def test_fit_outputs():
    code, out = run("fit", "--family", "q", "-g", "1", "-n", "1")
    data = json.loads(out)
    assert code == 0 and data["pass"]
    assert "1/24*mu^3 - 1/24*mu" in {p["text"] for p in data["pieces"]}
    code, out = run("fit", "--family", "q", "-g", "1", "-n", "1", "--structure", "--format", "text")
    assert code == 0 and "F: " in out


def test_fit_pants_four_degree_six():
    code, out = run("fit", "--family", "q", "-g", "0", "-n", "4")
    data = json.loads(out)
    assert code == 0
    assert {p["degree"] for p in data["pieces"] if "zero" not in p["parity"]} == {6}


def test_intersect():
    code, out = run("intersect", "-g", "1", "-n", "1")
    assert code == 0 and out == "(1,1) d=[1]: 1/24\n"


@pytest.mark.parametrize("argv", [
    ["fit", "--family", "q", "-g", "0", "-n", "2"],
    ["count", "--family", "n", "-g", "0", "-n", "2", "--profile", "1,1"],
    ["count", "--family", "q", "-g", "1", "-n", "2", "--profile", "1"],
    ["count", "--family", "q", "-g", "1", "-n", "1", "--profile", "-1"],
    ["count", "--family", "x", "-g", "1", "-n", "1", "--profile", "1"],
    ["count", "--family", "q", "-g", "2", "-n", "1", "--profile", "1", "--route", "closed"],
    ["table", "--family", "q", "-g", "0", "-n", "2", "--max", "-1"],
    ["verify", "--suite", "nope"],
    [],
])
def test_usage_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_corrupt_cache_exits_1(tmp_path):
    cache = tmp_path / "c.txt"
    cache.write_text("garbage\n")
    assert run("count", "--family", "p", "-g", "0", "-n", "1", "--profile", "2", "--cache", str(cache))[0] == 1


def test_verify_pullback():
    code, out = run("verify", "--suite", "pullback", "--order", "12")
    assert code == 0 and "ε=-1, orders 0..12 match" in out


def test_verify_intersections_prints_torus():
    code, out = run("verify", "--suite", "intersections")
    assert code == 0 and "(1,1): 1/24" in out


def test_module_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "polydiagrams", "table", "--family", "q", "-g", "1", "-n", "2", "--max", "3"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and b"\r" not in a

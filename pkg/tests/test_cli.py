import io
import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import E, I, diag
from semitri.cli import main
from semitri.fileformat import (
    FamilyFile,
    FileFormatError,
    format_chain,
    format_family,
    parse_chain,
    parse_family,
)
from semitri.linalg import Chain
from semitri.scalars import HH, QQ, Quaternion

FIXTURES = Path(__file__).parent / "fixtures"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


# -- file format ----------------------------------------------------------


def test_family_round_trip_examples():
    ff = FamilyFile("rational", 2, [E(2, 1, 2) * QQ.parse("1/3"), diag(1, 2)], "kaplansky", closure_bound=50)
    text = format_family(ff)
    assert parse_family(text) == ff
    assert format_family(parse_family(text)) == text
    q = FamilyFile("quaternion", 2, [E(2, 1, 2, HH, Quaternion(0, 1, 0, 1))], "tn",
                   tn_pairs=[(I(2, HH), E(2, 1, 2, HH, HH.parse("1/2+k")))], finite=True)
    assert parse_family(format_family(q)) == q


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["nilpotent", "unipotent", "kaplansky_field", "kaplansky_quaternion", "tn", "general"]),
       st.integers(1, 4), st.sampled_from(["rational", "gfp:7"]), st.integers(0, 10 ** 6))
def test_generated_files_round_trip(kind, n, ring, seed):
    if kind == "tn" and n == 1:
        return
    code, text, _ = run("random", "--kind", kind, "--n", n, "--scalar", ring, "--seed", seed)
    assert code == 0
    assert format_family(parse_family(text)) == text


@pytest.mark.parametrize("text,token", [
    ('{"scalar": "rational", "n": 1, "generators": [[["1/0"]]]}', '"1/0"'),
    ('{\n  "scalar": "rational",\n  "n": 2,\n  "generators": [[["1", "x"], ["0", "1"]]]\n}', '"x"'),
    ('{"scalar": "rational", "n": 2,, }', ","),
    ('{"scalar": "gfp:4", "n": 1, "generators": [[["1"]]]}', '"gfp:4"'),
    ('{"scalar": "rational", "n": 1, "generators": [[[7]]]}', "7"),
    ('{"scalar": "rational", "n": 2, "generators": [[["5"]]]}', '"5"'),
    ('{"scalar": "rational", "n": 1, "mode": "fast", "generators": [[["1"]]]}', '"fast"'),
    ('{"scalar": "rational", "n": 1, "colour": 1, "generators": [[["1"]]]}', '"colour"'),
])
def test_parse_errors_name_position_and_token(text, token):
    # expected position located by plain string search, independent of the parser
    pos = text.rindex(token)
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    with pytest.raises(FileFormatError) as err:
        parse_family(text)
    e = err.value
    assert (e.line, e.col, e.token) == (line, col, token)
    assert f"line {line}, column {col}" in str(e)


def test_tn_mode_requires_pairs():
    with pytest.raises(FileFormatError):
        parse_family('{"scalar": "rational", "n": 1, "mode": "tn", "generators": [[["1"]]]}')


def test_max_prime_cap():
    text = '{"scalar": "gfp:1000003", "n": 1, "generators": [[["1"]]]}'
    with pytest.raises(FileFormatError):
        parse_family(text)
    assert parse_family(text, max_prime=2_000_000).scalar == "gfp:1000003"


def test_chain_round_trip():
    c = Chain.from_basis(I(3) + E(3, 1, 2) + E(3, 3, 1) * QQ.parse("2/3"))
    assert parse_chain(format_chain(c)) == c
    with pytest.raises(FileFormatError):
        parse_chain('{"scalar": "rational", "n": 2, "chain": [[["1", "0"]], [["0", "1"]]]}')


# -- the canonical fixtures -----------------------------------------------


def test_kaplansky_fixture_exit_0_and_chain_round_trips(tmp_path):
    out_chain = tmp_path / "out.json"
    code, out, _ = run("triangularize", "--input", FIXTURES / "kaplansky.json", "--emit-chain", out_chain)
    assert code == 0
    assert out.startswith("Triangularizable (engine: kaplansky)")
    assert "V_1 = span{(1, 0, 0)}" in out
    assert "proof path:" in out
    code, out, _ = run("verify", "--input", FIXTURES / "kaplansky.json", "--chain", out_chain)
    assert code == 0 and out.startswith("OK")
    assert format_chain(parse_chain(out_chain.read_text())) == out_chain.read_text()


def test_matrix_units_fixture_exit_1_with_witness():
    code, out, _ = run("triangularize", "--input", FIXTURES / "e12_e21.json")
    assert code == 1
    assert "witness: NonNilpotentIdealElement (word g1*g2)" in out
    assert "[ 1  0 ]\n  [ 0  0 ]" in out


def test_bad_quaternion_fixture_exit_2():
    code, out, err = run("triangularize", "--input", FIXTURES / "bad_quaternion.json")
    assert code == 2
    assert "line 6, column 7" in err and "'1+q'" in err


def test_json_report():
    code, out, _ = run("triangularize", "--input", FIXTURES / "e12_e21.json", "--json")
    d = json.loads(out)
    assert code == 1
    assert d["verdict"] == "NotTriangularizable"
    assert d["witness"]["word"] == "g1*g2"
    assert d["witness"]["element"] == [["1", "0"], ["0", "0"]]
    assert d["witness"]["recheck"] is True


# -- subcommands ----------------------------------------------------------


def test_verify_rejects_wrong_chain(tmp_path):
    fam = write(tmp_path, "f.json", format_family(FamilyFile("rational", 2, [E(2, 2, 1)])))
    ch = write(tmp_path, "c.json", format_chain(Chain.standard(2, QQ)))
    code, out, _ = run("verify", "--input", fam, "--chain", ch)
    assert code == 1 and out.startswith("FAIL: g1 moves V_1")
    ch3 = write(tmp_path, "c3.json", format_chain(Chain.standard(3, QQ)))
    assert run("verify", "--input", fam, "--chain", ch3)[0] == 2


def test_spectrum_subcommand(tmp_path):
    fam = write(tmp_path, "f.json", format_family(FamilyFile("rational", 2, [
        diag(1, 2), I(2) * 3 + E(2, 1, 2), E(2, 1, 2) - E(2, 2, 1)])))
    code, out, _ = run("spectrum", "--input", fam)
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "g1: none (spectrum {1,2})"
    assert lines[1] == "g2: singleton 3"
    assert lines[2].startswith("g3: none (spectrum {}; char poly x^2 + 1 does not split)")


def test_spectrum_subcommand_quaternion(tmp_path):
    i = Quaternion(0, 1)
    fam = write(tmp_path, "f.json", format_family(FamilyFile("quaternion", 2, [
        I(2, HH) * HH.parse("1/2") + E(2, 1, 2, HH, i), I(2, HH) * i])))
    code, out, _ = run("spectrum", "--input", fam)
    assert out.splitlines() == ["g1: central 1/2", "g2: none (rational eigenvalues {})"]


def test_closure_subcommand(tmp_path):
    fam = write(tmp_path, "f.json", format_family(FamilyFile("rational", 2, [E(2, 1, 2), E(2, 2, 1)])))
    assert run("closure", "--input", fam)[1].strip() == "closure size 5, complete"
    inf = write(tmp_path, "g.json", format_family(FamilyFile("rational", 2, [I(2) + E(2, 1, 2)])))
    assert run("closure", "--input", inf, "--closure-bound", 10)[1].strip() == \
        "closure size 10, incomplete (bound 10 reached)"


def test_finite_flag_exit_3(tmp_path):
    fam = write(tmp_path, "f.json", format_family(FamilyFile("rational", 2, [I(2) + E(2, 1, 2)])))
    code, _, err = run("triangularize", "--input", fam, "--finite", "--closure-bound", 20)
    assert code == 3 and "resource bound" in err
    assert run("triangularize", "--input", fam, "--closure-bound", 20)[0] == 0


def test_modes(tmp_path):
    fam = write(tmp_path, "f.json", format_family(FamilyFile("rational", 2, [E(2, 1, 2), E(2, 2, 1)])))
    for mode, engine in (("levitzki", "levitzki"), ("kolchin", "kolchin"), ("kaplansky", "kaplansky")):
        code, out, _ = run("triangularize", "--input", fam, "--mode", mode)
        assert code == 1 and f"(engine: {engine})" in out
    code, out, _ = run("triangularize", "--input", fam, "--mode", "irreducible")
    assert code == 1 and "irreducible" in out
    red = write(tmp_path, "r.json", format_family(FamilyFile("rational", 2, [diag(1, 2)], "irreducible")))
    code, out, _ = run("triangularize", "--input", red)
    assert code == 0 and out.startswith("reducible: invariant subspace span{(1, 0)}")


def test_auto_dispatch_order(tmp_path):
    cases = [
        ([E(2, 1, 2)], "levitzki"),
        ([I(2) + E(2, 1, 2)], "kolchin"),
        ([I(2) * 2 + E(2, 1, 2)], "kaplansky"),
        ([diag(1, 2)], "general"),
    ]
    for k, (gens, engine) in enumerate(cases):
        fam = write(tmp_path, f"f{k}.json", format_family(FamilyFile("rational", 2, gens)))
        code, out, _ = run("triangularize", "--input", fam)
        assert code == 0 and f"(engine: {engine})" in out


def test_tn_mode(tmp_path):
    ok = FamilyFile("rational", 3, [], "tn", tn_pairs=[(diag(1, 1, 2), E(3, 1, 2))])
    code, out, _ = run("triangularize", "--input", write(tmp_path, "ok.json", format_family(ok)))
    assert code == 0 and "commutative-eigenspace" in out
    bad = FamilyFile("rational", 2, [], "tn", tn_pairs=[(diag(1, 2), E(2, 1, 2))])
    code, out, _ = run("triangularize", "--input", write(tmp_path, "bad.json", format_family(bad)))
    assert code == 1 and "DecompositionViolation" in out and "operand:" in out


def test_input_errors():
    assert run("triangularize")[0] == 2
    assert run("triangularize", "--input", "/nonexistent.json")[0] == 2
    assert run("bogus")[0] == 2
    assert run("random", "--kind", "nilpotent")[0] == 2
    assert run("random", "--kind", "nilpotent", "--n", 2, "--scalar", "gfp:9")[0] == 2
    assert run("triangularize", "--input", FIXTURES / "kaplansky.json", "--closure-bound", 0)[0] == 2


def test_random_is_byte_identical_across_processes(tmp_path):
    cmd = [sys.executable, "-m", "semitri", "random", "--kind", "unipotent", "--n", "3", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd + ["--output", str(tmp_path / "u.json")], capture_output=True, check=True)
    assert b.stdout == b""
    assert (tmp_path / "u.json").read_bytes() == a
    assert parse_family(a.decode()).n == 3


def test_random_tn_file_triangularizes(tmp_path):
    p = tmp_path / "tn.json"
    assert run("random", "--kind", "tn", "--n", 3, "--seed", 2, "--output", p)[0] == 0
    assert run("triangularize", "--input", p)[0] == 0

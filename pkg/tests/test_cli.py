import json
from pathlib import Path

import pytest

from dgmc import cli
from dgmc import fileformat as ff
from dgmc.complexes import endo_category
from dgmc.dgcat import validate_category

DATA = Path(__file__).resolve().parents[1] / "src" / "dgmc" / "data"


def raw_doc(name="two-object.cat"):
    return json.loads((DATA / name).read_text())


# parsing ---------------------------------------------------------------------


def test_empty_document():
    with pytest.raises(ff.ParseError) as e:
        ff.parse_category("   ")
    assert "empty" in str(e.value)


def test_duplicate_key_position():
    doc = '{\n  "format": "dgcat/1",\n  "format": "dgcat/1"\n}'
    with pytest.raises(ff.ParseError) as e:
        ff.parse_category(doc)
    assert "duplicate key 'format'" in str(e.value)
    assert "line 3" in e.value.where


def test_syntax_error_position():
    with pytest.raises(ff.ParseError) as e:
        ff.parse_category('{"format": "dgcat/1",\n  oops}')
    assert e.value.where.startswith("line 2")


def test_duplicate_object_label():
    raw = raw_doc()
    raw["objects"] = ["E", "F", "E"]
    with pytest.raises(ff.ParseError) as e:
        ff.parse_category(json.dumps(raw))
    assert "'E'" in str(e.value) and e.value.where == "$.objects[2]"


def test_unknown_key_and_object():
    raw = raw_doc()
    raw["extra"] = 1
    with pytest.raises(ff.ParseError, match="unknown key 'extra'"):
        ff.parse_category(json.dumps(raw))
    raw = raw_doc()
    raw["homs"][0]["target"] = "G"
    with pytest.raises(ff.ParseError, match="unknown object 'G'"):
        ff.parse_category(json.dumps(raw))


def test_out_of_range_entry():
    raw = raw_doc()
    raw["compositions"][0]["entries"].append([5, 0, 0, 1])
    with pytest.raises(ff.ParseError):
        ff.parse_category(json.dumps(raw))


@pytest.mark.parametrize("name", sorted(p.name for p in DATA.glob("*.cat")))
def test_emit_roundtrip(name):
    P = ff.load_category(DATA / name)
    validate_category(P)
    text = ff.emit_category(P)
    Q = ff.build_category(ff.parse_category(text))
    assert ff.emit_category(Q) == text
    assert list(Q.objects) == list(P.objects)


def test_emit_builtin_category():
    P = endo_category([(1, 2), (1,)])
    Q = ff.build_category(ff.parse_category(ff.emit_category(P)))
    assert ff.emit_category(Q) == ff.emit_category(P)


def test_coefficient_syntax():
    from dgmc.scalars import Field, make_dual_numbers
    R = make_dual_numbers(Field.rationals())
    v = ff.parse_coefficients("1:1, 0, -1/2", R)
    assert R.format(v[0]) == "1 + t"
    assert v[1] == R.zero
    assert R.format(v[2]) == "-1/2"
    with pytest.raises(ValueError):
        ff.parse_coefficients("x", R)


# command line ----------------------------------------------------------------


@pytest.fixture
def run(capsys, monkeypatch):
    monkeypatch.chdir(DATA)

    def go(*args):
        code = cli.main(list(args))
        cap = capsys.readouterr()
        return code, cap.out + cap.err
    return go


def test_check_ok(run):
    code, out = run("check", "endo-111.cat")
    assert code == 0 and "axioms: OK" in out


def test_check_corrupted(run, tmp_path):
    raw = raw_doc()
    raw["compositions"][0]["entries"][0][3] = 2
    bad = tmp_path / "bad.cat"
    bad.write_text(json.dumps(raw))
    code, out = run("check", str(bad))
    assert code == 1
    assert "violated:" in out and "witness:" in out


def test_variety_count_f3(run):
    code, out = run("variety-count", "endo-111.cat", "--object", "E", "--field", "F3")
    assert code == 0 and "5 points" in out


@pytest.mark.parametrize("args", [
    ("check", "missing.cat"),
    ("mc-verify", "endo-111.cat", "--eta", "1,zz"),
    ("variety-count", "endo-111.cat", "--object", "nope", "--field", "F3"),
    ("check", "endo-111.cat", "--field", "F4"),
])
def test_malformed_exit_2(run, args):
    code, _ = run(*args)
    assert code == 2


def test_malformed_file(run, tmp_path):
    bad = tmp_path / "bad.cat"
    bad.write_text('{"format": "dgcat/1", "format": 1}')
    code, out = run("check", str(bad))
    assert code == 2 and "duplicate key" in out


def test_out_flag(run, tmp_path):
    target = tmp_path / "o.txt"
    code, out = run("variety-count", "endo-111.cat", "--object", "E", "--field", "F3", "--out", str(target))
    assert code == 0
    assert "5 points" in target.read_text()


def test_mc_verify_failure_exit_1(run):
    code, out = run("mc-verify", "endo-111.cat", "--eta", "1,1")
    assert code == 1 and "curvature" in out

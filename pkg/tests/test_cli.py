import json
import subprocess
import sys

import pytest

from ainfty.cli import BAD, FAIL, OK, env_cutoffs, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def docs(tmp_path, capsys):
    paths = {}
    for kind, seed in (("exterior", 0), ("random-sdr", 3), ("random-morphism", 5)):
        p = tmp_path / (kind + ".txt")
        assert run(capsys, "example", kind, "--seed", str(seed), "-o", str(p))[0] == OK
        paths[kind] = p
    return paths


def test_check_passes(docs, capsys):
    for p in docs.values():
        code, out, _ = run(capsys, "check", str(p))
        assert code == OK, out
        assert out.startswith("cutoffs: energy < 3, arity <= 3")


def test_corrupted_product_fails_with_its_arity(docs, capsys, tmp_path):
    text = docs["exterior"].read_text().replace("m 2 a b -> ab", "m 2 a b -> a")
    bad = tmp_path / "bad.txt"
    bad.write_text(text)
    code, out, _ = run(capsys, "check", str(bad))
    assert code == FAIL
    assert any("arity 3" in line and "FAIL" in line for line in out.splitlines())


def test_malformed_scalar_is_an_input_error(docs, capsys, tmp_path):
    lines = docs["exterior"].read_text().splitlines()
    i = next(i for i, l in enumerate(lines) if l.startswith("  m 2 a b"))
    lines[i] = "  m 2 a b -> ab [[0,1,1"
    bad = tmp_path / "bad.txt"
    bad.write_text("\n".join(lines) + "\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == BAD
    assert "line %d" % (i + 1) in err


def test_unknown_field_is_an_input_error(docs, capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text(docs["exterior"].read_text().replace("field f2", "field r"))
    code, _, err = run(capsys, "check", str(bad))
    assert code == BAD and "line 2" in err


def test_missing_file_and_bad_flags(capsys):
    assert run(capsys, "check", "/nonexistent/doc.txt")[0] == BAD
    assert run(capsys, "--cutoff-energy", "-1", "check", "x")[0] == BAD
    assert run(capsys, "frobnicate")[0] == BAD
    assert run(capsys, "--field", "q", "check", "x")[0] == BAD


def test_field_flag_must_match(docs, capsys):
    code, _, err = run(capsys, "--field", "q", "check", str(docs["exterior"]))
    assert code == BAD and "does not match" in err


def test_transfer_output_rechecks(docs, capsys, tmp_path):
    out = tmp_path / "A.txt"
    p = docs["random-sdr"]
    assert run(capsys, "transfer", str(p), str(p), "-o", str(out))[0] == OK
    code, text, _ = run(capsys, "check", str(out))
    assert code == OK, text
    assert "morphism alpha B A" not in out.read_text()
    assert "morphism alpha A B" in out.read_text()


def test_cylinder_then_cocylinder_recovers_the_morphism(docs, capsys, tmp_path):
    cyl = tmp_path / "B.txt"
    assert run(capsys, "cylinder", str(docs["random-morphism"]), "-o", str(cyl))[0] == OK
    assert run(capsys, "check", str(cyl))[0] == OK
    theta = tmp_path / "theta.txt"
    assert run(capsys, "cocylinder", str(cyl), str(cyl), "-o", str(theta))[0] == OK
    assert run(capsys, "check", str(theta))[0] == OK

    def entries(path, tag):
        return sorted(l.strip() for l in path.read_text().splitlines() if l.strip().startswith(tag))
    assert entries(theta, "f ") == entries(docs["random-morphism"], "f ")


def test_outputs_are_deterministic(docs, capsys, tmp_path):
    p = docs["random-sdr"]
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run(capsys, "transfer", str(p), str(p), "-o", str(a))
    run(capsys, "transfer", str(p), str(p), "-o", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert run(capsys, "example", "random-sdr", "--seed", "3")[1] == p.read_text()


def test_cutoff_flags_override_the_document(docs, capsys):
    code, out, _ = run(capsys, "--cutoff-energy", "5/2", "--cutoff-arity", "2", "check",
                       str(docs["exterior"]))
    assert code == OK
    assert out.startswith("cutoffs: energy < 5/2, arity <= 2")


def test_env_cutoffs(monkeypatch, tmp_path, capsys):
    assert env_cutoffs({"AINFTY_CUTOFFS": "energy=7/2,arity=2,degree=5"}) == {
        "energy": __import__("fractions").Fraction(7, 2), "arity": 2, "degree": 5}
    assert env_cutoffs({}) == {"energy": None, "arity": None, "degree": None}
    doc = tmp_path / "d.txt"
    doc.write_text("ainfty-document 1\nfield f2\n\nalgebra B\n  basis e:0\n  unit e\n"
                   "  complete yes\n  m 2 e e -> e [[0,1,1,1]]\nend\n")
    assert run(capsys, "check", str(doc))[0] == BAD
    monkeypatch.setenv("AINFTY_CUTOFFS", "energy=2,arity=2")
    code, out, _ = run(capsys, "check", str(doc))
    assert code == OK and out.startswith("cutoffs: energy < 2, arity <= 2")
    monkeypatch.setenv("AINFTY_CUTOFFS", "degree=4")
    code, out, _ = run(capsys, "scenario", "ogw")
    assert code == OK and "degree 4" in out.splitlines()[0]
    monkeypatch.setenv("AINFTY_CUTOFFS", "speed=4")
    assert run(capsys, "scenario", "ogw")[0] == BAD


def test_scenarios(capsys):
    code, out, _ = run(capsys, "scenario", "ogw", "--cutoff", "4")
    assert code == OK and "degree 4" in out
    assert run(capsys, "scenario", "sphere")[0] == OK
    assert run(capsys, "scenario", "nope")[0] == BAD
    code, out, _ = run(capsys, "scenario", "wallcrossing", "--format", "machine")
    assert code == OK
    json.loads(out)


def test_trees(capsys):
    assert run(capsys, "trees", "--leaves", "3")[1].strip() == "3"
    code, out, _ = run(capsys, "trees", "--leaves", "2", "--internal", "1", "--list")
    lines = out.split()
    assert int(out.splitlines()[0]) == len(out.splitlines()) - 1
    code, out, _ = run(capsys, "--format", "machine", "trees", "--leaves", "5", "--internal", "2")
    assert json.loads(out)["count"] == 20190
    assert run(capsys, "trees", "--leaves", "-1")[0] == BAD


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "ainfty", "trees", "--leaves", "4"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.strip() == "11"

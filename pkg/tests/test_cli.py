import json
import subprocess
import sys

import pytest

from tverberg.cli import main
from tverberg.documents import dump_instance, dump_witness, parse_witness
from tverberg.generate import generate
from tverberg.model import Instance
from tverberg.solver import solve


def write(path, text):
    path.write_text(text)
    return str(path)


@pytest.fixture
def moment7(tmp_path):
    inst = Instance.build(2, 3, [(t, t * t) for t in range(1, 8)], list(range(7)))
    return write(tmp_path / "m7.json", dump_instance(inst))


@pytest.fixture
def moment6(tmp_path):
    inst = Instance.build(2, 3, [(t, t * t) for t in range(1, 7)], list(range(6)))
    return write(tmp_path / "m6.json", dump_instance(inst))


def test_gen_and_solve(tmp_path, capsys):
    inst_path = str(tmp_path / "i.json")
    assert main(["gen", "--d", "2", "--r", "3", "--profile", "special", "--seed", "3", "-o", inst_path]) == 0
    out = str(tmp_path / "w.json")
    assert main(["solve", inst_path, "-o", out]) == 0
    assert main(["verify", inst_path, out]) == 0
    assert "valid" in capsys.readouterr().out


def test_gen_stdout_matches_file(tmp_path, capsys):
    path = tmp_path / "i.json"
    main(["gen", "--d", "1", "--r", "3", "--seed", "5", "-o", str(path)])
    capsys.readouterr()
    main(["gen", "--d", "1", "--r", "3", "--seed", "5"])
    assert capsys.readouterr().out == path.read_text()


def test_not_found_exit_and_no_file(tmp_path, moment6):
    out = tmp_path / "w.json"
    assert main(["solve", moment6, "-o", str(out)]) == 1
    assert not out.exists()
    assert main(["solve-all", moment6, "-o", str(out)]) == 1
    assert not out.exists()


def test_input_errors(tmp_path, moment7):
    assert main(["solve", str(tmp_path / "missing.json")]) == 2
    bad = write(tmp_path / "bad.json", '{"d": 2, "r": 3, "points": [[0.5, 1]], "colors": [0]}')
    out = tmp_path / "w.json"
    assert main(["solve", bad, "-o", str(out)]) == 2
    assert not out.exists()
    assert main(["solve", moment7, "--limit", "0"]) == 2
    with pytest.raises(SystemExit) as info:
        main(["solve"])
    assert info.value.code == 2


def test_verify_mismatched_witness(tmp_path, moment7):
    w = solve(Instance.build(1, 2, [(0,), (1,), (2,)], [0, 1, 2]))
    path = write(tmp_path / "w.json", dump_witness(w))
    assert main(["verify", moment7, path]) == 2


def test_verify_rejects_tampered(tmp_path, moment7, capsys):
    out = tmp_path / "w.json"
    main(["solve", moment7, "-o", str(out)])
    doc = json.loads(out.read_text())
    doc["point"][0] = "100"
    out.write_text(json.dumps(doc))
    assert main(["verify", moment7, str(out)]) == 1


def test_solve_all_limit(tmp_path, moment7):
    out = tmp_path / "all.json"
    assert main(["solve-all", moment7, "--limit", "2", "-o", str(out)]) == 0
    assert len(json.loads(out.read_text())["witnesses"]) == 2
    assert main(["solve", moment7, "--all", "--no-prune", "-o", str(out)]) == 0
    assert len(json.loads(out.read_text())["witnesses"]) == 4


def test_lift_pullback_roundtrip(tmp_path, capsys):
    inst, meta = generate(1, 3, "singletons", 2)
    src = write(tmp_path / "i.json", dump_instance(inst, meta))
    lifted_path = str(tmp_path / "lifted.json")
    assert main(["lift", src, "-o", lifted_path]) == 0
    lifted_w = str(tmp_path / "lw.json")
    assert main(["solve", lifted_path, "-o", lifted_w]) == 0
    back = str(tmp_path / "back.json")
    assert main(["pullback", src, lifted_w, "-o", back]) == 0
    assert "top coordinate = 0" in capsys.readouterr().out
    assert main(["verify", src, back]) == 0
    rt = str(tmp_path / "rt.json")
    assert main(["roundtrip", src, "-o", rt]) == 0
    assert "verdict: VERIFIED" in capsys.readouterr().out
    assert parse_witness(open(rt).read()).is_valid(inst)


def test_roundtrip_invalid_coloring(tmp_path):
    inst = Instance.build(2, 3, [(t, t * t) for t in range(1, 8)], [0, 0, 0, 1, 1, 2, 3])
    src = write(tmp_path / "i.json", dump_instance(inst))
    assert main(["roundtrip", src]) == 2
    assert main(["lift", src]) == 2


def test_plot(tmp_path, moment7):
    w = str(tmp_path / "w.json")
    main(["solve", moment7, "-o", w])
    svg = tmp_path / "p.svg"
    assert main(["plot", moment7, w, "-o", str(svg)]) == 0
    text = svg.read_text()
    assert text.count('class="vertex"') == 7
    assert text.count('class="face"') == 3
    assert 'class="common-point"' in text


def test_plot_needs_plane(tmp_path):
    inst, _ = generate(1, 3, "singletons", 0)
    src = write(tmp_path / "i.json", dump_instance(inst))
    out = tmp_path / "p.svg"
    assert main(["plot", src, "-o", str(out)]) == 2
    assert not out.exists()


def test_selftest_and_module_entry():
    proc = subprocess.run([sys.executable, "-m", "tverberg", "selftest"], capture_output=True, text=True)
    assert proc.returncode == 0
    lines = proc.stdout.strip().splitlines()
    assert len(lines) == 5 and all(line.startswith("PASS") for line in lines)


@pytest.fixture
def square(tmp_path):
    inst = Instance.build(2, 2, [(0, 0), (2, 0), (2, 2), (0, 2)], [0, 1, 2, 3])
    return write(tmp_path / "sq.json", dump_instance(inst))


def test_square_examples(tmp_path, square):
    w = tmp_path / "w.json"
    assert main(["solve", square, "-o", str(w)]) == 0
    svg = tmp_path / "sq.svg"
    assert main(["plot", square, str(w), "-o", str(svg)]) == 0
    text = svg.read_text()
    assert text.count("<line ") == 2
    assert "common point (1, 1)" in text
    bare = tmp_path / "bare.svg"
    assert main(["plot", square, "-o", str(bare)]) == 0
    assert 'class="face"' not in bare.read_text()
    assert bare.read_text().count('class="vertex"') == 4


def test_malformed_json_exit(tmp_path):
    assert main(["solve", write(tmp_path / "x.json", "{not json")]) == 2


def test_tampered_coefficient(tmp_path, square):
    w = tmp_path / "w.json"
    main(["solve", square, "-o", str(w)])
    doc = json.loads(w.read_text())
    entry = doc["coefficients"][0][0]
    entry["value"] = "3/5" if entry["value"] != "3/5" else "2/5"
    w.write_text(json.dumps(doc))
    assert main(["verify", square, str(w)]) == 1


def test_roundtrip_reports(tmp_path, capsys):
    line = write(tmp_path / "l.json", dump_instance(Instance.build(1, 3, [(x,) for x in range(5)], list(range(5)))))
    assert main(["roundtrip", line]) == 0
    assert "layers peeled: 3" in capsys.readouterr().out
    special, _ = generate(2, 3, "special", 0)
    sp = write(tmp_path / "s.json", dump_instance(special))
    assert main(["roundtrip", sp]) == 0
    assert "identity plan" in capsys.readouterr().out

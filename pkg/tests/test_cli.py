import json

import pytest

from fermat_mirror.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_mirror_twice_is_identity(tmp_path, capsys):
    z = tmp_path / "Z.json"
    m = tmp_path / "M.json"
    z2 = tmp_path / "Z2.json"
    assert main(["stability", "make", "--n", "3", "--out", str(z)]) == 0
    assert main(["stability", "mirror", "--in", str(z), "--out", str(m)]) == 0
    assert main(["stability", "mirror", "--in", str(m), "--out", str(z2)]) == 0
    assert z.read_bytes() == z2.read_bytes()


def test_pipeline_on_points(tmp_path, capsys):
    pts = tmp_path / "pts.json"
    pts.write_text(json.dumps([["1", "-1", "0"], ["1", "1", "1"]]))
    code, out, _ = run(capsys, "moduli", "pipeline", "--n", "3", "--points", str(pts))
    assert code == 0
    lines = [json.loads(l) for l in out.splitlines()]
    assert lines[0]["point"] == [[1, 0], [-1, 0], [0, 0]] and lines[0]["verdict"] == "on-fermat"
    assert lines[1]["verdict"] == "zero-object"
    assert lines[-1]["summary"]["on_fermat"] == 1


def test_sdr_check_bad_rep(tmp_path, capsys):
    rep = tmp_path / "r.json"
    assert main(["rep", "from-point", "--point", "1,-1,0", "--out", str(rep)]) == 0
    data = json.loads(rep.read_text())
    data["mats"]["1>2#1"] = [[5, 0]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, err = run(capsys, "sdr", "check", "--rep", str(bad))
    assert code == 1
    assert json.loads(out)["nonzero"][0]["labels"] == [1, 2]
    assert "labels [1, 2]" in err
    code, out, _ = run(capsys, "sdr", "check", "--rep", str(rep))
    assert code == 0 and json.loads(out)["ok"]


def test_exit_codes(tmp_path, capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "quiver", "build")[0] == 2  # --n missing
    assert run(capsys, "quiver", "build", "--n", "9")[0] == 1
    assert run(capsys, "moduli", "sample", "--n", "4")[0] == 1
    assert run(capsys, "stability", "mirror", "--in", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "quiver", "export-dot", "--n", "2", "--format", "svg")[0] == 2


def test_theorem_violation_exit(tmp_path, capsys):
    z = tmp_path / "M.json"
    main(["stability", "make", "--n", "3", "--out", str(z)])
    code, _, err = run(capsys, "moduli", "mirror-report", "--n", "3", "--stability", str(z), "--summary")
    assert code == 0
    # feeding the mirror as Z is rejected before any theorem check
    main(["stability", "mirror", "--in", str(z), "--out", str(z)])
    assert run(capsys, "moduli", "mirror-report", "--n", "3", "--stability", str(z))[0] == 1


def test_determinism_and_provenance(capsys):
    args = ["moduli", "pipeline", "--n", "4", "--field", "C64", "--count", "12", "--seed", "4"]
    a = run(capsys, *args)[1]
    b = run(capsys, *args)[1]
    assert a == b
    c = run(capsys, *args, "--no-provenance")[1]
    assert "provenance" in a.splitlines()[-1] and "provenance" not in c


def test_framed_commands(tmp_path, capsys):
    rep = tmp_path / "r.json"
    fr = tmp_path / "f.json"
    main(["rep", "from-point", "--point", "1,2,-1", "--no-provenance", "--out", str(rep)])
    assert main(["framed", "functor-f", "--in", str(rep), "--out", str(fr)]) == 0
    code, out, _ = run(capsys, "framed", "roundtrip", "--in", str(fr))
    assert code == 0
    res = json.loads(out)
    assert res["G_of_F_equals"] and res["F_of_G_isomorphic"] and all(res["lemma"].values())
    code, out, _ = run(capsys, "framed", "functor-g", "--in", str(fr), "--no-provenance")
    assert out == rep.read_text()
    assert run(capsys, "framed", "check", "--in", str(fr), "--exhaustive")[0] == 0


def test_outputs(capsys):
    code, out, _ = run(capsys, "quiver", "export-dot", "--n", "2")
    assert code == 0 and '"00" -> "01" [label=2];' in out
    code, out, _ = run(capsys, "stability", "plot-svg", "--n", "3")
    assert out.startswith("<svg") and out.count("<circle") == 7
    code, out, _ = run(capsys, "sdr", "fermat", "--point", "1,i,1,i")
    assert json.loads(out)["value"] == [4, 0]

import csv
import json

import pytest

from essurf import fixtures
from essurf.cli import EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def fixture_file(name):
    return str(fixtures.path(name))


def test_homology(capsys):
    code, out, _ = run(capsys, "homology", fixture_file("t3"))
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["b1"] == 3 and data["certificate"] == "ClosedPositiveB1"


def test_homology_from_isosig(capsys):
    code, out, _ = run(capsys, "homology", "--isosig", fixtures.ISO_SIGS["fig8"])
    assert code == EXIT_OK and json.loads(out)["b1"] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["homology"],
        ["homology", "x.tri", "--isosig", "cPcbbbiht"],
        ["bogus"],
        [],
        ["--jobs", "0", "homology", "--isosig", "cPcbbbiht"],
        ["crush", "--isosig", "cPcbbbiht", "--surface", "99"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_ERROR and "usage error" in err


def test_bad_file(capsys, tmp_path):
    bad = tmp_path / "bad.tri"
    bad.write_text("this is not a gluing table\n")
    code, _, err = run(capsys, "homology", str(bad))
    assert code == EXIT_ERROR and "error" in err


def test_constraints_and_enumerate(capsys):
    code, out, _ = run(capsys, "constraints", "--isosig", fixtures.ISO_SIGS["fig8"], "--mode", "q0")
    data = json.loads(out)
    assert code == EXIT_OK and data["columns"] == 6 and len(data["boundary"]) == 2
    code, out, _ = run(capsys, "enumerate", "--isosig", fixtures.ISO_SIGS["fig8"], "--mode", "q")
    assert json.loads(out)["count"] == 4


def test_surfaces_marks_spun(capsys):
    _, out, _ = run(capsys, "surfaces", "--isosig", fixtures.ISO_SIGS["fig8"], "--mode", "q")
    assert all(s["spun"] for s in json.loads(out)["surfaces"])
    _, out, _ = run(capsys, "surfaces", fixture_file("t3"))
    rows = json.loads(out)["surfaces"]
    assert rows and all(r["chi"] == 0 for r in rows)


def test_crush_writes_output(capsys, tmp_path):
    dest = tmp_path / "crushed.tri"
    code, out, _ = run(capsys, "crush", fixture_file("l3_1"), "--surface", "0", "--mode", "q", "--out", str(dest))
    data = json.loads(out)
    assert code == EXIT_OK and dest.exists()
    assert data["tets"] == 2 - data["removed_tets"]


def test_cut_writes_pieces(capsys, tmp_path):
    code, out, _ = run(capsys, "cut", fixture_file("t3"), "--surface", "0", "--mode", "q", "--out-dir", str(tmp_path))
    assert code == EXIT_OK
    pieces = json.loads(out)["pieces"]
    assert len(pieces) == 1
    side = json.loads((tmp_path / "piece0.json").read_text())
    assert [b["tag"] for b in side["boundary"]] == ["CopyOfS", "CopyOfS"]


def test_haken(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "haken", "--isosig", fixtures.ISO_SIGS["fig8"], "--ideal", "--json", str(report))
    assert code == EXIT_OK
    assert json.loads(out)["verdict"] == "NoClosedEssentialSurface"
    assert json.loads(report.read_text())["verdict"] == "NoClosedEssentialSurface"
    code, out, _ = run(capsys, "haken", fixture_file("t3"))
    assert json.loads(out)["verdict"] == "HakenByHomology"


def test_haken_timeout_exit_code(capsys):
    code, out, _ = run(capsys, "--timeout-secs", "0", "haken", fixture_file("t3"), "--no-homology")
    assert code == EXIT_INCONCLUSIVE and json.loads(out)["verdict"] == "Timeout"


def test_haken_batch(capsys, tmp_path):
    fixtures.install(tmp_path / "in", ["s3", "t3", "l3_1"])
    out_csv = tmp_path / "out.csv"
    code, _, _ = run(capsys, "haken-batch", str(tmp_path / "in"), "--csv", str(out_csv))
    rows = list(csv.DictReader(out_csv.open()))
    assert code == EXIT_OK
    assert [r["name"] for r in rows] == ["l3_1", "s3", "t3"]
    assert rows[2]["verdict"] == "HakenByHomology"


def test_haken_batch_empty_dir(capsys, tmp_path):
    code, _, _ = run(capsys, "haken-batch", str(tmp_path), "--csv", str(tmp_path / "x.csv"))
    assert code == EXIT_ERROR


def test_fixtures_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "fixtures", "list")
    assert code == EXIT_OK and "fig8" in json.loads(out)
    code, out, _ = run(capsys, "fixtures", "install", str(tmp_path))
    assert len(json.loads(out)["installed"]) == len(fixtures.names())

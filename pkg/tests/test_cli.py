import json
import subprocess
import sys

import numpy as np
import pytest

from waringwidth.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, run
from waringwidth.matnum import to_json


def load(path):
    return json.loads(path.read_text())


def test_factorize_then_verify(tmp_path):
    cert = tmp_path / "cert.json"
    fig = tmp_path / "cert.png"
    code = main(["factorize", "--group", "su:5", "--w1", "x1^2", "--w2", "x1^2", "--target", "random",
                 "--seed", "7", "--out", str(cert), "--plot", str(fig)])
    assert code == EXIT_OK
    data = load(cert)
    assert data["residual"] <= 1e-8 and data["status"] == "ok"
    for key in ["group", "words", "target", "witnesses_A", "witnesses_B", "conjugators", "torus_data",
                "residual", "seed", "exact"]:
        assert key in data
    assert fig.stat().st_size > 0
    assert main(["verify", str(cert), "--out", str(tmp_path / "v.json")]) == EXIT_OK
    assert load(tmp_path / "v.json")["ok"]


def test_tampered_certificate_fails(tmp_path):
    cert = tmp_path / "cert.json"
    assert main(["factorize", "--group", "sp:3", "--w1", "[x1,x2]", "--w2", "x1^3", "--seed", "1",
                 "--out", str(cert)]) == EXIT_OK
    data = load(cert)
    data["witnesses_B"][0][1][0][1] += 1e-3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    assert main(["verify", str(bad), "--out", str(tmp_path / "v.json")]) == EXIT_FAIL
    assert not load(tmp_path / "v.json")["residual_ok"]


def test_byte_identical_runs(tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"c{i}.json"
        assert main(["factorize", "--group", "k:8", "--w1", "x1^3", "--w2", "x1^4", "--seed", "42",
                     "--no-timestamp", "--out", str(out)]) == EXIT_OK
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_factorize_target_from_file(tmp_path):
    target = tmp_path / "g.json"
    target.write_text(json.dumps(to_json(-np.eye(4))))
    out = tmp_path / "c.json"
    assert main(["factorize", "--group", "sp:2", "--w1", "x1^2", "--w2", "[x1,x2]", "--target", str(target),
                 "--out", str(out)]) == EXIT_OK
    assert load(out)["target_kind"] == "file"
    target.write_text(json.dumps(to_json(np.eye(3))))
    assert main(["factorize", "--group", "sp:2", "--w1", "x1^2", "--w2", "x1^2", "--target", str(target)]) \
        == EXIT_USAGE


def test_preimage_not_found_exit(tmp_path):
    out = tmp_path / "c.json"
    code = main(["factorize", "--group", "su:3", "--w1", "x1^2 x2^2", "--w2", "x1^2", "--restarts", "1",
                 "--iterations", "1", "--target", "identity", "--out", str(out)])
    assert code == EXIT_FAIL
    assert load(out)["status"] == "preimage-not-found"


@pytest.mark.parametrize("argv", [
    ["factorize", "--group", "su:5", "--w1", "x1^^2", "--w2", "x1^2"],
    ["factorize", "--group", "su", "--w1", "x1^2", "--w2", "x1^2"],
    ["factorize", "--group", "su:5", "--w1", "x1^2", "--w2", "x1^2", "--tol", "-1"],
    ["factorize", "--group", "su:5", "--w1", "x1^2", "--w2", "x1^2", "--seed", "-3"],
    ["--threads", "0", "prop41", "--bound", "2"],
    ["verify", "/nonexistent/cert.json"],
    ["central", "--n", "2", "--r", "zeta:8:1"],
    ["nosuchcommand"],
    [],
])
def test_usage_errors(argv):
    assert main(argv) == EXIT_USAGE


def test_goto_and_embed(tmp_path, capsys):
    assert main(["goto", "--group", "sp:4", "--check"]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["ok"] and rep["char_poly_matches"]
    assert main(["embed", "--family", "sp", "--n", "4", "--print"]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert sorted(rep["weights"]) == list(range(-7, 8, 2))


def test_oracle_command(tmp_path):
    out, fig = tmp_path / "o.json", tmp_path / "o.png"
    assert main(["oracle", "--p", "7", "--w1", "x1^2", "--w2", "x1^2", "--report", str(out),
                 "--plot", str(fig), "--no-timestamp"]) == EXIT_OK
    rep = load(out)
    assert rep["coverage"] == "G" and rep["group_order"] == 336
    assert fig.stat().st_size > 0


def test_central_command(tmp_path):
    out = tmp_path / "z.json"
    assert main(["central", "--n", "3", "--r", "zeta:6:1", "--out", str(out)]) == EXIT_OK
    rep = load(out)
    assert rep["product_is_rI"] and rep["exact"]


def test_sample_and_prop41(tmp_path):
    out, fig = tmp_path / "s.json", tmp_path / "s.png"
    assert main(["sample-discriminant", "--w", "x1^2", "--count", "10", "--height", "20", "--out", str(out),
                 "--plot", str(fig)]) == EXIT_OK
    rep = load(out)
    assert rep["found"] == 10 and rep["all_verified"]
    assert fig.stat().st_size > 0
    assert run(["prop41", "--bound", "2", "--out", str(tmp_path / "p.json")]) == EXIT_OK
    assert load(tmp_path / "p.json")["solution_count"] == 0


def test_zeta4_command(capsys):
    assert main(["zeta4", "--w", "[x1,x2]"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["status"] == "found"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "waringwidth", "central", "--n", "1", "--r", "-1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["product_is_rI"]

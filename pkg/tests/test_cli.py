import json

from laumonk.cli import main


def run_cli(args):
    return main(args)


def test_patterns_counts(tmp_path, capsys):
    out = tmp_path / "p.json"
    assert run_cli(["patterns", "--finite", "-n", "3", "-d", "1,1",
                    "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["count"] == 2
    assert run_cli(["patterns", "--affine", "-n", "2", "--total", "1",
                    "--out", str(out)]) == 0
    assert json.loads(out.read_text())["count"] == 2
    assert run_cli(["patterns", "--finite", "-n", "2", "-d", "0",
                    "--out", str(out)]) == 0
    assert json.loads(out.read_text())["count"] == 1


def test_verify_exit_codes(tmp_path):
    out = tmp_path / "r.json"
    assert run_cli(["verify", "--suite", "loop", "-n", "2", "-D", "2",
                    "-R", "1", "--strategy", "random", "--seed", "7",
                    "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["all_pass"] is True
    assert all(r["status"] == "pass" for r in data["reports"])
    # the controls suite exits 0 exactly when every mutation failed
    assert run_cli(["verify", "--suite", "controls", "-n", "3",
                    "--strategy", "random", "--seed", "3",
                    "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert all(r["status"] == "fail" for r in data["reports"])


def test_oracle_suite_cli(tmp_path):
    out = tmp_path / "o.json"
    assert run_cli(["verify", "--suite", "oracle", "-n", "3", "-D", "1",
                    "--out", str(out)]) == 0


def test_specialize_cli(tmp_path):
    out = tmp_path / "s.json"
    assert run_cli(["specialize", "-n", "3", "-K", "1", "--mu", "0,0,0",
                    "--max-degree", "1", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["closure"] is True
    assert run_cli(["specialize", "-n", "3", "-K", "1", "--mu", "1,0,0",
                    "--max-degree", "1", "--out", str(out)]) == 0
    # K = 0 rejected
    assert run_cli(["specialize", "-n", "3", "-K", "0", "--mu", "0,0,0"]) == 2
    # non-dominant mu rejected
    assert run_cli(["specialize", "-n", "3", "-K", "1", "--mu", "0,1,0"]) == 2
    # wrong u exponent fails closure
    assert run_cli(["specialize", "-n", "3", "-K", "1", "--mu", "0,0,0",
                    "--max-degree", "1", "--wrong-u",
                    "--out", str(out)]) == 1


def test_op_matrix_cli(tmp_path):
    out = tmp_path / "m.json"
    assert run_cli(["op-matrix", "-n", "2", "--kind", "f", "--node", "1",
                    "-d", "0", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data["entries"]) == 1
    assert run_cli(["op-matrix", "-n", "3", "--affine", "--kind", "f",
                    "--node", "1", "-d", "0,0,0", "-r", "1",
                    "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["entries"][0]["node_residue"] == 1
    assert "u_exponent" in data["entries"][0]


def test_byte_identical_reports(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--suite", "loop", "-n", "2", "-D", "2", "-R", "1",
            "--strategy", "random", "--seed", "11"]
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_worker_count_does_not_change_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    base = ["verify", "--suite", "glzero", "-n", "2", "-D", "2",
            "--strategy", "random", "--seed", "2"]
    assert run_cli(base + ["--workers", "1", "--out", str(a)]) == 0
    assert run_cli(base + ["--workers", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file_defaults_and_flag_override(tmp_path):
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"n": 2, "max_degree": 2, "window": 1,
                                "strategy": "random", "seed": 5}))
    out = tmp_path / "r.json"
    assert run_cli(["verify", "--suite", "loop", "--config", str(conf),
                    "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["n"] == 2 and data["seed"] == 5
    # explicit flag beats the config value
    assert run_cli(["verify", "--suite", "loop", "--config", str(conf),
                    "--seed", "9", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["seed"] == 9

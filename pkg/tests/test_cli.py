import io
import json
import os
import signal
import subprocess
import sys
import time
from pathlib import Path

import pytest

from hilbquad import arith
from hilbquad.cli import RunConfig, UsageError, main, parse_config, parse_int
from hilbquad.journal import JsonlStore, factor_store, structure_store


def run_cli(*argv):
    out = io.StringIO()
    code = main(["--quiet", *argv], out=out)
    return code, out.getvalue()


def test_parse_config_examples():
    assert parse_config(["kfree", "360", "--k", "3"]) == RunConfig("kfree", n=360, k=3)
    assert parse_config(["classgroup", "--disc", "-23"]) == RunConfig("classgroup", disc=-23)
    with pytest.raises(UsageError):
        parse_config(["census", "--form", "0,1,0,1", "--k", "2", "--x", "16"])
    with pytest.raises(UsageError):
        parse_config(["census", "--form", "0,1,0,1", "--degree", "2", "--k", "2", "--x", "16"])


def test_parse_int_forms():
    assert parse_int("1e12") == 10**12
    assert parse_int("10**6") == 10**6
    assert parse_int("-23") == -23
    with pytest.raises(UsageError):
        parse_int("1.5")


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# census settings\nform = 1,0,0,1,0\ndegree = 4\nx = 1000\nk = 3\n")
    c = parse_config(["--config", str(cfg), "census", "--form", "1,0,0,1,0", "--degree", "4", "--x", "1000"])
    assert c.k == 3 and c.x == 1000
    c = parse_config(["--config", str(cfg), "census", "--form", "1,0,0,1,0", "--degree", "4", "--x", "1000", "--k", "2"])
    assert c.k == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    with pytest.raises(UsageError):
        parse_config(["--config", str(bad), "factor", "10"])


@pytest.mark.parametrize(
    "argv",
    [
        ["factor"],
        ["frobnicate"],
        ["kfree", "12", "--k", "1"],
        ["kfree", "12", "--bogus"],
        ["census", "--form", "0,1,0,1", "--k", "2", "--x", "16"],
        ["census", "--form", "1,0,0,1,0", "--degree", "4", "--x", "0"],
        ["classgroup", "--disc", "-12"],
        ["fields", "--curve", "chyp2:c=1", "--sign", "neg", "--height-bound", "10"],
        ["fields", "--curve", "chyp2", "--sign", "sideways", "--height-bound", "10"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, _ = run_cli(*argv)
    assert code == 2


def test_factor_and_kfree():
    code, out = run_cli("factor", "360")
    assert code == 0
    assert json.loads(out)["factors"] == [[2, 3], [3, 2], [5, 1]]
    assert run_cli("kfree", "12", "--k", "2") == (0, "t=3 z=2\n")
    assert run_cli("kfree", "360", "--k", "3") == (0, "t=45 z=2\n")


def test_classgroup_output():
    code, out = run_cli("classgroup", "--disc", "-23")
    obj = json.loads(out)
    assert code == 0
    assert (obj["h"], obj["divisors"], obj["ranks"]["3"]) == (3, [3], 1)
    code, out = run_cli("classgroup", "--disc", "229")
    assert json.loads(out)["group"] == "narrow" and json.loads(out)["divisors"] == [3]


def test_capacity_exit_3():
    assert run_cli("classgroup", "--disc", "-100000000000003")[0] == 3
    assert run_cli("classgroup", "--disc", "-1000003", "--max-disc", "1000")[0] == 3


def test_gadget_output():
    code, out = run_cli("gadget", "--places", "inf,2", "--epsilon", "1/10")
    obj = json.loads(out)
    assert code == 0 and (obj["M"], obj["N"]) == (32, 11)


def test_fields_output():
    code, out = run_cli(
        "fields", "--curve", "chyp2", "--sign", "neg", "--height-bound", "600", "--bad-primes", "2,3", "--verify", "--m", "2"
    )
    lines = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(lines) == 8
    assert lines[0]["x0"] == "-43/6" and lines[0]["t"] == -140910
    assert all(r["status"] == "verified" for r in lines)


def test_census_csv():
    code, out = run_cli("census", "--form", "1,0,0,1,0", "--degree", "4", "--k", "2", "--x", "16")
    assert code == 0
    assert out.splitlines() == [
        "checkpoint,count,fitted_slope,fitted_constant,refuted_fraction",
        "10,1,,,",
        "16,2,,,",
    ]


def test_quiet_accepted_after_subcommand():
    assert main(["kfree", "12", "--quiet"], out=io.StringIO()) == 0


def test_verify_outputs(tmp_path):
    rec = tmp_path / "r.jsonl"
    csv = tmp_path / "c.csv"
    code, _ = run_cli(
        "verify", "--curve", "chyp2", "--sign", "neg", "--m", "2", "--rank", "2", "--disc-bound", "1e8",
        "--bad-primes", "2,3", "--height-bound", "25800", "--records", str(rec), "--output", str(csv),
    )
    assert code == 0
    rows = csv.read_text().splitlines()
    assert rows[0] == "checkpoint,count,fitted_slope,fitted_constant,refuted_fraction"
    assert rows[-1].startswith("100000000,13,")
    recs = [json.loads(line) for line in rec.read_text().splitlines()]
    assert len(recs) >= 13 and all(abs(r["d_field"]) <= 10**8 for r in recs)


# --- persistence -----------------------------------------------------------


def test_cache_round_trip_and_compaction(tmp_path, monkeypatch):
    monkeypatch.setenv("HILBQUAD_CACHE_DIR", str(tmp_path))
    big = (10**12 + 39) * (10**6 + 3)
    assert run_cli("factor", str(big))[0] == 0
    assert run_cli("factor", str(big))[0] == 0
    assert run_cli("classgroup", "--disc", "-3299")[0] == 0
    fpath, cpath = tmp_path / "factor.jsonl", tmp_path / "classgroup.jsonl"
    fs = factor_store(fpath)
    assert fs.get(big).value() == big
    lines = fpath.read_text().splitlines()
    assert len(lines) == len(set(lines)) == len(fs)
    keys = [json.loads(line)["key"] for line in lines]
    assert keys == sorted(keys)
    assert structure_store(cpath).get(-3299).divisors == (3, 9)
    # entries reload bit-identically
    before = fpath.read_bytes()
    fs.compact()
    assert fpath.read_bytes() == before
    assert arith.get_cache() is None


def test_corrupt_cache_entries_are_dropped(tmp_path):
    path = tmp_path / "factor.jsonl"
    good = {"v": 1, "key": 12, "payload": {"n": 12, "sign": 1, "factors": [[2, 2], [3, 1]]}}
    wrong = {"v": 1, "key": 14, "payload": {"n": 14, "sign": 1, "factors": [[2, 1], [5, 1]]}}
    old = {"v": 0, "key": 15, "payload": {"n": 15, "sign": 1, "factors": [[3, 1], [5, 1]]}}
    path.write_text("\n".join(json.dumps(o) for o in (good, wrong, old)) + '\n{"v": 1, "ke')
    fs = factor_store(path)
    assert len(fs) == 1 and fs.dropped == 2
    assert fs.get(12).value() == 12


def test_structure_cache_rejects_inconsistent_payload(tmp_path):
    path = tmp_path / "cg.jsonl"
    path.write_text(json.dumps({"v": 1, "key": -23, "payload": {"divisors": [2, 3]}}) + "\n")
    assert len(structure_store(path)) == 0


# --- resumable runs ----------------------------------------------------------

CENSUS = ["census", "--form", "1,0,0,1,0", "--degree", "4", "--k", "2", "--x", "1e6", "--shards", "8"]


def test_resume_is_idempotent(tmp_path):
    full = tmp_path / "full.csv"
    part = tmp_path / "part.csv"
    assert run_cli(*CENSUS, "--output", str(full))[0] == 0
    assert run_cli(*CENSUS, "--output", str(part), "--max-units", "3")[0] == 4
    assert part.read_text().startswith("# incomplete")
    assert run_cli(*CENSUS, "--output", str(part), "--max-units", "3")[0] == 4
    assert run_cli(*CENSUS, "--output", str(part))[0] == 0
    assert part.read_bytes() == full.read_bytes()


def test_journal_from_other_config_is_discarded(tmp_path):
    out = tmp_path / "a.csv"
    assert run_cli(*CENSUS, "--output", str(out), "--max-units", "4")[0] == 4
    other = [a if a != "1e6" else "1e5" for a in CENSUS]
    assert run_cli(*other, "--output", str(out))[0] == 0
    ref = tmp_path / "ref.csv"
    assert run_cli(*other, "--output", str(ref))[0] == 0
    assert out.read_bytes() == ref.read_bytes()


def test_verify_resume_is_idempotent(tmp_path):
    args = [
        "verify", "--curve", "chyp2", "--sign", "neg", "--m", "2", "--rank", "2", "--disc-bound", "1e7",
        "--bad-primes", "2,3", "--height-bound", "20000",
    ]
    full, part = tmp_path / "full.csv", tmp_path / "part.csv"
    assert run_cli(*args, "--output", str(full))[0] == 0
    assert run_cli(*args, "--output", str(part), "--max-units", "2")[0] == 4
    assert run_cli(*args, "--output", str(part))[0] == 0
    assert part.read_bytes() == full.read_bytes()


def test_kill_and_resume_subprocess(tmp_path):
    argv = [sys.executable, "-m", "hilbquad", "--quiet", *CENSUS[:-4], "--x", "1e8", "--shards", "16"]
    full, part = tmp_path / "full.csv", tmp_path / "part.csv"
    journal = Path(str(part) + ".journal")
    env = dict(os.environ, PYTHONHASHSEED="0")
    proc = subprocess.Popen([*argv, "--output", str(part)], env=env)
    deadline = time.time() + 120
    while time.time() < deadline and proc.poll() is None:
        if journal.exists() and len(journal.read_text().splitlines()) >= 5:
            break
        time.sleep(0.05)
    if proc.poll() is None:
        proc.send_signal(signal.SIGKILL)
    proc.wait()
    assert subprocess.run([*argv, "--output", str(part)], env=env).returncode == 0
    assert subprocess.run([*argv, "--output", str(full)], env=env).returncode == 0
    assert part.read_bytes() == full.read_bytes()

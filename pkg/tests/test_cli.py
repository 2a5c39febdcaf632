from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from ncmf.cli import main

HERE = Path(__file__).parent
FIX = HERE / "fixtures"
GOLDEN = HERE / "golden"

GOLDEN_CASES = {
    "rescale_family.json": ["rescale", "rescale_family.json"],
    "twist_constant_f17.json": ["twist", "constant_f17.json", "diag_twist.json", "--normalize"],
    "period_rank_one_f13.json": ["period", "rank_one_f13.json", "--seed", "1"],
    "from_point_exterior3.json": ["from-point", "exterior3.json", "point111.json"],
}


def fix_args(args):
    return [str(FIX / a) if a.endswith(".json") else a for a in args]


def run_cli(args, env=None):
    full_env = dict(os.environ)
    full_env.pop("NCMF_SEED", None)
    full_env.update(env or {})
    return subprocess.run([sys.executable, "-m", "ncmf.cli", *fix_args(args)],
                          capture_output=True, env=full_env, check=False)


def call(capsys, args):
    code = main(fix_args(args))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


@pytest.mark.parametrize("golden", sorted(GOLDEN_CASES))
def test_golden_outputs(golden):
    first = run_cli(GOLDEN_CASES[golden])
    second = run_cli(GOLDEN_CASES[golden])
    assert first.returncode == 0, first.stderr
    assert first.stdout == second.stdout
    assert first.stdout == (GOLDEN / golden).read_bytes()


def test_rescale_report(capsys):
    code, out = call(capsys, ["rescale", "rescale_family.json"])
    assert code == 0
    assert out["nmf"]["phi0"] == [["3*x1 + 5*x2"]]
    assert out["nmf"]["phi1"] == [["1/5*x1 + 2/3*x2"]]


def test_twist_report(capsys):
    code, out = call(capsys, ["twist", "constant_f17.json", "diag_twist.json", "--normalize"])
    assert code == 0
    assert out["sigma"] == [["2", "0"], ["0", "9"]] and out["lambda"] == "4"


def test_twist_without_normalize_fails(capsys):
    code, out = call(capsys, ["twist", "constant_f17.json", "diag_twist.json"])
    assert code == 1 and out["error"] == "NotFixed"


def test_verify_and_text(capsys):
    code, out = call(capsys, ["verify", "rank_one.json"])
    assert code == 0 and out["ok"] is True
    code, out = call(capsys, ["verify", "rank_one.json", "--text"])
    assert code == 0 and "ok: true" in out


def test_hilbert_variants(capsys):
    _, out = call(capsys, ["hilbert", "rank_one.json", "--window", "4"])
    assert out["coker"] == [1, 1, 0, 0, 0]
    _, out = call(capsys, ["hilbert", "module23.json", "--window", "3"])
    assert out["module"] == [1, 1, 0, 0]


def test_from_point_and_extension(capsys):
    code, out = call(capsys, ["from-point", "exterior3.json", "point111.json", "--window", "4"])
    assert code == 0 and out["period"] == 1 and out["coker_hilbert"] == [1, 2, 1, 0, 0]
    code, out = call(capsys, ["from-point", "exterior3.json", "point100.json"])
    assert code == 1 and out["error"] == "PointOnXn"
    code, out = call(capsys, ["extension", "exterior3.json", "point111.json", "point111.json",
                              "--window", "4", "--steps", "3"])
    assert code == 0 and out["nonsplit"] is True and out["linear"] is True


def test_module_commands(capsys):
    code, out = call(capsys, ["from-module", "module23.json"])
    assert code == 0 and out["nmf"]["phi1"] == [["1/5*x1 + 2/3*x2"]]
    code, out = call(capsys, ["resolve", "module23.json", "--steps", "3"])
    assert code == 0 and out["betti"] == [[0], [1], [2], [3]]


def test_dual_reduce_ext1(capsys):
    _, out = call(capsys, ["dual", "poly3.json"])
    assert out["dual"]["square_zero"] == [1, 2, 3]
    code, out = call(capsys, ["dual", "rank_one.json"])
    assert code == 0
    code, out = call(capsys, ["reduce", "rank_one.json"])
    assert code == 0
    _, out = call(capsys, ["ext1", "poly3.json", "point100.json", "point100.json"])
    assert out["ext1"] == 2
    _, out = call(capsys, ["ext1", "poly3.json", "point100.json", "point010.json"])
    assert out["ext1"] == 0


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out = call(capsys, ["verify", str(bad)])
    assert code == 2 and out["error"] == "input"
    code, out = call(capsys, ["verify", str(tmp_path / "missing.json")])
    assert code == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"algebra": {"field": {"type": "Q"}, "n": 2}}))
    code, _ = call(capsys, ["verify", str(wrong)])
    assert code == 2
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == 2


def test_seed_environment_override():
    args = ["period", "rank_one_f13.json"]
    plain = run_cli(args + ["--seed", "1"])
    env = run_cli(args + ["--seed", "7"], env={"NCMF_SEED": "1"})
    assert json.loads(env.stdout)["seed"] == 1
    assert env.stdout == plain.stdout


def test_complete(capsys, tmp_path):
    code, out = call(capsys, ["complete", "rank_one.json"])
    assert code == 0 and out["nmf"]["nu"] == [["1/2", "0"], ["0", "2"]]
    obj = json.loads((FIX / "rank_one.json").read_text())
    obj["phi1"] = [["3*x1 + 10*x2"]]
    bad = tmp_path / "scaled.json"
    bad.write_text(json.dumps(obj))
    code, out = call(capsys, ["complete", str(bad)])
    assert code == 1 and out["error"] == "ProductNotF"


def test_mismatched_nu_is_input_error(capsys, tmp_path):
    obj = json.loads((FIX / "rank_one.json").read_text())
    obj["nu"] = [["1", "0"], ["0", "1"]]
    path = tmp_path / "nu.json"
    path.write_text(json.dumps(obj))
    code, out = call(capsys, ["verify", str(path)])
    assert code == 2 and "NotNormal" in out["message"]

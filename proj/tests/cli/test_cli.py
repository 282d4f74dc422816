import json
import os
import subprocess

import pytest

CLI = os.environ.get("LFRM_CLI")
pytestmark = pytest.mark.skipif(not CLI, reason="LFRM_CLI not set")
FIELD = ["--field", "padic:p=3,prec=12"]


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def test_theta_example():
    r = run("theta", *FIELD, "--x", "ord=-2,unit=1")
    assert r.returncode == 0
    assert json.loads(r.stdout) == {"unit": "+1", "half_exp": 2}


def test_snf_example():
    r = run("snf", *FIELD, "--matrix", '[[0,"ord=1,unit=1"],["ord=-1,unit=1",0]]')
    assert r.returncode == 0
    out = json.loads(r.stdout)
    assert out["sing"] == [1, -1]
    assert out["a"]["rows"] == 2 and out["b"]["rows"] == 2


def test_oplus_example():
    r = run("oplus", "--a", '{"head":[6,2,2],"tail":{"const":-3}}', "--b", '{"head":[4,3,0,-1],"tail":"neginf"}')
    assert json.loads(r.stdout) == {"head": [6, 4, 3, 2, 2, 0, -1], "tail": {"const": -3}}


def test_verify_identities_passes():
    r = run("verify", "identities", *FIELD, "--seed", "7")
    assert r.returncode == 0, r.stderr
    rep = json.loads(r.stdout)
    assert rep["pass"] is True
    assert [c["criterion"] for c in rep["criteria"]] == [1, 2, 3, 8, 9, 0]
    assert "seed 7" in r.stderr


def test_same_seed_same_report():
    args = ("sample", "nu", *FIELD, "--param", '{"k":-1,"kk":[2],"kkp":[1]}', "--n", "3", "--count", "4", "--seed", "11")
    a, b = run(*args), run(*args)
    assert a.returncode == 0 and a.stdout == b.stdout
    c = run(*args[:-1], "12")
    assert c.stdout != a.stdout


def test_integral_csv_and_failure_code():
    # rank-one NonSym at n = 4 misses the stated bound, so the run reports failure
    r = run("integral", *FIELD, "--kind", "nonsym", "--D", '["ord=-1,unit=1",1,1,1]', "--A", "[1]",
            "--samples", "100000", "--format", "csv")
    assert r.returncode == 2
    header, row = r.stdout.strip().split("\n")
    assert header.startswith("kind,n,r,")
    assert len(row.split('",')[-1].split(",")) > 5


def test_usage_errors():
    assert run().returncode == 1
    assert run("theta", *FIELD).returncode == 1
    assert run("integral", *FIELD, "--D", "[1]", "--A", "[1]", "--samples", "10").returncode == 1
    r = run("theta", *FIELD, "--x", "ord=1,unit=3")
    assert r.returncode == 1 and "json" in r.stderr
    r = run("field-info", "--field", "padic:p=4,prec=3")
    assert r.returncode == 1 and "localfield" in r.stderr

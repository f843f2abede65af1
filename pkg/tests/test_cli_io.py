import json

import pytest

from quadric_backlund import cli_io

SMALL = "--grid=-0.5,-0.5,0.05,0.05,21,21"


def _run(*args):
    return cli_io.main([str(a) for a in args])


def test_soliton_chain_and_outputs(tmp_path):
    out = tmp_path / "chain"
    assert _run("soliton", "--chain", "2,-2", SMALL, "--out", out) == 0
    rep = json.loads((tmp_path / "chain.json").read_text())
    assert rep["vacuum_distance"] < 1e-12
    assert (tmp_path / "chain.csv").read_text().startswith("# 21 21")


def test_outputs_are_deterministic(tmp_path):
    for name in ("a", "b"):
        assert _run("soliton", "--chain", "2,3,5", "--c1", "0.1,-0.2,0.3", SMALL, "--out", tmp_path / name) == 0
    for ext in ("csv", "json"):
        assert (tmp_path / f"a.{ext}").read_bytes() == (tmp_path / f"b.{ext}").read_bytes()


def test_config_overrides_flags(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"sigma": 3.0, "grid": [0, 0, 0.05, 0.05, 11, 11]}))
    assert _run("soliton", "--sigma", "2", "--config", cfg, "--out", tmp_path / "o") == 0
    rep = json.loads((tmp_path / "o.json").read_text())
    assert rep["chain"] == [3.0] and rep["samples"] == 121


def test_elliptic_sigma_is_a_phase_slope(tmp_path):
    # for elliptic kinds --sigma gives tan(phi) of the unit parameter
    assert _run("soliton", "--kind", "esg", "--sigma", "0.5", SMALL, "--out", tmp_path / "e") == 0


@pytest.mark.parametrize("args", [
    ("leaf", "--z", "2.5"),
    ("leaf", "--iterate", "3", "--z", "0.7,1.3"),
    ("peterson", "--s", "-1"),
    ("pendulum", "--c", "1", "--theta0", "0"),
    ("verify", "--criteria", "99"),
])
def test_invalid_input_exits_nonzero_without_files(args, tmp_path, capsys):
    assert _run(*args, "--out", tmp_path / "x") == 2
    assert "error:" in capsys.readouterr().err
    assert list(tmp_path.iterdir()) == []


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"nonsense": 1}')
    assert _run("verify", "--config", cfg) == 2


def test_peterson_mesh_and_clipping(tmp_path, caplog):
    assert _run("peterson", "--eps", "-1", "--grid=-0.5,-0.5,0.05,0.05,21,21", "--out", tmp_path / "p") == 0
    rep = json.loads((tmp_path / "p.json").read_text())
    assert rep["clipped_samples"] > 0 and rep["isometry_max"] < 1e-6
    obj = (tmp_path / "p.obj").read_text().splitlines()
    assert sum(l.startswith("v ") for l in obj) == 21 * 21 and any(l.startswith("f ") for l in obj)


def test_peterson_limit(tmp_path):
    assert _run("peterson", "--coords", "ab", "--s", "20", "--out", tmp_path / "q") == 0
    assert json.loads((tmp_path / "q.json").read_text())["quadric_limit_distance"] < 1e-6


@pytest.mark.parametrize("eps", [1, -1])
def test_leaf_iterates(eps, tmp_path):
    assert _run("leaf", "--eps", eps, "--iterate", "3", "--grid", "0,0.5,0.005,0.005,41,41",
                "--out", tmp_path / "l") == 0
    rep = json.loads((tmp_path / "l.json").read_text())
    assert rep["m3_route_max"] <= 1e-8 and rep["orders_max"] <= 1e-8 and rep["triple_leaf_routes_max"] <= 1e-8


def test_export_keeps_imaginary_coordinates_out_of_obj(tmp_path):
    assert _run("export", "--z", "0.5", "--eps", "-1", "--out", tmp_path / "x") == 0
    side = (tmp_path / "x.imag.csv").read_text().splitlines()
    assert side[0] == "index,imag_x1"
    obj = [l.split() for l in (tmp_path / "x.obj").read_text().splitlines() if l.startswith("v ")]
    assert all(float(v[2]) == 0.0 for v in obj)


def test_pendulum_profile(tmp_path):
    assert _run("pendulum", "--c", "-1", "--theta0", "0.5", "--out", tmp_path / "pp") == 0
    assert (tmp_path / "pp.csv").read_text().splitlines()[0] == "v,theta,theta_prime,alpha,beta,mu"


def test_verify_exit_code_tracks_checks(tmp_path):
    assert _run("verify", "--criteria", "2", "--no-runtime", "--out", tmp_path / "ok") == 0
    assert _run("verify", "--criteria", "3", "--perturb", "1e-3", "--out", tmp_path / "bad") == 1
    rep = json.loads((tmp_path / "bad.json").read_text())
    assert rep["criteria"] == {"3": False}


def test_atomic_write_leaves_no_temporaries(tmp_path):
    cli_io.atomic_write(tmp_path / "sub" / "f.txt", "x")
    assert [p.name for p in (tmp_path / "sub").iterdir()] == ["f.txt"]


def test_sinh_domain_clipping_is_reported(tmp_path):
    code = _run("soliton", "--kind", "hsgh", "--sigma", "1", "--c1", "5", "--grid", "0,0,0.01,0.01,100,100",
                "--out", tmp_path / "s")
    assert code == 1 and json.loads((tmp_path / "s.json").read_text())["invalid_samples"] == 10000

from pathlib import Path

import numpy as np
import pytest

from stfdtd.cli import main

BASE = """\
[grid]
dz = 1
dt = dz/2
nz = 300
steps = {steps}

[run]
snapshot_every = {every}

[medium.1]
eps = 1

[medium.2]
eps = 4

[interface.1]
z0 = {z0}
beta = 0.2

[source.a]
z = 30
tau = 8
delay = 30

[probe.reflected]
z = 20
"""


def scenario(tmp_path, steps=400, every=0, z0=100):
    p = tmp_path / "s.scenario"
    p.write_text(BASE.format(steps=steps, every=every, z0=z0))
    return p


def test_simulate_outputs(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["simulate", str(scenario(tmp_path, every=200)), "--out", str(out)]) == 0
    assert sorted(p.name for p in (out / "snapshots").iterdir()) == ["step_200", "step_400"]
    data = np.loadtxt(out / "probes" / "reflected.csv", delimiter=",", skiprows=1)
    assert data.shape == (400, 2)
    man = (out / "manifest").read_text()
    for key in ("dz", "dt", "S_max", "interface.1.beta", "source.tau", "wall_time_s"):
        assert f"\n{key} = " in "\n" + man
    txt = capsys.readouterr().out
    assert "reflected,PointProbe" in txt


def test_simulate_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    s = scenario(tmp_path)
    main(["simulate", str(s), "--out", str(a)])
    main(["simulate", str(s), "--out", str(b)])
    for rel in ("probes/reflected.csv", "snapshots/step_400"):
        assert (a / rel).read_bytes() == (b / rel).read_bytes()


def test_zero_step_manifest_only(tmp_path):
    out = tmp_path / "out"
    assert main(["simulate", str(scenario(tmp_path, steps=0)), "--out", str(out)]) == 0
    assert [p.name for p in out.iterdir()] == ["manifest"]


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.scenario"
    bad.write_text("[grid]\ndz = 1\nnz = 10\nsteps = 1\n")
    assert main(["simulate", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert main(["simulate", str(tmp_path / "missing.scenario")]) == 2
    # interface band runs into the grid end during the run
    far = tmp_path / "far.scenario"
    far.write_text(BASE.format(steps=2000, every=0, z0=200).replace("nz = 300", "nz = 300"))
    assert main(["simulate", str(far), "--out", str(tmp_path / "o2")]) in (2, 4)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_instability_exit_code(tmp_path):
    txt = BASE.format(steps=4000, every=0, z0=150).replace("beta = 0.2", "beta = 0")
    txt = txt.replace("dt = dz/2", "dt = 1.5 dz").replace("[run]\n", "[run]\nunsafe_courant = true\n")
    p = tmp_path / "u.scenario"
    p.write_text(txt)
    assert main(["simulate", str(p), "--out", str(tmp_path / "o")]) == 3


def test_overlap_exit_code(tmp_path):
    # band clearance is only checked at the first and last step; a mid-run
    # collision surfaces as an overlap at run time
    txt = """\
[grid]
dz = 1
dt = dz/2
nz = 200
steps = 200

[medium.1]
eps = 1
[medium.2]
eps = 2
[medium.3]
eps = 3

[interface.1]
kind = piecewise_linear
z0 = 66
segments = 0:0.3, 30:-0.3
[interface.2]
z0 = 80
beta = 0.0
"""
    p = tmp_path / "o.scenario"
    p.write_text(txt.replace("steps = 200", "steps = 100"))
    assert main(["simulate", str(p), "--out", str(tmp_path / "o")]) == 4


def test_stability_smax(capsys):
    assert main(["stability", "--n", "1.5", "--beta", "0.3", "--smax"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(1.5 / 1.45)


def test_stability_curve(capsys):
    assert main(["stability", "--n", "1.5", "--beta", "0.3", "--curve", "2:40", "--points", "5"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "N_lambda,zeta_forward,zeta_backward"
    rows = np.array([[float(x) for x in l.split(",")] for l in lines[1:]])
    assert rows.shape == (5, 3) and rows[0, 0] == 2 and rows[-1, 0] == 40


def test_oracle_subcommands(capsys):
    assert main(["oracle", "interface", "--n2", "2", "--beta", "0.2"]) == 0
    d = dict(l.split(",", 1) for l in capsys.readouterr().out.strip().splitlines())
    assert float(d["Gamma"]) == pytest.approx(-2 / 9)
    assert float(d["T"]) == pytest.approx(8 / 9)
    assert main(["oracle", "wedge", "--eps", "1,3,6", "--v1", "0.2", "--v2", "-0.3", "--omega", "1"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()[1:]
    assert [float(r.split(",")[3]) for r in rows] == pytest.approx([0.6667, 3.8719, 7.9763], abs=1e-4)
    assert main(["oracle", "accel", "--n2", "1.7320508", "--a-prime", "-0.2", "--beta0", "0.5",
                 "--t", "0,1"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert len(rows) == 3 and rows[1].startswith("0,")


def test_validate_invariants(tmp_path, capsys):
    assert main(["validate", "invariants", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "-----BEGIN REPORT-----" in out and "-----END REPORT-----" in out
    assert (tmp_path / "report.csv").read_text().count("PASS") == 6


def test_validate_fig5_writes_figure(tmp_path, monkeypatch):
    from stfdtd import validation
    quick = lambda: validation.run_fig5(pairs=[(1.0, 0.2)], steps=2000)
    monkeypatch.setitem(validation.FIGURES, "fig5", quick)
    assert main(["validate", "fig5", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "fig5_attenuation.png").stat().st_size > 1000

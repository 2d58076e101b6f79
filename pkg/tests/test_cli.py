import json
import math

import pytest

from ptising.cli import build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def values(out):
    return dict(line.split(" = ", 1) for line in out.strip().splitlines())


def test_energy_example(capsys):
    code, out, _ = run(capsys, "energy", "--eta", "0", "--xi", "0", "--sites", "8")
    assert code == 0
    v = values(out)
    assert float(v["eps_g"]) == -1.0 and float(v["e_total"]) == -8.0
    code, out, _ = run(capsys, "energy", "--eta", "1", "--xi", "0", "--thermodynamic")
    assert float(values(out)["eps_g"]) == pytest.approx(-4 / math.pi, abs=1e-12)


def test_phase_example(capsys):
    code, out, _ = run(capsys, "phase", "--eta", "0", "--xi", "2")
    assert code == 0 and out.strip() == "Boundary"
    code, out, _ = run(capsys, "phase", "--eta", "0.5", "--xi", "2", "--tol", "1e-6", "--format", "json")
    assert json.loads(out)["phase"] == "ParamagnetI"


def test_dispersion(capsys):
    code, out, _ = run(capsys, "dispersion", "--eta", "0", "--xi", "0", "--k", "0.7", "--n", "2")
    assert code == 0 and float(values(out)["eps"]) == pytest.approx(-2.0)
    code, out, _ = run(capsys, "dispersion", "--eta", "0.2", "--xi", "1.5", "--k", "0.1", "--n", "3", "--format", "json")
    eps = json.loads(out)["eps"]
    assert eps["re"] == 0 and eps["im"] > 0


def test_laplacian_with_fd(capsys):
    code, out, _ = run(capsys, "laplacian", "--eta", "1.5", "--xi", "0.2", "--fd", "--step", "1e-3")
    v = values(out)
    assert code == 0
    assert complex(v["laplacian_fd"].replace(" ", "")) == pytest.approx(complex(v["laplacian"]), rel=1e-6)
    assert {"d_eta", "d_xi", "m_a", "m_b", "boundary_distance"} <= set(v)


def test_laplacian_finite_and_json(capsys):
    code, out, _ = run(capsys, "laplacian", "--eta", "0", "--xi", "1.5", "--sites", "600", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["mode"] == "finite(two_n=600)"
    assert math.isfinite(doc["laplacian"]["re"])


@pytest.mark.parametrize("preset", ["sum", "diff"])
def test_berry(capsys, preset):
    code, out, _ = run(capsys, "berry", "--eta", "0.5", "--xi", "0.3", "--preset", preset)
    v = values(out)
    assert code == 0 and v["preset"] == preset and "C" in v and "chi" in v


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "laplacian", "--eta", "0", "--xi", "1.5")
    assert code == 1 and "gapless" in err
    code, _, err = run(capsys, "asymptotics", "circle", "--r", "1.001", "--phi", str(math.pi / 2))
    assert code == 1


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["energy", "--eta", "0"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["energy", "--eta", "0", "--xi", "0", "--bogus"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["energy", "--eta", "0", "--xi", "0", "--sites", "8", "--thermodynamic"])
    assert e.value.code == 2
    capsys.readouterr()
    code, _, err = run(capsys, "energy", "--eta", "0", "--xi", "0", "--sites", "7")
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "asymptotics", "axis", "--eta", "0.5")
    assert code == 2


def test_help_lists_flags(capsys):
    parser = build_parser()
    for argv, flags in ((["energy"], ["--eta", "--xi", "--sites", "--thermodynamic", "--quad-points", "--format"]),
                        (["scan"], ["--config", "--out", "--jobs", "--out-format", "--quiet"]),
                        (["oracle", "chain"], ["--sites", "--tol"]),
                        (["oracle", "overlap47"], ["--k", "--h"])):
        with pytest.raises(SystemExit) as e:
            parser.parse_args(argv + ["--help"])
        assert e.value.code == 0
        out = capsys.readouterr().out
        assert all(f in out for f in flags)
    with pytest.raises(SystemExit):
        main(["--version"])
    assert "ptising" in capsys.readouterr().out


def test_oracle_chain(capsys):
    code, out, _ = run(capsys, "oracle", "chain", "--sites", "8", "--eta", "0.5", "--xi", "0.3")
    v = values(out)
    assert code == 0 and v["agree"] == "True" and v["lowest_sector"] == "EVEN"
    code, out, _ = run(capsys, "oracle", "chain", "--sites", "6", "--eta", "0.5", "--xi", "0.3", "--tol", "1e-30")
    assert code == 1


@pytest.mark.parametrize("which, extra", [
    ("pt", ["--sites", "6"]), ("block", ["--k", "1.1"]), ("biortho", []), ("overlap47", ["--h", "1e-4"]),
])
def test_oracle_subcommands(capsys, which, extra):
    code, out, _ = run(capsys, "oracle", which, "--eta", "0.5", "--xi", "0.4", *extra, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert any(doc[k] is True for k in ("pt_symmetric", "agree", "biorthonormal", "vanishes") if k in doc)


def test_asymptotics(capsys):
    code, out, _ = run(capsys, "asymptotics", "circle", "--r", "1.001", "--phi", "0", "--compare")
    v = values(out)
    assert code == 0 and float(v["prediction"]) == pytest.approx(3.1096, abs=1e-4)
    assert "laplacian" in v
    code, out, _ = run(capsys, "asymptotics", "axis", "--eta", "1e-3", "--compare", "--xi", "5")
    assert code == 0 and float(values(out)["prediction"]) == pytest.approx(3.1096, abs=1e-4)


def test_scan_to_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"eta": [-1, 1, 3], "xi": [-1, 1, 3], "two_n": 20, "quantities": ["energy", "phase"]}))
    out = tmp_path / "out.csv"
    code, _, _ = run(capsys, "scan", "--config", str(cfg), "--out", str(out), "--jobs", "1", "--quiet")
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 10 and lines[0].startswith("eta,xi,r,phi")
    code, text, err = run(capsys, "scan", "--config", str(cfg), "--out", "-", "--jobs", "2", "--out-format", "json")
    assert code == 0 and len(json.loads(text)["records"]) == 9
    assert "row" in err


def test_scan_bad_config(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"eta": [-1, 1, 1], "xi": [-1, 1, 3]}))
    code, _, err = run(capsys, "scan", "--config", str(cfg), "--out", str(tmp_path / "x.csv"), "--quiet")
    assert code == 2


def test_backend_flag(capsys):
    code, out, _ = run(capsys, "--backend", "python", "energy", "--eta", "0.3", "--xi", "0.2")
    assert code == 0
    from ptising import kernels
    kernels.set_backend(kernels.available_backends()[0])

import json

import pytest

from diqss.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_rate_example(capsys):
    code, out, _ = run(capsys, "rate", "--fidelity", "0.98", "--eta", "0.98", "--variant", "basic", "--ad")
    assert code == 0
    assert "rate" in out and "0.5921" in out


def test_rate_json(capsys):
    code, out, _ = run(capsys, "rate", "-F", "0.98", "--eta", "0.98", "--variant", "np", "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert rec["q"] == 0.05
    assert rec["rate"] == pytest.approx(0.198, abs=0.002)


def test_rate_from_distance(capsys):
    code, out, _ = run(capsys, "rate", "-F", "1", "--distance", "1", "--variant", "basic", "--ad",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["rate"] == pytest.approx(0.2015, abs=0.002)


def test_threshold_example(capsys):
    code, out, _ = run(capsys, "threshold", "--fidelity", "1", "--variant", "basic", "--format", "json")
    assert code == 0
    assert json.loads(out)["eta_threshold"] == pytest.approx(0.963, abs=1e-3)


def test_domain_error_exit_1(capsys):
    code, _, err = run(capsys, "rate", "--fidelity", "2")
    assert code == 1
    assert "fidelity" in err and "[0, 1]" in err


def test_unreachable_eta_exit_1(capsys):
    code, _, err = run(capsys, "distance", "--eta", "0.99")
    assert code == 1 and err


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["rate", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_distance_and_qber(capsys):
    code, out, _ = run(capsys, "distance", "--variant", "basic", "--ad", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["d_max"] == pytest.approx(1.85, abs=0.01)
    code, out, _ = run(capsys, "qber", "-F", "0.98", "--eta", "0.98", "--variant", "ps", "--ad",
                       "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert rec["oracle_distilled_qber"] == pytest.approx(rec["distilled_qber"], abs=1e-12)


def test_sweep_and_table1(capsys):
    code, out, _ = run(capsys, "sweep", "--axis", "d:0:2:5", "--variants", "basic,ad+basic")
    assert code == 0
    assert len(out.splitlines()) == 1 + 5 * 2
    code, _, err = run(capsys, "sweep", "--axis", "d:0:2:5", "--axis", "eta:0.5:1:3")
    assert code == 1 and "d and eta" in err
    code, out, _ = run(capsys, "table1", "--format", "csv")
    assert code == 0 and len(out.splitlines()) == 9


def test_simulate_and_verify(capsys):
    code, out, _ = run(capsys, "simulate", "--variant", "nps", "--ad", "--rounds", "20000", "--seed", "5")
    rec = json.loads(out)
    assert code == 0 and rec["rounds_sampled"] == 20000
    code, out, _ = run(capsys, "verify", "--suite", "table1")
    assert code == 0 and "32/32 checks passed" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--axis", "F:0.9:1:4", "--axis", "q:0:0.5:3", "--format", "json"],
        ["simulate", "--variant", "basic", "--ad", "--rounds", "50000", "--seed", "12"],
        ["table1", "--format", "json"],
    ],
)
def test_output_file_byte_identical(tmp_path, argv):
    a, b = tmp_path / "a.out", tmp_path / "b.out"
    assert main([*argv, "--output", str(a)]) == 0
    assert main([*argv, "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.stat().st_size > 0

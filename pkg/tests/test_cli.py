import dataclasses
import json

import pytest

from twoinner import cli
from twoinner.reverses import Verdict

FIXTURE_ARGS = ["integral", "--prop", "4.1", "--f", "x^2", "--g", "x", "--h", "1", "--rho", "1",
                "--interval", "0,1", "--m", "0.1", "--M", "2"]


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj), encoding="utf-8")
    return str(p)


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def strip_timing(text):
    out = []
    for rec in records(text):
        rec.pop("elapsed_s", None)
        out.append(json.dumps(rec, sort_keys=True))
    return out


WITNESS = {"x": [1, 1, 0], "y": [1, 0, 0], "z": [0, 0, 1], "a": 0, "A": 2}


def test_integral_fixture(capsys):
    assert cli.run(FIXTURE_ARGS + ["--format", "jsonl"]) == 0
    (rec,) = records(capsys.readouterr().out)
    assert rec["verdict"] == "holds" and rec["form"] == "thm21" and rec["prop"] == "4.1"
    values = [c["value"] for c in rec["chain"]]
    assert values[1] == pytest.approx(1 / 2160, rel=1e-9)
    assert values[2] == pytest.approx(0.00625, rel=1e-9)
    assert values[3] == pytest.approx(0.25 * 1.9**2 / 144, rel=1e-9)


def test_verify_witness(tmp_path, capsys):
    path = write(tmp_path, "w.json", WITNESS)
    assert cli.run(["verify", "--form", "thm21", "--input", path, "--format", "jsonl"]) == 0
    (rec,) = records(capsys.readouterr().out)
    assert [c["value"] for c in rec["chain"]] == pytest.approx([0, 1, 1, 1], abs=1e-15)
    assert len(rec["inputs_digest"]) == 64


def test_verify_complex_input(tmp_path, capsys):
    path = write(tmp_path, "c.json", {**WITNESS, "x": [[1, 0], [0, 1], 0], "a": [0, 0], "A": [2, 0]})
    assert cli.run(["verify", "--form", "thm31", "--input", path]) == 0
    assert "THM31: holds" in capsys.readouterr().out


def test_verify_hypothesis_unmet(tmp_path):
    path = write(tmp_path, "u.json", {**WITNESS, "x": [30, 1, 0]})
    assert cli.run(["verify", "--form", "thm21", "--input", path]) == 3


def test_violation_exit_code_and_reproducer(tmp_path, monkeypatch, capsys):
    real = cli.evaluate

    def broken(*a, **k):
        return dataclasses.replace(real(*a, **k), verdict=Verdict.VIOLATED)

    monkeypatch.setattr(cli, "evaluate", broken)
    path = write(tmp_path, "w.json", WITNESS)
    code = cli.run(["verify", "--form", "thm21", "--input", path, "--repro-dir", str(tmp_path / "r")])
    assert code == 1
    repro = json.loads((tmp_path / "r" / "repro-thm21-0.json").read_text())
    assert repro["x"] == [1.0, 1.0, 0.0] and repro["form"] == "thm21"
    # the reproducer is itself a valid input file
    monkeypatch.setattr(cli, "evaluate", real)
    assert cli.run(["verify", "--form", "thm21", "--input", str(tmp_path / "r" / "repro-thm21-0.json")]) == 0


@pytest.mark.parametrize(
    "payload,field",
    [
        ({k: v for k, v in WITNESS.items() if k != "z"}, "'z'"),
        ({**WITNESS, "y": [1, 0]}, "'y'"),
        ({**WITNESS, "a": "zero"}, "'a'"),
        ({**WITNESS, "x": [1, [1, 2, 3], 0]}, "'x[1]'"),
        ({**WITNESS, "mode": "octonion"}, "'mode'"),
    ],
)
def test_malformed_vector_file_names_field(tmp_path, capsys, payload, field):
    path = write(tmp_path, "bad.json", payload)
    assert cli.run(["verify", "--form", "thm21", "--input", path]) == 2
    assert field in capsys.readouterr().err


def test_precondition_and_usage_errors(tmp_path, capsys):
    path = write(tmp_path, "w.json", WITNESS)
    assert cli.run(["verify", "--form", "tri311", "--input", path]) == 2
    assert cli.run(["sharpness", "--form", "thm21", "--dim", "2"]) == 2
    assert cli.run(["axioms", "--dim", "2", "--mode", "real", "--trials", "50"]) == 0
    assert cli.run(["axioms", "--bogus"]) == 2
    assert cli.run([]) == 2
    assert cli.run(["fuzz", "--trials", "0"]) == 2
    assert cli.run(["verify", "--form", "thm21", "--input", str(tmp_path / "missing.json")]) == 2


def test_parse_error_passes_offset(capsys):
    args = FIXTURE_ARGS.copy()
    args[args.index("x^2")] = "x ** 2"
    assert cli.run(args) == 2
    assert "byte 3" in capsys.readouterr().err


def test_sharpness_records(capsys):
    assert cli.run(["sharpness", "--form", "thm31", "--dim", "3", "--trials", "100", "--epsilon-grid",
                    "--format", "jsonl"]) == 0
    recs = records(capsys.readouterr().out)
    assert recs[0]["estimate"] <= 0.25 + 1e-9
    assert [r["epsilon"] for r in recs[1:]] == [1e-6, 1e-4, 1e-2, 0.1, 0.5]
    for r in recs[1:]:
        assert r["ratio"] == pytest.approx(r["expected"], abs=1e-9)


def test_fuzz_summary(capsys):
    assert cli.run(["fuzz", "--dim", "3", "--mode", "complex", "--trials", "200", "--format", "jsonl"]) == 0
    recs = records(capsys.readouterr().out)
    per_form = [r for r in recs if "max_ratio" in r]
    assert len(per_form) == 10 and sum(r["trials"] for r in per_form) == 200
    assert all(r["max_ratio"] <= r["target"] + 1e-9 for r in per_form)
    assert recs[-1]["summary"] and recs[-1]["violated"] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["fuzz", "--trials", "100", "--seed", "5"],
        ["axioms", "--trials", "30", "--mode", "complex"],
        ["sharpness", "--form", "thm21", "--trials", "50"],
        FIXTURE_ARGS,
    ],
)
def test_machine_output_is_deterministic(argv, capsys):
    outs = []
    for _ in range(2):
        cli.run(argv + ["--format", "jsonl"])
        outs.append(strip_timing(capsys.readouterr().out))
    assert outs[0] == outs[1] and outs[0]


def test_output_file(tmp_path):
    out = tmp_path / "o.jsonl"
    assert cli.run(FIXTURE_ARGS + ["--format", "jsonl", "--output", str(out)]) == 0
    assert records(out.read_text())[0]["verdict"] == "holds"


def test_chain_values_round_trip_losslessly(capsys):
    cli.run(FIXTURE_ARGS + ["--format", "jsonl"])
    (rec,) = records(capsys.readouterr().out)
    for c in rec["chain"]:
        assert float(repr(c["value"])) == c["value"]

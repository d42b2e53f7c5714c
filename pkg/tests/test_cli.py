"""Command line front end: subcommands, exports, exit codes."""

import json

from polybisim.abstraction import parse_quotient
from polybisim.cli import main


def test_check_lf(toy_path, capsys):
    assert main(["check-lf", str(toy_path)]) == 0
    out = capsys.readouterr().out
    assert "certified" in out


def test_check_lf_uncertified(tmp_path, capsys):
    doc = {
        "A": [["0.9"]],
        "L": [["1"]],
        "rho": "0.5",
        "gamma_D": "1",
        "gamma_X": "2",
    }
    path = tmp_path / "fast.json"
    path.write_text(json.dumps(doc))
    assert main(["check-lf", str(path)]) == 2
    assert "NOT certified" in capsys.readouterr().out


def test_abstract_writes_quotient(toy_path, tmp_path, capsys):
    out_dir = tmp_path / "out"
    assert main(["abstract", str(toy_path), "--out-dir", str(out_dir)]) == 0
    text = (out_dir / "quotient.txt").read_text()
    transitions, observations, slice_idx, cells = parse_quotient(text)
    assert len(transitions) == 3
    assert all(dst == 0 for dst in transitions.values())
    assert observations[0] == "PI_D"
    # abstract alone runs no formula check
    assert not (out_dir / "satisfying.txt").exists()


def test_verify_toy(toy_path, tmp_path, capsys):
    out_dir = tmp_path / "out"
    code = main(
        ["verify", str(toy_path), "--out-dir", str(out_dir), "--samples", "10"]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "0 mismatches" in out
    sat = (out_dir / "satisfying.txt").read_text()
    assert sat.startswith("satisfying: 3 of 3 states")


def test_simulate_subcommand(toy_path, capsys):
    assert main(["simulate", str(toy_path), "1.8"]) == 0
    out = capsys.readouterr().out
    assert "obs=EMPTY" in out and "obs=PI_D" in out
    assert "after 1 steps" in out


def test_simulate_outside_working_set(toy_path, capsys):
    assert main(["simulate", str(toy_path), "5"]) == 1


def test_input_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"A": [["0.5"]]}))
    assert main(["verify", str(bad)]) == 1


def test_contraction_failure_exit_code(tmp_path, capsys):
    doc = {
        "A": [["0.9"]],
        "L": [["1"]],
        "rho": "0.5",
        "gamma_D": "1",
        "gamma_X": "4",
        "formula": "F pid",
    }
    path = tmp_path / "fast.json"
    path.write_text(json.dumps(doc))
    assert main(["verify", str(path)]) == 2


def _small2d_doc():
    return {
        "A": [["0.5", "0"], ["0", "0.5"]],
        "L": [["1", "0"], ["0", "1"]],
        "rho": "0.5",
        "gamma_D": "1",
        "gamma_X": "4",
        "regions": [
            {
                "name": "r1",
                "H": [["1", "0"], ["-1", "0"], ["0", "1"], ["0", "-1"]],
                "h": ["3", "-2", "1", "1"],
            }
        ],
        "formula": "F r1",
        "options": {"sample_count": 10},
    }


def test_exports_are_deterministic(tmp_path, capsys):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(_small2d_doc()))
    outputs = []
    for run in ("a", "b"):
        out_dir = tmp_path / run
        code = main(
            ["verify", str(path), "--out-dir", str(out_dir), "--svg"]
        )
        assert code == 0
        outputs.append(
            tuple(
                (out_dir / name).read_bytes()
                for name in (
                    "quotient.txt",
                    "satisfying.txt",
                    "partition.svg",
                    "satisfying.svg",
                )
            )
        )
    assert outputs[0] == outputs[1]


def test_svg_contents(tmp_path, capsys):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(_small2d_doc()))
    out_dir = tmp_path / "out"
    assert main(["verify", str(path), "--out-dir", str(out_dir), "--svg"]) == 0
    svg = (out_dir / "partition.svg").read_text()
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    assert "<polygon" in svg


def test_svg_skipped_for_1d(toy_path, tmp_path, capsys):
    out_dir = tmp_path / "out"
    assert main(["verify", str(toy_path), "--out-dir", str(out_dir), "--svg"]) == 0
    assert "skipped" in capsys.readouterr().out
    assert not (out_dir / "partition.svg").exists()

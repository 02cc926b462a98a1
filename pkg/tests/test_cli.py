"""Exit codes, output contracts, and reproduction tables of the CLI."""

import json

import pytest

from unitchain.analysis import CSV_COLUMNS
from unitchain.cli import X0_NAMES, main

CUSTOM_MC1 = {
    "chain": "custom",
    "pieces": [
        {"from": 0.0, "to": 1.0, "from_closed": True, "to_closed": True, "pi": "x"}
    ],
}
CUSTOM_MC3 = {
    "chain": "custom",
    "pieces": [
        {"from": 0.0, "to": 0.5, "from_closed": True, "to_closed": True, "pi": "x"},
        {"from": 0.5, "to": 1.0, "from_closed": False, "to_closed": True, "pi": "1 - x"},
    ],
}
CUSTOM_MC5 = {
    "chain": "custom",
    "pieces": [
        {"from": 0.0, "to": 1.0, "from_closed": True, "to_closed": True, "pi": "0.3"}
    ],
}


def write_spec(tmp_path, spec):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    return str(path)


class TestExitCodes:
    def test_success_paths(self, capsys):
        assert main(["iterate", "--chain", "mc1", "--x0", "0.5", "--n", "3", "--no-timestamp"]) == 0
        assert main(["profile", "--chain", "mc2", "--x0", "0.5", "--n", "3", "--no-timestamp"]) == 0
        assert main(["sweep", "--chain", "mc1", "--grid", "geo:4", "--n", "2", "--no-timestamp"]) == 0
        assert main(["fixed-points", "--chain", "mc3", "--no-timestamp"]) == 0
        assert main(["certify", "z", "--chain", "mc1", "--shape", "near_one",
                     "--param", "0.5", "--no-timestamp"]) == 0
        assert main(["certify", "doeblin", "--chain", "mc3", "--no-timestamp"]) == 0
        capsys.readouterr()

    def test_verification_failures_exit_1(self, capsys):
        rc = main(["certify", "z", "--chain", "mc5", "--p", "0.5", "--shape",
                   "near_zero", "--param", "0.5", "--no-timestamp"])
        assert rc == 1
        assert "refuted" in capsys.readouterr().err

        rc = main(["certify", "doeblin", "--chain", "mc1", "--no-timestamp"])
        assert rc == 1
        assert "fails at E=" in capsys.readouterr().err

    @pytest.mark.parametrize(
        "argv",
        [
            ["profile", "--chain", "mc2"],  # missing x0
            ["iterate", "--chain", "mc1", "--x0", "0.3,0.5"],  # iterate takes one
            ["iterate", "--chain", "mc5", "--x0", "0.5"],  # mc5 without p
            ["sweep", "--chain", "mc1", "--grid", "log:3"],  # unknown grid kind
            ["certify", "z", "--chain", "mc1", "--shape", "near_one"],  # no param
            ["iterate", "--x0", "0.5"],  # neither chain nor pi-file
            ["iterate", "--chain", "mc1", "--x0", "1.5"],  # x0 outside [0,1]
            ["profile", "--chain", "mc1", "--x0", "0.5", "--n", "0"],
            ["iterate", "--pi-file", "/nonexistent/pi.json", "--x0", "0.5"],
        ],
    )
    def test_config_errors_exit_2(self, argv, capsys):
        assert main(argv) == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_pi_file_range_violation(self, tmp_path, capsys):
        bad = dict(CUSTOM_MC1)
        bad["pieces"] = [dict(bad["pieces"][0], pi="x + 1")]
        assert main(["profile", "--pi-file", write_spec(tmp_path, bad), "--x0", "0.5"]) == 2
        assert "outside [0,1]" in capsys.readouterr().err

    def test_pi_file_parse_error(self, tmp_path, capsys):
        bad = dict(CUSTOM_MC1)
        bad["pieces"] = [dict(bad["pieces"][0], pi="x + * 2")]
        assert main(["profile", "--pi-file", write_spec(tmp_path, bad), "--x0", "0.5"]) == 2
        assert "position 4" in capsys.readouterr().err

    def test_argparse_rejects_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2
        capsys.readouterr()


class TestOutputShapes:
    def test_iterate_csv(self, capsys):
        main(["iterate", "--chain", "mc1", "--x0", "0.5", "--n", "2", "--no-timestamp"])
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0] == "n,x,log10_x,mass,log10_mass"
        assert lines[1].startswith("0,0.5,")
        # absorbed atoms put the -inf log coordinate in the x column
        assert any(row.split(",")[1] == "0.0" and row.split(",")[2] == "-inf" for row in lines[1:])

    def test_profile_csv_contract(self, capsys):
        main(["profile", "--chain", "mc2", "--x0", "0.3,0.5", "--n", "2", "--no-timestamp"])
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 1 + 2 * 3  # two starts, n = 0..2

    def test_profile_json(self, capsys):
        main(["profile", "--chain", "mc2", "--x0", "0.5", "--n", "2",
              "--format", "json", "--no-timestamp"])
        payload = json.loads(capsys.readouterr().out)
        assert "generated" not in payload
        assert payload["profiles"][0]["chain"] == "mc2"
        assert payload["profiles"][0]["rows"][0]["tv"] == 1.0

    def test_timestamp_header(self, capsys):
        main(["profile", "--chain", "mc1", "--x0", "0.5", "--n", "1"])
        out = capsys.readouterr().out
        assert out.startswith("# generated: ")

        main(["profile", "--chain", "mc1", "--x0", "0.5", "--n", "1", "--format", "json"])
        assert "generated" in json.loads(capsys.readouterr().out)

    def test_sweep_reports_sup_to_stderr(self, capsys):
        main(["sweep", "--chain", "mc1", "--grid", "geo:5", "--n", "3", "--no-timestamp"])
        captured = capsys.readouterr()
        assert "sup tv" in captured.err
        assert "grid-relative" in captured.err
        assert len(captured.out.strip().split("\n")) == 1 + 5

    def test_fixed_points_output(self, capsys):
        main(["fixed-points", "--chain", "mc3", "--no-timestamp"])
        assert capsys.readouterr().out == "x\n0.0\n1.0\n"

    def test_certify_z_payload(self, capsys):
        main(["certify", "z", "--chain", "mc1", "--shape", "near_one",
              "--param", "0.5", "--no-timestamp"])
        payload = json.loads(capsys.readouterr().out)
        assert payload["witness"]["eps"] == "1 - 0.5^(1/2^n)"
        assert payload["report"]["passed"] is True
        assert len(payload["report"]["level_margins"]) == 19

    def test_named_constants_diagnostic(self, capsys):
        main(["profile", "--chain", "mc2", "--x0", "inv_pi,inv_e", "--n", "2", "--no-timestamp"])
        err = capsys.readouterr().err
        assert "min pairwise log distance" in err
        assert "separation evidence" in err

    def test_named_constant_values(self):
        import math

        assert X0_NAMES["inv_pi"] == 1.0 / math.pi
        assert X0_NAMES["inv_e"] == 1.0 / math.e

    def test_out_flag_writes_file(self, tmp_path, capsys):
        out = tmp_path / "table.csv"
        main(["profile", "--chain", "mc1", "--x0", "0.5", "--n", "2",
              "--no-timestamp", "--out", str(out)])
        captured = capsys.readouterr()
        assert captured.out == ""
        assert out.read_text().startswith(",".join(CSV_COLUMNS))


def reproduce_bytes(target, tmp_path, tag, extra=()):
    out = tmp_path / f"{target}-{tag}.csv"
    rc = main(["reproduce", target, "--no-timestamp", "--out", str(out), *extra])
    assert rc == 0
    return out.read_bytes()


class TestReproduce:
    @pytest.mark.parametrize("target", ["mc1", "mc2", "mc3", "mc4", "mc5"])
    def test_two_runs_identical(self, target, tmp_path, capsys):
        a = reproduce_bytes(target, tmp_path, "a")
        b = reproduce_bytes(target, tmp_path, "b")
        assert a == b
        capsys.readouterr()

    def test_timestamp_is_the_only_varying_line(self, tmp_path, capsys):
        out = tmp_path / "stamped.csv"
        main(["reproduce", "mc1", "--out", str(out)])
        lines = out.read_text().split("\n")
        assert lines[0].startswith("# generated: ")
        assert lines[1] == "# reproduce mc1"
        capsys.readouterr()

    @pytest.mark.parametrize(
        "target,spec",
        [("mc1", CUSTOM_MC1), ("mc3", CUSTOM_MC3), ("mc5", CUSTOM_MC5)],
    )
    def test_custom_spec_bit_identical(self, target, spec, tmp_path, capsys):
        builtin = reproduce_bytes(target, tmp_path, "builtin")
        custom = reproduce_bytes(
            target, tmp_path, "custom", ["--pi-file", write_spec(tmp_path, spec)]
        )
        assert builtin == custom
        capsys.readouterr()

    def test_mc1_rows_match_closed_form(self, tmp_path, capsys):
        text = reproduce_bytes("mc1", tmp_path, "check").decode()
        rows = [r for r in text.strip().split("\n") if r and not r.startswith("#")]
        assert rows[0] == ",".join(CSV_COLUMNS)
        import math

        for row in rows[1:]:
            chain, x0, n, tv, _, _ = row.split(",")
            want = float(x0) ** (2 ** int(n) - 1)
            assert math.isclose(float(tv), want, rel_tol=1e-12)
        capsys.readouterr()

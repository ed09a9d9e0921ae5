import json
import math

from mertens import __version__
from mertens.cli import main
from mertens.sums import accumulate_checkpoints


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_table_text_million(capsys):
    code, out, _ = run_cli(["table", "--n-max", "1000000"], capsys)
    assert code == 0
    row = [line for line in out.splitlines() if line.lstrip().startswith("1000000")][0]
    assert "2.887" in row


def test_table_text_ten_single_row(capsys):
    code, out, _ = run_cli(["table", "--n-max", "10"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2  # header + one data row
    assert "1.176" in lines[1]


def test_table_json_schema(capsys):
    code, out, _ = run_cli(["table", "--n-max", "100", "--format", "json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["meta"] == {"n_max": 100, "version": __version__}
    assert [list(r.keys()) for r in payload["rows"]] == [
        ["x", "pi", "s", "a", "s_minus_lnln", "extrapolated"]
    ] * 2
    rows = accumulate_checkpoints(100, [10, 100])
    assert payload["rows"][1]["x"] == 100
    assert payload["rows"][1]["pi"] == 25
    assert payload["rows"][1]["s"] == rows[1].s  # full binary64 precision survives json


def test_table_csv_header_and_roundtrip(capsys):
    code, out, _ = run_cli(["table", "--n-max", "1000", "--format", "csv"], capsys)
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "x,pi,s,a,s_minus_lnln,extrapolated"
    assert lines[-1] == ""  # exactly one trailing newline
    rows = accumulate_checkpoints(1000, [10, 100, 1000])
    for line, row in zip(lines[1:], rows):
        fields = line.split(",")
        assert int(fields[0]) == row.x
        assert int(fields[1]) == row.pi_x
        assert float(fields[2]) == row.s
        assert float(fields[3]) == row.a
        lnln = math.log(math.log(row.x))
        assert float(fields[4]) == row.s - lnln


def test_table_out_file_matches_stdout(tmp_path, capsys):
    path = tmp_path / "table.json"
    code, out, _ = run_cli(["table", "--n-max", "10000", "--format", "json"], capsys)
    assert code == 0
    code2, _, _ = run_cli(
        ["table", "--n-max", "10000", "--format", "json", "--out", str(path)], capsys
    )
    assert code2 == 0
    assert path.read_text(encoding="utf-8") == out


def test_table_bytes_stable_across_segmentation_and_workers(tmp_path, capsys):
    blobs = set()
    for segment_size, workers in [
        ("16384", "1"),
        ("262144", "2"),
        ("1048576", "1"),
    ]:
        path = tmp_path / f"t{segment_size}_{workers}.json"
        code = main(
            [
                "table",
                "--n-max",
                "1e5",
                "--format",
                "json",
                "--segment-size",
                segment_size,
                "--workers",
                workers,
                "--out",
                str(path),
            ]
        )
        assert code == 0
        blobs.add(path.read_bytes())
    capsys.readouterr()
    assert len(blobs) == 1


def test_scientific_notation_flags(capsys):
    code, out, _ = run_cli(["table", "--n-max", "1e3", "--format", "csv"], capsys)
    assert code == 0
    assert out.splitlines()[-1].startswith("1000,")


def test_table_config_errors(capsys):
    cases = [
        ["table", "--n-max", "abc"],
        ["table", "--n-max", "100", "--checkpoints", "50,20"],
        ["table", "--n-max", "100", "--checkpoints", "50,200"],
        ["table", "--n-max", "100", "--checkpoints", "10", "--preset", "decades"],
        ["table", "--n-max", "5"],  # decades preset empty
        ["table", "--n-max", "100", "--checkpoints", "1,10"],
        ["table", "--n-max", "100", "--workers", "0"],
    ]
    for argv in cases:
        code, _, err = run_cli(argv, capsys)
        assert code == 2, argv
        assert err.startswith("error:") or "usage" in err


def test_unknown_flag_exits_2(capsys):
    code, _, _ = run_cli(["table", "--bogus"], capsys)
    assert code == 2


def test_resource_exhaustion_exit_3(monkeypatch, capsys):
    monkeypatch.setenv("MERTENS_MAX_SIEVE", "10000")
    code, _, err = run_cli(["table", "--n-max", "1e6"], capsys)
    assert code == 3
    assert "exceeds" in err


def test_extrapolate_prints_two_decimals(capsys):
    code, out, _ = run_cli(["extrapolate", "--log10-x", "100"], capsys)
    assert code == 0
    assert out == "5.70\n"


def test_extrapolate_json(capsys):
    code, out, _ = run_cli(
        ["extrapolate", "--log10-x", "6", "--format", "json"], capsys
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["log10_x"] == 6.0
    assert abs(payload["extrapolated"] - 2.8873) < 5e-4


def test_extrapolate_domain_error(capsys):
    code, _, err = run_cli(["extrapolate", "--log10-x", "0.3"], capsys)
    assert code == 2
    assert "log10_x" in err


def test_estimate_b(capsys):
    code, out, _ = run_cli(["estimate-b", "--n-max", "1e4"], capsys)
    assert code == 0
    assert "b_estimate(10000)" in out
    value = float(out.split("=")[1].split("(")[0])
    assert abs(value - 0.2614972) < 0.006


def test_estimate_b_below_threshold_exit_2(capsys):
    code, _, _ = run_cli(["estimate-b", "--n-max", "100"], capsys)
    assert code == 2


def test_bench_smoke(capsys):
    code, out, _ = run_cli(["bench", "--n-max", "1e4"], capsys)
    assert code == 0
    assert "pi=1229" in out


def test_verify_small_scale_passes(capsys):
    code, out, _ = run_cli(["verify", "--n-max", "300"], capsys)
    assert code == 0
    assert "rs_envelope_symmetric" in out
    assert "NOTE rs_envelope_asymmetric_upper" in out
    assert "exit 0" in out


def test_verify_rejects_small_n_max(capsys):
    code, _, err = run_cli(["verify", "--n-max", "100"], capsys)
    assert code == 2
    assert "286" in err


def test_verify_at_1e5_passes(capsys):
    code, out, _ = run_cli(["verify", "--n-max", "100000"], capsys)
    assert code == 0
    statuses = {
        line.split()[0] for line in out.splitlines() if line and line[0].isupper()
    }
    assert "FAIL" not in statuses


def test_help_exits_zero(capsys):
    code, _, _ = run_cli(["--help"], capsys)
    assert code == 0

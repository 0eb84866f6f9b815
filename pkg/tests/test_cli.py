"""End-to-end exercise of the command-line interface."""

import json
from xml.etree import ElementTree as ET

import pytest

from cuspfold.cli import main
from cuspfold.fields import SignVector, canonical_form, dumps_psvf
from cuspfold.render import parse_trajectory_csv


class TestCatalog:
    def test_lists_all_forms(self, capsys):
        assert main(["catalog"]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert len(out) == 33  # header + 32 rows
        assert "(+++,++)" in out[1]


class TestClassify:
    def test_json_payload(self, capsys):
        assert main(["classify", "+++++"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload == {
            "cusp_arrival": "sigma+",
            "visible_branch": "positive-y",
            "zplus_layout": "+1",
            "sminus_type": "invisible",
            "zminus_layout": "+1",
        }

    def test_bad_sign_vector_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["classify", "++++"])
        assert exc.value.code == 2


class TestSignature:
    def test_numeric_probe_from_file(self, tmp_path, capsys):
        path = tmp_path / "field.json"
        path.write_text(dumps_psvf(canonical_form(SignVector.parse("-+-+-"))))
        assert main(["signature", str(path), "--probe-radius", "0.1"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["zplus_layout"] == "-1"
        assert payload["zminus_layout"] == "-1"

    def test_missing_file_is_error(self, capsys):
        assert main(["signature", "/nonexistent/field.json"]) == 2
        assert "error:" in capsys.readouterr().err


class TestSimulate:
    def test_writes_csv_events_and_figure(self, tmp_path, capsys):
        out = tmp_path / "run.csv"
        rc = main([
            "simulate", "--sv", "+++++", "--q0", "0.5,-1,0.3",
            "--t-max", "1.0", "--out", str(out),
        ])
        assert rc == 0
        rows = parse_trajectory_csv(out.read_bytes())
        assert rows and rows[0][0] == 0.0
        events = json.loads(out.with_suffix(".events.json").read_text())
        assert isinstance(events, list)
        fig = out.with_suffix(".png")
        assert fig.exists() and fig.stat().st_size > 0

    def test_no_fig_skips_figure(self, tmp_path):
        out = tmp_path / "run.csv"
        rc = main([
            "simulate", "--sv", "+++++", "--q0", "0,-1,0",
            "--regime", "lower", "--t-max", "1.0",
            "--no-fig", "--out", str(out),
        ])
        assert rc == 0
        assert out.exists()
        assert not out.with_suffix(".png").exists()

    def test_lambda_outside_window_is_error(self, tmp_path, capsys):
        out = tmp_path / "run.csv"
        rc = main([
            "simulate", "--sv", "+++++", "--lambda", "0.9",
            "--q0", "0,0,0.5", "--out", str(out),
        ])
        assert rc == 2
        assert "unfolding window" in capsys.readouterr().err


class TestUnfold:
    def test_writes_report_and_figure(self, tmp_path, capsys):
        out = tmp_path / "scan.json"
        rc = main(["unfold", "--sv", "+-+-+", "--epsilon", "0.2",
                   "--n", "5", "--out", str(out)])
        assert rc == 0
        report = json.loads(out.read_text())
        assert report["sv"] == "+-+-+"
        assert len(report["records"]) == 5
        assert out.with_suffix(".png").exists()

    def test_even_n_is_error(self, tmp_path, capsys):
        rc = main(["unfold", "--sv", "+++++", "--n", "4",
                   "--out", str(tmp_path / "x.json")])
        assert rc == 2


class TestPortrait:
    def test_writes_svg(self, tmp_path):
        out = tmp_path / "portrait.svg"
        rc = main(["portrait", "--sv", "+++++", "--out", str(out)])
        assert rc == 0
        root = ET.fromstring(out.read_bytes())
        assert root.tag.endswith("svg")

    def test_unknown_show_flag(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["portrait", "--sv", "+++++", "--show", "bogus",
                  "--out", str(tmp_path / "p.svg")])


class TestVerify:
    def test_passes_on_correct_build(self, capsys):
        assert main(["verify"]) == 0
        out = capsys.readouterr().out
        assert "verification PASSED" in out
        assert "[FAIL]" not in out
        assert out.count("[PASS]") == 4

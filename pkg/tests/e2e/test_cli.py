"""
End-to-end tests of the knotlens command line.
"""
import json

import pytest

from apps.cli.main import build_parser, main
from apps.cli.render import render_json
from homology.iterated import homfly_homology
from knots.braid_model import parse_braid
from schemas.homology import FGAbGroup, HomologyTable, SpectralPage, SpectralReport
from schemas.reports import RunReport


@pytest.mark.e2e
class TestCommandLine:
    """Exit codes and output formats."""

    def test_unknot_table(self, capsys):
        assert main(["--braid", "", "--strands", "1"]) == 0
        out = capsys.readouterr().out
        assert "Z" in out

    def test_trefoil_euler(self, capsys):
        assert main(["--braid", "1 1 1", "--check-euler"]) == 0
        assert "euler: MATCH" in capsys.readouterr().out

    @pytest.mark.parametrize("argv", [
        ["--braid", "1 x"],
        ["--braid", "0"],
        ["--braid", "3", "--strands", "2"],
        ["--knot", "12n_242"],
        ["--braid", "1", "--qmin", "2"],
    ])
    def test_bad_input(self, argv):
        assert main(argv) == 2

    def test_window_too_small(self):
        assert main(["--braid", "1 1 1", "--qmin", "100", "--qmax", "102"]) == 3

    def test_failed_comparison(self, capsys):
        assert main(["--braid", "1 1 1", "--compare", "1"]) == 4
        assert "MISMATCH" in capsys.readouterr().out

    def test_json(self, capsys):
        assert main(["--knot", "3_1", "--format", "json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert isinstance(rows, list)
        assert len(rows) == 3
        assert set(rows[0]) == {"q", "j", "k", "rank", "torsion"}
        assert rows == sorted(rows, key=lambda row: (row["q"], row["j"], row["k"]))
        table = HomologyTable.from_json_array(rows)
        assert table.same_groups(homfly_homology(parse_braid("1 1 1", 2)))

    def test_report_format(self, capsys):
        assert main(["--knot", "3_1", "--format", "report"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["exit_code"] == 0
        assert payload["braid"] == "1 1 1"
        assert len(payload["table"]["entries"]) == 3

    @pytest.mark.slow
    def test_json_pages(self, capsys):
        assert main(["--braid", "1 1 1", "--sln", "2", "--pages", "3", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert set(payload) == {"pages", "e_infinity"}
        assert "1" in payload["pages"]
        assert all("Q" in row for row in payload["pages"]["1"])
        first = HomologyTable.from_json_array(payload["pages"]["1"])
        assert first.same_groups(homfly_homology(parse_braid("1 1 1", 2)))

    def test_json_of_a_failed_run(self, capsys):
        assert main(["--braid", "1 1 1", "--qmin", "100", "--qmax", "102", "--format", "json"]) == 3
        assert json.loads(capsys.readouterr().out) is None

    @pytest.mark.slow
    def test_sl2_pages(self, capsys):
        assert main(["--braid", "1 1 1", "--sln", "2", "--check-euler"]) == 0
        out = capsys.readouterr().out
        assert "E_infinity" in out
        assert "sl(2) euler: MATCH" in out

    def test_metrics_on_stderr(self, capsys):
        assert main(["--braid", "", "--strands", "1", "--metrics"]) == 0
        assert "knotlens_smith_decompositions_total" in capsys.readouterr().err

    def test_parser_requires_a_source(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


@pytest.mark.e2e
class TestJsonRendering:
    """Payload shapes of --format json."""

    def test_spectral_payload(self):
        table = HomologyTable.from_groups({(0, 0, 0): FGAbGroup(free_rank=1)}, sl_rank=2)
        spectral = SpectralReport(sl_rank=2, potential="x^3", pages=[SpectralPage(index=1, table=table)])
        payload = json.loads(render_json(RunReport(braid="", strands=1, spectral=spectral)))
        assert payload == {
            "pages": {"1": [{"q": 0, "j": 0, "k": 0, "rank": 1, "torsion": [], "Q": 0}]},
            "e_infinity": None,
        }

    def test_table_payload_round_trips(self):
        table = HomologyTable.from_groups({(2, 2, 2): FGAbGroup(torsion=(2,)), (-2, 2, 2): FGAbGroup(free_rank=1)})
        rows = json.loads(render_json(RunReport(braid="1 1 1", strands=2, table=table)))
        assert [row["q"] for row in rows] == [-2, 2]
        assert HomologyTable.from_json_array(rows) == table

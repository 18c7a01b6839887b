"""
Integration tests for the command line, from problem file to JSON report.
"""

import json

import pytest

from src.algebra.polynomial import MultiPoly, distance_up_to_scale
from src.cli.main import main
from src.cli.schemas import PolynomialModel, load_document

from tests.conftest import CIRCLE


def run_cli(capsys, *argv):
    code = main([str(arg) for arg in argv])
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.integration
class TestTraceTestCommand:
    """End-to-end tests for trace-test."""

    def test_circle_is_positive(self, capsys, test_data_dir):
        """Test exit 0 and the fitted slopes on the circle."""
        code, report = run_cli(capsys, "trace-test", test_data_dir / "circle.json")

        assert code == 0
        assert report["verdict"] == "positive"
        assert report["seed"] == 0

    def test_exponential_is_negative(self, capsys, test_data_dir):
        """Test exit 2 on a non-algebraic germ."""
        code, report = run_cli(capsys, "trace-test", test_data_dir / "exponential.json")

        assert code == 2
        assert report["verdict"] == "negative"

    def test_malformed_file(self, capsys, test_data_dir):
        """Test exit 1 with the JSON position."""
        code, report = run_cli(capsys, "trace-test", test_data_dir / "malformed.json")

        assert code == 1
        assert report["stage"] == "parse"
        assert report["reason"] == "ProblemFileError"
        assert "line 5 column 5" in report["message"]

    def test_flags_override_file(self, capsys, test_data_dir):
        """Test that command-line tolerances reach the report."""
        code, report = run_cli(
            capsys, "trace-test", test_data_dir / "circle.json", "--seed", 7, "--tol", 1e-6
        )

        assert code == 0
        assert report["seed"] == 7
        assert report["fit_tol"] == 1e-6

    def test_output_is_deterministic(self, capsys, test_data_dir):
        """Test that two runs print the same report."""
        first = run_cli(capsys, "trace-test", test_data_dir / "circle.json")
        second = run_cli(capsys, "trace-test", test_data_dir / "circle.json")

        assert first == second


@pytest.mark.integration
class TestInterpolateCommand:
    """End-to-end tests for interpolate."""

    def test_circle(self, capsys, tmp_path, test_data_dir):
        """Test that the written polynomial is the circle."""
        out = tmp_path / "q.json"

        code, report = run_cli(capsys, "interpolate", test_data_dir / "circle.json", "-o", out)

        assert code == 0
        assert report["bernstein_degree"] == 2
        q = load_document(out, PolynomialModel).to_poly()
        assert distance_up_to_scale(q, CIRCLE) < 1e-6

    def test_constant_germ(self, capsys, tmp_path, test_data_dir):
        """Test that the germ x1 = 5 yields the hyperplane x1 - 5."""
        out = tmp_path / "q.json"

        code, _ = run_cli(capsys, "interpolate", test_data_dir / "constant_germ.json", "-o", out)

        assert code == 0
        q = load_document(out, PolynomialModel).to_poly()
        assert distance_up_to_scale(q, MultiPoly(2, {(0, 1): 1.0, (0, 0): -5.0})) < 1e-8

    def test_exponential_fails_at_fit(self, capsys, tmp_path, test_data_dir):
        """Test exit 2 with the failing stage and reason."""
        out = tmp_path / "q.json"

        code, report = run_cli(capsys, "interpolate", test_data_dir / "exponential.json", "-o", out)

        assert code == 2
        assert report["stage"] == "characteristic_poly"
        assert report["reason"] == "FitResidualExceeded"
        assert not out.exists()

    def test_written_file_is_deterministic(self, capsys, tmp_path, test_data_dir):
        """Test byte-identical output for identical inputs."""
        first, second = tmp_path / "first.json", tmp_path / "second.json"

        run_cli(capsys, "interpolate", test_data_dir / "circle.json", "-o", first)
        run_cli(capsys, "interpolate", test_data_dir / "circle.json", "-o", second)

        assert first.read_bytes() == second.read_bytes()


@pytest.mark.integration
class TestClassCheckCommand:
    """End-to-end tests for class-check."""

    def test_bilinear_positive(self, capsys, test_data_dir):
        """Test the unit square class of a bidegree (1,1) curve."""
        code, report = run_cli(capsys, "class-check", test_data_dir / "bilinear_class.json")

        assert code == 0
        assert report["table"] == [
            {"divisor": 0, "observed": 1, "predicted": 1},
            {"divisor": 1, "observed": 1, "predicted": 1},
        ]

    def test_bilinear_wrong_class(self, capsys, test_data_dir):
        """Test exit 2 for alpha = 2 * square."""
        code, report = run_cli(capsys, "class-check", test_data_dir / "bilinear_alpha2.json")

        assert code == 2
        assert report["verdict"] == "negative"
        assert report["table"][0]["predicted"] == 2

    def test_conic(self, capsys, test_data_dir):
        """Test a conic in the class of two lines."""
        code, report = run_cli(capsys, "class-check", test_data_dir / "conic_class.json")

        assert code == 0
        assert report["table"] == [{"divisor": 0, "observed": 2, "predicted": 2}]

    def test_missing_class_spec(self, capsys, test_data_dir):
        """Test exit 1 without a class_spec."""
        code, report = run_cli(capsys, "class-check", test_data_dir / "circle.json")

        assert code == 1
        assert report["reason"] == "MissingClassSpec"


@pytest.mark.integration
class TestPolytopeCommands:
    """End-to-end tests for residue-check and mixed-volume."""

    def test_toric_residue(self, capsys, test_data_dir):
        """Test a vanishing toric sum with a vanishing prediction."""
        code, report = run_cli(capsys, "residue-check", test_data_dir / "residue_toric.json")

        assert code == 0
        assert report["predicted"] == "vanishing"
        assert report["residue"] == pytest.approx([0.0, 0.0], abs=1e-12)

    def test_plain_residue(self, capsys, test_data_dir):
        """Test a vanishing plain sum without a prediction."""
        code, report = run_cli(capsys, "residue-check", test_data_dir / "residue_plain.json")

        assert code == 0
        assert report["predicted"] == "none"
        assert report["residue"] == pytest.approx([0.0, 0.0], abs=1e-12)

    def test_supplied_zeros(self, capsys, test_data_dir):
        """Test a three-variable system with its zero supplied."""
        code, report = run_cli(capsys, "residue-check", test_data_dir / "residue_supplied.json")

        assert code == 0
        assert report["zeros"] == 1
        assert report["residue"] == pytest.approx([1.0, 0.0])

    def test_mixed_volume(self, capsys, test_data_dir):
        """Test MV(2 simplex, 2 simplex) = 4."""
        code, report = run_cli(capsys, "mixed-volume", test_data_dir / "mixed_volume.json")

        assert code == 0
        assert report == {"command": "mixed-volume", "mixed_volume": 4}

    def test_missing_file(self, capsys, tmp_path):
        """Test exit 1 for an absent file."""
        code, report = run_cli(capsys, "mixed-volume", tmp_path / "absent.json")

        assert code == 1
        assert report["stage"] == "parse"

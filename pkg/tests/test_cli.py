from click.testing import CliRunner

from chevalley_iwasawa import schemas
from chevalley_iwasawa.cli import cli
from chevalley_iwasawa.presenter import parse_presentation, validate_presentation


def test_present_is_deterministic():
    runner = CliRunner()
    args = ["present", "--type", "G2", "--prime", "7", "--precision", "4"]
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    assert first.exit_code == 0, first.output
    assert first.stdout == second.stdout
    doc = parse_presentation(first.stdout)
    assert doc.metadata.generator_count == 14
    assert validate_presentation(doc) == []


def test_present_to_file(tmp_path):
    out = tmp_path / "a2.json"
    result = CliRunner().invoke(cli, ["present", "--type", "A2", "--prime", "5", "--precision", "4", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert "8 generators" in result.output
    assert parse_presentation(out.read_text()).counts()["opposite_roots"] == 3


def test_present_plain():
    result = CliRunner().invoke(cli, ["present", "--type", "A1", "--prime", "5", "--precision", "4", "--plain"])
    assert result.exit_code == 0
    assert "[opposite_roots]" in result.output


def test_input_errors_exit_with_two():
    runner = CliRunner()
    assert runner.invoke(cli, ["present", "--type", "A2", "--prime", "2", "--precision", "4"]).exit_code == 2
    assert runner.invoke(cli, ["present", "--type", "Q7", "--prime", "5"]).exit_code == 2
    assert runner.invoke(cli, ["present", "--prime", "5"]).exit_code == 2
    assert runner.invoke(cli, ["--log-level", "LOUD", "present", "--type", "A1"]).exit_code == 2


def test_verify_passes():
    result = CliRunner().invoke(
        cli, ["verify", "--type", "A1", "--prime", "5", "--degree", "5", "--precision", "4", "--seed", "3"]
    )
    assert result.exit_code == 0, result.output
    assert "[FAIL]" not in result.output
    assert "[PASS] relation:opposite_roots(a1)" in result.output
    assert "[PASS] homomorphism" in result.output


def test_verify_symbolic_only_type():
    result = CliRunner().invoke(cli, ["verify", "--type", "G2", "--prime", "7", "--degree", "3", "--precision", "2"])
    assert result.exit_code == 2
    assert "no realization" in result.output


def test_verify_failure_exits_with_one(mocker):
    report = schemas.VerifyReport(
        cartan_type="A1",
        prime=5,
        degree=5,
        precision=4,
        group_precision=8,
        seed=0,
        results=[
            schemas.CheckResult(name="relation:x", passed=True),
            schemas.CheckResult(name="relation:y", passed=False, detail="coefficient of 1: 1 != 2"),
        ],
    )
    mocker.patch("chevalley_iwasawa.cli.run_verify", return_value=report)
    result = CliRunner().invoke(cli, ["verify", "--type", "A1"])
    assert result.exit_code == 1
    assert "[FAIL] relation:y" in result.output
    assert "1/2 checks passed" in result.output


def test_decompose(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("5 5 2\n26 5\n5 1\n")
    result = CliRunner().invoke(
        cli, ["decompose", "--type", "A1", "--prime", "5", "--group-precision", "5", "--matrix", str(path)]
    )
    assert result.exit_code == 0, result.output
    assert "omega = 1" in result.output
    assert "W1" in result.output


def test_decompose_rejects_matrices_outside_the_kernel(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("5 5 2\n1 5\n0 2\n")
    result = CliRunner().invoke(cli, ["decompose", "--type", "A1", "--prime", "5", "--matrix", str(path)])
    assert result.exit_code == 2
    assert "entry (2,2)" in result.output


def test_series(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("5 8 2\n1 5\n0 1\n")
    result = CliRunner().invoke(
        cli, ["series", "--type", "A1", "--prime", "5", "--degree", "5", "--precision", "4", "--matrix", str(path)]
    )
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0] == "p=5 m=4 N=5 type=A1"
    assert lines[1] == "order=V[-a1],W1,V[a1]"
    assert lines[2:] == ["0 0 0 : 1:^4", "0 0 1 : 1:^4"]

"""End-to-end tests of the command line interface."""

from __future__ import annotations

from fractions import Fraction

import pytest

from bcmcf.cli import main
from bcmcf.model import parse_instance, parse_solution

I1_TEXT = "p bcmcf 2 2 2\nn 1 s\nn 2 t\na 1 2 2 -4 2\na 1 2 2 -1 0\n"
I0_TEXT = "p bcmcf 2 1 0\nn 1 s\nn 2 t\na 1 2 1 1 0\n"


@pytest.fixture
def i1_path(tmp_path):
    path = tmp_path / "i1.bcmcf"
    path.write_text(I1_TEXT)
    return str(path)


@pytest.fixture
def i0_path(tmp_path):
    path = tmp_path / "i0.bcmcf"
    path.write_text(I0_TEXT)
    return str(path)


class TestSolve:
    def test_exact_document(self, i1_path, capsys):
        assert main(["solve", "--algorithm", "exact", i1_path]) == 0
        doc = parse_solution(capsys.readouterr().out)
        assert doc.objective == -6
        assert doc.lam == 2
        assert doc.values == (1, 2)
        assert doc.budget_used == 2

    def test_gk_with_epsilon(self, i1_path, capsys):
        assert main(["solve", "--algorithm", "gk", "--epsilon", "0.25", i1_path]) == 0
        doc = parse_solution(capsys.readouterr().out)
        assert doc.objective <= Fraction(-45, 10)

    def test_gk_without_epsilon_is_usage_error(self, i1_path, capsys):
        assert main(["solve", "--algorithm", "gk", i1_path]) == 2
        assert "--epsilon" in capsys.readouterr().err

    def test_oracle_algorithm(self, i1_path, capsys):
        assert main(["solve", "--algorithm", "oracle", i1_path]) == 0
        assert parse_solution(capsys.readouterr().out).objective == -6

    def test_input_flag(self, i1_path, capsys):
        assert main(["solve", "--input", i1_path]) == 0
        capsys.readouterr()

    def test_missing_instance(self, capsys):
        assert main(["solve"]) == 2

    def test_parse_error_exit(self, tmp_path, capsys):
        bad = tmp_path / "bad.bcmcf"
        bad.write_text("p bcmcf 2 1 0\nn 1 s\nn 2 t\na 1 2 -1 0 0\n")
        assert main(["solve", str(bad)]) == 2
        assert "line 4" in capsys.readouterr().err

    def test_text_format(self, i1_path, capsys):
        assert main(["solve", i1_path, "--format", "text"]) == 0
        out = capsys.readouterr().out
        assert "objective: -6" in out

    def test_preprocessed_flow_maps_back(self, tmp_path, capsys):
        # node 3 has no outgoing edge, so it and its incoming edge are
        # dropped; the emitted flow still has 3 values, padded with zero
        text = "p bcmcf 3 3 2\nn 1 s\nn 2 t\na 1 2 2 -4 2\na 1 2 2 -1 0\na 1 3 1 -9 0\n"
        path = tmp_path / "padded.bcmcf"
        path.write_text(text)
        assert main(["solve", str(path)]) == 0
        doc = parse_solution(capsys.readouterr().out)
        assert doc.values == (1, 2, 0)
        assert doc.objective == -6


class TestFrontier:
    def test_two_points_and_budget_line(self, i1_path, capsys):
        assert main(["frontier", i1_path]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines == ["-2 0", "-10 4", "budget 2"]

    def test_single_point(self, i0_path, capsys):
        assert main(["frontier", i0_path]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines == ["0 0", "budget 0"]

    def test_guard_exit(self, i1_path, capsys):
        assert main(["frontier", i1_path, "--guard", "2"]) == 3


class TestOracleCommand:
    def test_optimum(self, i1_path, capsys):
        assert main(["oracle", i1_path]) == 0
        assert parse_solution(capsys.readouterr().out).objective == -6

    def test_guard_exit(self, i1_path, capsys):
        assert main(["oracle", i1_path, "--guard", "2"]) == 3


class TestValidate:
    def write_solution(self, tmp_path, values):
        lines = ["bcmcf-solution 1", "algorithm manual", "objective 0/1 0.0",
                 f"flows {len(values)}"]
        lines += [f"f {i} {v}" for i, v in enumerate(values)]
        lines.append("end")
        path = tmp_path / "flow.sol"
        path.write_text("\n".join(lines) + "\n")
        return str(path)

    def test_feasible(self, i1_path, tmp_path, capsys):
        flow = self.write_solution(tmp_path, ["1", "2"])
        assert main(["validate", i1_path, flow]) == 0
        out = capsys.readouterr().out
        assert "feasible c=-6 b=2" in out

    def test_budget_violation(self, i1_path, tmp_path, capsys):
        flow = self.write_solution(tmp_path, ["2", "2"])
        assert main(["validate", i1_path, flow]) == 1
        assert "budget exceeded by 2" in capsys.readouterr().out

    def test_arity_mismatch(self, i1_path, tmp_path, capsys):
        flow = self.write_solution(tmp_path, ["1", "2", "0"])
        assert main(["validate", i1_path, flow]) == 2

    def test_solver_output_revalidates(self, i1_path, tmp_path, capsys):
        out_path = tmp_path / "sol.txt"
        for algo, extra in (
            ("exact", []),
            ("gk", ["--epsilon", "0.5"]),
            ("gk-acyclic", ["--epsilon", "0.5"]),
            ("oracle", []),
        ):
            assert main(["solve", "-a", algo, i1_path, "-o", str(out_path)] + extra) == 0
            assert main(["validate", i1_path, str(out_path)]) == 0
            capsys.readouterr()


class TestGen:
    def test_seed_determinism(self, tmp_path):
        a, b = tmp_path / "a.bcmcf", tmp_path / "b.bcmcf"
        for out in (a, b):
            assert main(["gen", "-n", "5", "-m", "8", "--seed", "7", "-o", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_acyclic_edges_ascend(self, tmp_path, capsys):
        assert main(["gen", "-n", "6", "-m", "10", "--seed", "3", "--acyclic"]) == 0
        inst = parse_instance(capsys.readouterr().out)
        assert all(e.tail < e.head for e in inst.edges)

    def test_zero_fee_ceiling_forces_zero_budget(self, capsys):
        assert main(["gen", "-n", "4", "-m", "6", "--b-max", "0",
                     "--budget-mode", "tight", "--seed", "11"]) == 0
        inst = parse_instance(capsys.readouterr().out)
        assert inst.budget == 0

    def test_generated_instance_parses(self, capsys):
        assert main(["gen", "-n", "4", "-m", "5", "--seed", "2"]) == 0
        parse_instance(capsys.readouterr().out)

    def test_bad_sizes(self, capsys):
        assert main(["gen", "-n", "1", "-m", "3", "--seed", "0"]) == 2


class TestGkAcyclic:
    def test_acyclic_solver_via_cli(self, i1_path, capsys):
        assert main(["solve", "-a", "gk-acyclic", "-e", "0.25", i1_path]) == 0
        doc = parse_solution(capsys.readouterr().out)
        assert doc.objective <= Fraction(-45, 10)
        assert doc.algorithm == "gk-acyclic"

    def test_cyclic_instance_rejected(self, tmp_path, capsys):
        text = "p bcmcf 3 3 0\nn 1 s\nn 3 t\na 1 2 1 -1 0\na 2 1 1 -1 0\na 1 3 1 0 0\n"
        path = tmp_path / "cyc.bcmcf"
        path.write_text(text)
        assert main(["solve", "-a", "gk-acyclic", "-e", "0.5", str(path)]) == 2
        assert "solve_gk" in capsys.readouterr().err

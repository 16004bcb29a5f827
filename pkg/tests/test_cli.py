import random
import subprocess
import sys

import pytest

from diffauto.algebra import DiffPolynomial
from diffauto.automorphism import compose_all
from diffauto.cli import CliConfig, main
from diffauto.errors import ParameterError
from diffauto.expr import format_poly

import randgen


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def write(tmp_path):
    def _write(text, name="input.txt"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


class TestEval:
    @pytest.mark.parametrize(
        "expr, expected",
        [
            ("x_(1,0) - x_(1,0)", "0"),
            ("(x_(1,0) - y_(0,1))^2", "x_(1,0)^2 - 2*x_(1,0)*y_(0,1) + y_(0,1)^2"),
            ("y + x", "x + y"),
        ],
    )
    def test_canonical(self, capsys, expr, expected):
        assert run(capsys, "eval", expr) == (0, expected + "\n", "")

    def test_parse_error_reports_position(self, capsys):
        code, out, err = run(capsys, "eval", "x + * y")
        assert code == 1 and "position 4" in err and out == ""

    def test_arity_follows_m(self, capsys):
        assert run(capsys, "eval", "x_(1)", "-m", "1")[0] == 0
        assert run(capsys, "eval", "x_(1)")[0] == 1

    def test_env_default_and_flag_priority(self, capsys, monkeypatch):
        monkeypatch.setenv("DIFFAUTO_M", "1")
        assert run(capsys, "eval", "x_(2)")[:2] == (0, "x_(2)\n")
        assert run(capsys, "-m", "3", "eval", "x_(0,0,1)")[:2] == (0, "x_(0,0,1)\n")
        monkeypatch.setenv("DIFFAUTO_M", "nope")
        assert run(capsys, "eval", "x")[0] == 1

    def test_degree_cap(self, capsys):
        code, _, err = run(capsys, "--max-degree", "3", "eval", "(x + y)^4")
        assert code == 2 and "resource" in err


class TestCompose:
    def test_identity(self, capsys, write):
        assert run(capsys, "compose", write("fx=x fy=y\n"))[:2] == (0, "fx=x fy=y\n")

    def test_swap_twice(self, capsys, write):
        path = write("# two swaps\nfx=y fy=x\n\nfx=y fy=x  # again\n")
        assert run(capsys, "compose", path)[:2] == (0, "fx=x fy=y\n")

    def test_matches_library(self, capsys, write):
        rng = random.Random(51)
        word = [randgen.elementary(rng, 2, max_deg=2, max_terms=2) for _ in range(3)]
        lines = [f"fx={format_poly(s.to_endo().f1)} fy={format_poly(s.to_endo().f2)}" for s in word]
        code, out, _ = run(capsys, "compose", write("\n".join(lines)))
        assert code == 0
        assert out.strip() == str(compose_all((s.to_endo() for s in word), 2))

    def test_line_numbers(self, capsys, write):
        code, _, err = run(capsys, "compose", write("fx=x fy=y\nfx=x\n"))
        assert code == 1 and "line 2" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "compose", str(tmp_path / "missing.txt"))[0] == 1


class TestNormalize:
    def test_single_factor(self, capsys, write):
        code, out, _ = run(capsys, "normalize", write("E1 a=1 f=y^2\n"))
        assert code == 0
        assert out.splitlines() == [
            "G id",
            "B q=y^2",
            "G id",
            "C a=1 b=0 c=0 b1=1 c1=0",
            "evaluated: fx=y^2 + x fy=y",
        ]

    def test_empty(self, capsys, write):
        code, out, _ = run(capsys, "normalize", write("# nothing\n"))
        assert code == 0
        assert out.splitlines() == ["G id", "G id", "C a=1 b=0 c=0 b1=1 c1=0", "evaluated: fx=x fy=y"]

    def test_cross_command_consistency(self, capsys, write):
        word = "E1 a=2 f=y^2 + y\nE2 a=-1 g=x_(1,0)*x + 3\nE1 a=1/2 f=y_(0,1)\n"
        code, out, _ = run(capsys, "normalize", write(word))
        assert code == 0
        evaluated = out.splitlines()[-1].removeprefix("evaluated: ")
        pairs = "fx=2*x + y^2 + y fy=y\nfx=x fy=-y + x_(1,0)*x + 3\nfx=1/2*x + y_(0,1) fy=y\n"
        code, out, _ = run(capsys, "compose", write(pairs, "pairs.txt"))
        assert code == 0 and out.strip() == evaluated

    def test_verbose_trace(self, capsys, write):
        code, out, _ = run(capsys, "normalize", "--verbose", write("E1 a=1 f=y^2\nE2 a=1 g=x^2\n"))
        assert code == 0 and "# after factor 2:" in out

    def test_bad_lines(self, capsys, write):
        code, _, err = run(capsys, "normalize", write("E1 a=1 f=y^2\nE1 a=1 g=y^2\n"))
        assert code == 1 and "line 2" in err
        assert run(capsys, "normalize", write("E1 a=0 f=y\n"))[0] == 1
        assert run(capsys, "normalize", write("E2 a=1 g=y\n"))[0] == 1


class TestReduce:
    def test_affine(self, capsys):
        code, out, _ = run(capsys, "reduce", "x", "y")
        assert code == 0 and out.splitlines()[0] == "verdict: AFFINE"

    def test_tame(self, capsys):
        code, out, _ = run(capsys, "reduce", "fx=x + y_(1,0)*y", "fy=y")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "verdict: TAME"
        assert sum(line.startswith("step ") for line in lines) == 1

    def test_anick(self, capsys):
        code, out, _ = run(capsys, "reduce", "x + x_(1,1) - y_(0,2)", "y + x_(2,0) - y_(1,1)")
        assert code == 0
        assert out.splitlines()[:2] == ["verdict: IRREDUCIBLE", "automorphism_status: unverified"]

    def test_zero_component(self, capsys):
        assert run(capsys, "reduce", "x", "0")[0] == 1


class TestMembership:
    H = "x_(1,1) - y_(0,2)"

    def test_identity(self, capsys):
        assert run(capsys, "membership", self.H, self.H)[:2] == (0, "z\n")

    def test_absent(self, capsys):
        assert run(capsys, "membership", "x_(2,0) - y_(1,1)", self.H)[:2] == (0, "ABSENT\n")

    def test_square(self, capsys):
        assert run(capsys, "membership", f"({self.H})^2", self.H)[:2] == (0, "z^2\n")

    def test_verbose(self, capsys):
        code, out, _ = run(capsys, "membership", "--verbose", f"({self.H})^2", self.H)
        assert code == 0 and out.startswith("candidates: 5\n")  # z^2 and the four third-order z^theta

    def test_non_homogeneous(self, capsys):
        code, _, err = run(capsys, "membership", "x + x^2", "x")
        assert code == 1 and "homogeneous" in err

    def test_candidate_cap(self, capsys):
        code, _, _ = run(capsys, "--max-candidates", "2", "membership", "x^6", "x")
        assert code == 2


class TestAnick:
    @pytest.mark.parametrize("m", ["2", "3"])
    def test_report(self, capsys, m):
        code, out, _ = run(capsys, "anick", "-m", m)
        assert code == 0
        assert out.splitlines()[-1] == "verdict: WILD (certified)"
        assert "inverse_pair: verified" in out

    def test_refuses_single_derivation(self, capsys):
        code, _, err = run(capsys, "anick", "-m", "1")
        assert code == 1 and "open" in err


def test_determinism(capsys, write):
    path = write("E1 a=3 f=y^3\nE2 a=1 g=x_(1,0)^2\nE1 a=-1 f=y\n")
    outs = {run(capsys, "normalize", "--verbose", path)[1] for _ in range(3)}
    assert len(outs) == 1
    outs = {run(capsys, "anick")[1] for _ in range(2)}
    assert len(outs) == 1


def test_config_invariants():
    with pytest.raises(ParameterError):
        CliConfig(m=-1)
    with pytest.raises(ParameterError):
        CliConfig(max_degree=0)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "diffauto", "eval", "y + x"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "x + y\n"


def test_one_is_printed_plainly():
    assert format_poly(DiffPolynomial.one(2, 2)) == "1"

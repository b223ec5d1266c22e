import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path


from cauchyforce import checker
from cauchyforce.cli import (
    EXIT_CONTRACT, EXIT_EXHAUSTED, EXIT_OK, EXIT_SPAWN, EXIT_USAGE, EXIT_VERIFY, demo_traces, main,
)

ROOT = Path(__file__).resolve().parent.parent
EXAMPLE_ORACLE = f"{sys.executable} {ROOT / 'scripts' / 'example_oracle.py'}"


def exit_code(argv):
    """Exit status of ``main`` whether it returns or raises SystemExit."""
    try:
        return main(argv)
    except SystemExit as e:
        return e.code


def refute(tmp_path, *args):
    out = tmp_path / "trace.json"
    code = main(["refute", *args, "-o", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None), out


def test_refute_then_check(tmp_path):
    code, doc, path = refute(tmp_path, "--theorem", "1", "--oracle", "naive-length")
    assert code == EXIT_OK and doc["outcome"]["tag"] == "Violation"
    assert main(["check", str(path)]) == EXIT_OK


def test_exit_codes(tmp_path):
    assert refute(tmp_path, "--theorem", "2", "--oracle", "stonewall")[0] == EXIT_EXHAUSTED
    code, doc, _ = refute(tmp_path, "--theorem", "3", "--oracle", "canon-breaker")
    assert code == EXIT_CONTRACT and doc["outcome"]["tag"] == "OracleContractViolation"
    assert refute(tmp_path, "--theorem", "1", "--oracle-cmd", "/nonexistent/oracle")[0] == EXIT_SPAWN
    assert exit_code(["refute", "--theorem", "1", "--oracle", "no-such-oracle"]) == EXIT_USAGE
    assert exit_code(["refute", "--theorem", "9", "--oracle", "naive-length"]) == EXIT_USAGE


def test_check_rejects_bad_files(tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    assert exit_code(["check", str(empty)]) == EXIT_USAGE
    code, doc, _ = refute(tmp_path, "--theorem", "2", "--oracle", "stonewall")
    exhausted = tmp_path / "exhausted.json"
    exhausted.write_text(json.dumps(doc))
    assert exit_code(["check", str(exhausted)]) == EXIT_USAGE


def test_check_flags_corrupted_trace(tmp_path):
    _, doc, _ = refute(tmp_path, "--theorem", "1", "--oracle", "interval-halving")
    doc["outcome"]["witness"]["positions"] = [0, 0]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert main(["check", str(bad)]) == EXIT_VERIFY


def test_subprocess_oracle(tmp_path):
    code, doc, _ = refute(tmp_path, "--theorem", "1", "--oracle-cmd", EXAMPLE_ORACLE)
    assert code == EXIT_OK and checker.check_trace(doc).ok
    code, doc, _ = refute(tmp_path, "--theorem", "4", "--support", "", "--oracle-cmd",
                          EXAMPLE_ORACLE + " --value 1/5")
    assert code == EXIT_OK and doc["outcome"]["tag"] == "Violation" and checker.check_trace(doc).ok


def test_support_flag(tmp_path):
    code, doc, _ = refute(tmp_path, "--theorem", "4", "--oracle", "const-limit", "--support", "")
    assert code == EXIT_OK and doc["header"]["support"] == []


def test_complete_command(tmp_path):
    fixture = tmp_path / "fx.json"
    fixture.write_text(json.dumps({"family": "geometric", "limit": "1/3", "spread": 1, "scale": 1}))
    out = tmp_path / "y.json"
    for construction in ("pairs+mod", "pairs", "plain+mod"):
        assert main(["complete", "--fixture", str(fixture), "--construction", construction,
                     "--terms", "12", "-o", str(out)]) == EXIT_OK
        doc = json.loads(out.read_text())
        L = Fraction(doc["known_limit"])
        for n, t in enumerate(doc["terms"]):
            assert abs(Fraction(t) - L) <= Fraction(4, 2 ** n)
    assert exit_code(["complete", "--fixture", str(tmp_path / "missing.json")]) == EXIT_USAGE


def test_demo_and_selftest():
    assert main(["demo"]) == EXIT_OK
    assert main(["selftest", "--mutants", "50"]) == EXIT_OK


def test_mutation_suite_rejects_all_and_names_the_step():
    docs = [o.to_json() for o in demo_traces(0)]
    assert all(checker.check_trace(d).ok for d in docs)
    mutants = checker.mutation_suite(docs, 50)
    assert len(mutants) == 50
    for name, d in mutants:
        r = checker.check_trace(d)
        assert not r.ok, name
        assert r.where, name


def test_module_entry_point(tmp_path):
    p = subprocess.run([sys.executable, "-m", "cauchyforce", "refute", "--theorem", "1",
                        "--oracle", "length-echo"], capture_output=True, text=True)
    assert p.returncode == EXIT_OK
    assert json.loads(p.stdout)["outcome"]["tag"] == "Violation"

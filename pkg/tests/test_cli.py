import io
import json
import re
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from mccfm.cli import main, verify_limit
from mccfm.exact import Surd, surd_to_decimal

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"
CASES = json.loads((GOLDEN / "cases.json").read_text())


def run(argv):
    out = io.StringIO()
    code = main([a.replace("{fixtures}", str(FIXTURES)) for a in argv], out=out)
    return code, out.getvalue()


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_golden(case):
    code, stdout = run(case["argv"])
    assert code == case["exit"]
    assert stdout == (GOLDEN / f"{case['name']}.out").read_text()


def test_console_entry_point_is_byte_deterministic():
    argv = [sys.executable, "-m", "mccfm", "converge", "--tp", "6", "--fp", "2", "--fn", "3",
            "--tn-list", "0,9,1000000,1000000000000", "--digits", "12"]
    first = subprocess.run(argv, capture_output=True)
    second = subprocess.run(argv, capture_output=True)
    assert first.returncode == 0
    assert first.stdout == second.stdout == (GOLDEN / "converge_large_tn.out").read_bytes()


def test_usage_errors_exit_one():
    assert run([])[0] == 1
    assert run(["metrics", "--tp", "1"])[0] == 1
    assert run(["metrics", "--tp", "x", "--fp", "0", "--fn", "0"])[0] == 1
    assert run(["converge", "--tp", "1", "--fp", "1", "--fn", "1", "--tn-list", "1,,2"])[0] == 1
    assert run(["converge", "--tp", "0", "--fp", "0", "--fn", "1", "--tn-list", "1"])[0] == 1
    assert run(["metrics", "--tp", "1", "--fp", "0", "--fn", "0", "--digits", "0"])[0] == 1


def test_tampered_claim_is_refuted():
    out = io.StringIO()
    code = verify_limit(out, claim_text="tp/sqrt((tp+fp)*(tp+fp))")
    assert code == 4
    assert out.getvalue().rstrip().endswith("REFUTED")
    assert "claim == fm: not_equal" in out.getvalue()


def test_show_steps_reports_three_equal_rewrites():
    code, stdout = run(["verify-limit", "--show-steps"])
    assert code == 0
    verdicts = re.findall(r"^step \w+ == step \w+: (\w+)$", stdout, flags=re.M)
    assert verdicts == ["equal"] * 3


def parse_exact(text: str) -> Surd:
    m = re.fullmatch(r"\((-?\d+(?:/\d+)?)\)\*sqrt\((\d+)\)", text)
    if m:
        return Surd(Fraction(m.group(1)), int(m.group(2)))
    return Surd(Fraction(text))


@pytest.mark.parametrize("counts", [(6, 2, 3, 9), (1, 7, 4, 2), (0, 5, 5, 0), (13, 1, 2, 1000), (3, 3, 0, 8)])
@pytest.mark.parametrize("digits", [3, 6, 11])
def test_decimals_agree_with_exact_fields(counts, digits):
    tp, fp, fn, tn = counts
    code, stdout = run(["metrics", "--tp", str(tp), "--fp", str(fp), "--fn", str(fn), "--tn", str(tn),
                        "--digits", str(digits)])
    assert code == 0
    doc = json.loads(stdout)
    for key in ("ppv", "tpr", "f1", "fm", "mcc"):
        entry = doc[key]
        if entry == "undefined":
            continue
        assert surd_to_decimal(parse_exact(entry["exact"]), digits) == entry["decimal"]

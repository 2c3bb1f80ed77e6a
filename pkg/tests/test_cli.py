import io
import json
import subprocess
import sys

import pytest

from atomic_entailment.cli import run
from atomic_entailment.parsing import parse_any


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call("--json", *argv)
    report = json.loads(text)
    assert report["exit"] == code
    return code, report


def test_spec_examples():
    code, r = call_json("valid", "--matrix", "MD", "p -> (q -> p)")
    assert code == 1 and r["countermodel"] == {"p": 2, "q": 1}
    code, text = call("translate-j", "all x1 . P1(x1)")
    assert code == 0 and text.strip() == "p1"


def test_suite_reports_discrepancies():
    code, r = call_json("suite", "--range", "1-119")
    assert r["total"] == 119
    assert r["pass"] + r["fail"] + r["unknown"] == 119
    # any failing schema makes the run negative
    assert code == (0 if r["pass"] == 119 else 1)


def test_quantifier_suite():
    code, r = call_json("suite", "--range", "i-xxxiv")
    assert code == 0 and r["total"] == r["pass"] == 34
    assert r["converse_xxviii"]["outcome"] == "invalid"


@pytest.mark.parametrize("argv, code", [
    (["parse", "p -> q"], 0),
    (["parse", "p ->"], 3),
    (["eval", "--matrix", "MD", "--assign", "p=1,q=2", "p -> q"], 0),
    (["eval", "--matrix", "MD", "--assign", "p=1", "p -> q"], 3),
    (["valid", "--matrix", "MD", "p -> p"], 0),
    (["valid", "--matrix", "M2", "p -> (q -> p)"], 0),
    (["member", "--system", "TD", "~p | p"], 0),
    (["member", "--system", "LD", "P1(x1) -> P2(x1)"], 1),
    (["member", "--system", "L2", "(all x1 . P1(x1)) -> P1(x2)"], 0),
    (["entail", "--mode", "atomic-prop", "p", "q -> p"], 1),
    (["entail", "--mode", "classical-prop", "p", "q -> p"], 0),
    (["entail", "--mode", "atomic-fol", "P1(x1)", "P1(x1)"], 0),
    (["entail", "--mode", "classical-fol", "P1(x1)", "P2(x1)"], 1),
    (["falsify", "p", "q -> p"], 0),
    (["falsify", "p", "p"], 1),
    (["gap-witness", "--relation", "A0", "--max-pairs", "0"], 2),
    (["prenex", "~ all x1 . P1(x1)"], 0),
    (["star", "P1(x1)"], 0),
    (["close", "P1(x1,x2)"], 0),
    (["tables"], 0),
    (["ainc", "--logic", "TD", "--alpha", "p", "--beta", "~~p"], 0),
    (["consistency", "--logic", "TD", "--premises", "p;~p"], 0),
    (["consistency", "--logic", "TD", "--premises", "*"], 1),
    (["derive", "--logic", "TD", "--premises", "p;~p", "--target", "~~p"], 0),
    (["derive", "--logic", "TD", "--premises", "p;~p", "--target", "q"], 1),
    (["nonsense"], 3),
    (["valid", "--matrix", "nope.json", "p"], 3),
])
def test_exit_codes(argv, code):
    got, _ = call(*argv)
    assert got == code
    got, r = call_json(*argv)
    assert got == code


def test_budget_unknown_exit():
    f = "(all x1 . (P1(x1) -> P2(x1))) -> ((all x1 . P1(x1)) -> all x1 . P2(x1))"
    code, r = call_json("--max-domain", "1", "--max-steps", "1", "member", "--system", "L2", f)
    assert code == 2
    assert r["budget_flags"]["max_steps"] == 1


def test_flags_after_subcommand():
    code, r = call_json("member", "--system", "L2", "--max-domain", "1", "--max-steps", "1",
                        "(all x1 . (P1(x1) -> P2(x1))) -> ((all x1 . P1(x1)) -> all x1 . P2(x1))")
    assert code == 2


def test_budget_env(monkeypatch):
    monkeypatch.setenv("WORKBENCH_BUDGET_MS", "250")
    code, r = call_json("member", "--system", "L2", "P1(x1) -> P1(x1)")
    assert code == 0 and r["budget_flags"]["time_ms"] == 250


def test_failure_reports_carry_evidence():
    for argv in [["valid", "--matrix", "MD", "p -> (q -> p)"],
                 ["entail", "--mode", "atomic-prop", "p & q", "p"],
                 ["entail", "--mode", "atomic-fol", "P1(x1)", "P2(x1) -> P1(x1)"],
                 ["member", "--system", "LD", "P1(x1) -> (P2(x1) -> P1(x1))"]]:
        code, r = call_json(*argv)
        assert code == 1
        assert any(k in r for k in ("countermodel", "evidence", "j_countermodel"))
        if "evidence" in r:
            assert r["evidence"] is not None


def _formula_fields(obj):
    if isinstance(obj, dict):
        for k, v in obj.items():
            if k in ("phi", "psi", "formula", "query", "j_image", "target", "blocked") and \
                    isinstance(v, str):
                yield v
            else:
                yield from _formula_fields(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from _formula_fields(v)


def test_formulas_in_reports_reparse():
    cases = [
        (["entail", "--mode", "atomic-fol", "P1(x1) & P2(x1)", "P1(x1)"], "P1(x1) & P2(x1)"),
        (["member", "--system", "LD", "ex x2 . P2(f1(x2), a1) -> P1(x1)"],
         "ex x2 . P2(f1(x2), a1) -> P1(x1)"),
        (["derive", "--logic", "TD", "--premises", "p;~p", "--target", "~(p <-> p)"], None),
    ]
    for argv, original in cases:
        _, r = call_json(*argv)
        texts = list(_formula_fields(r))
        assert texts
        for t in texts:
            assert str(parse_any(t)) == t
        if original is not None:
            assert parse_any(original) in {parse_any(t) for t in texts}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "atomic_entailment", "translate-j", "P3(x1)"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "p3"

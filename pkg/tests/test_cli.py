"""Expression language, evaluator, scenario runner, and command-line surface."""

import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chernlab.cli import (
    EvalError,
    ExprSyntaxError,
    evaluate_expression,
    format_value,
    main,
    metric_weight_fn,
    parse_expr,
    render,
    run_scenario,
)
from chernlab.cli.expr import BinOp, Call, ListLit, Name, Neg, Num

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


# ---------------------------------------------------------------- parsing

GOLDEN_RENDERS = [
    ("a+b*c", "a + b * c"),
    ("(a+b)*c", "(a + b) * c"),
    ("a^b^c", "a^b^c"),
    ("(a^b)^c", "(a^b)^c"),
    ("-(a+b)^2*c", "-(a + b)^2 * c"),
    ("a-b-c", "a - b - c"),
    ("a-(b-c)", "a - (b - c)"),
    ("f(x,[1,2/3,-4])", "f(x, [1, 2 / 3, -4])"),
    ("2^-3", "2^(-3)"),
    ("f()", "f()"),
]


def test_parse_render_golden():
    for source, canonical in GOLDEN_RENDERS:
        assert render(parse_expr(source)) == canonical, source


def test_positions_do_not_affect_equality():
    assert parse_expr("a+b") == parse_expr("a  +\n  b")


def test_power_is_right_associative():
    assert parse_expr("a^b^c") == parse_expr("a^(b^c)")
    assert parse_expr("a^b^c") != parse_expr("(a^b)^c")


def test_subtraction_is_left_associative():
    assert parse_expr("a - b - c") == parse_expr("(a - b) - c")


def test_syntax_error_reports_position():
    # input ends mid-call: the error points one past the last character
    with pytest.raises(ExprSyntaxError) as exc:
        parse_expr("integrate(P(2), ch(O")
    assert exc.value.line == 1
    assert exc.value.col == 21
    assert str(exc.value).startswith("syntax error at line 1, column 21")

    with pytest.raises(ExprSyntaxError) as exc:
        parse_expr("a + * b")
    assert exc.value.col == 5

    with pytest.raises(ExprSyntaxError):
        parse_expr("f(x,)")


_names = st.sampled_from(["a", "b", "c", "x", "y", "z2"])
_leaves = st.one_of(
    st.integers(min_value=0, max_value=99).map(Num),
    _names.map(Name),
)


def _extend(children):
    ops = st.sampled_from(["+", "-", "*", "/", "^"])
    return st.one_of(
        st.builds(BinOp, ops, children, children),
        children.map(Neg),
        st.builds(
            Call, _names, st.lists(children, max_size=3).map(tuple)
        ),
        st.builds(ListLit, st.lists(children, max_size=3).map(tuple)),
    )


_asts = st.recursive(_leaves, _extend, max_leaves=12)


@settings(max_examples=200, deadline=None)
@given(_asts)
def test_rendered_text_is_a_parse_fixpoint(ast):
    # render may re-associate flat +/* chains, but its output is canonical:
    # parsing it and rendering again reproduces the text exactly, and parse
    # trees round trip through render without change.
    text = render(ast)
    tree = parse_expr(text)
    assert render(tree) == text
    assert parse_expr(render(tree)) == tree


# ------------------------------------------------------------- evaluation


def test_rational_arithmetic():
    assert evaluate_expression("2^3 / 12 + 1/3") == Fraction(1)
    assert format_value(Fraction(-2, 3)) == "-2/3"


def test_euler_characteristic_golden():
    value = evaluate_expression("integrate(P(2), ch(O(3)) * td(T))")
    assert value == Fraction(10)


def test_tangent_degree_golden():
    assert evaluate_expression("integrate(P(1), c(1, T))") == Fraction(2)


def test_pushforward_golden_with_space():
    value = evaluate_expression(
        "pushforward(p, A^3)",
        "proj_bundle(universal2(6), bundle(2, [c1, c2]))",
    )
    assert format_value(value) == "1/4*c1^2 - 1*c2"


def test_additive_class_on_virtual_sum():
    value = evaluate_expression(
        "integrate(P(2), additive([0, 1, 0, 1], sum(O(1), O(-1))))"
    )
    assert value == Fraction(0)


def test_eval_error_cites_offending_subexpression():
    with pytest.raises(EvalError) as exc:
        evaluate_expression("c(1, T) + 1")
    message = str(exc.value)
    assert "line 1, column 6" in message
    assert "'T'" in message

    with pytest.raises(EvalError, match="rational"):
        evaluate_expression("integrate(P(2), additive([h], O(1)))")


# ---------------------------------------------------------- metric dialect


def test_metric_weight_fn_evaluates_pointwise():
    import numpy as np

    fn = metric_weight_fn("1/2 * abs2(z) / (1 + abs2(z))")
    pts = np.array([1.0 + 0j, 2.0j])
    assert np.allclose(fn(pts), [0.25, 0.4])


def test_metric_dialect_rejects_unknown_function():
    import numpy as np

    fn_err = None
    try:
        fn = metric_weight_fn("bogus(z)")
        fn(np.array([1.0 + 0j]))
    except EvalError as err:
        fn_err = err
    assert fn_err is not None


# --------------------------------------------------------------- scenarios


def test_scenario_reports_are_byte_identical(tmp_path):
    first = run_scenario(SCENARIOS / "symbolic_basics.json", tmp_path / "one")
    second = run_scenario(SCENARIOS / "symbolic_basics.json", tmp_path / "two")
    assert first.passed and second.passed
    report_a = (tmp_path / "one" / "report.json").read_bytes()
    report_b = (tmp_path / "two" / "report.json").read_bytes()
    assert report_a == report_b
    for name in first.files:
        if name.endswith(".csv"):
            assert (tmp_path / "one" / name).read_bytes() == (
                tmp_path / "two" / name
            ).read_bytes()


def test_scenario_files_exist_on_disk(tmp_path):
    result = run_scenario(SCENARIOS / "symbolic_basics.json", tmp_path / "out")
    assert result.files == sorted(result.files)
    for name in result.files:
        assert (tmp_path / "out" / name).is_file()


def test_scenario_dict_source_and_failure(tmp_path):
    result = run_scenario(
        {
            "name": "inline",
            "mode": "symbolic",
            "expressions": [{"expr": "1 + 1", "expected": "3"}],
        },
        tmp_path / "bad",
    )
    assert not result.passed
    report = json.loads((tmp_path / "bad" / "report.json").read_text())
    assert report["passed"] is False


def test_numeric_scenario_writes_figures(tmp_path):
    rc = main(
        [
            "numeric",
            "--scenario",
            str(SCENARIOS / "numeric_log_weight.json"),
            "--out",
            str(tmp_path / "lw"),
        ]
    )
    assert rc == 0
    names = {p.name for p in (tmp_path / "lw").iterdir()}
    assert "report.json" in names
    assert any(n.endswith(".csv") for n in names)
    assert any(n.endswith(".png") for n in names)


# ------------------------------------------------------------ command line


def test_eval_command_prints_value(capsys):
    assert main(["eval", "-e", "integrate(P(2), ch(O(3)) * td(T))"]) == 0
    assert capsys.readouterr().out == "10\n"


def test_eval_command_rejects_bad_syntax(capsys):
    assert main(["eval", "-e", "1 +"]) == 2
    assert "syntax error" in capsys.readouterr().err


def test_hrr_command_summarizes_rows(capsys):
    assert main(["hrr", "--max-n", "2", "--max-k", "2"]) == 0
    out = capsys.readouterr().out
    assert "12/12 rows match" in out


def test_err_transfer_command_golden(capsys):
    rc = main(
        ["err-transfer", "--series", "[0,1]", "--which", "O", "--order", "3"]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "u^0: 2" in out
    assert "u^3: 4/945" in out


def test_solve_r_command_round_trip(capsys):
    rc = main(
        [
            "solve-r",
            "--target-o",
            "[2,2/3,-2/45,4/945]",
            "--target-o1",
            "[2,-1/3,7/180,-31/7560]",
            "--order",
            "3",
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "x^1: even 0, odd 1" in out
    assert "round trip: ok" in out


def test_scenario_exit_codes(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    assert main(["numeric", "--scenario", str(missing)]) == 2
    capsys.readouterr()

    mangled = tmp_path / "mangled.json"
    mangled.write_text("not json {{")
    assert main(["numeric", "--scenario", str(mangled)]) == 2
    capsys.readouterr()

    failing = tmp_path / "failing.json"
    failing.write_text(
        json.dumps(
            {
                "name": "failing",
                "mode": "symbolic",
                "expressions": [{"expr": "2", "expected": "5"}],
            }
        )
    )
    rc = main(
        ["numeric", "--scenario", str(failing), "--out", str(tmp_path / "f")]
    )
    assert rc == 1


def test_console_script_smoke():
    proc = subprocess.run(
        ["chernlab", "eval", "-e", "integrate(P(1), ch(O(1)) * td(T))"],
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout == "2\n"


def test_module_entry_point_matches_script():
    proc = subprocess.run(
        [sys.executable, "-m", "chernlab.cli.main", "eval", "-e", "1/2 + 1/2"],
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.endswith("1\n")

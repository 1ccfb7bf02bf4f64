"""Command-line front end: expression language, scenarios, reports."""

from .evaluate import EvalError, Evaluator, evaluate_expression, format_value, metric_weight_fn
from .expr import ExprSyntaxError, parse_expr, render
from .scenarios import ScenarioError, ScenarioResult, run_scenario
from .main import main

__all__ = [
    "EvalError",
    "Evaluator",
    "ExprSyntaxError",
    "ScenarioError",
    "ScenarioResult",
    "evaluate_expression",
    "format_value",
    "main",
    "metric_weight_fn",
    "parse_expr",
    "render",
    "run_scenario",
]

"""Scenario files: JSON in, deterministic report out.

A scenario is a JSON object with a ``mode`` key.  Symbolic modes
(``symbolic``, ``hrr``, ``tower-check``, ``err-transfer``, ``solve-r``)
wrap the exact engines; ``numeric`` dispatches on a ``check`` key to the
grid laboratory.  Every run writes ``report.json`` plus CSV grids and PNG
figures into the output directory and returns the parsed report.

Reports are reproducible byte for byte: keys are sorted, floats pass
through a fixed 12-significant-digit filter, rationals are rendered as
``p/q`` strings, and nothing time- or path-dependent is recorded.
"""

from __future__ import annotations

import csv
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..char_classes import CharSeries
from ..exact_algebra import UnivariateSeries, render_graded, render_rational
from ..rr_engine import (
    NoSolutionError,
    err_transfer_O,
    err_transfer_Ominus1,
    hrr_table,
    random_tower_case,
    solve_R,
)
from ..chern_weil import (
    EXP_CLAMP,
    PLATEAU,
    ChartGrid,
    bott_chern_numeric,
    char_form,
    connection_curvature,
    ddc,
    first_chern_line,
    fubini_study_line,
    integrate_log_weight,
    integrate_p1,
    metric_change_datum,
    product_identity_residuals,
    generic_product_metric,
    split_datum,
    verify_downstairs,
)
from . import figures
from .evaluate import Evaluator, SpaceContext, format_value, metric_weight_fn


class ScenarioError(ValueError):
    """A malformed scenario file or configuration."""


@dataclass
class ScenarioResult:
    name: str
    mode: str
    passed: bool
    report: Dict[str, object]
    out_dir: Path
    files: List[str] = field(default_factory=list)

    @property
    def report_text(self) -> str:
        return render_report(self.report)


def sig(x: float) -> float:
    """Round a float through 12 significant digits for stable output."""
    return float(f"{float(x):.12g}")


def render_report(report: Dict[str, object]) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    def cell(v: object) -> object:
        if isinstance(v, Fraction):
            return render_rational(v)
        if isinstance(v, float):
            return f"{v:.12g}"
        if isinstance(v, (np.floating,)):
            return f"{float(v):.12g}"
        return v

    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell(v) for v in row])
    return path.name


def _series_from_config(values: Sequence[object], where: str) -> UnivariateSeries:
    coeffs = [Fraction(str(v)) for v in values]
    if not coeffs:
        raise ScenarioError(f"{where}: empty coefficient list")
    return UnivariateSeries(coeffs, len(coeffs) - 1)


def _series_report(s: UnivariateSeries) -> List[str]:
    return [render_rational(s.coefficient(k)) for k in range(s.order + 1)]


# ---------------------------------------------------------------------------
# Symbolic modes
# ---------------------------------------------------------------------------


def _run_symbolic(cfg: Dict, out: Path) -> Tuple[Dict, bool, List[str]]:
    entries = cfg.get("expressions")
    if not isinstance(entries, list) or not entries:
        raise ScenarioError("symbolic mode needs a nonempty 'expressions' list")
    results = []
    passed = True
    for entry in entries:
        if not isinstance(entry, dict) or "expr" not in entry:
            raise ScenarioError("each expression entry needs an 'expr' key")
        ev = Evaluator()
        space_text = entry.get("space")
        if space_text:
            ctx = ev.evaluate_source(space_text)
            if not isinstance(ctx, SpaceContext):
                raise ScenarioError(f"'space' must name a space: {space_text!r}")
            ev.push_space(ctx)
        rendered = format_value(ev.evaluate_source(entry["expr"]))
        record: Dict[str, object] = {"expr": entry["expr"], "value": rendered}
        if space_text:
            record["space"] = space_text
        if "expected" in entry:
            record["expected"] = entry["expected"]
            record["match"] = rendered == entry["expected"]
            passed = passed and record["match"]
        results.append(record)
    files = [
        _write_csv(
            out / "expressions.csv",
            ("expr", "value", "expected", "match"),
            [
                (r["expr"], r["value"], r.get("expected", ""), r.get("match", ""))
                for r in results
            ],
        )
    ]
    return {"results": results}, passed, files


def _run_hrr(cfg: Dict, out: Path) -> Tuple[Dict, bool, List[str]]:
    max_n = int(cfg.get("max_n", 4))
    max_k = int(cfg.get("max_k", 5))
    rows = hrr_table(max_n, max_k)
    passed = all(r[4] for r in rows)
    table = np.full((max_n + 1, max_n + max_k + 1), np.nan)
    for n, k, chi, _, _ in rows:
        table[n, k + max_n] = float(chi)
    files = [
        _write_csv(
            out / "hrr_table.csv",
            ("n", "k", "chi", "expected", "match"),
            [(n, k, chi, exp, ok) for n, k, chi, exp, ok in rows],
        ),
        figures.heatmap(
            out / "hrr_table.png",
            np.nan_to_num(table, nan=0.0),
            "Euler characteristics of O(k) twists",
            extent=[-max_n - 0.5, max_k + 0.5, -0.5, max_n + 0.5],
        ),
    ]
    body = {
        "max_n": max_n,
        "max_k": max_k,
        "rows_checked": len(rows),
        "mismatches": [
            {"n": n, "k": k, "chi": render_rational(chi), "expected": exp}
            for n, k, chi, exp, ok in rows
            if not ok
        ],
    }
    return body, passed, files


def _run_tower(cfg: Dict, out: Path) -> Tuple[Dict, bool, List[str]]:
    count = int(cfg.get("count", 10))
    seed = int(cfg.get("seed", 0))
    if count < 1:
        raise ScenarioError("tower-check needs count >= 1")
    rng = random.Random(seed)
    cases = []
    passed = True
    sizes = []
    for i in range(count):
        case = random_tower_case(rng)
        result = case.run()
        ok = result.passed
        passed = passed and ok
        record: Dict[str, object] = {
            "index": i,
            "label": case.label,
            "passed": ok,
            "configuration": case.description,
            "lhs_terms": len(result.lhs.terms),
        }
        if not ok:
            record["residual"] = render_graded(result.residual)
        cases.append(record)
        sizes.append(len(result.lhs.terms))
    files = [
        _write_csv(
            out / "tower_cases.csv",
            ("index", "label", "passed", "lhs_terms"),
            [(c["index"], c["label"], c["passed"], c["lhs_terms"]) for c in cases],
        ),
        figures.error_bars(
            out / "tower_cases.png",
            [str(i) for i in range(count)],
            [max(s, 1) for s in sizes],
            "Push-forward identity: direct-image character size per case",
        ),
    ]
    return {"seed": seed, "count": count, "cases": cases}, passed, files


def _run_err_transfer(cfg: Dict, out: Path) -> Tuple[Dict, bool, List[str]]:
    series = _series_from_config(cfg.get("series", []), "err-transfer")
    which = cfg.get("which", "O")
    if which not in ("O", "O-1"):
        raise ScenarioError("err-transfer 'which' must be 'O' or 'O-1'")
    order = int(cfg.get("order", 3))
    op = err_transfer_O if which == "O" else err_transfer_Ominus1
    image = op(series, order).series_in_u
    coeffs = _series_report(image)
    passed = True
    body: Dict[str, object] = {
        "which": which,
        "order": order,
        "input_coefficients": _series_report(series),
        "u_coefficients": coeffs,
    }
    if "expected" in cfg:
        expected = [str(v) for v in cfg["expected"]]
        body["expected"] = expected
        passed = coeffs == expected
    files = [
        _write_csv(
            out / "err_transfer.csv",
            ("k", "u_coefficient"),
            list(enumerate(coeffs)),
        ),
        figures.error_bars(
            out / "err_transfer.png",
            [f"u^{k}" for k in range(len(coeffs))],
            [abs(float(Fraction(c))) for c in coeffs],
            f"Transfer image through {which}",
        ),
    ]
    return body, passed, files


def _run_solve_r(cfg: Dict, out: Path) -> Tuple[Dict, bool, List[str]]:
    target_o = _series_from_config(cfg.get("target_o", []), "solve-r target_o")
    target_o1 = _series_from_config(cfg.get("target_o1", []), "solve-r target_o1")
    order = int(cfg.get("order", min(target_o.order, target_o1.order)))
    body: Dict[str, object] = {
        "order": order,
        "target_o": _series_report(target_o),
        "target_o1": _series_report(target_o1),
    }
    try:
        sol = solve_R(target_o, target_o1, order)
    except NoSolutionError as exc:
        body["solved"] = False
        body["failure"] = str(exc)
        body["failing_order"] = exc.failing_order
        files = [
            _write_csv(out / "solve_r.csv", ("status",), [("no solution",)]),
        ]
        return body, False, files
    combined = sol.combined()
    back_o = err_transfer_O(combined, order).series_in_u
    back_o1 = err_transfer_Ominus1(combined, order).series_in_u
    round_trip = (
        _series_report(back_o) == _series_report(target_o.truncate(order))
        and _series_report(back_o1) == _series_report(target_o1.truncate(order))
    )
    body["solved"] = True
    body["r_even"] = _series_report(sol.r_even)
    body["r_odd"] = _series_report(sol.r_odd)
    body["round_trip"] = round_trip
    rows = [
        (k, render_rational(sol.r_even.coefficient(k)), render_rational(sol.r_odd.coefficient(k)))
        for k in range(2 * order + 2)
    ]
    files = [
        _write_csv(out / "solve_r.csv", ("k", "r_even", "r_odd"), rows),
        figures.error_bars(
            out / "solve_r.png",
            [f"x^{k}" for k in range(2 * order + 2)],
            [
                abs(float(Fraction(a)) + float(Fraction(b)))
                for _, a, b in rows
            ],
            "Recovered series coefficients",
        ),
    ]
    return body, round_trip, files


# ---------------------------------------------------------------------------
# Numeric checks
# ---------------------------------------------------------------------------


def _weight_pair(cfg: Dict) -> Tuple[Callable, Callable]:
    weight = cfg.get("weight")
    if weight is None:
        zero = lambda z: np.zeros(np.shape(z))  # noqa: E731
        return zero, zero
    if not isinstance(weight, dict) or "f_z" not in weight or "f_w" not in weight:
        raise ScenarioError("'weight' needs metric expressions 'f_z' and 'f_w'")
    return metric_weight_fn(weight["f_z"]), metric_weight_fn(weight["f_w"])


def _check_degree(cfg: Dict, out: Path) -> Tuple[Dict, bool, List[str]]:
    n = int(cfg.get("n", 256))
    ks = [int(k) for k in cfg.get("ks", [1, 2, 3])]
    tol = float(cfg.get("tolerance", 1e-5))
    order = int(cfg.get("fd_order", 6))
    grid = ChartGrid(n)
    rows = []
    errors = []
    for k in ks:
        metric = fubini_study_line(grid, k)
        density = first_chern_line(metric, order=order)
        value = integrate_p1(density)
        rows.append((k, value, value - k))
        errors.append(abs(value - k))
    passed = all(e < tol for e in errors)
    files = [
        _write_csv(out / "degree.csv", ("k", "integral", "error"), rows),
        figures.error_bars(
            out / "degree.png",
            [f"O({k})" for k in ks],
            errors,
            f"Degree integrals at n={n}",
            tolerance=tol,
        ),
    ]
    body = {
        "n": n,
        "tolerance": sig(tol),
        "results": [
            {"k": k, "integral": sig(v), "error": sig(e)} for k, v, e in rows
        ],
    }
    return body, passed, files


def _check_two_path(cfg: Dict, out: Path) -> Tuple[Dict, bool, List[str]]:
    n = int(cfg.get("n", 256))
    k = int(cfg.get("k", 1))
    tol = float(cfg.get("tolerance", 1e-6))
    order = int(cfg.get("fd_order", 6))
    grid = ChartGrid(n)
    metric = fubini_study_line(grid, k)
    via_potential = first_chern_line(metric, order=order)
    via_curvature = char_form(
        connection_curvature(metric, order=order), CharSeries.chern_character()
    ).grade1
    gap = via_potential - via_curvature
    gap_max = gap.max_on_interior()
    deg_a = integrate_p1(via_potential)
    deg_b = integrate_p1(via_curvature)
    passed = gap_max < tol
    extent = [-grid.half_width, grid.half_width] * 2
    files = [
        _write_csv(
            out / "two_path.csv",
            ("quantity", "value"),
            [
                ("max_gap", gap_max),
                ("degree_via_potential", deg_a),
                ("degree_via_curvature", deg_b),
            ],
        ),
        figures.heatmap(
            out / "two_path_gap.png",
            gap.data["z"],
            f"Two-route first Chern density gap (n={n})",
            extent=extent,
            log_scale=True,
        ),
    ]
    body = {
        "n": n,
        "k": k,
        "tolerance": sig(tol),
        "max_gap": sig(gap_max),
        "degree_via_potential": sig(deg_a),
        "degree_via_curvature": sig(deg_b),
    }
    return body, passed, files


def _check_downstairs(cfg: Dict, out: Path) -> Tuple[Dict, bool, List[str]]:
    n_values = [int(v) for v in cfg.get("n_values", [64, 128])]
    k = int(cfg.get("k", 1))
    tol = float(cfg.get("tolerance", 1e-3))
    ratio_min = float(cfg.get("ratio_min", 1.8))
    wz, ww = _weight_pair(cfg)
    residuals = []
    last_report = None
    for n in n_values:
        grid = ChartGrid(n)
        datum = metric_change_datum(grid, k, wz, ww)
        report = verify_downstairs(datum)
        residuals.append(report.residual)
        last_report = report
    ratios = [
        residuals[i - 1] / residuals[i] if residuals[i] > 0 else float("inf")
        for i in range(1, len(residuals))
    ]
    passed = residuals[-1] < tol and all(r >= ratio_min for r in ratios)
    rows = [
        (n_values[i], residuals[i], ratios[i - 1] if i else "")
        for i in range(len(n_values))
    ]
    gap = last_report.lhs - last_report.rhs
    extent = [-ChartGrid(n_values[-1]).half_width, ChartGrid(n_values[-1]).half_width] * 2
    files = [
        _write_csv(out / "downstairs.csv", ("n", "residual", "ratio"), rows),
        figures.heatmap(
            out / "downstairs_residual.png",
            gap.data["z"],
            f"Downstairs comparison residual (n={n_values[-1]})",
            extent=extent,
            log_scale=True,
        ),
        figures.convergence_plot(
            out / "downstairs_convergence.png",
            n_values,
            residuals,
            "grid size n",
            "max residual",
            "Downstairs residual under refinement",
            reference_slope=-6,
        ),
    ]
    body = {
        "k": k,
        "n_values": n_values,
        "tolerance": sig(tol),
        "ratio_min": sig(ratio_min),
        "residuals": [sig(r) for r in residuals],
        "ratios": [sig(r) for r in ratios],
        "grade0_gap": sig(last_report.residual_grade0),
    }
    return body, passed, files


def _check_split(cfg: Dict, out: Path) -> Tuple[Dict, bool, List[str]]:
    n = int(cfg.get("n", 64))
    k_sub = int(cfg.get("k_sub", 1))
    k_quot = int(cfg.get("k_quot", -1))
    tol = float(cfg.get("tolerance", 1e-8))
    grid = ChartGrid(n)
    datum = split_datum(fubini_study_line(grid, k_sub), fubini_study_line(grid, k_quot))
    result = bott_chern_numeric(datum)
    max0 = result.grade0.max_on_interior()
    max1 = result.grade1.max_on_interior()
    passed = max0 < tol and max1 < tol
    extent = [-grid.half_width, grid.half_width] * 2
    files = [
        _write_csv(
            out / "split.csv",
            ("quantity", "value"),
            [("max_grade0", max0), ("max_grade1", max1)],
        ),
        figures.heatmap(
            out / "split_grade1.png",
            result.grade1.data["z"],
            f"Secondary class of a split sequence (n={n})",
            extent=extent,
            log_scale=True,
        ),
    ]
    body = {
        "n": n,
        "k_sub": k_sub,
        "k_quot": k_quot,
        "tolerance": sig(tol),
        "max_grade0": sig(max0),
        "max_grade1": sig(max1),
    }
    return body, passed, files


def _check_cutoff_independence(cfg: Dict, out: Path) -> Tuple[Dict, bool, List[str]]:
    n = int(cfg.get("n", 64))
    k = int(cfg.get("k", 1))
    tol = float(cfg.get("tolerance", 1e-3))
    wz, ww = _weight_pair(cfg)
    grid = ChartGrid(n)
    datum = metric_change_datum(grid, k, wz, ww)
    res_a = bott_chern_numeric(datum, cutoff=PLATEAU)
    res_b = bott_chern_numeric(datum, cutoff=EXP_CLAMP)
    ddc_gap = (ddc(res_a.grade0) - ddc(res_b.grade0)).max_on_interior()
    grade0_gap = (res_a.grade0 - res_b.grade0).max_on_interior()
    int_grade1_a = integrate_p1(res_a.grade1)
    int_grade1_b = integrate_p1(res_b.grade1)
    passed = ddc_gap < tol
    diff = ddc(res_a.grade0) - ddc(res_b.grade0)
    extent = [-grid.half_width, grid.half_width] * 2
    files = [
        _write_csv(
            out / "cutoff_independence.csv",
            ("quantity", "value"),
            [
                ("ddc_gap", ddc_gap),
                ("grade0_gap", grade0_gap),
                ("integral_grade1_plateau", int_grade1_a),
                ("integral_grade1_exp_clamp", int_grade1_b),
            ],
        ),
        figures.heatmap(
            out / "cutoff_gap.png",
            diff.data["z"],
            f"dd^c image difference between cutoffs (n={n})",
            extent=extent,
            log_scale=True,
        ),
    ]
    body = {
        "n": n,
        "k": k,
        "tolerance": sig(tol),
        "cutoffs": [res_a.cutoff_name, res_b.cutoff_name],
        "ddc_gap": sig(ddc_gap),
        "grade0_gap": sig(grade0_gap),
        "integral_grade1": [sig(int_grade1_a), sig(int_grade1_b)],
        "integral_grade1_gap": sig(abs(int_grade1_a - int_grade1_b)),
    }
    return body, passed, files


def _check_log_weight(cfg: Dict, out: Path) -> Tuple[Dict, bool, List[str]]:
    tol = float(cfg.get("tolerance", 1e-6))

    def fs_density(z: np.ndarray) -> np.ndarray:
        return 1.0 / (np.pi * (1.0 + (z * np.conj(z)).real) ** 2)

    plain = integrate_log_weight(fs_density, weight="plain")
    section = integrate_log_weight(fs_density, weight="section0")

    def bump_ddc_density(z: np.ndarray) -> np.ndarray:
        # dd^c of g = 1/(1+|u|^2), whose pairing with log|u|^2 must give
        # g(0) - g(infinity) = 1
        x = (z * np.conj(z)).real
        return (x - 1.0) / (np.pi * (1.0 + x) ** 3)

    delta_pairing = integrate_log_weight(bump_ddc_density, weight="plain")

    rows = [
        ("plain_fubini_study", plain, 0.0),
        ("section_norm_fubini_study", section, -1.0),
        ("delta_pairing", delta_pairing, 1.0),
    ]
    errors = [abs(v - e) for _, v, e in rows]
    passed = all(err < tol for err in errors)
    files = [
        _write_csv(
            out / "log_weight.csv",
            ("quantity", "value", "expected", "error"),
            [(name, v, e, abs(v - e)) for name, v, e in rows],
        ),
        figures.error_bars(
            out / "log_weight.png",
            [name for name, _, _ in rows],
            errors,
            "Logarithmic weight integrals",
            tolerance=tol,
        ),
    ]
    body = {
        "tolerance": sig(tol),
        "results": [
            {"quantity": name, "value": sig(v), "expected": sig(e), "error": sig(abs(v - e))}
            for name, v, e in rows
        ],
    }
    return body, passed, files


def _check_product(cfg: Dict, out: Path) -> Tuple[Dict, bool, List[str]]:
    n_values = [int(v) for v in cfg.get("n_values", [14, 22])]
    order = int(cfg.get("fd_order", 2))
    contraction_min = float(cfg.get("contraction_min", 1.5))
    dominance_min = float(cfg.get("dominance_min", 50.0))
    reports = [
        product_identity_residuals(generic_product_metric, n=n, order=order)
        for n in n_values
    ]
    rows = [
        (r.n, r.spacing, r.closedness, r.bianchi_commutator, r.bianchi_one_sided)
        for r in reports
    ]
    closed_ratios = [
        rows[i - 1][2] / rows[i][2] if rows[i][2] > 0 else float("inf")
        for i in range(1, len(rows))
    ]
    bianchi_ratios = [
        rows[i - 1][3] / rows[i][3] if rows[i][3] > 0 else float("inf")
        for i in range(1, len(rows))
    ]
    final = reports[-1]
    dominance = (
        final.bianchi_one_sided / final.bianchi_commutator
        if final.bianchi_commutator > 0
        else float("inf")
    )
    passed = (
        all(r >= contraction_min for r in closed_ratios)
        and all(r >= contraction_min for r in bianchi_ratios)
        and dominance >= dominance_min
    )
    files = [
        _write_csv(
            out / "product_identities.csv",
            ("n", "spacing", "closedness", "bianchi_commutator", "bianchi_one_sided"),
            rows,
        ),
        figures.convergence_plot(
            out / "product_identities.png",
            [r.spacing for r in reports],
            [r.bianchi_commutator for r in reports],
            "grid spacing",
            "commutator-form residual",
            "Differential identity residual under refinement",
            reference_slope=2,
        ),
    ]
    body = {
        "n_values": n_values,
        "fd_order": order,
        "rows": [
            {
                "n": nn,
                "spacing": sig(s),
                "closedness": sig(c),
                "bianchi_commutator": sig(bc),
                "bianchi_one_sided": sig(bo),
            }
            for nn, s, c, bc, bo in rows
        ],
        "closedness_ratios": [sig(r) for r in closed_ratios],
        "bianchi_ratios": [sig(r) for r in bianchi_ratios],
        "one_sided_over_commutator": sig(dominance),
        "contraction_min": sig(contraction_min),
        "dominance_min": sig(dominance_min),
    }
    return body, passed, files


_NUMERIC_CHECKS = {
    "degree": _check_degree,
    "two-path": _check_two_path,
    "downstairs": _check_downstairs,
    "split": _check_split,
    "cutoff-independence": _check_cutoff_independence,
    "log-weight": _check_log_weight,
    "product-identities": _check_product,
}


def _run_numeric(cfg: Dict, out: Path) -> Tuple[Dict, bool, List[str]]:
    check = cfg.get("check")
    handler = _NUMERIC_CHECKS.get(check)
    if handler is None:
        known = ", ".join(sorted(_NUMERIC_CHECKS))
        raise ScenarioError(f"unknown numeric check {check!r} (known: {known})")
    body, passed, files = handler(cfg, out)
    body["check"] = check
    return body, passed, files


_MODES = {
    "symbolic": _run_symbolic,
    "hrr": _run_hrr,
    "tower-check": _run_tower,
    "err-transfer": _run_err_transfer,
    "solve-r": _run_solve_r,
    "numeric": _run_numeric,
}


def run_scenario(
    source: Union[str, Path, Dict], out_dir: Optional[Union[str, Path]] = None
) -> ScenarioResult:
    """Execute a scenario (path or parsed dict) and write its report."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        try:
            cfg = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: invalid JSON: {exc}") from exc
        default_name = path.stem
    else:
        cfg = dict(source)
        default_name = "scenario"
    if not isinstance(cfg, dict):
        raise ScenarioError("a scenario must be a JSON object")
    name = str(cfg.get("name", default_name))
    mode = cfg.get("mode")
    runner = _MODES.get(mode)
    if runner is None:
        known = ", ".join(sorted(_MODES))
        raise ScenarioError(f"unknown scenario mode {mode!r} (known: {known})")
    out = Path(out_dir) if out_dir is not None else Path("reports") / name
    out.mkdir(parents=True, exist_ok=True)
    body, passed, files = runner(cfg, out)
    report: Dict[str, object] = {
        "name": name,
        "mode": mode,
        "passed": passed,
        "files": sorted(files),
    }
    for key, value in body.items():
        if key in report:
            raise ScenarioError(f"reserved report key {key!r}")
        report[key] = value
    (out / "report.json").write_text(render_report(report))
    return ScenarioResult(name, mode, passed, report, out, sorted(files))

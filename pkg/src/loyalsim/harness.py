"""Experiment harness: declarative sweeps, deterministic CSV emission.

An experiment is a JSON document with a ``schema_version``, a ``scenario``
name and a parameter map; scalar parameters are plain numbers and swept
parameters are ``{"from": a, "to": b, "step": h}`` ranges.  Each scenario
has defaults matching the case study (gamma = 0.832; q = 12 for the
monopoly scenarios; p_a = 10, beta = 1 and utility base scale 10 for the
competition scenarios) so a minimal spec reproduces the published figures.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__, markets
from .duopoly import (
    DuopolyMarket,
    critical_k,
    optimal_llp_duopoly,
    optimal_signup,
)
from .monopoly import optimal_llp
from .mtlp import build_hb, mtlp_revenue, oversubsidy_gap, revenue_upper_bound
from .utilities import ScaledLog

__all__ = ["ExperimentSpec", "ResultTable", "CheckReport", "run", "emit_csv", "check"]

SCHEMA_VERSION = 1

SCENARIOS = (
    "fig3",
    "fig4",
    "fig5",
    "fig6",
    "fig7",
    "fig8",
    "monopoly_sweep",
    "duopoly_sweep",
    "critical_k",
)


# --------------------------------------------------------------------------
# Spec parsing and validation
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentSpec:
    scenario: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    output: Optional[str] = None
    raw: Dict[str, Any] = field(default_factory=dict)

    @staticmethod
    def from_dict(doc: Dict[str, Any]) -> "ExperimentSpec":
        errors = ExperimentSpec.validate_dict(doc)
        if errors:
            raise ValueError("; ".join(errors))
        return ExperimentSpec(
            scenario=str(doc["scenario"]).lower(),
            parameters=dict(doc.get("parameters", {})),
            output=doc.get("output"),
            raw=doc,
        )

    @staticmethod
    def validate_dict(doc: Dict[str, Any]) -> List[str]:
        errors: List[str] = []
        if not isinstance(doc, dict):
            return ["spec: not a JSON object"]
        if doc.get("schema_version") != SCHEMA_VERSION:
            errors.append(f"schema_version: expected {SCHEMA_VERSION}")
        scenario = str(doc.get("scenario", "")).lower()
        if scenario not in SCENARIOS:
            errors.append(f"scenario: unknown '{doc.get('scenario')}'")
        params = doc.get("parameters", {})
        if not isinstance(params, dict):
            errors.append("parameters: must be an object")
            return errors
        for name, val in params.items():
            if isinstance(val, (int, float)) and not isinstance(val, bool):
                continue
            if isinstance(val, dict):
                missing = {"from", "to", "step"} - set(val)
                if missing:
                    errors.append(f"parameters.{name}: range missing {sorted(missing)}")
                    continue
                try:
                    if _expand_range(val) == []:
                        errors.append(f"parameters.{name}: empty range")
                except (TypeError, ValueError) as exc:
                    errors.append(f"parameters.{name}: {exc}")
                continue
            if isinstance(val, str):
                continue
            errors.append(f"parameters.{name}: expected number, string or range object")
        return errors


def _expand_range(r: Dict[str, Any]) -> List[float]:
    lo, hi, step = float(r["from"]), float(r["to"]), float(r["step"])
    if step <= 0:
        raise ValueError("step must be positive")
    if hi < lo:
        return []
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [lo + i * step for i in range(n + 1)]


def _values(spec: ExperimentSpec, name: str, default: Any) -> List[float]:
    val = spec.parameters.get(name, default)
    if isinstance(val, dict):
        return _expand_range(val)
    if isinstance(val, list):
        return [float(v) for v in val]
    return [float(val)]


def _scalar(spec: ExperimentSpec, name: str, default: Any) -> float:
    val = spec.parameters.get(name, default)
    if isinstance(val, dict):
        raise ValueError(f"parameter '{name}' must be a scalar for this scenario")
    return float(val)


# --------------------------------------------------------------------------
# Results
# --------------------------------------------------------------------------

@dataclass
class ResultTable:
    scenario: str
    columns: Tuple[str, ...]
    rows: List[Tuple[Any, ...]]
    summary: Dict[str, float] = field(default_factory=dict)
    provenance: Dict[str, str] = field(default_factory=dict)


def _pmap(fn: Callable, items: Sequence[Any], jobs: int) -> List[Any]:
    """Order-preserving map, optionally threaded (results are deterministic)."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# Scenario runners
# --------------------------------------------------------------------------

def _competition_market(k: float, p_a: float, ratio: float, beta: float,
                        gamma: float, base_scale: float) -> DuopolyMarket:
    o1, o2 = markets.two_class_market(k, gamma=gamma, base_scale=base_scale)
    return DuopolyMarket(o1, o2, p_a, p_a * ratio, beta)


def _run_fig3(spec: ExperimentSpec, jobs: int) -> ResultTable:
    gamma = _scalar(spec, "gamma", markets.GAMMA)
    q = _scalar(spec, "q", 12.0)
    ps = _values(spec, "p", {"from": 0.0, "to": 6.0, "step": 0.25})
    u = ScaledLog(1.0, gamma)

    def row(p: float):
        plan = optimal_llp(u, p, q)
        return (p, plan.bonus, plan.threshold, plan.revenue)

    return ResultTable("fig3", ("p", "B", "t", "revenue"), _pmap(row, ps, jobs))


def _run_fig4(spec: ExperimentSpec, jobs: int) -> ResultTable:
    gamma = _scalar(spec, "gamma", markets.GAMMA)
    q = _scalar(spec, "q", 12.0)
    ns = [int(n) for n in _values(spec, "n", {"from": 1, "to": 20, "step": 1})]

    def row(n: int):
        owners = markets.ladder_market(n, gamma)
        hb = build_hb(owners, q)
        out = mtlp_revenue(owners, hb.schedule, q)
        upper = revenue_upper_bound(owners, q, out.sharing)
        gap = oversubsidy_gap(owners, hb.schedule, q)
        cost = out.total_subsidy - gap
        return (n, out.revenue, upper, out.total_subsidy, cost, gap)

    cols = ("n", "r_hb", "r_upper", "subsidy", "opportunity_cost", "gap")
    return ResultTable("fig4", cols, _pmap(row, ns, jobs))


def _signup_target(m: DuopolyMarket) -> Tuple[str, float, float]:
    plan = optimal_signup(m)
    return plan.target, plan.bonus, plan.revenue


def _run_fig5(spec: ExperimentSpec, jobs: int) -> ResultTable:
    gamma = _scalar(spec, "gamma", markets.GAMMA)
    base_scale = _scalar(spec, "base_scale", markets.BASE_SCALE)
    k = _scalar(spec, "k", 6.0)
    p_a = _scalar(spec, "p_a", 10.0)
    beta = _scalar(spec, "beta", 1.0)
    ratios = _values(spec, "ratio", {"from": 1.0, "to": 1.95, "step": 0.05})

    def at(ratio: float):
        return _signup_target(_competition_market(k, p_a, ratio, beta, gamma, base_scale))

    rows = []
    for ratio, (target, bonus, revenue) in zip(ratios, _pmap(at, ratios, jobs)):
        rows.append((ratio, bonus, target, revenue))

    summary: Dict[str, float] = {}
    order = {"both": 0, "owner1": 1, "none": 2}

    def regime(ratio: float) -> int:
        return order[at(ratio)[0]]

    targets = [order[t] for (_, _, t, _) in rows]
    for lo_i in range(len(ratios) - 1):
        if targets[lo_i + 1] > targets[lo_i]:
            lo, hi = ratios[lo_i], ratios[lo_i + 1]
            lower_regime = targets[lo_i]
            while hi - lo > 1e-4:
                mid = 0.5 * (lo + hi)
                if regime(mid) <= lower_regime:
                    lo = mid
                else:
                    hi = mid
            key = {
                (0, 1): "switch_both_owner1",
                (1, 2): "switch_owner1_none",
                (0, 2): "switch_both_none",
            }[(lower_regime, targets[lo_i + 1])]
            summary[key] = 0.5 * (lo + hi)
    return ResultTable("fig5", ("ratio", "B_a", "target", "R_a"), rows, summary)


def _run_fig6(spec: ExperimentSpec, jobs: int) -> ResultTable:
    gamma = _scalar(spec, "gamma", markets.GAMMA)
    base_scale = _scalar(spec, "base_scale", markets.BASE_SCALE)
    p_a = _scalar(spec, "p_a", 10.0)
    p_b = _scalar(spec, "p_b", 11.0)
    beta = _scalar(spec, "beta", 1.0)
    ks = _values(spec, "k", {"from": 2.0, "to": 12.0, "step": 0.5})

    def row(k: float):
        m = _competition_market(k, p_a, p_b / p_a, beta, gamma, base_scale)
        plan = optimal_llp_duopoly(m)
        return (k, plan.bonus, plan.threshold, plan.target, plan.revenue)

    rows = _pmap(row, ks, jobs)
    kc = critical_k(p_a, p_b, beta, "llp", (1.05, max(ks)), gamma, base_scale)
    return ResultTable("fig6", ("k", "B_a", "t_a", "target", "R_a"), rows,
                       {"k_critical": kc})


def _run_fig7(spec: ExperimentSpec, jobs: int) -> ResultTable:
    gamma = _scalar(spec, "gamma", markets.GAMMA)
    base_scale = _scalar(spec, "base_scale", markets.BASE_SCALE)
    k = _scalar(spec, "k", 6.0)
    p_a = _scalar(spec, "p_a", 10.0)
    beta = _scalar(spec, "beta", 1.0)
    ratios = _values(spec, "ratio", {"from": 1.0, "to": 1.8, "step": 0.05})

    def row(ratio: float):
        m = _competition_market(k, p_a, ratio, beta, gamma, base_scale)
        return (ratio, optimal_llp_duopoly(m).revenue, optimal_signup(m).revenue)

    rows = _pmap(row, ratios, jobs)
    margin = min(r_llp - r_su for (_, r_llp, r_su) in rows)
    return ResultTable("fig7", ("ratio", "r_llp", "r_signup"), rows,
                       {"min_margin": margin})


def _run_fig8(spec: ExperimentSpec, jobs: int) -> ResultTable:
    gamma = _scalar(spec, "gamma", markets.GAMMA)
    base_scale = _scalar(spec, "base_scale", markets.BASE_SCALE)
    p_a = _scalar(spec, "p_a", 10.0)
    beta = _scalar(spec, "beta", 1.0)
    k_lo = _scalar(spec, "k_min", 1.05)
    k_hi = _scalar(spec, "k_max", 1000.0)
    ratios = _values(spec, "ratio", {"from": 1.35, "to": 1.9, "step": 0.05})

    def row(ratio: float):
        p_b = p_a * ratio
        k_su = critical_k(p_a, p_b, beta, "signup", (k_lo, k_hi), gamma, base_scale)
        k_lp = critical_k(p_a, p_b, beta, "llp", (k_lo, k_hi), gamma, base_scale)
        return (ratio, k_su, k_lp)

    return ResultTable("fig8", ("ratio", "k_signup", "k_llp"), _pmap(row, ratios, jobs))


def _run_monopoly_sweep(spec: ExperimentSpec, jobs: int) -> ResultTable:
    gamma = _scalar(spec, "gamma", markets.GAMMA)
    qs = _values(spec, "q", 12.0)
    ps = _values(spec, "p", {"from": 0.0, "to": 6.0, "step": 1.0})
    u = ScaledLog(1.0, gamma)
    combos = [(p, q) for p in ps for q in qs if q >= p]

    def row(pq):
        p, q = pq
        plan = optimal_llp(u, p, q)
        return (p, q, plan.bonus, plan.threshold, plan.revenue)

    return ResultTable("monopoly_sweep", ("p", "q", "B", "t", "revenue"),
                       _pmap(row, combos, jobs))


def _run_duopoly_sweep(spec: ExperimentSpec, jobs: int) -> ResultTable:
    gamma = _scalar(spec, "gamma", markets.GAMMA)
    base_scale = _scalar(spec, "base_scale", markets.BASE_SCALE)
    p_a = _scalar(spec, "p_a", 10.0)
    beta = _scalar(spec, "beta", 1.0)
    ks = _values(spec, "k", {"from": 2.0, "to": 10.0, "step": 2.0})
    ratios = _values(spec, "ratio", {"from": 1.1, "to": 1.7, "step": 0.2})
    combos = [(k, r) for k in ks for r in ratios]

    def row(kr):
        k, ratio = kr
        m = _competition_market(k, p_a, ratio, beta, gamma, base_scale)
        lp = optimal_llp_duopoly(m)
        su = optimal_signup(m)
        return (k, ratio, lp.bonus, lp.threshold, lp.target, lp.revenue,
                su.bonus, su.target, su.revenue)

    cols = ("k", "ratio", "llp_B", "llp_t", "llp_target", "llp_R",
            "signup_B", "signup_target", "signup_R")
    return ResultTable("duopoly_sweep", cols, _pmap(row, combos, jobs))


def _run_critical_k(spec: ExperimentSpec, jobs: int) -> ResultTable:
    gamma = _scalar(spec, "gamma", markets.GAMMA)
    base_scale = _scalar(spec, "base_scale", markets.BASE_SCALE)
    program = str(spec.parameters.get("program", "llp")).lower()
    p_a = _scalar(spec, "p_a", 10.0)
    if "p_b" in spec.parameters:
        p_b = _scalar(spec, "p_b", None)
    else:
        p_b = p_a * _scalar(spec, "ratio", 1.1)
    beta = _scalar(spec, "beta", 1.0)
    k_lo = _scalar(spec, "k_min", 1.05)
    k_hi = _scalar(spec, "k_max", 1000.0)
    kc = critical_k(p_a, p_b, beta, program, (k_lo, k_hi), gamma, base_scale)
    cols = ("program", "p_a", "p_b", "beta", "k_min", "k_max", "k_critical")
    return ResultTable("critical_k", cols, [(program, p_a, p_b, beta, k_lo, k_hi, kc)],
                       {"k_critical": kc})


_RUNNERS = {
    "fig3": _run_fig3,
    "fig4": _run_fig4,
    "fig5": _run_fig5,
    "fig6": _run_fig6,
    "fig7": _run_fig7,
    "fig8": _run_fig8,
    "monopoly_sweep": _run_monopoly_sweep,
    "duopoly_sweep": _run_duopoly_sweep,
    "critical_k": _run_critical_k,
}


def run(spec: ExperimentSpec, jobs: int = 1) -> ResultTable:
    table = _RUNNERS[spec.scenario](spec, jobs)
    canonical = json.dumps(spec.raw, sort_keys=True, separators=(",", ":"))
    table.provenance = {
        "schema_version": str(SCHEMA_VERSION),
        "scenario": spec.scenario,
        "spec_sha256": hashlib.sha256(canonical.encode()).hexdigest()[:12],
        "loyalsim": __version__,
    }
    return table


# --------------------------------------------------------------------------
# Emission and checking
# --------------------------------------------------------------------------

def _fmt(value: Any) -> str:
    if isinstance(value, str):
        return value
    v = float(value)
    if math.isinf(v):
        return "inf"
    return f"{v:.12g}"


def emit_csv(table: ResultTable, path: str) -> None:
    """UTF-8 CSV: header, 12-significant-digit values, provenance footer."""
    lines = [",".join(table.columns)]
    lines += [",".join(_fmt(v) for v in row) for row in table.rows]
    prov = " ".join(f"{k}={v}" for k, v in sorted(table.provenance.items()))
    lines.append(f"# {prov}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


@dataclass
class CheckReport:
    lines: List[str]
    passed: bool
    missing: bool = False


def check(spec: ExperimentSpec, expectations: Dict[str, Any],
          jobs: int = 1, tolerance_scale: float = 1.0) -> CheckReport:
    """Run the scenario and compare named scalars against expectations.

    Each assertion names a measured quantity — a summary key, or a column
    value selected by a ``where`` clause on the swept parameters — and
    states either ``value`` with ``tolerance``, or a ``min``/``max`` bound.
    """
    table = run(spec, jobs=jobs)
    lines: List[str] = []
    ok_all, missing = True, False

    for assertion in expectations.get("assertions", []):
        name = assertion.get("name", "<unnamed>")
        measured = _resolve(table, assertion)
        if measured is None:
            lines.append(f"FAIL {name}: quantity not found in results")
            ok_all, missing = False, True
            continue
        if "value" in assertion:
            tol = float(assertion.get("tolerance", 0.0)) * tolerance_scale
            ok = abs(measured - float(assertion["value"])) <= tol
            desc = f"expected={assertion['value']}±{tol:g}"
        elif "min" in assertion:
            ok = measured >= float(assertion["min"])
            desc = f"expected>={assertion['min']}"
        elif "max" in assertion:
            ok = measured <= float(assertion["max"])
            desc = f"expected<={assertion['max']}"
        else:
            lines.append(f"FAIL {name}: assertion lacks value/min/max")
            ok_all = False
            continue
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}: measured={measured:.6g} {desc}")
        ok_all = ok_all and ok
    return CheckReport(lines, ok_all, missing)


def _resolve(table: ResultTable, assertion: Dict[str, Any]) -> Optional[float]:
    name = assertion.get("name")
    if name in table.summary:
        return float(table.summary[name])
    column = assertion.get("column", name)
    if column not in table.columns:
        return None
    j = table.columns.index(column)
    where = assertion.get("where", {})
    for row in table.rows:
        hit = all(
            key in table.columns
            and abs(float(row[table.columns.index(key)]) - float(val)) <= 1e-9
            for key, val in where.items()
        )
        if hit:
            value = row[j]
            return None if isinstance(value, str) else float(value)
    return None

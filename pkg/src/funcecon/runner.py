"""Scenario execution: one runner per section, each yielding CSV tables."""
from __future__ import annotations

import csv
import io
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import behavior as bh
from . import bid_engine as bid
from . import dynamics as dyn
from . import industrialization as ind
from .birkhoff import PermutationMatrix, birkhoff_decompose, validate_bistochastic
from .exchange import (
    ExchangeSpec,
    FrameReference,
    demand_capital,
    global_capital,
    growth_report,
    inflation_diagnostic,
    supply_capital,
)
from .scenario import IoError, Scenario, ValidationError
from .valuation import (
    Capacity,
    OrgStructure,
    ValueParams,
    additivity_check,
    org_capacity,
    profitability_complexity,
    project_value,
)

__all__ = ["Table", "SectionResult", "RunReport", "run_scenario", "format_value", "table_to_csv"]


@dataclass
class Table:
    filename: str
    header: tuple
    rows: list


@dataclass
class SectionResult:
    tables: list = field(default_factory=list)
    warnings: list = field(default_factory=list)


@dataclass
class RunReport:
    scenario: str
    status: dict  # section -> "ok" or "error: ..."
    files: list  # (section, path) sorted by section then filename
    duration: float
    warnings: list

    @property
    def ok(self) -> bool:
        return all(s == "ok" for s in self.status.values())

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def render(self) -> str:
        lines = [f"scenario: {self.scenario}"]
        for section, status in self.status.items():
            lines.append(f"  [{section}] {status}")
        lines.append("files:")
        lines.extend(f"  {section}: {path}" for section, path in self.files)
        if self.warnings:
            lines.append("warnings:")
            lines.extend(f"  {w}" for w in self.warnings)
        lines.append(f"duration: {self.duration:.3f} s")
        return "\n".join(lines)


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (tuple, list)):
        return " ".join(format_value(x) for x in v)
    return str(v)


def table_to_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------- exchange

def _frame(d: dict, side: str) -> FrameReference:
    keys = ("rho_O", "m_O", "c_O", "K_O", "M_O")
    unknown = set(d) - set(keys)
    if unknown:
        raise ValidationError("known-keys", f"unknown frame keys {sorted(unknown)}")
    return FrameReference(side=side, **{k: float(v) for k, v in d.items()})


def _run_exchange(body: dict) -> SectionResult:
    specs = {}
    rows = []
    for k, item in enumerate(body["specs"]):
        name = str(item.get("name", f"spec{k}"))
        if name in specs:
            raise ValidationError("unique-names", f"exchange spec name {name!r} repeated")
        spec = ExchangeSpec(
            supply=_frame(item["supply"], "supply"),
            demand=_frame(item["demand"], "demand"),
            rho_star=float(item["rho_star"]),
            c=float(item["c"]),
            M=float(item.get("M", 1.0)),
        )
        specs[name] = spec
        g = growth_report(spec)
        rows.append((
            name, g.delta_K, g.r, g.threshold, g.grows, g.regime.value,
            supply_capital(spec.supply, spec.rho_star, spec.c),
            demand_capital(spec.demand, spec.rho_star, spec.c),
            global_capital(spec),
        ))
    tables = [Table(
        "exchange_growth.csv",
        ("spec", "delta_K", "r", "threshold", "grows", "regime",
         "supply_capital", "demand_capital", "global_capital"),
        rows,
    )]
    diag = []
    for item in body.get("diagnostics", []):
        before, after = str(item["before"]), str(item["after"])
        for n in (before, after):
            if n not in specs:
                raise ValidationError("known-spec", f"diagnostic refers to unknown spec {n!r}")
        diag.append((before, after, inflation_diagnostic(specs[before], specs[after]).value))
    if diag:
        tables.append(Table("exchange_inflation.csv", ("before", "after", "pressure"), diag))
    return SectionResult(tables)


# --------------------------------------------------------------- valuation

def _capacity(d: dict) -> Capacity:
    if "power" in d:
        return Capacity.power(int(d["power"]["n"]), float(d["power"]["exponent"]))
    if "additive" in d:
        return Capacity.additive([float(p) for p in d["additive"]])
    if "table" in d:
        return Capacity.from_table(int(d["n"]), {tuple(ev): float(w) for ev, w in d["table"]})
    raise ValidationError("capacity-kind", "capacity needs one of power, additive, table")


def _run_valuation(body: dict) -> SectionResult:
    cap = _capacity(body["capacity"])
    rows = [("n_states", cap.n)]
    if "departments" in body:
        org = OrgStructure(cap.n, body["departments"], body["function_events"])
        c_org = org_capacity(org, cap)
        rows += [("org_capacity", c_org), ("additivity", additivity_check(org, cap).value)]
        if "c_tech" in body:
            rows.append(("profitability_complexity", profitability_complexity(c_org, body["c_tech"])))
    if "value" in body:
        params = ValueParams(**{k: float(v) for k, v in body["value"].items()})
        for k, outcomes in enumerate(body.get("projects", [])):
            rows.append((f"project_value[{k}]", project_value(outcomes, params)))
    return SectionResult([Table("valuation.csv", ("quantity", "value"), rows)])


# --------------------------------------------------------------------- bid

def _perm_text(p: PermutationMatrix) -> str:
    return " ".join(str(j) for j in p.mapping)


def _run_bid(body: dict) -> SectionResult:
    E = bid.DiagOperator.cost(body["E"])
    I = bid.DiagOperator.information(body["I"])
    M = np.asarray(body["matrix"], dtype=float)
    if M.shape != (len(E), len(E)) or len(I) != len(E):
        raise ValidationError("consistent-dimensions", "matrix, E and I orders differ")
    decomp = bid.decompose_expectations(M)
    report = bid.selection_report(decomp, E, I, body.get("bounds"))
    warnings = []
    if report.pathology:
        warnings.append(f"bid: pathology W+ = {report.W_plus:.6g} < W- = {report.W_minus:.6g}")
    rows = [
        (r["beta"], r["weight"], r["budget"], r["b_minus"], r["b_plus"], r["class"], _perm_text(p))
        for r, (_, p) in zip(report.rows(), decomp)
    ]
    lo, hi = bid.budget_bounds(E, I)
    summary = [
        ("W_plus", report.W_plus), ("W_minus", report.W_minus), ("W_mean", report.W_mean),
        ("pathology", report.pathology), ("rearrangement_min", lo), ("rearrangement_max", hi),
        ("terms", len(decomp)),
    ]
    if "I_theta" in body and "E_p" in body:
        rom = bid.rom_bounds(E, I, float(body["I_theta"]), float(body["E_p"]), M)
        summary += [("rom_min", rom[0]), ("rom_max", rom[1])]
    return SectionResult([
        Table("bid_selection.csv",
              ("beta", "weight", "budget", "b_minus", "b_plus", "class", "permutation"), rows),
        Table("bid_summary.csv", ("quantity", "value"), summary),
    ], warnings)


# ------------------------------------------------------- industrialization

def _events_for(schedule, i: int) -> list:
    """``(time, k)`` events of function ``i`` from ``[time, i, k]`` entries."""
    out = []
    for entry in schedule:
        if len(entry) != 3:
            raise ValidationError("schedule-entry", f"obsolescence entry {entry!r} is not [time, i, k]")
        when, ii, k = entry
        if int(ii) == i:
            out.append((float(when), int(k)))
    return out


def _run_industrialization(body: dict) -> SectionResult:
    pattern = ind.BlockPattern(PermutationMatrix(tuple(body["base"])), tuple(body["block_orders"]))
    blocks = body["blocks"]
    if isinstance(blocks, list):
        blocks = dict(enumerate(blocks))
    else:
        blocks = {int(k): v for k, v in blocks.items()}
    B = ind.block_expand(pattern, blocks)
    decomp = ind.block_birkhoff(B)

    if "splits" in body:
        splits = ind.SplitOperators(body["splits"]["E"], body["splits"]["I"])
    else:
        splits = ind.uniform_split(body["E"], body["I"], pattern)
    splits.check(pattern, body["E"], body["I"])

    schedule = body.get("obsolescence", [])
    t = float(body.get("time", 0.0))
    block_rows = []
    for beta, (w, p) in enumerate(decomp):
        for i in range(pattern.m_F):
            pi = ind.restrict(p, pattern, i)
            l = pattern.base.mapping[i]
            e_split = ind.apply_sign_schedule(splits.E_split[i], _events_for(schedule, i), t)
            block_rows.append((beta, w, i, l, _perm_text(pi), ind.block_budget(e_split, splits.I_split[l], pi)))
    tables = [Table("industrialization_blocks.csv",
                    ("beta", "weight", "i", "j", "block_permutation", "block_budget"), block_rows)]

    warnings = []
    candidates = body.get("candidates", [])
    if candidates:
        ext_rows = []
        grouped = {}
        for k, cand in enumerate(candidates):
            beta = int(cand.get("beta", k))
            e_row = cand["E"]
            if "i" in cand:
                e_row = ind.apply_sign_schedule(e_row, _events_for(schedule, int(cand["i"])), t)
            rep = ind.externality_metric(e_row, cand["I"], cand["T"])
            ext_rows.append((beta, cand.get("i", ""), cand.get("j", ""), rep.H,
                             rep.classification.value, rep.n_negative))
            grouped.setdefault(int(cand.get("group", 0)), {})[beta] = (e_row, cand["I"], cand["T"])
        tables.append(Table("externality.csv",
                            ("beta", "i", "j", "H", "class", "negative_terms"), ext_rows))
        adv_rows = []
        for group in sorted(grouped):
            res = ind.comparative_advantage(grouped[group])
            adv_rows.append((group, res.chosen, res.H[res.chosen], res.unique, res.tied))
            if not res.unique:
                warnings.append(f"industrialization: comparative advantage tie in group {group}: {list(res.tied)}")
        tables.append(Table("comparative_advantage.csv",
                            ("group", "chosen", "H", "unique", "tied"), adv_rows))
    return SectionResult(tables, warnings)


# ---------------------------------------------------------------- dynamics

_SAFE_NAME = re.compile(r"[A-Za-z0-9_-]+")


def _grid(body: dict, kappa: float) -> np.ndarray:
    g = body.get("grid", {})
    start = float(g.get("start", 0.0))
    stop = float(g.get("stop", 5.0 * abs(kappa)))
    return np.linspace(start, stop, int(g.get("points", dyn.DEFAULT_GRID)))


def _solution(d: dict, side: str) -> dyn.DynamicsSolution:
    params = dyn.DynamicsParams(side, float(d["kappa"]), float(d["c"]), float(d["M"]))
    if "oscillatory" in d:
        osc = d["oscillatory"]
        return dyn.solve_oscillatory(params, float(osc["amplitude"]), float(osc.get("phase", 0.0)))
    return dyn.solve(params, d.get("amplitudes", (1.0, 1.0)), float(d.get("secular", 0.0)))


def _root_row(name, sol: dyn.DynamicsSolution):
    roots = dyn.characteristic_roots(sol.params)
    (gp, gm) = roots.roots
    return (name, sol.params.side.value, sol.params.kappa, sol.params.ratio, roots.regime.value,
            gp.real, gp.imag, gm.real, gm.imag)


def _run_dynamics(body: dict) -> SectionResult:
    tables, warnings, root_rows = [], [], []
    root_header = ("curve", "side", "kappa", "M_over_c", "regime",
                   "gamma_plus_re", "gamma_plus_im", "gamma_minus_re", "gamma_minus_im")
    if "canonical" in body:
        kappa = float(body.get("kappa", 1.0))
        kinds = [str(k) for k in body["canonical"]]
        grid = _grid(body, kappa)
        cols = [dyn.canonical(k, kappa)(grid) for k in kinds]
        rows = [(m, *(c[n] for c in cols)) for n, m in enumerate(grid)]
        tables.append(Table("dynamics_canonical.csv", ("m", *(f"rho_{k}" for k in kinds)), rows))
        for k in kinds:
            s, d = dyn.canonical_pair(k, kappa)
            root_rows += [_root_row(f"canonical_{k}", s), _root_row(f"canonical_{k}", d)]
    for k, curve in enumerate(body.get("curves", [])):
        name = str(curve.get("name", f"curve{k}"))
        if not _SAFE_NAME.fullmatch(name):
            raise ValidationError("safe-name", f"curve name {name!r} must use letters, digits, '_' or '-'")
        s = _solution(curve["supply"], "supply")
        d = _solution(curve["demand"], "demand")
        for sol in (s, d):
            if sol.outside_standard_cases:
                warnings.append(f"dynamics: {name} {sol.params.side.value} is in the repeated-root regime")
        if "outcome_sums" in curve:
            dyn.check_outcome_conservation(curve["outcome_sums"])
        grid = _grid(body, s.params.kappa)
        fit = dyn.perfect_fit_check(s, d, grid)
        rs, rd = s(grid), d(grid)
        flags = [fit.kind.value] * grid.size
        if fit.kind is dyn.FitKind.ZERO_PRICE_CROSSINGS:
            flags = [""] * grid.size
            # mark the grid interval [m_n, m_n+1) holding each crossing
            for n in np.searchsorted(grid, fit.crossings, side="right") - 1:
                flags[min(int(n), grid.size - 1)] = "zero crossing"
        rows = [(m, rs[n], rd[n], flags[n]) for n, m in enumerate(grid)]
        tables.append(Table(f"dynamics_curve_{name}.csv", ("m", "rho_supply", "rho_demand", "fit_flag"), rows))
        tables.append(Table(f"dynamics_fit_{name}.csv", ("fit", "max_deviation", "crossings"),
                            [(fit.kind.value, fit.max_deviation, list(fit.crossings))]))
        root_rows += [_root_row(name, s), _root_row(name, d)]
    tables.append(Table("dynamics_roots.csv", root_header, root_rows))
    return SectionResult(tables, warnings)


# ---------------------------------------------------------------- behavior

def _regime(d: dict) -> bh.WeightingRegime:
    label = str(d.get("label", "Custom")).lower()
    kappa = float(d.get("kappa", 1.0))
    if label == "weird":
        return bh.WeightingRegime.weird(kappa)
    if label == "poor":
        return bh.WeightingRegime.poor(kappa)
    if label == "custom":
        return bh.WeightingRegime.custom(float(d["gamma"]), kappa)
    raise ValidationError("regime-label", f"unknown regime label {d.get('label')!r}")


def _run_behavior(body: dict) -> SectionResult:
    p0s = [float(p) for p in body.get("p0", [0.05, 0.5, 0.95])]
    max_iter = int(body.get("max_iter", 10_000))
    tol = float(body.get("tol", 1e-9))
    traj_rows, summary_rows, warnings = [], [], []
    for r, spec in enumerate(body["regimes"]):
        regime = _regime(spec)
        name = str(spec.get("name", f"regime{r}"))
        counts = {v: 0 for v in bh.Verdict}
        for k, p0 in enumerate(p0s):
            res = bh.iterate(regime.gamma, p0, max_iter, tol)
            counts[res.verdict] += 1
            if res.anomaly:
                warnings.append(f"behavior: {name} p0={p0} oscillated (unexpected for a monotone map)")
            traj_rows += [(name, k, n, p) for n, p in enumerate(res.trajectory)]
        constraint = bh.bias_constraint(regime) if regime.label is not bh.Label.CUSTOM else ""
        summary_rows.append((name, regime.label.value, regime.gamma, regime.kappa, regime.fixed_point,
                             constraint, *(counts[v] for v in bh.Verdict)))
    tables = [
        Table("behavior_trajectories.csv", ("regime", "start", "n", "p_n"), traj_rows),
        Table("behavior_regimes.csv",
              ("regime", "label", "gamma", "kappa", "p_star", "M_over_c",
               *(v.name.lower() for v in bh.Verdict)), summary_rows),
    ]
    cycles = body.get("cycles", [])
    if cycles:
        rows = []
        for c in cycles:
            acc = bh.business_cycle(float(c["p0"]), float(c["gamma"]), float(c["outcome"]))
            rows.append((acc.p0, c["gamma"], acc.p_star, acc.outcome, acc.subjective_delta, acc.feeling.value))
        tables.append(Table("behavior_cycles.csv",
                            ("p0", "gamma", "p_star", "outcome", "subjective_delta", "feeling"), rows))
    return SectionResult(tables, warnings)


RUNNERS = {
    "behavior": _run_behavior,
    "bid": _run_bid,
    "dynamics": _run_dynamics,
    "exchange": _run_exchange,
    "industrialization": _run_industrialization,
    "valuation": _run_valuation,
}


def run_scenario(scenario: Scenario, out_dir) -> RunReport:
    """Run every present section and write its CSV files under ``out_dir``.

    Sections are independent: a failing one is recorded and the rest still run.
    """
    start = time.perf_counter()
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create output directory {out}: {exc}") from exc

    status, files, warnings = {}, [], []
    for section in scenario.section_names():
        try:
            result = RUNNERS[section](scenario.sections[section])
        except (KeyError, TypeError) as exc:
            status[section] = f"error: ValidationError: malformed section ({exc!r})"
            continue
        except Exception as exc:  # noqa: BLE001 - reported per section
            status[section] = f"error: {type(exc).__name__}: {exc}"
            continue
        for table in sorted(result.tables, key=lambda t: t.filename):
            path = out / table.filename
            try:
                path.write_text(table_to_csv(table), encoding="utf-8")
            except OSError as exc:
                raise IoError(f"cannot write {path}: {exc}") from exc
            files.append((section, str(path)))
        warnings.extend(result.warnings)
        status[section] = "ok"
    return RunReport(scenario.name, status, files, time.perf_counter() - start, warnings)


def decompose_file(path) -> Table:
    """Birkhoff decomposition of a matrix stored as CSV rows or YAML."""
    import yaml

    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {p}: {exc}") from exc
    if p.suffix.lower() in (".yaml", ".yml", ".json"):
        doc = yaml.safe_load(text)
        rows = doc["matrix"] if isinstance(doc, dict) else doc
    else:
        rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].lstrip().startswith("#")]
        try:
            rows = [[float(x) for x in r] for r in rows]
        except ValueError:
            rows = [[float(x) for x in r] for r in rows[1:]]  # header row
    decomp = birkhoff_decompose(validate_bistochastic(np.asarray(rows, dtype=float)))
    return Table("decomposition.csv", ("term", "weight", "permutation"),
                 [(k, w, _perm_text(p)) for k, (w, p) in enumerate(decomp)])

"""Scenario files, parameter sweeps and CSV/SVG emission.

A scenario is a JSON object with a `market` block (demand, production,
storage, rate, risk aversions, optional legacy hedge), a `model` block
(kind plus dynamics parameters and the horizon), an optional `sweep`
list of up to two axes, an optional `outputs` selection for charts and
an `include_no_forward` flag.  Unknown keys are rejected.  Example:

    {
      "market": {"mu": 200, "m": 1, "pi0": 100, "piT": 100,
                 "eps": 0.05, "R": 0.01, "gamma_p": 0.1, "gamma_s": 0.1},
      "model": {"kind": "brownian", "sigma1": 0.2, "sigma2": 10,
                "rho": 0.2, "mpr": 0.3, "horizon": 0.25},
      "sweep": [{"parameter": "rho", "start": -0.8, "stop": 0.8, "steps": 9}],
      "include_no_forward": false
    }

The CSV header is fixed:
axis1,axis2,alpha,h,F,P0,E_PT,premium,yield,price_change,alpha_nf,error
with round-trip decimal formatting and LF line endings.  Failed grid
points keep their row and report the failure in the error column.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import equilibrium, investor, oracle
from .errors import ConfigError, ForwardEqError
from .levy import LevyModel, brownian_model, jump_diffusion_model
from .market import MarketParams, hedge_ratio, quad_revenue, terminal_moments, terminal_price

__all__ = ["Scenario", "SweepAxis", "load_scenario", "run", "main"]

CSV_HEADER = [
    "axis1", "axis2", "alpha", "h", "F", "P0", "E_PT",
    "premium", "yield", "price_change", "alpha_nf", "error",
]

_MARKET_KEYS = {"mu", "m", "pi0", "piT", "eps", "R", "gamma_p", "gamma_s", "legacy_hedge"}
_MARKET_REQUIRED = _MARKET_KEYS - {"legacy_hedge"}
_MODEL_KEYS = {
    "brownian": {"kind", "sigma1", "sigma2", "rho", "mpr", "horizon"},
    "jump_diffusion": {
        "kind", "sigma1", "sigma2", "rho", "b1bar", "eta1", "eta2", "intensity", "horizon",
    },
}
_TOP_KEYS = {"market", "model", "sweep", "outputs", "include_no_forward"}
_SWEEPABLE = {
    "brownian": {"mu", "m", "pi0", "piT", "eps", "R", "gamma_p", "gamma_s",
                 "sigma1", "sigma2", "rho", "mpr", "horizon"},
    "jump_diffusion": {"mu", "m", "pi0", "piT", "eps", "R", "gamma_p", "gamma_s",
                       "sigma1", "sigma2", "rho", "b1bar", "eta1", "eta2",
                       "intensity", "horizon"},
}
_OUTPUTS = {"alpha", "h", "F", "P0", "E_PT", "premium", "yield", "price_change",
            "hedge_fraction"}
_DEFAULT_OUTPUTS = ("alpha", "h", "P0", "premium", "yield", "price_change")


@dataclass(frozen=True)
class SweepAxis:
    parameter: str
    start: float
    stop: float
    steps: int

    def values(self) -> list[float]:
        span = self.stop - self.start
        return [self.start + span * i / (self.steps - 1) for i in range(self.steps)]


@dataclass(frozen=True)
class Scenario:
    market: MarketParams
    model_kind: str
    model_params: dict
    sweep: tuple[SweepAxis, ...]
    outputs: tuple[str, ...]
    include_no_forward: bool

    def build_model(self, overrides: dict | None = None) -> LevyModel:
        p = dict(self.model_params)
        if overrides:
            p.update({k: v for k, v in overrides.items() if k in p})
        if self.model_kind == "brownian":
            return brownian_model(
                sigma_stock=p["sigma1"], sigma_demand=p["sigma2"],
                rho=p["rho"], mpr=p["mpr"], horizon=p["horizon"],
            )
        return jump_diffusion_model(
            sigma_stock=p["sigma1"], sigma_demand=p["sigma2"], rho=p["rho"],
            intensity=p["intensity"], jump_stock=p["eta1"], jump_demand=p["eta2"],
            stock_drift=p["b1bar"], horizon=p["horizon"],
        )

    def build_market(self, overrides: dict | None = None) -> MarketParams:
        if not overrides:
            return self.market
        fields = {f.name: getattr(self.market, f.name) for f in dataclasses.fields(MarketParams)}
        fields.update({k: v for k, v in overrides.items() if k in fields})
        return MarketParams(**fields)


def _require_number(obj, path: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {obj!r}")
    if not math.isfinite(float(obj)):
        raise ConfigError(f"{path}: must be finite")
    return float(obj)


def _check_keys(obj: dict, allowed: set, path: str) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")


def parse_scenario(data: dict) -> Scenario:
    _check_keys(data, _TOP_KEYS, "scenario")
    for key in ("market", "model"):
        if key not in data:
            raise ConfigError(f"scenario: missing required block '{key}'")

    m = data["market"]
    _check_keys(m, _MARKET_KEYS, "market")
    missing = _MARKET_REQUIRED - set(m)
    if missing:
        raise ConfigError(f"market: missing keys {sorted(missing)}")
    legacy = None
    if "legacy_hedge" in m:
        lh = m["legacy_hedge"]
        _check_keys(lh, {"h", "F"}, "market.legacy_hedge")
        legacy = (_require_number(lh.get("h", 0.0), "market.legacy_hedge.h"),
                  _require_number(lh.get("F", 0.0), "market.legacy_hedge.F"))
    try:
        market = MarketParams(
            **{k: _require_number(m[k], f"market.{k}") for k in _MARKET_REQUIRED},
            legacy_hedge=legacy,
        )
    except ValueError as exc:
        raise ConfigError(f"market: {exc}") from exc

    mod = data["model"]
    if not isinstance(mod, dict) or "kind" not in mod:
        raise ConfigError("model: missing 'kind'")
    kind = mod["kind"]
    if kind not in _MODEL_KEYS:
        raise ConfigError(f"model.kind: expected 'brownian' or 'jump_diffusion', got {kind!r}")
    _check_keys(mod, _MODEL_KEYS[kind], "model")
    missing = _MODEL_KEYS[kind] - set(mod)
    if missing:
        raise ConfigError(f"model: missing keys {sorted(missing)}")
    model_params = {
        k: _require_number(v, f"model.{k}") for k, v in mod.items() if k != "kind"
    }

    axes = []
    for i, axis in enumerate(data.get("sweep", [])):
        path = f"sweep[{i}]"
        _check_keys(axis, {"parameter", "start", "stop", "steps"}, path)
        for key in ("parameter", "start", "stop", "steps"):
            if key not in axis:
                raise ConfigError(f"{path}: missing '{key}'")
        name = axis["parameter"]
        if name not in _SWEEPABLE[kind]:
            raise ConfigError(f"{path}.parameter: {name!r} is not sweepable for kind {kind!r}")
        steps = axis["steps"]
        if not isinstance(steps, int) or isinstance(steps, bool) or steps < 2:
            raise ConfigError(f"{path}.steps: expected an integer >= 2, got {steps!r}")
        axes.append(SweepAxis(
            parameter=name,
            start=_require_number(axis["start"], f"{path}.start"),
            stop=_require_number(axis["stop"], f"{path}.stop"),
            steps=steps,
        ))
    if len(axes) > 2:
        raise ConfigError("sweep: at most 2 axes are supported")

    outputs = tuple(data.get("outputs", _DEFAULT_OUTPUTS))
    bad = set(outputs) - _OUTPUTS
    if bad:
        raise ConfigError(f"outputs: unknown quantities {sorted(bad)}")

    flag = data.get("include_no_forward", False)
    if not isinstance(flag, bool):
        raise ConfigError("include_no_forward: expected true or false")

    return Scenario(
        market=market,
        model_kind=kind,
        model_params=model_params,
        sweep=tuple(axes),
        outputs=outputs,
        include_no_forward=flag,
    )


def load_scenario(path: str | Path) -> Scenario:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return parse_scenario(data)


def _solve_point(scenario: Scenario, overrides: dict) -> dict:
    params = scenario.build_market(overrides)
    model = scenario.build_model(overrides)
    row = dict.fromkeys(CSV_HEADER, None)
    row["axis1"] = overrides.get("__axis1")
    row["axis2"] = overrides.get("__axis2")
    try:
        eq = equilibrium.solve(params, model, scenario.model_kind)
        if abs(eq.clearing_residual) > 1e-9 * (1.0 + abs(eq.F)):
            raise ForwardEqError(f"clearing residual {eq.clearing_residual:g} too large")
        row.update(
            alpha=eq.alpha, h=eq.h, F=eq.F, P0=eq.P0, E_PT=eq.E_PT,
            premium=eq.forward_premium,
            price_change=eq.expected_price_change,
        )
        row["yield"] = eq.convenience_yield
        if scenario.include_no_forward:
            row["alpha_nf"] = equilibrium.solve_no_forward(params, model).alpha
    except ForwardEqError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def sweep_rows(scenario: Scenario) -> list[dict]:
    """Solve every grid point in row-major axis order."""
    axes = scenario.sweep
    rows = []
    if not axes:
        rows.append(_solve_point(scenario, {}))
    elif len(axes) == 1:
        for v in axes[0].values():
            rows.append(_solve_point(scenario, {axes[0].parameter: v, "__axis1": v}))
    else:
        for v1 in axes[0].values():
            for v2 in axes[1].values():
                rows.append(_solve_point(scenario, {
                    axes[0].parameter: v1, axes[1].parameter: v2,
                    "__axis1": v1, "__axis2": v2,
                }))
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([_fmt(row.get(col)) for col in CSV_HEADER])
    return buf.getvalue()


def rows_to_json(rows: list[dict]) -> str:
    return json.dumps([{k: row.get(k) for k in CSV_HEADER} for row in rows], indent=2)


def write_svg_charts(rows: list[dict], scenario: Scenario, out_dir: Path) -> list[Path]:
    """One line chart per selected output quantity, a line per axis2 value."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written = []
    good = [r for r in rows if not r.get("error")]
    if not good or not scenario.sweep:
        return written
    axis1 = scenario.sweep[0].parameter
    for name in scenario.outputs:
        fig, ax = plt.subplots(figsize=(6, 4))
        groups: dict = {}
        for r in good:
            groups.setdefault(r.get("axis2"), []).append(r)
        for key, pts in groups.items():
            xs = [p["axis1"] for p in pts]
            if name == "hedge_fraction":
                ys = [p["h"] / (scenario.market.piT + p["alpha"]) for p in pts]
            else:
                ys = [p[name] for p in pts]
            label = None if key is None else f"{scenario.sweep[1].parameter}={key:g}"
            ax.plot(xs, ys, marker="o", markersize=3, label=label)
        ax.set_xlabel(axis1)
        ax.set_ylabel(name)
        if len(groups) > 1:
            ax.legend()
        ax.grid(True, alpha=0.4)
        path = out_dir / f"{name}.svg"
        fig.savefig(path, format="svg")
        plt.close(fig)
        written.append(path)
    return written


def run(scenario_file: str | Path, out_dir: str | Path | None = None,
        fmt: str = "csv", svg: bool = False) -> str:
    """Execute a scenario sweep; returns the CSV (or JSON) text."""
    scenario = load_scenario(scenario_file)
    rows = sweep_rows(scenario)
    text = rows_to_json(rows) if fmt == "json" else rows_to_csv(rows)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        suffix = "json" if fmt == "json" else "csv"
        (out / f"sweep.{suffix}").write_text(text, encoding="utf-8", newline="")
        if svg:
            write_svg_charts(rows, scenario, out)
    return text


def _cmd_solve(args) -> int:
    scenario = load_scenario(args.scenario)
    row = _solve_point(scenario, {})
    if args.format == "json":
        print(rows_to_json([row]))
    else:
        print(rows_to_csv([row]), end="")
    return 0 if not row.get("error") else 1


def _cmd_sweep(args) -> int:
    text = run(args.scenario, out_dir=args.out, fmt=args.format, svg=args.svg)
    if args.out is None:
        print(text, end="")
    return 0


def _producer_position(params: MarketParams, alpha: float, hp: float, F: float, x):
    pos = quad_revenue(params, alpha, hp, F) + hedge_ratio(params, alpha, hp) * x
    if params.legacy_hedge is not None:
        h_prev, f_prev = params.legacy_hedge
        pos = pos + h_prev * (terminal_price(params, alpha, x) - f_prev)
    return pos


def _cmd_oracle_check(args) -> int:
    scenario = load_scenario(args.scenario)
    params = scenario.build_market({})
    model = scenario.build_model({})
    eq = equilibrium.solve(params, model, scenario.model_kind)
    cfg = oracle.McConfig(n_samples=args.samples, seed=args.seed)

    prod_mc = oracle.mc_certainty_equivalent(
        model,
        lambda x, y: _producer_position(params, eq.alpha, eq.h, eq.F, x),
        params.gamma_p,
        cfg,
    )
    print(f"producer utility   analytic={eq.producer_utility:.6f} "
          f"mc={prod_mc.value:.6f} stderr={prod_mc.stderr:.2g}")

    hs = -eq.h
    fwd_mc = oracle.mc_certainty_equivalent(
        model, lambda x, y: hs * (terminal_price(params, eq.alpha, x) - eq.F),
        params.gamma_s, cfg,
    )
    stock_value = investor.entropy_value(params, model, hs) / params.gamma_s
    inv_total = fwd_mc.value + stock_value
    print(f"investor utility   analytic={eq.investor_utility:.6f} "
          f"mc+stock={inv_total:.6f} stderr={fwd_mc.stderr:.2g}")

    alpha_o, h_o, f_o = oracle.oracle_equilibrium(params, model)
    print(f"equilibrium        solve F={eq.F:.6f} oracle F={f_o:.6f} "
          f"alpha={eq.alpha:.4f}/{alpha_o:.4f} h={eq.h:.4f}/{h_o:.4f}")

    sigma = math.sqrt(terminal_moments(params, model, 0.0).variance)
    ok = (
        abs(prod_mc.value - eq.producer_utility) <= 4.0 * max(prod_mc.stderr, 1e-12)
        and abs(inv_total - eq.investor_utility) <= 4.0 * max(fwd_mc.stderr, 1e-12)
        and abs(f_o - eq.F) <= 1.5e-2 * sigma
    )
    print("oracle check:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="forwardeq",
        description="Equilibrium spot/forward prices of a two-date commodity market",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve the scenario's base point")
    p_solve.add_argument("scenario")
    p_solve.add_argument("--format", choices=("csv", "json"), default="csv")
    p_solve.set_defaults(func=_cmd_solve)

    p_sweep = sub.add_parser("sweep", help="run the scenario's parameter sweep")
    p_sweep.add_argument("scenario")
    p_sweep.add_argument("--out", default=None, help="output directory")
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.add_argument("--svg", action="store_true", help="also write SVG charts")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_oracle = sub.add_parser("oracle-check", help="compare solver output with brute force")
    p_oracle.add_argument("scenario")
    p_oracle.add_argument("--samples", type=int, default=1_000_000)
    p_oracle.add_argument("--seed", type=int, default=7)
    p_oracle.set_defaults(func=_cmd_oracle_check)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ForwardEqError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

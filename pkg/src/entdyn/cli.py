"""Command-line entry point.

Verbs: ``evolve`` (one scenario from a config file), ``fig1`` / ``fig2``
(canned benchmark bundles), ``oracle`` (analytic formula on a time grid),
``validate`` (randomized invariant suite). Report verbs write CSV/JSON
plus a rendered PNG per dataset.

Exit codes: 0 success, 2 configuration error, 3 numeric/integrity error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import (ConfigurationError, DomainError, IntegrityError,
                     NumericError, ValidationError)
from .hilbert import HilbertDims
from .lindblad import EnvironmentKind, EnvironmentModel, IntegratorConfig, LadderKind
from .scenarios import (OracleSpec, Scenario, StateSpec, oracle_series,
                        run_scenario, scenario_fig1, scenario_fig2)


def _parse_value(raw: str):
    raw = raw.strip()
    for cast in (int, float, complex):
        try:
            return cast(raw)
        except ValueError:
            continue
    return raw


def load_config(path) -> dict:
    """Flat ``key = value`` file with dotted namespaces and # comments."""
    cfg = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        cfg[key.strip()] = _parse_value(value)
    return cfg


def scenario_from_config(cfg: dict, seed_override: int | None = None) -> Scenario:
    try:
        dims = HilbertDims(int(cfg.get("dims.d1", 2)), int(cfg.get("dims.d2", 2)))
        state = StateSpec(
            kind=str(cfg.get("state.kind", "bell")),
            bell=str(cfg.get("state.bell", "psi_plus")),
            a=complex(cfg.get("state.a", 2 ** -0.5)),
            b=complex(cfg.get("state.b", 2 ** -0.5)),
            labels=(int(cfg.get("state.m1", 0)), int(cfg.get("state.m2", 1)),
                    int(cfg.get("state.n1", 1)), int(cfg.get("state.n2", 0))),
            amplitudes=tuple(complex(x) for x in
                             str(cfg.get("state.amplitudes", "")).split(";") if x),
        )
        model = EnvironmentModel(
            kind=EnvironmentKind(str(cfg.get("model.kind", "dephasing"))),
            gamma=float(cfg.get("model.gamma", 1.0)),
            nbar=float(cfg.get("model.nbar", 0.0)),
            ladder=LadderKind(str(cfg.get("model.ladder", "bosonic"))),
        )
        estimators = tuple(e.strip() for e in
                           str(cfg.get("estimators", "quasipure")).split(",") if e.strip())
        oracle = None
        if "oracle.formula" in cfg:
            params = {k.split(".", 1)[1]: v for k, v in cfg.items()
                      if k.startswith("oracle.") and k != "oracle.formula"}
            oracle = OracleSpec(str(cfg["oracle.formula"]), params)
        integrator = IntegratorConfig(
            method=str(cfg.get("integrator.method", "auto")),
            abs_tol=float(cfg.get("integrator.abs_tol", 1e-10)),
        )
        seed = int(cfg.get("seed", 0)) if seed_override is None else seed_override
        return Scenario(
            name=str(cfg.get("name", "scenario")),
            dims=dims, state=state, model=model,
            t_max=float(cfg.get("time.t_max", 1.0)),
            n_points=int(cfg.get("time.points", 200)),
            estimators=estimators, integrator=integrator,
            seed=seed, oracle=oracle,
        )
    except (ValueError, KeyError) as exc:
        raise ConfigurationError(f"bad configuration value: {exc}") from exc


def _export(series_list, out_dir, fmt, render=True):
    from . import plotting
    from .export import write_series

    paths = []
    for series in series_list:
        paths.append(write_series(series, out_dir, fmt))
        if render:
            paths.append(plotting.render_series(series, Path(out_dir) / f"{series.name}.png"))
    return paths


def cmd_evolve(args) -> int:
    cfg = load_config(args.config)
    scenario = scenario_from_config(cfg, args.seed)
    series = run_scenario(scenario)
    for p in _export([series], args.out, args.format):
        print(p)
    return 0


def cmd_fig1(args) -> int:
    from . import plotting
    from .export import write_fit_summary

    bundle = scenario_fig1(seed=args.seed)
    paths = _export(bundle.series, args.out, args.format)
    summary = Path(args.out) / "fig1_fitted_exponents.csv"
    write_fit_summary(bundle, summary)
    overlay = plotting.render_bundle_overlay(bundle, Path(args.out) / "fig1_overlay.png",
                                             title="quasi-pure decay vs dimension")
    for p in (*paths, summary, overlay):
        print(p)
    for name, est, rate in bundle.fits:
        print(f"fit {name} {est}: rate = {rate:.4f}")
    return 0


def cmd_fig2(args) -> int:
    from . import plotting

    bundle = scenario_fig2(seed=args.seed)
    paths = _export(bundle.series, args.out, args.format)
    overlay = plotting.render_bundle_overlay(bundle, Path(args.out) / "fig2_overlay.png",
                                             title="finite-temperature qudit decay")
    for p in (*paths, overlay):
        print(p)
    return 0


def cmd_oracle(args) -> int:
    params = {}
    if args.params:
        for item in args.params.split(","):
            if not item.strip():
                continue
            key, _, value = item.partition("=")
            if not _:
                raise ConfigurationError(f"oracle parameter {item!r} is not k=v")
            params[key.strip()] = _parse_value(value)
    series = oracle_series(f"oracle_{args.formula}", args.formula, params,
                           args.tmax, args.points)
    if args.out:
        for p in _export([series], args.out, args.format):
            print(p)
    else:
        from .export import _fmt, _header, _rows
        print(",".join(_header(series)))
        for row in _rows(series):
            print(",".join(_fmt(x) for x in row))
    return 0


def cmd_validate(args) -> int:
    from .validation import run_validation

    results = run_validation(samples=args.samples, seed=args.seed)
    ok = True
    for name, passed, detail in results:
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
        ok &= passed
    if not ok:
        raise NumericError("validation suite failed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entdyn",
        description="Entanglement decay of bipartite qudits under local decoherence")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="run one scenario from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=".")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_evolve)

    p = sub.add_parser("fig1", help="pure-decay qudit bundle with exponent fits")
    p.add_argument("--out", default=".")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_fig1)

    p = sub.add_parser("fig2", help="finite-temperature qudit bundle")
    p.add_argument("--out", default=".")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_fig2)

    p = sub.add_parser("oracle", help="evaluate an analytic formula on a time grid")
    p.add_argument("--formula", required=True)
    p.add_argument("--params", default="")
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("validate", help="run the randomized invariant suite")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigurationError, ValidationError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, IntegrityError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

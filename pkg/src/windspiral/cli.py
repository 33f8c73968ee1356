"""Command-line front end: one data table per command, as CSV or JSON.

Exit codes: 0 success, 2 invalid configuration, 3 resource budget
exceeded, 4 a ``--check`` tolerance failed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .dimension import (
    assouad_spectrum_closed,
    default_spectrum_grid,
    estimate_box_dim,
    estimate_spectrum,
    length_classification,
    spectrum_bounds,
)
from ._fit import geometric_grid
from .errors import DomainError, NumericError, PreconditionError, ResourceError
from .holder import (
    GtMap,
    box_alpha_bound,
    build_piecewise_map,
    estimate_forward_exponent,
    estimate_inverse_exponent,
    g_t_sharp_exponents,
    sharp_alpha_bound,
    spectrum_alpha_bound,
)
from .lipschitz import EquivalenceMap, PairSampler, distortion_stats
from .spiral import WindingFunction, log_damped_example

EXIT_OK, EXIT_CONFIG, EXIT_RESOURCE, EXIT_CHECK = 0, 2, 3, 4
COMMANDS = ("dims", "spectrum", "holder", "bounds", "length", "equivalence", "construct-map")

# tolerances applied by --check
DIMS_TOL, DIMS_TOL_P1 = 0.05, 0.07
SPECTRUM_TOL = 0.07
FORWARD_TOL, INVERSE_REL_TOL = 0.02, 0.1
PIECEWISE_FORWARD_TOL = 0.03
SPREAD_LIMIT = 1e3


class ConfigError(ValueError):
    pass


def _round12(v: float) -> float:
    return float(f"{v:.12g}")


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (stop included), a comma list, or one number."""
    try:
        if ":" in text:
            start, stop, step = (float(s) for s in text.split(":"))
            if step <= 0 or stop < start:
                raise ConfigError(f"bad grid {text!r}: need step > 0 and stop >= start")
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            values = [start + i * step for i in range(n)]
        else:
            values = [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}: {exc}") from None
    if not values:
        raise ConfigError(f"empty grid {text!r}")
    return [_round12(v) for v in values]


@dataclass
class RunConfig:
    command: str
    p: float | None = None
    theta_grid: list[float] | None = None
    beta_grid: list[float] | None = None
    t_grid: list[float] | None = None
    k_grid: list[float] | None = None
    alpha: float | None = None
    scales: tuple[float, float, int] | None = None
    method: str = "analytic"
    phi: str = "example"
    factor: float = 2.0
    budget: int = 100_000
    samples: int = 200
    seed: int = 0
    output: str = "-"
    format: str = "csv"
    check: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.p is None or not self.p > 0:
            raise ConfigError("--p must be given and positive")
        if self.scales is not None:
            lo, hi, per = self.scales
            if not 0 < lo < hi < 1 or per < 1:
                raise ConfigError("need 0 < r_min < r_max < 1 and points-per-decade >= 1")
        needs = {"spectrum": "theta_grid", "holder": "t_grid", "length": "k_grid"}
        name = needs.get(self.command)
        if name and not getattr(self, name):
            raise ConfigError(f"--{name.replace('_', '-')} is required for {self.command}")
        if self.command == "construct-map" and self.alpha is None:
            raise ConfigError("--alpha is required for construct-map")


@dataclass
class Table:
    columns: list[str]
    rows: list[list]
    extra: dict = field(default_factory=dict)
    check: dict | None = None


def _scale_grid(cfg: RunConfig):
    if cfg.scales is None:
        return None
    lo, hi, per = cfg.scales
    return geometric_grid(lo, hi, int(per))


def _dims(cfg: RunConfig) -> Table:
    est = estimate_box_dim(cfg.p, _scale_grid(cfg), method=cfg.method)
    rows = [[rec.r, rec.count, est.value, est.closed_form] for rec in est.records]
    tol = DIMS_TOL_P1 if abs(cfg.p - 1.0) <= 0.25 else DIMS_TOL
    err = abs(est.value - est.closed_form)
    return Table(
        ["r", "N_r", "fitted_slope", "closed_form"],
        rows,
        {"residual": est.residual},
        {"max_abs_error": err, "tolerance": tol, "passed": err <= tol},
    )


def _spectrum(cfg: RunConfig) -> Table:
    rows = []
    for theta in cfg.theta_grid:
        if not 0 < theta < 1:
            raise ConfigError(f"theta values must lie in (0, 1), got {theta}")
        grid = _scale_grid(cfg)
        est = estimate_spectrum(cfg.p, theta, grid if grid is not None else default_spectrum_grid(cfg.p, theta))
        lo, hi = spectrum_bounds(cfg.p, theta)
        rows.append([theta, est.value, assouad_spectrum_closed(cfg.p, theta), lo, hi])
    err = max(abs(r[1] - r[2]) for r in rows)
    return Table(
        ["theta", "estimate", "closed_form", "lower_bound", "upper_bound"],
        rows,
        check={"max_abs_error": err, "tolerance": SPECTRUM_TOL, "passed": err <= SPECTRUM_TOL},
    )


def _holder(cfg: RunConfig) -> Table:
    rows = []
    ok = True
    grid = _scale_grid(cfg)
    for t in cfg.t_grid:
        if not t > 0:
            raise ConfigError(f"t values must be positive, got {t}")
        g = GtMap(p=cfg.p, t=t)
        a, b = g_t_sharp_exponents(cfg.p, t)
        fa = estimate_forward_exponent(g, grid, seed=cfg.seed)
        fb = estimate_inverse_exponent(g, grid, seed=cfg.seed)
        ok &= abs(fa.exponent - a) <= FORWARD_TOL and abs(fb.exponent - b) <= INVERSE_REL_TOL * b
        rows.append([t, a, b, fa.exponent, fb.exponent])
    return Table(
        ["t", "alpha_sharp", "beta_sharp", "alpha_hat", "beta_hat"],
        rows,
        check={"forward_tolerance": FORWARD_TOL, "inverse_relative_tolerance": INVERSE_REL_TOL, "passed": bool(ok)},
    )


def _bounds(cfg: RunConfig) -> Table:
    rows, ok = [], True
    for beta in cfg.beta_grid or [1.0]:
        if beta < 1:
            raise ConfigError(f"beta values must be >= 1, got {beta}")
        s, m, b = sharp_alpha_bound(cfg.p, beta), spectrum_alpha_bound(cfg.p, beta), box_alpha_bound(cfg.p)
        ok &= s <= m <= b
        rows.append([cfg.p, beta, s, m, b])
    return Table(["p", "beta", "sharp", "spectrum", "box"], rows, check={"ordered": bool(ok), "passed": bool(ok)})


def _length(cfg: RunConfig) -> Table:
    rows = []
    for K in cfg.k_grid:
        if K != int(K) or K < 2:
            raise ConfigError(f"K values must be integers >= 2, got {K}")
        rep = length_classification(cfg.p, int(K))
        rows.append([rep.K, rep.partial_sum, rep.growth_ratio, rep.growth_model, rep.verdict])
    ratios = [r[2] for r in rows]
    if cfg.p <= 1:
        spread = max(ratios) / min(ratios)
        chk = {"growth_ratio_spread": spread, "limit": 2.0, "passed": spread <= 2.0}
    else:
        sums = [r[1] for r in rows]
        diffs = np.diff(sums)
        ok = bool(np.all(diffs > 0) and np.all(np.diff(diffs) < 0)) if len(sums) > 2 else bool(np.all(diffs > 0))
        chk = {"cauchy": ok, "passed": ok}
    return Table(["K", "partial_sum", "growth_ratio", "growth_model", "verdict"], rows, check=chk)


def _equivalence(cfg: RunConfig) -> Table:
    if cfg.phi == "example":
        phi = log_damped_example(cfg.p)
    elif cfg.phi == "constant":
        c = cfg.factor
        if not c > 0:
            raise ConfigError("--factor must be positive")
        phi = WindingFunction.comparable(cfg.p, lambda x: c + 0.0 * x, lambda x: 0.0 * x, 0.0, c, c)
    else:
        raise ConfigError("--phi must be example or constant")
    rep = distortion_stats(EquivalenceMap.to_comparable(phi), PairSampler(seed=cfg.seed), cfg.budget)
    lo, hi = phi.bounds
    row = [rep.min_ratio, rep.max_ratio, rep.spread, rep.pair_budget, rep.regime_split["inside"], rep.regime_split["outside"], lo, hi]
    return Table(
        ["min_ratio", "max_ratio", "spread", "pair_budget", "inside", "outside", "factor_lower", "factor_upper"],
        [row],
        {"lipschitz": phi.lipschitz},
        {"spread_limit": SPREAD_LIMIT, "passed": rep.spread < SPREAD_LIMIT},
    )


def _construct_map(cfg: RunConfig) -> Table:
    m = build_piecewise_map(cfg.p, cfg.alpha)
    if cfg.samples < 2:
        raise ConfigError("--samples must be at least 2")
    x = np.geomspace(1e-6, 0.999, cfg.samples)
    z = m.forward(x)
    theta = m.argument_of(x)
    rows = [[xi, ti, abs(zi), zi.real, zi.imag] for xi, ti, zi in zip(x, theta, z)]
    fa = estimate_forward_exponent(m, seed=cfg.seed)
    fb = estimate_inverse_exponent(m, seed=cfg.seed)
    a, b = m.target
    cert = {"alpha": a, "alpha_hat": fa.exponent, "beta": b, "beta_hat": fb.exponent}
    ok = abs(fa.exponent - a) <= PIECEWISE_FORWARD_TOL and abs(fb.exponent - b) <= INVERSE_REL_TOL * b
    return Table(["x", "argument", "radius", "re", "im"], rows, {"certificates": cert}, {"passed": bool(ok)})


HANDLERS = {
    "dims": _dims,
    "spectrum": _spectrum,
    "holder": _holder,
    "bounds": _bounds,
    "length": _length,
    "equivalence": _equivalence,
    "construct-map": _construct_map,
}


def _clean(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    return v


def _cell(v) -> str:
    v = _clean(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(cfg: RunConfig, table: Table) -> str:
    config = _clean({k: v for k, v in asdict(cfg).items() if k not in ("output",)})
    if cfg.format == "json":
        doc = {
            "toolkit": "windspiral",
            "version": __version__,
            "command": cfg.command,
            "config": config,
            "columns": table.columns,
            "rows": _clean(table.rows),
            "extra": _clean(table.extra),
            "check": _clean(table.check),
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    lines = [
        f"# windspiral {__version__}",
        f"# command: {cfg.command}",
        f"# config: {json.dumps(config, sort_keys=True)}",
    ]
    for key, value in sorted(_clean(table.extra).items()):
        lines.append(f"# {key}: {json.dumps(value, sort_keys=True)}")
    if table.check is not None:
        lines.append(f"# check: {json.dumps(_clean(table.check), sort_keys=True)}")
    lines.append(",".join(table.columns))
    lines.extend(",".join(_cell(v) for v in row) for row in table.rows)
    return "\n".join(lines) + "\n"


def _error_record(kind: str, message: str) -> str:
    return json.dumps({"error": kind, "message": message}, sort_keys=True)


def run(cfg: RunConfig) -> int:
    """Execute one command and write its table; returns the exit status."""
    try:
        cfg.validate()
        table = HANDLERS[cfg.command](cfg)
    except (ConfigError, DomainError, PreconditionError) as exc:
        print(_error_record("config", str(exc)), file=sys.stderr)
        return EXIT_CONFIG
    except (ResourceError, NumericError, MemoryError) as exc:
        print(_error_record("resource", str(exc)), file=sys.stderr)
        return EXIT_RESOURCE
    text = render(cfg, table)
    if cfg.output == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    if cfg.check and table.check is not None and not table.check.get("passed", True):
        print(_error_record("check", json.dumps(_clean(table.check), sort_keys=True)), file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="windspiral", description="Polynomial spiral toolkit")
    parser.add_argument("--version", action="version", version=f"windspiral {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--check", action="store_true", help="exit 4 if the built-in tolerance fails")
        return sp

    def scales(sp):
        sp.add_argument("--r-min", type=float)
        sp.add_argument("--r-max", type=float)
        sp.add_argument("--per-decade", type=int, default=8)

    sp = common(sub.add_parser("dims", help="box-counting table"))
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--method", choices=("analytic", "grid"), default="analytic")
    scales(sp)

    sp = common(sub.add_parser("spectrum", help="Assouad spectrum table"))
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--theta-grid", type=parse_grid, required=True)
    scales(sp)

    sp = common(sub.add_parser("holder", help="sharp and fitted exponents of g_t"))
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--t-grid", type=parse_grid, required=True)
    scales(sp)

    sp = common(sub.add_parser("bounds", help="alpha upper bounds"))
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--beta", "--beta-grid", dest="beta_grid", type=parse_grid, default=[1.0])

    sp = common(sub.add_parser("length", help="partial lengths of the first K turns"))
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--k-grid", type=parse_grid, required=True)

    sp = common(sub.add_parser("equivalence", help="distortion of the bi-Lipschitz map"))
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--phi", choices=("example", "constant"), default="example")
    sp.add_argument("--factor", type=float, default=2.0)
    sp.add_argument("--budget", type=int, default=100_000)

    sp = common(sub.add_parser("construct-map", help="sampled piecewise map and its certificates"))
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--samples", type=int, default=200)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns)
    cfg = RunConfig(command=d["command"])
    for name in ("p", "theta_grid", "beta_grid", "t_grid", "k_grid", "alpha", "method", "phi", "factor",
                 "budget", "samples", "seed", "output", "format", "check"):
        if name in d and d[name] is not None:
            setattr(cfg, name, d[name])
    if d.get("r_min") is not None or d.get("r_max") is not None:
        if d.get("r_min") is None or d.get("r_max") is None:
            raise ConfigError("--r-min and --r-max must be given together")
        cfg.scales = (d["r_min"], d["r_max"], d["per_decade"])
    return cfg


def main(argv=None) -> int:
    try:
        cfg = config_from_args(build_parser().parse_args(argv))
    except ConfigError as exc:
        print(_error_record("config", str(exc)), file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: ISR sweeps, sectorized sweeps, SINR CCDF curves,
and the mean-ISR report, emitted as CSV with a full parameter echo.

Conventions: dB and degrees at the flag boundary, linear and radians
inside. Exit codes: 0 ok, 2 usage error, 3 numeric non-convergence,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
from typing import Optional

import numpy as np

from . import montecarlo
from .hexgeom import Location, NetworkConfig
from .isr_omni import (
    DEFAULT_KAPPA,
    X_MAX,
    baseline_fluid,
    baseline_karray,
    isr_closed_polar,
    isr_fourier,
    isr_order2,
    isr_simple,
    misr,
)
from .isr_sector import AntennaMask, intersite_sector_isr, isr_trisector
from .sinr import TrafficModel, default_y_grid, sinr_ccdf
from .specfun import ConvergenceError

_ISR_METHODS = ("closed", "fourier", "order2", "simple", "fluid", "karray", "direct")
_SECTOR_METHODS = ("closed", "intersite", "direct")

# Scenario files are flat `key = value` text; '#' lines are comments.
# Units are part of the key name where they matter.
_SCENARIO_KEYS = frozenset(
    {
        "traffic", "mu", "sigma", "env", "a_db", "b", "eta", "delta_m",
        "cell_radius_m", "p_dbm", "pn_dbm", "users", "rings", "seed",
        "inverse", "mask", "sectorized", "analytic", "simulate", "output",
    }
)

_DEFAULTS = {
    "traffic": "uniform",
    "env": "outdoor",
    "b": 1.5,
    "eta": 1.0,
    "delta_m": 1000.0,
    "p_dbm": 60.0,
    "pn_dbm": -93.0,
    "users": 20000,
    "rings": 1000,
    "seed": 12345,
    "inverse": "bisect",
    "mask": "parametric",
}


def _db(v: float) -> float:
    return 10.0 ** (v / 10.0)


def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_scenario(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if not sep or not key or not val:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            if key not in _SCENARIO_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = val
    return values


def _load_mask(spec: str) -> AntennaMask:
    if spec == "flat":
        return AntennaMask.flat()
    if spec == "parametric":
        return AntennaMask.parametric()
    return AntennaMask.from_table(spec)


@contextlib.contextmanager
def _out_stream(path: Optional[str]):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            yield f


def _echo(stream, pairs: list[tuple[str, object]]) -> None:
    stream.write("# " + " ".join(f"{k}={v}" for k, v in pairs) + "\n")


def _x_grid(parser, x_max: float, points: int) -> np.ndarray:
    if points < 1:
        parser.error(f"--points must be >= 1, got {points}")
    if not 0.0 < x_max <= X_MAX:
        parser.error(f"--x-max must be in (0, {X_MAX}], got {x_max}")
    return x_max * np.arange(1, points + 1) / points


def _methods(parser, raw: str, allowed: tuple[str, ...]) -> list[str]:
    methods = []
    for name in raw.split(","):
        name = name.strip()
        if name not in allowed:
            parser.error(f"unknown method {name!r}; choose from {','.join(allowed)}")
        if name not in methods:
            methods.append(name)
    return methods


def cmd_isr(args, parser) -> int:
    """Sweep the omnidirectional ISR over x for one or more evaluators."""
    methods = _methods(parser, args.method, _ISR_METHODS)
    xs = _x_grid(parser, args.x_max, args.points)
    if args.rings < 1:
        parser.error(f"--rings must be >= 1, got {args.rings}")
    try:
        cfg = NetworkConfig.outdoor(b=args.b)
    except ValueError as e:
        parser.error(str(e))
    theta = math.radians(args.theta_deg)

    def value(method: str, x: float) -> float:
        if method == "closed":
            return isr_closed_polar(x, theta, cfg.b)
        if method == "fourier":
            return isr_fourier(Location(x * cfg.delta, theta), cfg)
        if method == "order2":
            return isr_order2(x, cfg.b)
        if method == "simple":
            return isr_simple(x, cfg.b)
        if method == "fluid":
            return baseline_fluid(x, cfg.b)
        if method == "karray":
            return baseline_karray(x, cfg.b)
        return montecarlo.direct_isr(Location(x * cfg.delta, theta), cfg, args.rings)

    with _out_stream(args.output) as out:
        _echo(out, [
            ("command", "isr"), ("b", args.b), ("theta_deg", args.theta_deg),
            ("x_max", args.x_max), ("points", args.points),
            ("methods", ",".join(methods)), ("rings", args.rings),
        ])
        if len(methods) == 1:
            out.write("x,isr\n")
            for x in xs:
                out.write(f"{x:.6g},{value(methods[0], float(x)):.6g}\n")
        else:
            out.write("x,isr,method\n")
            for method in methods:
                for x in xs:
                    out.write(f"{x:.6g},{value(method, float(x)):.6g},{method}\n")
    return 0


def cmd_sector(args, parser) -> int:
    """Sweep the tri-sector ISR (or its inter-site part) over x."""
    methods = _methods(parser, args.method, _SECTOR_METHODS)
    xs = _x_grid(parser, args.x_max, args.points)
    if args.rings < 1:
        parser.error(f"--rings must be >= 1, got {args.rings}")
    try:
        cfg = NetworkConfig.outdoor(b=args.b)
        mask = _load_mask(args.mask)
    except ValueError as e:
        parser.error(str(e))
    theta = math.radians(args.theta_deg)

    def value(method: str, x: float) -> float:
        m = Location(x * cfg.delta, theta)
        if method == "closed":
            return isr_trisector(m, cfg, mask)
        if method == "intersite":
            return intersite_sector_isr(m, cfg, mask)
        return montecarlo.direct_isr_sector(m, cfg, mask, args.rings)

    with _out_stream(args.output) as out:
        _echo(out, [
            ("command", "sector"), ("b", args.b), ("theta_deg", args.theta_deg),
            ("x_max", args.x_max), ("points", args.points),
            ("methods", ",".join(methods)), ("mask", args.mask),
            ("rings", args.rings),
        ])
        if len(methods) == 1:
            out.write("x,isr\n")
            for x in xs:
                out.write(f"{x:.6g},{value(methods[0], float(x)):.6g}\n")
        else:
            out.write("x,isr,method\n")
            for method in methods:
                for x in xs:
                    out.write(f"{x:.6g},{value(method, float(x)):.6g},{method}\n")
    return 0


def cmd_sinr_ccdf(args, parser) -> int:
    """Emit the SINR CCDF, analytic and/or simulated, on the default grid."""
    scenario: dict[str, str] = {}
    if args.scenario is not None:
        try:
            scenario = _parse_scenario(args.scenario)
        except ValueError as e:
            parser.error(str(e))

    def pick(key: str, flag_value, conv):
        if flag_value is not None:
            return flag_value
        if key in scenario:
            try:
                return conv(scenario[key])
            except ValueError as e:
                parser.error(f"scenario key {key!r}: {e}")
        return _DEFAULTS.get(key)

    traffic_kind = pick("traffic", args.traffic, str)
    mu = pick("mu", args.mu, float)
    sigma = pick("sigma", args.sigma, float)
    env = pick("env", args.env, str)
    a_db = pick("a_db", args.a_db, float)
    b = pick("b", args.b, float)
    eta = pick("eta", args.eta, float)
    delta_m = pick("delta_m", args.delta_m, float)
    cell_radius_m = pick("cell_radius_m", args.cell_radius_m, float)
    p_dbm = pick("p_dbm", args.p_dbm, float)
    pn_dbm = pick("pn_dbm", args.pn_dbm, float)
    users = pick("users", args.users, int)
    rings = pick("rings", args.rings, int)
    seed = pick("seed", args.seed, int)
    inverse = pick("inverse", args.inverse, str)
    mask_spec = pick("mask", args.mask, str)
    sectorized = bool(pick("sectorized", args.sectorized, _parse_bool))
    analytic = pick("analytic", args.analytic, _parse_bool)
    simulate = pick("simulate", args.simulate, _parse_bool)
    output = pick("output", args.output, str)

    if traffic_kind not in ("uniform", "lognormal"):
        parser.error(f"traffic must be uniform or lognormal, got {traffic_kind!r}")
    if env not in ("outdoor", "indoor", "custom"):
        parser.error(f"env must be outdoor, indoor, or custom, got {env!r}")
    if inverse not in ("bisect", "prop3"):
        parser.error(f"inverse must be bisect or prop3, got {inverse!r}")
    if traffic_kind == "uniform" and (mu is not None or sigma is not None):
        parser.error("--mu/--sigma only apply to lognormal traffic")
    if traffic_kind == "lognormal" and (mu is None or sigma is None):
        parser.error("lognormal traffic requires --mu and --sigma")
    if env == "custom":
        if a_db is None:
            parser.error("--env custom requires --a-db")
    elif a_db is not None:
        parser.error("--a-db requires --env custom")
    if not analytic and not simulate:
        analytic = True
    if sectorized and analytic:
        parser.error("the analytic CCDF is omnidirectional; use --simulate "
                     "with sectorized scenarios")

    if env == "outdoor":
        a_db = 130.0
    elif env == "indoor":
        a_db = 166.0
    if cell_radius_m is None:
        cell_radius_m = 0.525 * delta_m
    try:
        cfg = NetworkConfig(
            delta=delta_m, b=b, a=_db(a_db), P=_db(p_dbm),
            P_N=_db(pn_dbm), eta=eta, R=cell_radius_m,
        )
        traffic = (
            TrafficModel.uniform()
            if traffic_kind == "uniform"
            else TrafficModel.lognormal(mu, sigma)
        )
        if users < 1 or rings < 1:
            raise ValueError("users and rings must be >= 1")
    except ValueError as e:
        parser.error(str(e))

    grid = default_y_grid()
    curve = sinr_ccdf(grid, cfg, traffic, inverse=inverse) if analytic else None
    emp_probs = None
    if simulate:
        sim = montecarlo.SimConfig(
            rings=rings, n_users=users, seed=seed, sectorized=sectorized
        )
        mask = _load_mask(mask_spec) if sectorized else None
        emp = montecarlo.empirical_sinr_ccdf(cfg, traffic, sim, mask)
        emp_probs = emp.query(grid)

    echo = [
        ("command", "sinr-ccdf"), ("traffic", traffic_kind), ("env", env),
        ("a_db", a_db), ("b", b), ("eta", eta), ("delta_m", delta_m),
        ("cell_radius_m", cell_radius_m), ("p_dbm", p_dbm),
        ("pn_dbm", pn_dbm), ("inverse", inverse),
    ]
    if traffic_kind == "lognormal":
        echo[2:2] = [("mu", mu), ("sigma", sigma)]
    if simulate:
        echo += [("users", users), ("rings", rings), ("seed", seed)]
        if sectorized:
            echo += [("mask", mask_spec), ("sectorized", True)]

    with _out_stream(output) as out:
        _echo(out, echo)
        if analytic and simulate:
            out.write("sinr_db,ccdf,source\n")
            for y, p in zip(grid, curve.probabilities):
                out.write(f"{10 * math.log10(y):.6g},{p:.6g},analytic\n")
            for y, p in zip(grid, emp_probs):
                out.write(f"{10 * math.log10(y):.6g},{p:.6g},montecarlo\n")
            sup = float(np.max(np.abs(curve.probabilities - emp_probs)))
            out.write(f"# sup_norm={sup:.6g}\n")
            print(f"sup_norm={sup:.6g}", file=sys.stderr)
        elif analytic:
            out.write("# source=analytic\n")
            curve.to_csv(out)
        else:
            out.write("# source=montecarlo\n")
            out.write("sinr_db,ccdf\n")
            for y, p in zip(grid, emp_probs):
                out.write(f"{10 * math.log10(y):.6g},{p:.6g}\n")
    return 0


def cmd_misr(args, parser) -> int:
    """Report the location-averaged ISR (independent of the site spacing)."""
    if not 0.0 < args.kappa < 1.0:
        parser.error(f"--kappa must be in (0, 1), got {args.kappa}")
    if args.samples < 1:
        parser.error(f"--samples must be >= 1, got {args.samples}")
    try:
        value = misr(args.b, args.kappa)
    except ValueError as e:
        parser.error(str(e))
    print(f"misr = {value:.10g}")
    if args.check:
        rng = np.random.default_rng(args.seed)
        x = args.kappa * np.sqrt(1.0 - rng.random(args.samples))
        th = 2.0 * math.pi * rng.random(args.samples)
        est = math.fsum(
            isr_closed_polar(float(xi), float(ti), args.b)
            for xi, ti in zip(x, th)
        ) / args.samples
        gap = abs(est - value) / value
        print(f"mc_mean = {est:.10g} ({args.samples} samples, seed {args.seed})")
        print(f"rel_gap = {gap:.6g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hexisr",
        description="Closed-form and simulated interference/SINR statistics "
        "on an infinite tri-hexagonal cellular lattice.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    isr = sub.add_parser("isr", help="omnidirectional ISR sweep over x = r/delta")
    isr.add_argument("--b", type=float, default=1.5, help="amplitude loss exponent")
    isr.add_argument("--theta-deg", type=float, default=0.0,
                     help="polar angle in degrees (ignored by the "
                     "angle-averaged approximations)")
    isr.add_argument("--x-max", type=float, default=1.0 / math.sqrt(3.0))
    isr.add_argument("--points", type=int, default=50)
    isr.add_argument("--method", default="closed",
                     help="comma list of " + "|".join(_ISR_METHODS))
    isr.add_argument("--rings", type=int, default=1000,
                     help="lattice truncation for --method direct")
    isr.add_argument("--output", help="CSV path (default stdout)")
    isr.set_defaults(func=cmd_isr)

    sector = sub.add_parser(
        "sector",
        help="tri-sector ISR sweep; the served direction is theta = 60 deg",
    )
    sector.add_argument("--b", type=float, default=1.5)
    sector.add_argument("--theta-deg", type=float, default=0.0)
    sector.add_argument("--x-max", type=float, default=0.5)
    sector.add_argument("--points", type=int, default=50)
    sector.add_argument("--method", default="closed",
                        help="comma list of " + "|".join(_SECTOR_METHODS))
    sector.add_argument("--mask", default="parametric",
                        help="flat | parametric | path to a 360-row "
                        "(angle_deg, atten_dB) table")
    sector.add_argument("--rings", type=int, default=1000)
    sector.add_argument("--output", help="CSV path (default stdout)")
    sector.set_defaults(func=cmd_sector)

    ccdf = sub.add_parser(
        "sinr-ccdf",
        help="SINR CCDF on a fixed -10..50 dB grid (0.5 dB steps)",
        description="Analytic and/or Monte-Carlo SINR tail probabilities. "
        "Flags override scenario-file values, which override defaults. "
        "Log-normal mu/sigma describe ln(r) with r in units of delta.",
    )
    ccdf.add_argument("--scenario", help="key = value scenario file")
    ccdf.add_argument("--traffic", choices=("uniform", "lognormal"))
    ccdf.add_argument("--mu", type=float, help="lognormal ln-scale mean")
    ccdf.add_argument("--sigma", type=float, help="lognormal ln-scale std")
    ccdf.add_argument("--env", choices=("outdoor", "indoor", "custom"),
                      help="outdoor: a=130 dB, indoor: a=166 dB")
    ccdf.add_argument("--a-db", type=float,
                      help="1-km pathloss intercept (with --env custom)")
    ccdf.add_argument("--b", type=float)
    ccdf.add_argument("--eta", type=float, help="interfering-cell load in (0,1]")
    ccdf.add_argument("--delta-m", type=float, help="inter-site distance, meters")
    ccdf.add_argument("--cell-radius-m", type=float,
                      help="serving disk radius, meters (default 0.525*delta)")
    ccdf.add_argument("--p-dbm", type=float, help="transmit power, dBm")
    ccdf.add_argument("--pn-dbm", type=float, help="thermal noise power, dBm")
    ccdf.add_argument("--analytic", action="store_const", const=True,
                      help="emit the closed-form curve (default when neither "
                      "--analytic nor --simulate is given)")
    ccdf.add_argument("--simulate", action="store_const", const=True,
                      help="emit the Monte-Carlo curve")
    ccdf.add_argument("--users", type=int)
    ccdf.add_argument("--rings", type=int)
    ccdf.add_argument("--seed", type=int)
    ccdf.add_argument("--inverse", choices=("bisect", "prop3"),
                      help="radial inverter for the analytic curve "
                      "(default bisect; prop3 is the closed-form "
                      "approximation)")
    ccdf.add_argument("--mask", help="sector mask for sectorized simulation")
    ccdf.add_argument("--sectorized", action="store_const", const=True,
                      help="simulate tri-sector sites (Monte-Carlo only)")
    ccdf.add_argument("--output")
    ccdf.set_defaults(func=cmd_sinr_ccdf)

    misr_p = sub.add_parser(
        "misr", help="cell-mean ISR; independent of the inter-site distance"
    )
    misr_p.add_argument("--b", type=float, required=True)
    misr_p.add_argument("--kappa", type=float, default=DEFAULT_KAPPA,
                        help="mean-cell disk radius in units of delta")
    misr_p.add_argument("--delta", type=float, default=1000.0,
                        help="inter-site distance; accepted to demonstrate "
                        "the result does not depend on it")
    misr_p.add_argument("--check", action="store_true",
                        help="cross-validate against a Monte-Carlo disk mean")
    misr_p.add_argument("--samples", type=int, default=100000)
    misr_p.add_argument("--seed", type=int, default=12345)
    misr_p.set_defaults(func=cmd_misr)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except ConvergenceError as e:
        print(f"hexisr: series failed to converge: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"hexisr: I/O error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Commands: ``solve``, ``fundamental``, ``verify``, ``delay-trig``.

Parameters come from a ``key = value`` config file (``--config``) and/or
flags of the same name; flags win. Exit codes: 0 success, 1 verification
failed, 2 configuration error, 3 expression error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .cases import CANNED
from .cauchy import evaluate, solve
from .errors import DelayOscError, ExpressionError
from .fundamental import MAX_INTERVALS, Kind, build_fundamental, delay_cosine, delay_sine
from .oracle import compare, residual, rk_reference
from .problem import ForcingKernel, Problem
from .quadrature import QuadratureConfig

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_EXPR = 0, 1, 2, 3

KEYS = (
    "omega1", "omega2", "omega", "tau", "horizon", "phi", "f", "grid", "out",
    "format", "kernel", "quad-nodes", "rk-h", "residual-tol", "rk-tol",
)


class ConfigError(Exception):
    pass


@dataclasses.dataclass(frozen=True)
class RunConfig:
    omega1: float = 1.0
    omega2: float = 1.0
    omega: float = 1.0
    tau: float = 1.0
    horizon: int | None = None
    phi: str = "1"
    f: str = "0"
    grid: tuple[float, float, int] | None = None
    out: str | None = None
    format: str = "csv"
    kernel: str = "x2"
    quad_nodes: int = 16
    rk_h: float = 1e-3
    residual_tol: float = 1e-6
    rk_tol: float = 1e-4

    def times(self) -> np.ndarray:
        if self.grid is None:
            raise ConfigError("a grid START:END:N is required")
        a, b, n = self.grid
        return np.linspace(a, b, n)

    def intervals(self) -> int:
        """Horizon K: explicit, else the smallest K with ``t_end < K tau``."""
        if self.horizon is not None:
            return self.horizon
        t_end = self.grid[1] if self.grid else 5 * self.tau
        return max(1, math.floor(t_end / self.tau) + 1)

    def problem(self) -> Problem:
        return Problem(self.omega1, self.omega2, self.tau, self.intervals(),
                       self.phi, self.f, ForcingKernel(self.kernel))


def read_config_file(path: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment line."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, line in enumerate(lines, 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        if "=" not in s:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in s.split("=", 1))
        key = key.replace("_", "-")
        if key not in KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be START:END:N, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"grid must be START:END:N, got {text!r}") from None
    if n < 2 or not b > a:
        raise ConfigError("grid needs END > START and N >= 2")
    return a, b, n


_CONVERT = {
    "omega1": float, "omega2": float, "omega": float, "tau": float,
    "horizon": int, "grid": _parse_grid, "quad-nodes": int, "rk-h": float,
    "residual-tol": float, "rk-tol": float,
}


def build_config(args: argparse.Namespace) -> RunConfig:
    raw = read_config_file(args.config) if args.config else {}
    for key in KEYS:
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            raw[key] = val
    kwargs = {}
    for key, val in raw.items():
        conv = _CONVERT.get(key, str)
        try:
            kwargs[key.replace("-", "_")] = conv(val) if isinstance(val, str) else val
        except ValueError:
            raise ConfigError(f"bad value for {key}: {val!r}") from None
    cfg = RunConfig(**kwargs)
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.format!r}")
    if cfg.kernel not in {k.value for k in ForcingKernel}:
        raise ConfigError(f"kernel must be one of x2, x1, x2-literal, got {cfg.kernel!r}")
    if not cfg.tau > 0:
        raise ConfigError("tau must be positive")
    if cfg.horizon is not None and not 1 <= cfg.horizon <= MAX_INTERVALS:
        raise ConfigError(f"horizon must lie in [1, {MAX_INTERVALS}]")
    if cfg.horizon is None and cfg.intervals() > MAX_INTERVALS:
        raise ConfigError(f"grid end needs more than {MAX_INTERVALS} intervals")
    if not 2 <= cfg.quad_nodes <= 64:
        raise ConfigError("quad-nodes must lie in [2, 64]")
    return cfg


def _check_grid(cfg: RunConfig, t: np.ndarray, lower: float):
    if t[0] < lower:
        raise ConfigError(f"grid start {float(t[0])!r} is below -tau = {lower!r}")
    horizon = cfg.intervals() * cfg.tau
    if t[-1] >= horizon:
        raise ConfigError(f"OutOfHorizon: grid end {float(t[-1])!r} >= K*tau = {horizon!r}")


# -- output ------------------------------------------------------------------

def _fmt(v: float) -> str:
    return "%.17g" % v


def render(columns, rows, meta: dict, fmt: str) -> str:
    if fmt == "json":
        doc = {"meta": meta, "columns": list(columns), "rows": [list(map(float, r)) for r in rows]}
        return json.dumps(doc, indent=1) + "\n"
    lines = ["# " + " ".join(f"{k}={v}" for k, v in meta.items())]
    lines.append(",".join(columns))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_atomic(path: str | None, text: str):
    """Write via a temp file in the target directory and rename on success."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".delayosc-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- commands ----------------------------------------------------------------

def cmd_solve(cfg: RunConfig) -> int:
    t = cfg.times()
    _check_grid(cfg, t, -cfg.tau)
    problem = cfg.problem()
    sol = solve(problem, QuadratureConfig(cfg.quad_nodes))
    x, dx = evaluate(sol, t, orders=(0, 1))
    meta = {"command": "solve", **problem.describe(), "quad_nodes": cfg.quad_nodes}
    write_atomic(cfg.out, render(("t", "x", "dx"), zip(t, x, dx), meta, cfg.format))
    return EXIT_OK


def cmd_fundamental(cfg: RunConfig) -> int:
    t = cfg.times()
    _check_grid(cfg, t, -math.inf)
    K = cfg.intervals()
    x1 = build_fundamental(Kind.X1, cfg.omega1, cfg.omega2, cfg.tau, K)
    x2 = build_fundamental(Kind.X2, cfg.omega1, cfg.omega2, cfg.tau, K)
    cols = [t, *x1.derivatives(t), *x2.derivatives(t)]
    meta = {"command": "fundamental", "omega1": cfg.omega1, "omega2": cfg.omega2,
            "tau": cfg.tau, "K": K}
    names = ("t", "x1", "dx1", "d2x1", "x2", "dx2", "d2x2")
    write_atomic(cfg.out, render(names, zip(*cols), meta, cfg.format))
    return EXIT_OK


def verify_problem(problem: Problem, quad_nodes: int = 16, rk_h: float = 1e-3,
                   residual_tol: float = 1e-6, rk_tol: float = 1e-4) -> dict:
    """Residual and RK cross-check of the analytic solution of one problem."""
    sol = solve(problem, QuadratureConfig(quad_nodes))
    rep = residual(sol, problem)
    traj = rk_reference(problem, rk_h)
    grid = np.linspace(0.0, problem.horizon, 20 * problem.K, endpoint=False)
    vs_rk = compare(lambda t: evaluate(sol, t, orders=(0,))[0], traj, grid)
    ok = rep.max_residual < residual_tol and vs_rk < rk_tol
    return {
        "problem": problem.describe(),
        "max_residual": rep.max_residual,
        "max_vs_rk": vs_rk,
        "residual_tol": residual_tol,
        "rk_tol": rk_tol,
        "rk_h": traj.h,
        "knot_jumps": [j.as_dict() for j in rep.knot_jumps],
        "pass": bool(ok),
    }


def cmd_verify(cfg: RunConfig, suite: bool = False) -> int:
    opts = dict(quad_nodes=cfg.quad_nodes, rk_h=cfg.rk_h,
                residual_tol=cfg.residual_tol, rk_tol=cfg.rk_tol)
    if suite:
        kernel = ForcingKernel(cfg.kernel)
        cases = {name: verify_problem(dataclasses.replace(p, forcing_kernel=kernel), **opts)
                 for name, p in CANNED.items()}
        report = {
            "cases": cases,
            "max_residual": max(c["max_residual"] for c in cases.values()),
            "max_vs_rk": max(c["max_vs_rk"] for c in cases.values()),
            "pass": all(c["pass"] for c in cases.values()),
        }
    else:
        report = verify_problem(cfg.problem(), **opts)
    write_atomic(cfg.out, json.dumps(report, indent=1) + "\n")
    return EXIT_OK if report["pass"] else EXIT_FAIL


def _with_knot_rows(t: np.ndarray, tau: float):
    """Grid with every knot ``k tau`` (``k >= 0``) listed twice, left limit first.

    Returns the times and the points to evaluate at; the first copy of a
    knot is evaluated one ulp to its left.
    """
    k = np.round(t / tau)
    knot = (np.abs(t - k * tau) <= 1e-12 * max(1.0, tau)) & (k >= 0)
    times = np.repeat(t, np.where(knot, 2, 1))
    at = times.copy()
    first = np.concatenate([[True], times[1:] != times[:-1]])
    dup = np.repeat(knot, np.where(knot, 2, 1)) & first
    at[dup] = np.nextafter(times[dup], -np.inf)
    return times, at


def cmd_delay_trig(cfg: RunConfig) -> int:
    if not cfg.omega >= 0:
        raise ConfigError("omega must be non-negative")
    t, at = _with_knot_rows(cfg.times(), cfg.tau)
    c = delay_cosine(cfg.omega, cfg.tau, at)
    s = delay_sine(cfg.omega, cfg.tau, at)
    meta = {"command": "delay-trig", "omega": cfg.omega, "tau": cfg.tau}
    write_atomic(cfg.out, render(("t", "cos_tau", "sin_tau"), zip(t, c, s), meta, cfg.format))
    return EXIT_OK


# -- entry point -------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH")
    common.add_argument("--grid", metavar="START:END:N")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--tau", type=str)

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--omega1", type=str)
    model.add_argument("--omega2", type=str)
    model.add_argument("--horizon", type=str, help="interval count K")

    cauchy = argparse.ArgumentParser(add_help=False)
    cauchy.add_argument("--phi", help="history expression on [-tau, 0]")
    cauchy.add_argument("--f", help="forcing expression")
    cauchy.add_argument("--kernel", choices=[k.value for k in ForcingKernel])
    cauchy.add_argument("--quad-nodes", type=str)

    p = argparse.ArgumentParser(prog="delayosc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common, model, cauchy], help="tabulate t, x, x'")
    sub.add_parser("fundamental", parents=[common, model], help="tabulate x1, x2 and derivatives")
    v = sub.add_parser("verify", parents=[common, model, cauchy], help="residual + RK cross-check")
    v.add_argument("--rk-h", type=str)
    v.add_argument("--residual-tol", type=str)
    v.add_argument("--rk-tol", type=str)
    v.add_argument("--suite", action="store_true", help="run the canned problem set")
    d = sub.add_parser("delay-trig", parents=[common], help="tabulate delayed cosine and sine")
    d.add_argument("--omega", type=str)
    return p


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = build_config(args)
        if args.command == "solve":
            return cmd_solve(cfg)
        if args.command == "fundamental":
            return cmd_fundamental(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, suite=args.suite)
        return cmd_delay_trig(cfg)
    except ExpressionError as exc:
        print(f"delayosc: expression error: {exc}", file=sys.stderr)
        return EXIT_EXPR
    except (ConfigError, DelayOscError) as exc:
        print(f"delayosc: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

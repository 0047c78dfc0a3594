"""Command-line front end.

    lojax milnor   GERM.json | --expr "x^3+y^4" [--vars x,y]
    lojax charpoly GERM [--exact | --numeric | --auto]
    lojax exponent GERM [--exact | --numeric | --auto] [--verify] [--plot]
    lojax verify   GERM [--theta 2/3] [--plot]
    lojax family   FAMILY.json | --expr ... --x-vars x,y --t-vars t [--grid ...]

Every command prints one JSON report on stdout (also written to
``--out/report.json``).  Exit codes: 0 success, 1 input error,
2 mathematical precondition or check failure, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path


from . import __version__
from .basis import DEFAULT_DEGREE_CAP, standard_monomials
from .charpoly import (
    CharPoly,
    charpoly_exact,
    charpoly_numeric,
    default_radii,
    default_rays,
    ord_of_coefficient,
    verify_annihilation,
    write_samples_csv,
)
from .errors import GlobalLocalMismatch, LojaxError, NotIsolatedError, ParseError, ResourceCapError
from .exponent import (
    BOUNDED,
    ShellConfig,
    check_order_bound,
    empirical_verify,
    gradient_exponent,
    shells_svg,
    vieta_bound_check,
    write_shells_csv,
)
from .family import Unfolding, analyze_family
from .fibres import FibreConfig, _rng, random_polydisc
from .field import GaussianRational, as_scalar, scalar_str
from .milnor import Germ, jacobian_basis, milnor_number
from .numeric import backend_name
from .parsing import infer_vars, parse_poly
from .report import dumps, write_rows

__all__ = ["main", "build_parser", "RunConfig"]

EXIT_OK, EXIT_INPUT, EXIT_MATH, EXIT_RESOURCE = 0, 1, 2, 3


class InputError(Exception):
    """Malformed input files, expressions or options."""


@dataclass
class RunConfig:
    seed: int = 0
    degree_cap: int = DEFAULT_DEGREE_CAP
    fibre: FibreConfig = field(default_factory=FibreConfig)
    shells: ShellConfig = field(default_factory=ShellConfig)
    radii: tuple = tuple(default_radii())
    random_rays: int = 3
    stoll_samples: int = 50
    jobs: int = 1
    out: str | None = None

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "degree_cap": self.degree_cap,
            "fibre": self.fibre.to_dict(),
            "shells": self.shells.to_dict(),
            "charpoly_radii": list(self.radii),
            "random_rays": self.random_rays,
            "stoll_samples": self.stoll_samples,
        }


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _split_vars(text):
    if text is None:
        return None
    names = [v.strip() for v in text.split(",") if v.strip()]
    return names


def resolve_config(args) -> RunConfig:
    """Defaults, then --config file, then LOJAX_SEED, then explicit flags."""
    raw = _load_json(args.config) if getattr(args, "config", None) else {}
    if not isinstance(raw, dict):
        raise InputError("config file must hold a JSON object")
    seed = raw.get("seed", 0)
    env = os.environ.get("LOJAX_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError as exc:
            raise InputError(f"LOJAX_SEED must be an integer, got {env!r}") from exc
    if args.seed is not None:
        seed = args.seed
    fib = dict(raw.get("fibre", {}))
    if args.rho is not None:
        fib["rho"] = args.rho
    fib["seed"] = seed
    sh = dict(raw.get("shells", {}))
    if args.points is not None:
        sh["points"] = args.points
    if "radii" in sh:
        sh["radii"] = tuple(float(r) for r in sh["radii"])
    sh["seed"] = seed
    try:
        cfg = RunConfig(
            seed=seed,
            degree_cap=args.degree_cap or raw.get("degree_cap", DEFAULT_DEGREE_CAP),
            fibre=FibreConfig(**fib),
            shells=ShellConfig(**sh),
            radii=tuple(float(r) for r in raw.get("charpoly_radii", default_radii())),
            random_rays=int(raw.get("random_rays", 3)),
            stoll_samples=int(raw.get("stoll_samples", 50)),
            jobs=max(1, args.jobs),
            out=args.out,
        )
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad configuration: {exc}") from exc
    return cfg


def load_germ(args) -> tuple:
    if args.expr is not None:
        text, vars = args.expr, _split_vars(args.vars)
    elif args.input is not None:
        data = _load_json(args.input)
        if not isinstance(data, dict) or "f" not in data:
            raise InputError('germ file needs {"f": "<expr>", "vars": [...]}')
        text, vars = data["f"], data.get("vars")
    else:
        raise InputError("give a germ file or --expr")
    vars = tuple(vars) if vars else infer_vars(text)
    germ = Germ(parse_poly(text, vars))
    return germ, {"f": text, "vars": list(vars)}


def _parse_grid_point(entry, k):
    def scalar(x):
        if isinstance(x, (list, tuple)):
            if len(x) != 2:
                raise InputError(f"grid coordinate {x} must be [Re, Im]")
            re, im = (as_scalar(str(v)) for v in x)
            return GaussianRational.make(re, im)
        return as_scalar(str(x))

    if k == 1 and isinstance(entry, (list, tuple)) and len(entry) == 2 and all(
        not isinstance(v, (list, tuple)) for v in entry
    ):
        return (scalar(entry),)
    if not isinstance(entry, (list, tuple)):
        entry = [entry]
    if len(entry) != k:
        raise InputError(f"grid point {entry} needs {k} coordinates")
    return tuple(scalar(c) for c in entry)


def load_family(args) -> tuple:
    if args.expr is not None:
        data = {"f": args.expr, "x_vars": _split_vars(args.x_vars), "t_vars": _split_vars(args.t_vars) or []}
        if args.grid:
            data["grid"] = json.loads(args.grid)
    elif args.input is not None:
        data = _load_json(args.input)
    else:
        raise InputError("give a family file or --expr")
    if not isinstance(data, dict) or "f" not in data or not data.get("x_vars"):
        raise InputError('family file needs {"f": ..., "x_vars": [...], "t_vars": [...]}')
    x_vars, t_vars = tuple(data["x_vars"]), tuple(data.get("t_vars") or ())
    u = Unfolding.parse(data["f"], x_vars, t_vars)
    grid = None
    if data.get("grid") is not None:
        try:
            grid = [_parse_grid_point(e, len(t_vars)) for e in data["grid"]]
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad grid entry: {exc}") from exc
    echo = {"f": data["f"], "x_vars": list(x_vars), "t_vars": list(t_vars), "grid": data.get("grid")}
    return u, grid, echo


# ---------------------------------------------------------------------------
# pieces shared by the germ commands


def _out_dir(cfg: RunConfig) -> Path | None:
    if cfg.out is None:
        return None
    p = Path(cfg.out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _charpoly(germ, mode, cfg: RunConfig, warnings: list) -> CharPoly:
    numeric_kwargs = dict(
        rays=default_rays(germ.m, cfg.seed, cfg.random_rays),
        radii=cfg.radii,
        cfg=cfg.fibre,
        jobs=cfg.jobs,
        degree_cap=cfg.degree_cap,
    )
    if mode == "numeric":
        P = charpoly_numeric(germ, **numeric_kwargs)
    elif mode == "exact":
        P = charpoly_exact(germ, degree_cap=cfg.degree_cap)
    else:
        try:
            P = charpoly_exact(germ, degree_cap=cfg.degree_cap)
        except GlobalLocalMismatch as exc:
            warnings.append(f"exact path refused ({exc}); using the numeric path")
            P = charpoly_numeric(germ, **numeric_kwargs)
    warnings.extend(P.warnings)
    return P


def charpoly_summary(P: CharPoly) -> dict:
    if P.is_exact:
        return {
            "method": "exact",
            "mu": P.mu,
            "w_vars": list(P.w_vars),
            "value_var": P.value_var,
            "P": str(P.polynomial()),
            "coefficients": {f"a{j}": str(c) for j, c in enumerate(P.coefficients, start=1)},
        }
    tables = P.coefficients[0].tables
    return {
        "method": "numeric",
        "mu": P.mu,
        "w_vars": list(P.w_vars),
        "value_var": P.value_var,
        "radii": [float(r) for r in tables[0].radii] if tables else [],
        "rays": [
            {
                "ray": t.ray,
                "direction": [complex(c) for c in t.direction],
                "usable": [bool(b) for b in t.usable],
                "a_at_largest_radius": [complex(v) for v in t.values[0]] if t.usable[0] else None,
            }
            for t in tables
        ],
    }


def _orders(P):
    return [ord_of_coefficient(c).to_dict() | {"j": j} for j, c in enumerate(P.coefficients, start=1)]


def _shells(germ, theta, cfg, out, name, plot):
    rep = empirical_verify(germ, theta, cfg.shells, jobs=cfg.jobs)
    if out is not None:
        write_shells_csv(out / f"{name}_shells.csv", rep)
    if plot:
        target = (out or Path(".")) / f"{name}.svg"
        target.write_text(shells_svg(rep))
    return rep


# ---------------------------------------------------------------------------
# commands


def cmd_milnor(args, cfg, env):
    germ, echo = load_germ(args)
    env["input"] = echo
    env["methods"] = {"mu": "local standard basis (negdegrevlex)"}
    try:
        mu = milnor_number(germ, cfg.degree_cap)
    except NotIsolatedError:
        env["result"] = {"isolated": False, "mu": "inf"}
        raise
    mons = standard_monomials(jacobian_basis(germ, cfg.degree_cap))
    env["result"] = {
        "isolated": True,
        "mu": mu,
        "theorem_exponent": str(Fraction(mu, mu + 1)),
        "standard_monomials": [str(m) for m in mons],
    }
    return EXIT_OK


def cmd_charpoly(args, cfg, env):
    germ, echo = load_germ(args)
    env["input"] = echo
    out = _out_dir(cfg)
    mu = milnor_number(germ, cfg.degree_cap)
    P = _charpoly(germ, args.mode, cfg, env["warnings"])
    env["methods"] = {"charpoly": P.method, "orders": "exact" if P.is_exact else "fitted"}
    res = {"mu": mu, "charpoly": charpoly_summary(P), "orders": _orders(P)}
    if P.is_exact:
        res["annihilation"] = verify_annihilation(P, germ.f, germ.gradient()).to_dict()
    elif out is not None:
        write_samples_csv(out / "charpoly_samples.csv", P)
    env["result"] = res
    return EXIT_OK


def cmd_exponent(args, cfg, env):
    germ, echo = load_germ(args)
    env["input"] = echo
    out = _out_dir(cfg)
    milnor_number(germ, cfg.degree_cap)
    P = _charpoly(germ, args.mode, cfg, env["warnings"])
    cert = gradient_exponent(germ, P)
    bound = check_order_bound(P)
    env["methods"] = {"charpoly": P.method, "orders": "exact" if P.is_exact else "fitted"}
    res = {"charpoly": charpoly_summary(P), "certificate": cert.to_dict(), "order_bound": bound.to_dict()}
    if P.is_exact:
        res["annihilation"] = verify_annihilation(P, germ.f, germ.gradient()).to_dict()
    elif out is not None:
        write_samples_csv(out / "charpoly_samples.csv", P)
    code = EXIT_OK
    if args.verify or args.plot:
        rep = _shells(germ, cert.theta, cfg, out, "exponent", args.plot)
        res["shells"] = rep.to_dict()
        env["warnings"].extend(rep.warnings)
        env["methods"]["shells"] = "sphere sampling with local ascent"
        if args.verify and rep.verdict != BOUNDED:
            code = EXIT_MATH
    env["result"] = res
    return code


def cmd_verify(args, cfg, env):
    """Every germ-level check in one report; exit 2 if any fails."""
    germ, echo = load_germ(args)
    env["input"] = echo
    out = _out_dir(cfg)
    mu = milnor_number(germ, cfg.degree_cap)
    P = _charpoly(germ, args.mode, cfg, env["warnings"])
    cert = gradient_exponent(germ, P)
    bound = check_order_bound(P)
    viete = vieta_bound_check(germ, P, seed=cfg.seed, cfg=cfg.fibre)
    if P.is_exact:
        ann = verify_annihilation(P, germ.f, germ.gradient(), raise_on_fail=False)
    else:
        Z = random_polydisc(_rng(cfg.seed, [0xA1]), 100, germ.m, cfg.fibre.rho / 25)
        ann = verify_annihilation(P, germ.f, germ.gradient(), Z, cfg.fibre, raise_on_fail=False)
    theta = Fraction(args.theta) if args.theta else cert.theta
    shells = _shells(germ, theta, cfg, out, "verify", args.plot)
    env["warnings"].extend(shells.warnings)
    env["methods"] = {
        "charpoly": P.method,
        "orders": "exact" if P.is_exact else "fitted",
        "annihilation": ann.method,
        "shells": "sphere sampling with local ascent",
    }
    checks = {
        "annihilation": ann.ok,
        "order_bound": bound.ok,
        "theta_within_theorem_bound": 0 < cert.theta <= Fraction(mu, mu + 1),
        "viete": viete.ok,
        "shells_bounded": shells.verdict == BOUNDED,
    }
    env["result"] = {
        "mu": mu,
        "charpoly": charpoly_summary(P),
        "certificate": cert.to_dict(),
        "order_bound": bound.to_dict(),
        "annihilation": ann.to_dict(),
        "viete": viete.to_dict(),
        "shells": shells.to_dict(),
        "checks": checks,
        "all_passed": all(checks.values()),
    }
    return EXIT_OK if all(checks.values()) else EXIT_MATH


def cmd_family(args, cfg, env):
    u, grid, echo = load_family(args)
    env["input"] = echo
    out = _out_dir(cfg)
    rep = analyze_family(
        u,
        grid,
        shells=cfg.shells,
        cfg=cfg.fibre,
        stoll_samples=cfg.stoll_samples,
        exact_charpoly=not args.no_charpoly,
        jobs=cfg.jobs,
        degree_cap=cfg.degree_cap,
    )
    env["warnings"].extend(rep.warnings)
    env["methods"] = {
        "mu_table": "exact slices on the grid",
        "symbolic": "bounded power membership in the local Jacobian ideal",
        "charpoly": rep.charpoly_method or "none",
    }
    env["result"] = rep.to_dict()
    if out is not None:
        write_rows(
            out / "mu_table.csv",
            ["t", "mu"],
            [(" ".join(scalar_str(c) for c in p), m) for p, m in zip(rep.constancy.grid, rep.constancy.mu)],
        )
        if rep.uniform is not None:
            write_rows(
                out / "uniform.csv",
                ["t", "verdict", "constant"],
                [
                    (" ".join(scalar_str(c) for c in p), v, c)
                    for p, v, c in zip(rep.uniform.grid, rep.uniform.verdicts, rep.uniform.constants)
                ],
            )
        if rep.semicontinuity is not None:
            s = rep.semicontinuity
            write_rows(
                out / "semicontinuity.csv",
                ["t", "mu", "verdict", "constant"],
                [(" ".join(scalar_str(c) for c in p), m, v, c) for p, m, v, c in zip(s.grid, s.mu, s.verdicts, s.constants)],
            )
    return EXIT_MATH if rep.hard_failure else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="RNG seed (overrides LOJAX_SEED and --config)")
    common.add_argument("--config", help="JSON run configuration file")
    common.add_argument("--out", help="directory for report.json, CSV tables and plots")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for sampling")
    common.add_argument("--degree-cap", type=int, help=f"basis degree cap (default {DEFAULT_DEGREE_CAP})")
    common.add_argument("--rho", type=float, help="fibre polydisc radius")
    common.add_argument("--points", type=int, help="sample points per shell")

    germ = argparse.ArgumentParser(add_help=False)
    germ.add_argument("input", nargs="?", help='germ JSON file {"f": ..., "vars": [...]}')
    germ.add_argument("--expr", help="germ expression instead of a file")
    germ.add_argument("--vars", help="comma-separated variables (default: sorted identifiers)")

    mode = argparse.ArgumentParser(add_help=False)
    g = mode.add_mutually_exclusive_group()
    g.add_argument("--exact", dest="mode", action="store_const", const="exact")
    g.add_argument("--numeric", dest="mode", action="store_const", const="numeric")
    g.add_argument("--auto", dest="mode", action="store_const", const="auto")
    mode.set_defaults(mode="auto")

    p = argparse.ArgumentParser(prog="lojax", description="Milnor numbers, characteristic polynomials and gradient exponents of polynomial germs.")
    p.add_argument("--version", action="version", version=f"lojax {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("milnor", parents=[common, germ], help="Milnor number")
    sub.add_parser("charpoly", parents=[common, germ, mode], help="characteristic polynomial")
    e = sub.add_parser("exponent", parents=[common, germ, mode], help="gradient exponent")
    e.add_argument("--verify", action="store_true", help="empirically check the exponent on shells")
    e.add_argument("--plot", action="store_true", help="write an SVG log-log plot")
    v = sub.add_parser("verify", parents=[common, germ, mode], help="all germ checks")
    v.add_argument("--theta", help="exponent to test instead of the certified one")
    v.add_argument("--plot", action="store_true", help="write an SVG log-log plot")
    f = sub.add_parser("family", parents=[common], help="unfolding analysis")
    f.add_argument("input", nargs="?", help="family JSON file")
    f.add_argument("--expr", help="family expression instead of a file")
    f.add_argument("--x-vars", help="comma-separated x variables")
    f.add_argument("--t-vars", help="comma-separated parameters")
    f.add_argument("--grid", help='JSON list of grid points, e.g. [["1/8","0"]]')
    f.add_argument("--no-charpoly", action="store_true", help="skip the exact family characteristic polynomial")
    return p


_COMMANDS = {
    "milnor": cmd_milnor,
    "charpoly": cmd_charpoly,
    "exponent": cmd_exponent,
    "verify": cmd_verify,
    "family": cmd_family,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    env = {
        "tool": "lojax",
        "version": __version__,
        "command": args.command,
        "backend": backend_name(),
        "config": None,
        "input": None,
        "status": "ok",
        "methods": {},
        "result": None,
        "warnings": [],
    }
    code = EXIT_OK
    try:
        cfg = resolve_config(args)
        env["config"] = cfg.to_dict()
        code = _COMMANDS[args.command](args, cfg, env)
        if code != EXIT_OK:
            env["status"] = "check_failed"
    except (InputError, ParseError) as exc:
        code, env["status"], env["error"] = EXIT_INPUT, getattr(exc, "code", "INPUT_ERROR"), str(exc)
    except ResourceCapError as exc:
        code, env["status"], env["error"] = EXIT_RESOURCE, exc.code, str(exc)
    except LojaxError as exc:
        # a precondition failing while the input is still being read is an input error
        code = EXIT_INPUT if env["input"] is None else EXIT_MATH
        env["status"], env["error"] = exc.code, str(exc)
    except ValueError as exc:
        code, env["status"], env["error"] = EXIT_INPUT, "INPUT_ERROR", str(exc)
    env["exit_code"] = code
    text = dumps(env)
    sys.stdout.write(text)
    if env.get("error"):
        sys.stderr.write(f"lojax {args.command}: {env['status']}: {env['error']}\n")
    out = getattr(args, "out", None)
    if out and env["config"] is not None:
        Path(out).mkdir(parents=True, exist_ok=True)
        (Path(out) / "report.json").write_text(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line surface.

Subcommands: classify, curve, region, kernel, simulate, check-estimates,
symmetry, recurrent-extension, censored-classify.  Single reports are
JSON; grids and paths are CSV, and CSV outputs written with --out get a
rendered PNG figure next to them (disable with --no-plot).  Exit codes:
0 success, 2 parameter/usage error, 3 numeric failure.

The environment variable RESTABLE_THREADS sets the worker count for
path-level simulation; per-path RNG streams are keyed by (seed, index),
so results are identical under any schedule.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import classify as cls
from . import estimates as est
from . import plotting
from .errors import NumericError, ParameterError
from .kernels import ResurrectionKernel
from .phi import is_symmetric, resolve_phi
from .simulate import SimConfig, lamperti_transform, path_rng, sample_xi_bar_path
from .stable import validate

EXIT_OK = 0
EXIT_PARAM = 2
EXIT_NUMERIC = 3

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "restable report",
    "type": "object",
    "properties": {
        "command": {"type": "string"},
        "alpha": {"type": ["number", "null"]},
        "rho": {"type": ["number", "null"]},
        "phi": {"type": ["string", "null"]},
        "result": {"type": "object"},
    },
    "required": ["command", "result"],
    "additionalProperties": False,
}


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _csv(rows: list[dict], columns: list[str]) -> str:
    lines = [",".join(columns)]
    for r in rows:
        lines.append(",".join(_fmt(r.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


def _json_report(command: str, result: dict, alpha=None, rho=None, phi=None) -> str:
    payload = {
        "command": command,
        "alpha": alpha,
        "rho": rho,
        "phi": phi,
        "result": _sanitize(result),
    }
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _sanitize(obj):
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _png_path(out: str) -> str:
    stem, _, _ = out.rpartition(".")
    return (stem or out) + ".png"


def _grid_spec(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except Exception as exc:
        raise ParameterError(f"grid spec must look like 50x50, got '{text}'") from exc


def _logspace_spec(text: str) -> np.ndarray:
    try:
        lo, hi, n = text.split(":")
        return np.logspace(math.log10(float(lo)), math.log10(float(hi)), int(n))
    except ParameterError:
        raise
    except Exception as exc:
        raise ParameterError(f"grid must look like lo:hi:n, got '{text}'") from exc


# ---------------------------------------------------------------------------


def _cmd_classify(ns) -> int:
    p = validate(ns.alpha, ns.rho)
    phi = resolve_phi(ns.phi).make(ns.alpha, ns.rho)
    report = cls.classify(p, phi, zero_tol=ns.zero_tol, want_kappa=not ns.no_kappa)
    _write_text(
        _json_report("classify", report.to_dict(), ns.alpha, ns.rho, ns.phi), ns.out
    )
    return EXIT_OK


def _cmd_censored(ns) -> int:
    p = validate(ns.alpha, ns.rho)
    mean = cls.censored_mean(p)
    crit = cls.censored_critical_alphas()
    result = {
        "mean_xi1": mean,
        "verdict": "boundary_zero_mean"
        if abs(mean) <= ns.zero_tol
        else ("infinite_absorption" if mean > 0 else "finite_absorption_continuous"),
        "absorption": "infinite" if mean >= 0 else "finite_continuous",
        "alpha_upper": crit.alpha_upper,
        "rho_star": crit.rho_star,
        "rho_critical": cls.censored_rho_critical(ns.alpha),
    }
    _write_text(_json_report("censored-classify", result, ns.alpha, ns.rho), ns.out)
    return EXIT_OK


def _cmd_curve(ns) -> int:
    alphas = np.linspace(ns.alpha_min, ns.alpha_max, ns.n)
    rows = cls.critical_curve(ns.phi, alphas)
    text = _csv(rows, ["alpha", "rho_critical"])
    _write_text(text, ns.out)
    if ns.out and not ns.no_plot:
        plotting.plot_curve(rows, _png_path(ns.out), title=f"critical curve, phi = {ns.phi}")
    return EXIT_OK


def _cmd_region(ns) -> int:
    n_alpha, n_rho = _grid_spec(ns.grid)
    alphas = np.linspace(ns.alpha_min, ns.alpha_max, n_alpha)
    rows = cls.region_grid(ns.phi, alphas, n_rho=n_rho, zero_tol=ns.zero_tol)
    out_rows = [
        {
            "alpha": r["alpha"],
            "rho": r["rho"],
            "sign": r["sign"] if r["admissible"] else "inadmissible",
            "mean": r["mean"],
        }
        for r in rows
    ]
    text = _csv(out_rows, ["alpha", "rho", "sign", "mean"])
    _write_text(text, ns.out)
    if ns.out and not ns.no_plot:
        curve_rows = cls.critical_curve(ns.phi, alphas)
        plotting.plot_region(rows, curve_rows, _png_path(ns.out), title=f"phi = {ns.phi}")
    return EXIT_OK


def _cmd_kernel(ns) -> int:
    p = validate(ns.alpha, ns.rho)
    phi = resolve_phi(ns.phi).make(ns.alpha, ns.rho)
    kern = ResurrectionKernel(p, phi)
    rows = []
    for x in _logspace_spec(ns.x_grid):
        for y in _logspace_spec(ns.y_grid):
            q = kern.q_density(x, y)
            if x == y:
                j = jj = None
            else:
                j = kern.j_density(x, y)
                jj = j + q
            rows.append(
                {
                    "x": float(x),
                    "y": float(y),
                    "q": q,
                    "j": j,
                    "J": jj,
                    "B": kern.boundary_factor(x, y),
                }
            )
    text = _csv(rows, ["x", "y", "q", "j", "J", "B"])
    _write_text(text, ns.out)
    if ns.out and not ns.no_plot:
        plotting.plot_kernel(rows, _png_path(ns.out), title=f"phi = {ns.phi}")
    return EXIT_OK


def _cmd_simulate(ns) -> int:
    p = validate(ns.alpha, ns.rho)
    phi = resolve_phi(ns.phi).make(ns.alpha, ns.rho)
    cfg = SimConfig(
        epsilon=ns.epsilon,
        horizon=ns.horizon,
        dt_out=ns.dt_out,
        seed=ns.seed,
        n_paths=ns.paths,
        gaussian_compensation=None,
    )
    mean = cls.mean_xi1(p, phi)
    workers = max(1, int(os.environ.get("RESTABLE_THREADS", "1")))

    def one_path(i: int) -> list[dict]:
        path = sample_xi_bar_path(p, phi, cfg, rng=path_rng(cfg.seed, i))
        xpath = lamperti_transform(
            path,
            ns.x0,
            p.alpha,
            dt_out=cfg.dt_out,
            horizon=cfg.horizon,
            drifts_down=mean < 0,
        )
        grid = np.arange(0.0, cfg.horizon, cfg.dt_out)
        grid = np.append(grid, cfg.horizon)
        idx = np.searchsorted(path.times, grid, side="right") - 1
        xi_vals = path.values[idx]
        rows = []
        for k, t in enumerate(grid):
            xv = float(xpath.values[k]) if k < xpath.values.size else None
            rows.append(
                {"path_id": i, "t": float(t), "xi_bar": float(xi_vals[k]), "X": xv}
            )
        return rows

    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(one_path, range(cfg.n_paths)))
    else:
        chunks = [one_path(i) for i in range(cfg.n_paths)]
    rows = [r for chunk in chunks for r in chunk]

    if ns.format == "json":
        payload = _json_report(
            "simulate",
            {"paths": rows, "mean_xi1": mean},
            ns.alpha,
            ns.rho,
            ns.phi,
        )
        _write_text(payload, ns.out)
    else:
        _write_text(_csv(rows, ["path_id", "t", "xi_bar", "X"]), ns.out)
        if ns.out and not ns.no_plot:
            plotting.plot_paths(rows, _png_path(ns.out), title=f"phi = {ns.phi}")
    return EXIT_OK


def _cmd_check_estimates(ns) -> int:
    p = validate(ns.alpha, ns.rho)
    phi = resolve_phi(ns.phi).make(ns.alpha, ns.rho)
    kern = ResurrectionKernel(p, phi)
    report = est.verify_comparability(kern, budget=ns.budget)
    _write_text(
        _json_report("check-estimates", report.to_dict(), ns.alpha, ns.rho, ns.phi), ns.out
    )
    if ns.out and not ns.no_plot:
        plotting.plot_ratio_sweep(report.rows, _png_path(ns.out), title=f"phi = {ns.phi}")
    return EXIT_OK


def _cmd_symmetry(ns) -> int:
    phi = resolve_phi(ns.phi).make(ns.alpha, ns.rho)
    res = is_symmetric(phi, ns.alpha, tol=ns.symmetry_tol)
    _write_text(
        _json_report("symmetry", res.to_dict(), ns.alpha, ns.rho, ns.phi), ns.out
    )
    return EXIT_OK


def _cmd_recurrent_extension(ns) -> int:
    p = validate(ns.alpha, ns.rho)
    phi = resolve_phi(ns.phi).make(ns.alpha, ns.rho)
    kappa = cls.recurrent_extension_kappa(p, phi)
    result = {
        "kappa_star": kappa,
        "h_residual": abs(cls.h_function(p, phi, kappa)),
        "mean_xi1": cls.mean_xi1(p, phi),
    }
    _write_text(
        _json_report("recurrent-extension", result, ns.alpha, ns.rho, ns.phi), ns.out
    )
    return EXIT_OK


# ---------------------------------------------------------------------------


def _add_stable_args(sp, rho_required=True):
    sp.add_argument("--alpha", type=float, required=True, help="stability index in (0, 2)")
    sp.add_argument(
        "--rho", type=float, required=rho_required, default=None, help="positivity parameter"
    )


def _add_common_output(sp):
    sp.add_argument("--out", type=str, default=None, help="output path (stdout if omitted)")
    sp.add_argument("--no-plot", action="store_true", help="skip the PNG figure next to CSV output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="restable",
        description="Resurrected alpha-stable pssMp toolkit",
    )
    parser.add_argument(
        "--json-schema", action="store_true", help="print the JSON report schema and exit"
    )
    sub = parser.add_subparsers(dest="command")

    sp = sub.add_parser("classify", help="absorption-time classification report")
    _add_stable_args(sp)
    sp.add_argument("--phi", type=str, required=True, help="return-measure descriptor")
    sp.add_argument("--zero-tol", type=float, default=1e-12, help="boundary tag tolerance")
    sp.add_argument("--no-kappa", action="store_true", help="skip the recurrent-extension root")
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_classify)

    sp = sub.add_parser("censored-classify", help="censored-process mean and critical constants")
    _add_stable_args(sp)
    sp.add_argument("--zero-tol", type=float, default=1e-12)
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_censored)

    sp = sub.add_parser("curve", help="critical curve rho(alpha) as CSV")
    sp.add_argument("--phi", type=str, required=True)
    sp.add_argument("--alpha-min", type=float, default=0.05)
    sp.add_argument("--alpha-max", type=float, default=1.95)
    sp.add_argument("--n", type=int, default=96)
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_curve)

    sp = sub.add_parser("region", help="sign of the mean over the admissible region as CSV")
    sp.add_argument("--phi", type=str, required=True)
    sp.add_argument("--grid", type=str, default="50x50", help="n_alpha x n_rho, e.g. 50x50")
    sp.add_argument("--alpha-min", type=float, default=0.05)
    sp.add_argument("--alpha-max", type=float, default=1.95)
    sp.add_argument("--zero-tol", type=float, default=1e-12)
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_region)

    sp = sub.add_parser("kernel", help="kernel values q, j, J, B over a log grid as CSV")
    _add_stable_args(sp)
    sp.add_argument("--phi", type=str, required=True)
    sp.add_argument("--x-grid", type=str, default="0.1:10:4", help="lo:hi:n (log-spaced)")
    sp.add_argument("--y-grid", type=str, default="0.01:100:41", help="lo:hi:n (log-spaced)")
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_kernel)

    sp = sub.add_parser("simulate", help="Monte Carlo paths of xi_bar and X")
    _add_stable_args(sp)
    sp.add_argument("--phi", type=str, required=True)
    sp.add_argument("--paths", type=int, default=1)
    sp.add_argument("--horizon", type=float, default=1.0)
    sp.add_argument("--epsilon", type=float, default=1e-3, help="small-jump cutoff")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--x0", type=float, default=1.0, help="starting point of X")
    sp.add_argument("--dt-out", type=float, default=0.01)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("check-estimates", help="kernel-envelope comparability verifier")
    _add_stable_args(sp)
    sp.add_argument("--phi", type=str, required=True)
    sp.add_argument("--budget", type=float, default=1e3, help="comparability ratio budget")
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_check_estimates)

    sp = sub.add_parser("symmetry", help="symmetric-kernel criterion for a return measure")
    _add_stable_args(sp, rho_required=False)
    sp.add_argument("--phi", type=str, required=True)
    sp.add_argument("--symmetry-tol", type=float, default=1e-8)
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_symmetry)

    sp = sub.add_parser("recurrent-extension", help="recurrent-extension index kappa*")
    _add_stable_args(sp)
    sp.add_argument("--phi", type=str, required=True)
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_recurrent_extension)

    return parser


@dataclass(frozen=True)
class RunConfig:
    """Canonical, losslessly round-trippable form of a CLI invocation."""

    subcommand: str
    options: tuple[tuple[str, object], ...]

    @classmethod
    def from_argv(cls, argv: list[str]) -> "RunConfig":
        parser = build_parser()
        ns = parser.parse_args(argv)
        if ns.command is None:
            raise ParameterError("missing subcommand")
        opts = {
            k: v
            for k, v in vars(ns).items()
            if k not in ("command", "func", "json_schema")
        }
        return cls(ns.command, tuple(sorted(opts.items())))

    def to_argv(self) -> list[str]:
        argv = [self.subcommand]
        for key, val in self.options:
            flag = "--" + key.replace("_", "-")
            if isinstance(val, bool):
                if val:
                    argv.append(flag)
            elif val is not None:
                argv.extend([flag, _fmt(val) if not isinstance(val, float) else repr(val)])
        return argv


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.json_schema:
        sys.stdout.write(json.dumps(REPORT_SCHEMA, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    if ns.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_PARAM
    try:
        return ns.func(ns)
    except (ParameterError, ValueError) as exc:
        print(f"restable: parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except NumericError as exc:
        print(f"restable: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

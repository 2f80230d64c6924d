"""Command-line interface: analyze, sweep, verify, and probe.

Exit codes: 0 success, 1 failed checks or stability anomalies, 2 usage or
state errors, 3 numerical failures (symbol poles, near-singular solves,
diverged fits).  Outputs are deterministic for a fixed seed; floats are
written with 17 significant digits so parsing reproduces them exactly.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _fmt, _kernels, checks, models
from .background import BackgroundState, classify_case, derived_constants
from .errors import InvalidState, VortexSheetError
from .lopatinskii import stability_verdict
from .bvp import energy_probe

_STATE_KEYS = ("model", "v", "c", "f11", "f12", "rho", "h2")
_COMMON_KEYS = ("samples", "seed", "gamma_min", "format", "workers")
_DEFAULTS = {
    "model": "elastic", "v": 2.0, "c": 1.0, "f11": 1.0, "f12": 0.0,
    "rho": 1.0, "h2": 1.0, "samples": 500, "seed": 0, "gamma_min": 1e-6,
    "format": None, "workers": 1,
}


def _add_state_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=("elastic", "euler", "mhd"))
    p.add_argument("--v", type=float, help="right-side tangential speed")
    p.add_argument("--c", type=float, help="sound speed")
    p.add_argument("--f11", type=float, help="deformation column entry F11")
    p.add_argument("--f12", type=float, help="deformation column entry F12")
    p.add_argument("--rho", type=float, help="density")
    p.add_argument("--h2", type=float, help="tangential magnetic field (mhd)")
    p.add_argument("--allow-zero-f", action="store_true",
                   help="accept F = 0 elastic states instead of rejecting them")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--samples", type=int, help="hemisphere sample count")
    p.add_argument("--seed", type=int, help="RNG seed (default: $VSHEET_SEED or 0)")
    p.add_argument("--gamma-min", dest="gamma_min", type=float,
                   help="lower gamma cut for hemisphere sampling")
    p.add_argument("--format", choices=("json", "csv", "text"))
    p.add_argument("--out", help="write output to this file instead of stdout")
    p.add_argument("--config", help="JSON file with default flag values")
    p.add_argument("--workers", type=int, help="thread pool size for sweeps")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="vsheet",
        description="Normal-mode stability analysis of compressible vortex sheets",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="classify one background and scan its roots")
    _add_state_flags(pa)
    _add_common_flags(pa)
    pa.add_argument("--no-fit", action="store_true",
                    help="skip multiplicity and lower-bound fits")
    pa.set_defaults(func=cmd_analyze)

    ps = sub.add_parser("sweep", help="classify a grid of elastic backgrounds")
    _add_state_flags(ps)
    _add_common_flags(ps)
    ps.add_argument("--v-grid", dest="v_grid", help="start:stop:step for v")
    ps.add_argument("--f11-grid", dest="f11_grid", help="start:stop:step for F11")
    ps.add_argument("--c-grid", dest="c_grid", help="start:stop:step for c")
    ps.set_defaults(func=cmd_sweep)

    pv = sub.add_parser("verify", help="run the named invariant checks")
    _add_common_flags(pv)
    pv.add_argument("--tol", action="append", default=[],
                    metavar="NAME=VALUE",
                    help="override a check tolerance ('all=VALUE' for every check)")
    pv.set_defaults(func=cmd_verify)

    pp = sub.add_parser("probe", help="energy blow-up probe along a root approach")
    _add_state_flags(pp)
    _add_common_flags(pp)
    pp.add_argument("--root", type=float, required=True,
                    help="boundary root position theta")
    pp.add_argument("--gammas", help="lo:hi:n log-spaced approach parameters")
    pp.add_argument("--h", default="1.0,0.5",
                    help="boundary data as two comma-separated reals")
    pp.set_defaults(func=cmd_probe)
    return p


class UsageError(Exception):
    pass


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    known = set(_STATE_KEYS) | set(_COMMON_KEYS) | {"allow_zero_f"}
    unknown = set(cfg) - known
    if unknown:
        raise UsageError(f"unknown config key(s): {sorted(unknown)}")
    return cfg


def _resolve(args: argparse.Namespace) -> dict:
    """Merge CLI > config file > environment > defaults."""
    cfg = _load_config(getattr(args, "config", None))
    opts = {}
    for key in _STATE_KEYS + _COMMON_KEYS:
        cli_val = getattr(args, key, None)
        if cli_val is not None:
            opts[key] = cli_val
        elif key in cfg:
            opts[key] = cfg[key]
        elif key == "seed" and os.environ.get("VSHEET_SEED"):
            opts[key] = int(os.environ["VSHEET_SEED"])
        else:
            opts[key] = _DEFAULTS[key]
    opts["allow_zero_f"] = bool(getattr(args, "allow_zero_f", False)
                                or cfg.get("allow_zero_f", False))
    return opts


def _emit(text: str, out_path: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_grid(spec: str, name: str) -> np.ndarray:
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError as exc:
        raise UsageError(f"--{name} expects start:stop:step, got {spec!r}") from exc
    if step <= 0 or stop < start:
        raise UsageError(f"--{name} needs step > 0 and stop >= start")
    return np.arange(start, stop + step / 2.0, step)


def _state_dict(opts: dict) -> dict:
    d = {"model": opts["model"], "v": opts["v"], "c": opts["c"], "rho": opts["rho"]}
    if opts["model"] == "elastic":
        d.update(f11=opts["f11"], f12=opts["f12"])
    if opts["model"] == "mhd":
        d.update(h2=opts["h2"])
    return d


def _root_rows(records) -> list[list]:
    return [[r.theta, r.location, r.multiplicity_expected, r.delta_abs,
             r.matched, r.slope_fitted, r.lb_exponent_fitted, r.kappa_log10]
            for r in records]


_ROOT_HEADER = ["theta", "location", "multiplicity_expected", "delta_abs",
                "matched", "slope_fitted", "lb_exponent_fitted", "kappa_log10"]


def cmd_analyze(args: argparse.Namespace) -> int:
    opts = _resolve(args)
    fmt = opts["format"] or "json"
    state = models.make_state(
        opts["model"], v=opts["v"], c=opts["c"], f11=opts["f11"],
        f12=opts["f12"], rho=opts["rho"], h2=opts["h2"],
        strict=not opts["allow_zero_f"],
    )
    fit = not getattr(args, "no_fit", False)

    if opts["model"] == "elastic":
        report = stability_verdict(state, samples=opts["samples"],
                                   seed=opts["seed"],
                                   gamma_min=opts["gamma_min"], fit=fit)
        payload = {
            "state": _state_dict(opts),
            "backend": _kernels.BACKEND,
            "case_id": report.case_id,
            "regime": report.regime,
            "derived": report.derived,
            "roots": [dataclasses.asdict(r) for r in report.roots],
            "checks": report.checks,
            "anomalies": report.anomalies,
        }
        roots = report.roots
        anomalies = report.anomalies
    elif opts["model"] == "euler":
        label = classify_case(state.as_elastic())
        d = derived_constants(state.as_elastic())
        roots = models.fluid_find_roots(state, strict=False)
        anomalies = []
        out_roots = []
        for r in roots:
            if not r.matched:
                kind = ("unexpected root" if r.multiplicity_expected is None
                        else "predicted root not found")
                anomalies.append(f"{kind} at theta = {r.theta:.9g}"
                                 f" (|det| = {r.delta_abs:.3e})")
            elif fit and r.location == "boundary":
                fitted = models.fluid_estimate_multiplicity(state, r.theta)
                r = dataclasses.replace(r, slope_fitted=fitted.exponent)
            out_roots.append(r)
        roots = out_roots
        payload = {
            "state": _state_dict(opts),
            "backend": _kernels.BACKEND,
            "case_id": label.case_id.value,
            "regime": label.regime.value,
            "derived": {"f_sq": 0.0, "v1_sq": d.v1_sq, "v2_sq": d.v2_sq,
                        "weak_threshold_sq": d.weak_threshold_sq},
            "roots": [dataclasses.asdict(r) for r in roots],
            "checks": {},
            "anomalies": anomalies,
        }
    else:
        scan = models.mhd_boundary_scan(state)
        fp = models.mhd_special_set_point(state, eta=1.0 / math.sqrt(5.0))
        w = models.mhd_omega(state, "right", fp)
        e = models.mhd_e_minus(state, "right", fp)
        anomalies = []
        payload = {
            "state": _state_dict(opts),
            "backend": _kernels.BACKEND,
            "case_id": None,
            "regime": None,
            "derived": {"c_alfven": state.c_alfven, "lam": state.lam},
            "roots": [dataclasses.asdict(r) for r in scan],
            "checks": {
                "special_set_omega_abs": abs(w),
                "special_set_e_norm": float(np.linalg.norm(e)),
            },
            "anomalies": anomalies,
        }
        roots = scan

    if fmt == "json":
        _emit(_fmt.dumps(payload), args.out)
    elif fmt == "csv":
        meta = [f"# {k}={_fmt.csv_field(v)}"
                for k, v in (("model", opts["model"]),
                             ("case_id", payload["case_id"]),
                             ("regime", payload["regime"]))]
        lines = meta + _fmt.csv_lines(_ROOT_HEADER, _root_rows(roots))
        _emit("\n".join(lines), args.out)
    else:
        raise UsageError("analyze supports --format json or csv")
    return 1 if anomalies else 0


_SWEEP_HEADER = ["v", "f11", "f12", "c", "case_id", "regime",
                 "v1_sq", "weak_threshold_sq"]


def _sweep_row(v: float, f11: float, f12: float, c: float, rho: float,
               allow_zero_f: bool) -> list:
    st = BackgroundState(v=v, f11=f11, f12=f12, c=c, rho=rho,
                         allow_zero_f=allow_zero_f)
    label = classify_case(st)
    d = derived_constants(st)
    return [v, f11, f12, c, label.case_id.value, label.regime.value,
            d.v1_sq, d.weak_threshold_sq]


def cmd_sweep(args: argparse.Namespace) -> int:
    opts = _resolve(args)
    fmt = opts["format"] or "csv"
    if opts["model"] != "elastic":
        raise UsageError("sweep is defined for the elastic model only")
    v_grid = _parse_grid(args.v_grid, "v-grid") if args.v_grid else \
        np.array([opts["v"]])
    f_grid = _parse_grid(args.f11_grid, "f11-grid") if args.f11_grid else \
        np.array([opts["f11"]])
    c_grid = _parse_grid(args.c_grid, "c-grid") if args.c_grid else \
        np.array([opts["c"]])
    tasks = [(float(v), float(f11), opts["f12"], float(c), opts["rho"],
              opts["allow_zero_f"])
             for c in c_grid for f11 in f_grid for v in v_grid]
    workers = max(1, int(opts["workers"]))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(lambda t: _sweep_row(*t), tasks))
    else:
        rows = [_sweep_row(*t) for t in tasks]
    if fmt == "csv":
        _emit("\n".join(_fmt.csv_lines(_SWEEP_HEADER, rows)), args.out)
    elif fmt == "json":
        payload = [dict(zip(_SWEEP_HEADER, row)) for row in rows]
        _emit(_fmt.dumps(payload), args.out)
    else:
        raise UsageError("sweep supports --format csv or json")
    return 0


def _parse_tols(pairs: list[str]) -> dict:
    tols = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep:
            raise UsageError(f"--tol expects NAME=VALUE, got {pair!r}")
        try:
            tols[name] = float(value)
        except ValueError as exc:
            raise UsageError(f"--tol value for {name!r} is not a number") from exc
    return tols


def cmd_verify(args: argparse.Namespace) -> int:
    opts = _resolve(args)
    fmt = opts["format"] or "text"
    try:
        results = checks.run_all(_parse_tols(args.tol),
                                 samples=opts["samples"], seed=opts["seed"])
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    if fmt == "json":
        _emit(_fmt.dumps([dataclasses.asdict(r) for r in results]), args.out)
    elif fmt == "text":
        width = max(len(r.name) for r in results)
        lines = [
            f"{'PASS' if r.passed else 'FAIL'} {r.name:<{width}} "
            f"value={_fmt.fmt_float(r.value)} tol={_fmt.fmt_float(r.tolerance)}"
            + (f"  ({r.detail})" if r.detail else "")
            for r in results
        ]
        n_fail = sum(not r.passed for r in results)
        lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
        _emit("\n".join(lines), args.out)
    else:
        raise UsageError("verify supports --format text or json")
    return 1 if any(not r.passed for r in results) else 0


def cmd_probe(args: argparse.Namespace) -> int:
    opts = _resolve(args)
    fmt = opts["format"] or "csv"
    if opts["model"] != "elastic":
        raise UsageError("probe is defined for the elastic model only")
    state = models.make_state(
        "elastic", v=opts["v"], c=opts["c"], f11=opts["f11"],
        f12=opts["f12"], rho=opts["rho"], strict=not opts["allow_zero_f"],
    )
    if args.gammas:
        try:
            lo, hi, n = args.gammas.split(":")
            gammas = np.logspace(math.log10(float(lo)), math.log10(float(hi)),
                                 int(n))
        except ValueError as exc:
            raise UsageError(f"--gammas expects lo:hi:n, got {args.gammas!r}") from exc
    else:
        gammas = None
    try:
        h = tuple(float(x) for x in args.h.split(","))
    except ValueError as exc:
        raise UsageError(f"--h expects two comma-separated reals") from exc
    if len(h) != 2:
        raise UsageError("--h expects exactly two values")
    res = energy_probe(state, args.root, h, gammas=gammas)
    if fmt == "csv":
        rows = [[float(g), float(s), float(w)]
                for g, s, w in zip(res.gammas, res.sigma_min, res.wnc_norm)]
        lines = _fmt.csv_lines(["gamma", "sigma_min", "wnc0_norm"], rows)
        lines.append(f"# fitted_j_sigma={_fmt.fmt_float(res.fit_sigma.exponent)}")
        lines.append(f"# fitted_j_wnc={_fmt.fmt_float(res.fit_wnc.exponent)}")
        lines.append(f"# kappa_log10={_fmt.fmt_float(res.fit_sigma.intercept)}")
        _emit("\n".join(lines), args.out)
    elif fmt == "json":
        payload = {
            "state": _state_dict(opts),
            "theta": args.root,
            "gamma": list(map(float, res.gammas)),
            "sigma_min": list(map(float, res.sigma_min)),
            "wnc0_norm": list(map(float, res.wnc_norm)),
            "fitted_j_sigma": res.fit_sigma.exponent,
            "fitted_j_wnc": res.fit_wnc.exponent,
            "kappa_log10": res.fit_sigma.intercept,
        }
        _emit(_fmt.dumps(payload), args.out)
    else:
        raise UsageError("probe supports --format csv or json")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"vsheet: error: {exc}", file=sys.stderr)
        return 2
    except InvalidState as exc:
        print(f"vsheet: invalid state: {exc}", file=sys.stderr)
        return 2
    except VortexSheetError as exc:
        print(f"vsheet: numerical failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

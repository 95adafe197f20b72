"""Command-line front end: run | sweep | convergence | list-schemes.

Outputs are CSV (17 significant digits, lossless round-trip) and JSON
with a fixed key order, so identical flags give byte-identical files;
sweeps run concurrently but rows are emitted in parameter order.

Exit codes: 0 ok, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from swelab.core import NearCriticalError, PhysConstants, SWEError
from swelab.diagnostics import convergence_study
from swelab.presets import DEFAULT_CELLS, PARAM_DEFAULTS, build_preset, exact_profile
from swelab.solver import SCHEMES, RunReport, SchemeConfig, StopRule, run

_LADDER = (100, 200, 400, 800, 1600, 3200)
_FULL_LADDER = _LADDER + (6400, 12800)


def _fmt(v) -> str:
    return f"{float(v):.17g}"


def _parse_params(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ValueError(f"--param expects k=v, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = float(v)
    return out


def _parse_until(text):
    """--until steady | time=T -> StopRule override pieces."""
    if text is None:
        return None
    if text == "steady":
        return ("steady", None)
    if text.startswith("time="):
        return ("time", float(text[5:]))
    raise ValueError(f"--until expects 'steady' or 'time=T', got {text!r}")


def _load_config(path):
    """Optional `key = value` lines; '#' comments and blanks ignored."""
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {line!r}")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _scheme_config(args) -> SchemeConfig:
    return SchemeConfig.from_id(
        args.scheme,
        cfl=args.cfl,
        eps=args.eps,
        gate=args.gate,
    )


def _apply_config_file(args):
    if not getattr(args, "config", None):
        return
    cfg = _load_config(args.config)
    casts = dict(test=int, scheme=str, cells=int, cfl=float, eps=float,
                 gate=str, until=str, out=str)
    for k, v in cfg.items():
        if k not in casts:
            raise ValueError(f"unknown config key {k!r}")
        # flags override the file: only fill values still at their default
        if getattr(args, k, None) == _DEFAULTS.get(k):
            setattr(args, k, casts[k](v))


_DEFAULTS = dict(test=None, scheme=None, cells=None, cfl=0.9, eps=1e-6,
                 gate="dimensional", until=None, out=".")


def _spec_for(args, params):
    spec = build_preset(args.test, n_cells=args.cells, **params)
    until = _parse_until(args.until)
    if until is not None:
        kind, t = until
        if kind == "time":
            spec.stop = StopRule(final_time=t)
        else:
            base = spec.stop
            spec.stop = StopRule(steady_tol=base.steady_tol or 1e-8,
                                 max_time=base.time_bound() or 1e4)
    return spec


def _write_snapshot(path: Path, report: RunReport, c: PhysConstants):
    final = report.final
    u = np.where(final.h > c.h_dry, final.q / np.maximum(final.h, c.h_dry), 0.0)
    fr2 = np.where(final.h > c.h_dry, u * u / (c.g * np.maximum(final.h, c.h_dry)), 0.0)
    eta = final.h - final.H
    with path.open("w") as f:
        f.write("x,H,h,q,eta,u,fr2\n")
        for row in zip(report.x, final.H, final.h, final.q, eta, u, fr2):
            f.write(",".join(_fmt(v) for v in row) + "\n")


def _summary_dict(report: RunReport, args, params) -> dict:
    # fixed key order: configuration first, outcomes second
    return {
        "test": args.test,
        "scheme": args.scheme,
        "params": {k: float(v) for k, v in sorted(params.items())},
        "metadata": report.summary(),
    }


def cmd_run(args) -> int:
    params = _parse_params(args.param)
    cfg = _scheme_config(args)
    c = cfg.constants()
    spec = _spec_for(args, params)
    report = run(spec, cfg, c)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_snapshot(out / "snapshot_final.csv", report, c)
    (out / "summary.json").write_text(
        json.dumps(_summary_dict(report, args, params), indent=2, sort_keys=False) + "\n"
    )
    probes = " ".join(f"{k}={v['h']:.6g}" for k, v in report.probes.items())
    print(
        f"test {args.test} scheme {args.scheme} cells {spec.grid.n_cells}: "
        f"t={report.final_time:.6g} steps={report.n_steps} "
        f"steady={report.steady_reached} clips={report.clip_events}"
        + (f" {probes}" if probes else "")
    )
    return 0


def cmd_sweep(args) -> int:
    name, _, values = args.sweep.partition("=")
    vals = [float(v) for v in values.split(",") if v.strip()]
    if not vals:
        raise ValueError("empty sweep value list")
    schemes = args.scheme
    fixed = _parse_params(args.param)
    jobs = [(v, s) for v in vals for s in schemes]

    def one(job):
        v, scheme_id = job
        cfg = SchemeConfig.from_id(scheme_id, cfl=args.cfl, eps=args.eps, gate=args.gate)
        ns = argparse.Namespace(**{**vars(args), "scheme": scheme_id})
        try:
            spec = _spec_for(ns, {**fixed, name: v})
            report = run(spec, cfg, cfg.constants())
            h_l = report.probes.get("h_l", {}).get("h", float("nan"))
            h_r = report.probes.get("h_r", {}).get("h", float("nan"))
            res = report.residual_history[-1] if len(report.residual_history) else float("nan")
            return (v, scheme_id, h_l, h_r, res, report.steady_reached, "")
        except Exception as exc:  # recorded per row, sweep continues
            return (v, scheme_id, float("nan"), float("nan"), float("nan"), False,
                    f"{type(exc).__name__}: {exc}")

    with concurrent.futures.ThreadPoolExecutor(max_workers=args.jobs) as pool:
        rows = list(pool.map(one, jobs))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep.csv"
    with path.open("w") as f:
        f.write(f"{name},scheme,h_l,h_r,steady_residual,met_steady,error\n")
        for v, s, hl, hr, res, met, err in rows:
            f.write(f"{_fmt(v)},{s},{_fmt(hl)},{_fmt(hr)},{_fmt(res)},{int(met)},{err}\n")
    failures = sum(1 for r in rows if r[-1])
    print(f"sweep {name} over {len(vals)} values x {len(schemes)} schemes -> {path}"
          + (f" ({failures} failed rows)" if failures else ""))
    return 0


def cmd_convergence(args) -> int:
    if args.test != 6:
        raise ValueError("convergence studies are defined for test 6")
    params = _parse_params(args.param)
    meshes = _FULL_LADDER if args.full_ladder else _LADDER
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows_path = out / "convergence.csv"
    needed = {}
    with rows_path.open("w") as f:
        f.write("scheme,dH,dl,n_cells,l1_error,met_bound\n")
        for scheme_id in args.scheme:
            cfg = SchemeConfig.from_id(scheme_id, cfl=args.cfl, eps=args.eps, gate=args.gate)
            p = {**PARAM_DEFAULTS[6], **params}
            rows, cells = convergence_study(
                lambda n: build_preset(6, n_cells=n, **params),
                cfg,
                lambda x: exact_profile(6, x, **params),
                bound=args.bound,
                meshes=meshes,
            )
            needed[scheme_id] = cells
            for r in rows:
                f.write(f"{scheme_id},{_fmt(p['dH'])},{_fmt(p['dl'])},"
                        f"{r.n_cells},{_fmt(r.l1_error)},{int(r.met_bound)}\n")
    (out / "cells_needed.json").write_text(
        json.dumps({"bound": args.bound,
                    "cells_needed": {k: needed[k] for k in args.scheme}},
                   indent=2) + "\n"
    )
    print("cells_needed: " + " ".join(
        f"{k}={v if v is not None else 'not reached'}" for k, v in needed.items()))
    return 0


def cmd_list_schemes(args) -> int:
    for name, entry in SCHEMES.items():
        status = "" if entry["implemented"] else "  [not implemented]"
        print(f"{name:12s} {entry['label']}{status}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swelab",
                                description="1D shallow-water well-balanced scheme laboratory")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, scheme_multi=False):
        sp.add_argument("--test", type=int, required=True, choices=sorted(DEFAULT_CELLS))
        if scheme_multi:
            sp.add_argument("--scheme", action="append", required=True,
                            help="scheme id (repeatable)")
        else:
            sp.add_argument("--scheme", required=True, help="scheme id")
        sp.add_argument("--cells", type=int, default=None)
        sp.add_argument("--cfl", type=float, default=0.9)
        sp.add_argument("--eps", type=float, default=1e-6)
        sp.add_argument("--gate", choices=("dimensional", "as-printed"), default="dimensional")
        sp.add_argument("--param", action="append", metavar="K=V", default=[])
        sp.add_argument("--until", default=None, help="steady | time=T")
        sp.add_argument("--out", default=".")
        sp.add_argument("--config", default=None, help="key = value file; flags override")

    sp = sub.add_parser("run", help="one simulation, snapshot + summary")
    common(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("sweep", help="one run per parameter value per scheme")
    common(sp, scheme_multi=True)
    sp.add_argument("--sweep", required=True, metavar="K=V1,V2,...")
    sp.add_argument("--jobs", type=int, default=None)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("convergence", help="mesh-ladder L1 study (test 6)")
    common(sp, scheme_multi=True)
    sp.add_argument("--bound", type=float, default=0.008)
    sp.add_argument("--full-ladder", action="store_true")
    sp.set_defaults(func=cmd_convergence)

    sp = sub.add_parser("list-schemes", help="available scheme ids")
    sp.set_defaults(func=cmd_list_schemes)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if hasattr(args, "config"):
            _apply_config_file(args)
        return args.func(args)
    except NotImplementedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (SWEError, NearCriticalError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

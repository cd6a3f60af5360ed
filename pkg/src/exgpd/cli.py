"""Command line interface: simulate, tail, fit, risk, and density subcommands.

Every run is deterministic given its flags, seed, and input bytes.  Results go
to stdout and files under --out; diagnostics go to stderr, and the exit code is
zero exactly when no error occurred.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .distribution import ExGPD
from .gpd import Family, Params, SimSpec, gev_sample, gpd_cdf, gpd_pdf, gpd_sample
from .ingest import Dataset, Tail, Transform, load_numeric, prepare_tail_sample, with_transform
from .estimate import FitResult, gpd_mle_fit, mle_fit, mme_fit
from .plot import PlotSpec, render_panels_svg, write_tsv, write_xy_tsv
from .risk import cte
from .samples import SortedSample
from .tailindex import EstimatePath, hill_path, lv_paths, read_region


def _write_meta(out: Path, payload: dict) -> None:
    payload = dict(payload, version=__version__)
    (out / "meta.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _out_dir(arg: str) -> Path:
    out = Path(arg)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_input(args) -> Dataset:
    return load_numeric(args.input, column=args.column, delimiter=args.delimiter)


def cmd_simulate(args) -> int:
    params = Params(args.sigma, args.xi)
    family = Family(args.family)
    spec = SimSpec(family=family, mu=args.mu, params=params, n=args.n, seed=args.seed)
    sample = gpd_sample(spec) if family is Family.GPD else gev_sample(spec)
    out = _out_dir(args.out)
    text = "\n".join(repr(v) for v in sample.values.tolist()) + "\n"
    (out / "sample.txt").write_text(text)
    _write_meta(
        out,
        {
            "command": "simulate",
            "family": family.value,
            "mu": args.mu,
            "sigma": args.sigma,
            "xi": args.xi,
            "n": args.n,
            "seed": args.seed,
            "rng": "pcg64",
        },
    )
    print(f"wrote {args.n} draws to {out / 'sample.txt'}")
    return 0


def _prepare_tail(ds: Dataset, tail: str) -> SortedSample:
    if tail == "abs":
        return prepare_tail_sample(with_transform(ds, Transform.ABS), Tail.UPPER)
    return prepare_tail_sample(ds, Tail(tail))


def _region_line(name: str, path: EstimatePath, n: int) -> str:
    lo, hi = read_region(path, n)
    return f"{name} read region (k in [5%,20%] of n={n}): [{lo:.6g}, {hi:.6g}]"


def _truncated(path: EstimatePath, max_k: int):
    keep = path.ks <= max_k
    ks, values = path.ks[keep], path.values[keep]
    return np.column_stack([ks, values])


def cmd_tail(args) -> int:
    ds = _load_input(args)
    sample = _prepare_tail(ds, args.tail)
    if sample.n < 3:
        raise ValueError("need at least 3 observations")
    out = _out_dir(args.out)
    max_k = args.max_k if args.max_k is not None else min(sample.n, 1000)

    panels = []
    want_hill = args.method in ("hill", "both")
    want_lv = args.method in ("lv", "both")
    if want_hill:
        hill = hill_path(sample)
        (out / "hill.tsv").write_bytes(write_tsv(hill))
        panels.append(
            PlotSpec(
                series=(("hill", _truncated(hill, max_k)),),
                x_label="k (largest observations used)",
                y_label="xi estimate",
                title=f"Hill plot: {sample.source or ds.name}",
            )
        )
    if want_lv:
        lv_raw_p, lv_smoothed = lv_paths(sample)
        (out / "lv.tsv").write_bytes(write_tsv(lv_smoothed))
        (out / "lv_raw.tsv").write_bytes(write_tsv(lv_raw_p))
        panels.append(
            PlotSpec(
                series=(("lv", _truncated(lv_smoothed, max_k)),),
                x_label="k (threshold index)",
                y_label="xi estimate",
                title=f"Log-variance plot: {sample.source or ds.name}",
            )
        )
    (out / "figure.svg").write_bytes(render_panels_svg(panels))
    _write_meta(
        out,
        {
            "command": "tail",
            "input": str(args.input),
            "method": args.method,
            "tail": args.tail,
            "max_k": max_k,
            "n": sample.n,
            "source": sample.source,
        },
    )
    if sample.n >= 20:
        if want_hill:
            print(_region_line("hill", hill, sample.n))
        if want_lv:
            print(_region_line("lv", lv_smoothed, sample.n))
    else:
        print("read region unavailable (n < 20)", file=sys.stderr)
    return 0


def cmd_fit(args) -> int:
    ds = _load_input(args)
    x = ds.raw
    if args.log_transform:
        if np.any(x <= 0.0):
            raise ValueError("log transform requires strictly positive input values")
        data = np.log(x)
        fit = mme_fit(data) if args.method == "mme" else mle_fit(data)
    elif args.method == "mme":
        fit = mme_fit(x)  # input already on the log scale
    else:
        fit = gpd_mle_fit(x)  # raw-scale likelihood; identical estimates to the log route
    d = fit.to_dict()
    for key in ("method", "n", "sigma", "xi", "loglik"):
        if d[key] is not None:
            print(f"{key}={d[key]}")
    if d["cov"] is not None:
        print(f"cov={d['cov']}")
    print(json.dumps(d))
    if args.out:
        out = _out_dir(args.out)
        (out / "fit.json").write_text(json.dumps(d, indent=2, sort_keys=True) + "\n")
        _write_meta(
            out,
            {
                "command": "fit",
                "input": str(args.input),
                "method": args.method,
                "log_transform": bool(args.log_transform),
            },
        )
    return 0


def cmd_risk(args) -> int:
    levels = [float(p) for p in args.levels.split(",") if p]
    for p in levels:
        if not 0.0 < p < 1.0:
            raise ValueError(f"level p={p} must lie in (0, 1)")
    d = ExGPD.of(args.sigma, args.xi)
    reports = [cte(d, p) for p in levels]
    print("p\tvar\tmef\tcte")
    for r in reports:
        print(f"{r.level:.10g}\t{r.var:.10g}\t{r.mef_at_var:.10g}\t{r.cte:.10g}")
    print(json.dumps([r.to_dict() for r in reports]))
    if args.out:
        out = _out_dir(args.out)
        (out / "risk.json").write_text(
            json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True) + "\n"
        )
        _write_meta(out, {"command": "risk", "sigma": args.sigma, "xi": args.xi, "levels": levels})
    return 0


def _density_grids(d: ExGPD, what: str, rng: tuple[float, float] | None, points: int):
    if rng is None:
        lo = d.quantile(0.005)
        upper = d.upper_support()
        if math.isfinite(upper) and what == "pdf":
            hi = upper  # include the endpoint; the density may be positive there
        else:
            hi = d.quantile(0.995)
    else:
        lo, hi = rng
        hi = min(hi, d.upper_support())
    y = np.linspace(lo, hi, points)
    x_hi = math.exp(hi)
    x = np.linspace(0.0, x_hi, points)
    p = d.params
    if what == "pdf":
        ex_curve = [(float(yy), d.pdf(float(yy))) for yy in y]
        raw_curve = [(float(xx), gpd_pdf(p, float(xx))) for xx in x]
    else:
        ex_curve = [(float(yy), d.hazard(float(yy))) for yy in y if yy < d.upper_support()]
        raw_curve = []
        for xx in x:
            if xx >= p.upper_endpoint():
                continue
            raw_curve.append((float(xx), gpd_pdf(p, float(xx)) / (1.0 - gpd_cdf(p, float(xx)))))
    return raw_curve, ex_curve


def cmd_density(args) -> int:
    d = ExGPD.of(args.sigma, args.xi)
    rng = None
    if args.range:
        lo_s, _, hi_s = args.range.partition(":")
        rng = (float(lo_s), float(hi_s))
        if rng[1] <= rng[0]:
            raise ValueError(f"range must be LO:HI with LO < HI, got {args.range!r}")
    raw_curve, ex_curve = _density_grids(d, args.what, rng, args.points)
    out = _out_dir(args.out)
    label = "density" if args.what == "pdf" else "hazard"
    (out / "gpd_curve.tsv").write_bytes(write_xy_tsv(("x", label), raw_curve))
    (out / "exgpd_curve.tsv").write_bytes(write_xy_tsv(("y", label), ex_curve))
    panels = [
        PlotSpec(
            series=(("gpd", np.asarray(raw_curve)),),
            x_label="x",
            y_label=label,
            title=f"Raw scale {label} (sigma={args.sigma:g}, xi={args.xi:g})",
        ),
        PlotSpec(
            series=(("exgpd", np.asarray(ex_curve)),),
            x_label="y = log x",
            y_label=label,
            title=f"Log scale {label} (sigma={args.sigma:g}, xi={args.xi:g})",
        ),
    ]
    (out / "figure.svg").write_bytes(render_panels_svg(panels))
    _write_meta(
        out,
        {
            "command": "density",
            "sigma": args.sigma,
            "xi": args.xi,
            "what": args.what,
            "range": args.range,
            "points": args.points,
        },
    )
    print(f"wrote curves and figure to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exgpd",
        description="Log-scale generalized Pareto toolkit: simulation, fitting, "
        "risk measures, and tail-index plots.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="draw a seeded GPD or GEV sample")
    p.add_argument("--family", choices=[f.value for f in Family], required=True)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tail", help="Hill and log-variance tail-index plots")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=["hill", "lv", "both"], default="both")
    p.add_argument("--tail", choices=["upper", "lower", "abs"], default="upper")
    p.add_argument("--max-k", dest="max_k", type=int, default=None,
                   help="largest k shown in figures (default min(n, 1000))")
    p.add_argument("--column", default=None)
    p.add_argument("--delimiter", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_tail)

    p = sub.add_parser("fit", help="moment or likelihood fit of (sigma, xi)")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=["mme", "mle"], required=True)
    p.add_argument(
        "--log-transform",
        action="store_true",
        help="input is raw-scale data: take logs, then fit on the log scale "
        "(without this flag, mme expects log-scale input and mle fits the raw scale)",
    )
    p.add_argument("--column", default=None)
    p.add_argument("--delimiter", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("risk", help="VaR, mean excess, and CTE at given levels")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--levels", required=True, help="comma-separated probabilities in (0,1)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_risk)

    p = sub.add_parser("density", help="raw-scale and log-scale density or hazard curves")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--what", choices=["pdf", "hazard"], default="pdf")
    p.add_argument("--range", default=None, help="log-scale grid as LO:HI")
    p.add_argument("--points", type=int, default=401)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_density)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

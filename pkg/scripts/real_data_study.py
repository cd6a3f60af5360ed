#!/usr/bin/env python3
"""Hill and log-variance analysis of the Danish fire and BMW return datasets.

Requires the two public datasets to be present; see src/exgpd/data/README.md
for how to obtain them.

Usage: python scripts/real_data_study.py [--out OUTDIR]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from exgpd.ingest import Tail, Transform, load_bmw, load_danish, prepare_tail_sample, with_transform
from exgpd.plot import PlotSpec, render_panels_svg, write_tsv
from exgpd.tailindex import hill_path, lv_paths, read_region


def analyze(sample, name: str, out: Path) -> None:
    n = sample.n
    hill = hill_path(sample)
    lv_raw, lv_smooth = lv_paths(sample)
    max_k = min(n, 1000)

    def clipped(path):
        keep = path.ks <= max_k
        return np.column_stack([path.ks[keep], path.values[keep]])

    fig = render_panels_svg(
        [
            PlotSpec(series=(("hill", clipped(hill)),), x_label="k", y_label="xi estimate",
                     title=f"Hill: {name}"),
            PlotSpec(series=(("lv", clipped(lv_smooth)),), x_label="k", y_label="xi estimate",
                     title=f"Log-variance: {name}"),
        ]
    )
    (out / f"{name}.svg").write_bytes(fig)
    (out / f"{name}_hill.tsv").write_bytes(write_tsv(hill))
    (out / f"{name}_lv.tsv").write_bytes(write_tsv(lv_smooth))
    h5 = read_region(hill, n, 0.0, 0.05)
    h = read_region(hill, n)
    l = read_region(lv_smooth, n)
    print(f"{name}: n={n}")
    print(f"  hill upper-5% region: [{h5[0]:.4f}, {h5[1]:.4f}]")
    print(f"  hill 5-20% region:    [{h[0]:.4f}, {h[1]:.4f}]")
    print(f"  lv   5-20% region:    [{l[0]:.4f}, {l[1]:.4f}]")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/real_data_study")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        danish = load_danish()
        bmw = load_bmw()
    except FileNotFoundError as exc:
        print(f"dataset missing: {exc}", file=sys.stderr)
        return 1
    analyze(prepare_tail_sample(danish, Tail.UPPER), "danish", out)
    for label, sample in [
        ("bmw_upper", prepare_tail_sample(bmw, Tail.UPPER)),
        ("bmw_lower", prepare_tail_sample(bmw, Tail.LOWER)),
        ("bmw_abs", prepare_tail_sample(with_transform(bmw, Transform.ABS), Tail.UPPER)),
    ]:
        analyze(sample, label, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

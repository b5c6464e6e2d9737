"""Command line entry point ``hmh``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import harness
from .harness import SUITES, ConfigError, RunConfig
from .special_functions import laguerre_function
from .twisted_transforms import TwistedSlice, heat_kernel_twisted

DUMP_OBJECTS = ("special_hermite", "laguerre_function", "heat_kernel", "test_function")


def _parse_index(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hmh", description="Numerical checks of spectral identities "
                                 "on the Heisenberg motion group.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--config", help="config JSON (default: $HMH_CONFIG, then built-in defaults)")
    v.add_argument("--seed", type=int)
    v.add_argument("--json", dest="json_out", help="write the report JSON here")
    v.add_argument("--lambda", dest="lam", nargs=2, type=float, metavar=("A", "B"),
                   help="lambda band a < |lambda| < b")
    v.add_argument("--trunc", type=int, help="Hermite truncation M")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--timing", action="store_true", help="record wall_ms per check in the JSON")
    v.add_argument("--golden", help="golden constants file to check against")
    v.add_argument("--quiet", action="store_true")

    p = sub.add_parser("pin-constants", help="run the constant oracles and write the golden file")
    p.add_argument("--out", help="target file (default: packaged data file)")

    d = sub.add_parser("dump", help="CSV of values on an (x, u) grid, n = 1")
    d.add_argument("object", choices=DUMP_OBJECTS)
    d.add_argument("--lam", type=float, default=1.0)
    d.add_argument("--alpha", type=_parse_index, default=(0,))
    d.add_argument("--beta", type=_parse_index, default=(0,))
    d.add_argument("--m", type=int, default=0, help="Laguerre degree")
    d.add_argument("--t", type=float, default=0.5)
    d.add_argument("--grid", type=int, default=41)
    d.add_argument("--extent", type=float, default=4.0)
    d.add_argument("--config")
    d.add_argument("--node", type=int, default=0, help="lambda node of the test function")
    d.add_argument("--out")

    c = sub.add_parser("config", help="print the effective configuration as JSON")
    c.add_argument("--config")
    return ap


def _load_config(args) -> RunConfig:
    cfg = RunConfig.load(getattr(args, "config", None))
    data = cfg.to_dict()
    if getattr(args, "seed", None) is not None:
        data["seed"] = args.seed
    if getattr(args, "lam", None) is not None and isinstance(args.lam, list):
        data["lambda_interval"] = args.lam
    if getattr(args, "trunc", None) is not None:
        data["M_trunc"] = args.trunc
    return RunConfig.from_dict(data)


def _verify(args) -> int:
    cfg = _load_config(args)
    result = harness.run_suite(cfg, args.suite, workers=args.workers, golden=args.golden)
    if not args.quiet:
        for rep, err in zip(result.reports, result.errors):
            tag = "PASS" if rep.passed else "FAIL"
            extra = f"  [{err}]" if err else ""
            print(f"{tag}  {rep.identity_name:<40} rel_err={rep.rel_err:.3e}{extra}")
        print(f"overall: {'PASS' if result.overall_pass else 'FAIL'} ({len(result.reports)} checks)")
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(result.to_json(timing=args.timing))
    return 0 if result.overall_pass else 1


def _dump(args) -> int:
    pts = np.linspace(-args.extent, args.extent, args.grid)
    X, U = np.meshgrid(pts, pts, indexing="ij")
    x, u = X.reshape(-1, 1), U.reshape(-1, 1)
    if args.object == "special_hermite":
        slc = TwistedSlice.from_coeffs(args.lam, len(args.alpha), 0, {(args.alpha, args.beta, ()): 1.0})
        if slc.n != 1:
            raise SystemExit("dump supports n = 1 grids")
        vals = slc.evaluate(x, u)
    elif args.object == "laguerre_function":
        vals = laguerre_function(args.m, args.lam, x, u).astype(complex)
    elif args.object == "heat_kernel":
        vals = heat_kernel_twisted(args.t, args.lam, x, u)
    else:
        cfg = _load_config(args)
        if cfg.n != 1:
            raise SystemExit("dump supports n = 1 grids")
        f = harness.make_test_function(cfg, "random_band")
        slc = f.slices[args.node]
        vals = slc.evaluate(x, u, theta=np.zeros((1, slc.d)) if slc.d else None)
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["x", "u", "re", "im", "abs"])
    for xi, ui, val in zip(x[:, 0], u[:, 0], np.asarray(vals).reshape(-1)):
        wr.writerow([repr(float(xi)), repr(float(ui)), repr(float(val.real)), repr(float(val.imag)),
                     repr(float(abs(val)))])
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        if args.command == "pin-constants":
            values = harness.pin_constants(args.out)
            print(json.dumps(values, sort_keys=True, indent=2))
            return 0
        if args.command == "dump":
            return _dump(args)
        print(_load_config(args).to_json())
        return 0
    except ConfigError as exc:
        for k, v in exc.problems.items():
            print(f"config error: {k}: {v}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

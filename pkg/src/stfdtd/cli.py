"""Command line entry point: simulate, stability, oracle, validate."""
from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

import numpy as np

from . import oracle
from .conventional import NonFiniteField
from .diagnostics import (DirectionProbe, LineSource, PointProbe, RowProbe, SnapshotProbe,
                          signed_peak, write_snapshot)
from .grid import OverlappingTransitionRegions, ValidationError
from .hybrid import SourceInTransitionRegion
from .scenario import ParseError, load_scenario
from .stability import attenuation_curve, courant_limit

EXIT_OK, EXIT_INPUT, EXIT_UNSTABLE, EXIT_OVERLAP, EXIT_FAILED = 0, 2, 3, 4, 5


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return f"{v:.12g}"
    if isinstance(v, (tuple, list)):
        return " ".join(_fmt(x) for x in v)
    return str(v)


def write_manifest(path, rows):
    with open(path, "w") as f:
        for k, v in rows:
            f.write(f"{k} = {_fmt(v)}\n")


def write_probe(probe, path):
    if isinstance(probe, PointProbe):
        probe.write(path)
    elif isinstance(probe, DirectionProbe):
        t, fwd, bwd = probe.array()
        np.savetxt(path, np.column_stack([t, fwd, bwd]), delimiter=",", header="t,forward,backward",
                   comments="", fmt="%.12g")
    elif isinstance(probe, RowProbe):
        steps, rows = probe.array()
        data = np.column_stack([steps, rows]) if len(steps) else np.zeros((0, 1))
        np.savetxt(path, data, delimiter=",", header="step,E...", comments="", fmt="%.12g")


def cmd_simulate(args):
    sc = load_scenario(args.file)
    out = Path(args.out or Path(args.file).stem)
    out.mkdir(parents=True, exist_ok=True)
    g = sc.grid
    rows = sc.manifest() + [("threads", args.threads)]
    if g.n_steps == 0:
        write_manifest(out / "manifest", rows + [("wall_time_s", 0.0)])
        print(f"zero-step run; wrote {out / 'manifest'}")
        return EXIT_OK
    sim = sc.build()
    snaps = out / "snapshots"
    snaps.mkdir(exist_ok=True)
    line = [s for s in sim.sources if isinstance(s, LineSource)]
    inc = {"peak": 0.0}
    every = sc.snapshot_every

    def cb(s):
        if line:
            inc["peak"] = max(inc["peak"], float(np.abs(line[0].incident_E(line[0].ks)).max()))
        if (every and s.n % every == 0) or s.n == g.n_steps:
            write_snapshot(snaps / f"step_{s.n}", s.E, g, s.n)
        for p in s.probes:
            if isinstance(p, SnapshotProbe) and s.n in p.steps:
                write_snapshot(snaps / f"step_{s.n}", s.E, g, s.n)

    wall = sim.run(g.n_steps, cb)
    write_manifest(out / "manifest", rows + [("wall_time_s", wall)])
    pdir = out / "probes"
    pdir.mkdir(exist_ok=True)
    for p in sim.probes:
        write_probe(p, pdir / f"{p.name}.csv")
    print("probe,kind,signed_peak,t_peak,over_incident")
    for p in sim.probes:
        if isinstance(p, PointProbe):
            t, v = p.array()
            tp, vp = signed_peak(t, v)
        elif isinstance(p, DirectionProbe):
            t, _, v = p.array()
            tp, vp = signed_peak(t, v)
        else:
            continue
        ratio = vp / inc["peak"] if inc["peak"] else float("nan")
        print(f"{p.name},{type(p).__name__},{vp:.6g},{tp:.6g},{ratio:.6g}")
    print(f"steps={g.n_steps} S={g.S:.6g} S_max={sc.s_max:.6g} wall={wall:.2f}s out={out}")
    return EXIT_OK


def cmd_stability(args):
    smax = courant_limit(args.n, args.beta)
    if args.curve:
        lo, hi = (float(x) for x in args.curve.split(":"))
        S = smax if args.S is None else args.S
        nl = np.linspace(lo, hi, args.points)
        fwd, bwd = attenuation_curve(args.n, args.beta, S, nl)
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["N_lambda", "zeta_forward", "zeta_backward"])
        for row in zip(nl, fwd, bwd):
            w.writerow([f"{x:.12g}" for x in row])
    else:
        print(f"{smax:.12g}")
    return EXIT_OK


def _print_kv(d):
    for k, v in d.items():
        print(f"{k},{_fmt(v)}")


def cmd_oracle(args):
    if args.kind == "interface":
        p = oracle.UniformInterfaceProblem(args.n1, args.n2, args.beta, np.radians(args.theta_deg),
                                           args.omega)
        pr = oracle.predict(p)
        _print_kv({"Gamma": pr.Gamma, "T": pr.T, "omega_r": pr.omega_r, "omega_t": pr.omega_t,
                   "theta_r_deg": np.degrees(pr.theta_r), "theta_t_deg": np.degrees(pr.theta_t),
                   "k_r": pr.k_r, "k_t": pr.k_t})
    elif args.kind == "wedge":
        eps = [float(x) for x in args.eps.split(",")]
        print("event,interface,medium,omega,amplitude,omega_escaped,amplitude_escaped")
        for j, e in enumerate(oracle.wedge_cascade(eps, args.v1, args.v2, args.omega, args.bounces)):
            print(f"{j},{e['interface']},{e['medium']},{e['omega']:.12g},{e['amplitude']:.12g},"
                  f"{e['omega_escaped']:.12g},{e['amplitude_escaped']:.12g}")
    else:
        p = oracle.AcceleratedInterfaceProblem(args.n1, args.n2, args.a_prime, args.beta0, args.z0)
        ts = np.array([float(x) for x in args.t.split(",")])
        r, t = oracle.accelerated_limit_factors(p, ts)
        print("t,z_interface,beta,reflected_factor,transmitted_factor")
        for row in zip(ts, p.position(ts), p.velocity(ts), r, t):
            print(",".join(f"{x:.12g}" for x in row))
    return EXIT_OK


def cmd_validate(args):
    from . import report, validation
    ids = list(validation.FIGURES) if args.figure == "all" else [args.figure]
    out = Path(args.out or f"validate_{args.figure}")
    out.mkdir(parents=True, exist_ok=True)
    allchecks = []
    print("-----BEGIN REPORT-----")
    print("criterion,check,measured,target,result,detail")
    for fid in ids:
        checks, data, wall = validation.run_figure(fid)
        for c in checks:
            print(",".join(_csv_cell(x) for x in c.row()))
        allchecks.extend(checks)
        for path in report.render(fid, data, out):
            print(f"# figure {path}", file=sys.stderr)
        print(f"# {fid} wall {wall:.1f}s", file=sys.stderr)
    print("-----END REPORT-----")
    with open(out / "report.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["criterion", "check", "measured", "target", "result", "detail"])
        for c in allchecks:
            w.writerow(c.row())
    failed = sum(not c.passed for c in allchecks)
    print(f"{len(allchecks) - failed}/{len(allchecks)} checks passed")
    return EXIT_FAILED if failed else EXIT_OK


def _csv_cell(s):
    s = str(s)
    return f'"{s}"' if "," in s else s


def build_parser():
    ap = argparse.ArgumentParser(prog="stfdtd", description="FDTD for moving space-time interfaces")
    sub = ap.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("simulate", help="run a scenario file")
    s.add_argument("file")
    s.add_argument("--out", help="output directory (default: scenario stem)")
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("stability", help="Courant limit and attenuation curves")
    s.add_argument("--n", type=float, required=True)
    s.add_argument("--beta", type=float, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--smax", action="store_true")
    g.add_argument("--curve", metavar="NMIN:NMAX")
    s.add_argument("--S", type=float, help="Courant number for --curve (default S_max)")
    s.add_argument("--points", type=int, default=200)
    s.set_defaults(func=cmd_stability)

    s = sub.add_parser("oracle", help="closed-form predictions")
    osub = s.add_subparsers(dest="kind", required=True)
    o = osub.add_parser("interface")
    o.add_argument("--n1", type=float, default=1.0)
    o.add_argument("--n2", type=float, required=True)
    o.add_argument("--beta", type=float, required=True)
    o.add_argument("--theta-deg", type=float, default=0.0)
    o.add_argument("--omega", type=float, default=2 * np.pi)
    o = osub.add_parser("wedge")
    o.add_argument("--eps", required=True, help="eps1,eps2,eps3")
    o.add_argument("--v1", type=float, required=True)
    o.add_argument("--v2", type=float, required=True)
    o.add_argument("--omega", type=float, default=2 * np.pi)
    o.add_argument("--bounces", type=int, default=3)
    o = osub.add_parser("accel")
    o.add_argument("--n1", type=float, default=1.0)
    o.add_argument("--n2", type=float, required=True)
    o.add_argument("--a-prime", type=float, required=True)
    o.add_argument("--beta0", type=float, default=0.0)
    o.add_argument("--z0", type=float, default=0.0)
    o.add_argument("--t", default="0", help="comma list of lab times")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("validate", help="reproduce a figure and check it")
    s.add_argument("figure", choices=["fig2", "fig5", "fig6", "fig7", "fig8", "fig9", "matching",
                                      "invariants", "all"])
    s.add_argument("--out", help="directory for report.csv and figures")
    s.set_defaults(func=cmd_validate)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", None):
        # elementwise numpy kernels ignore this; it caps BLAS/FFT pools only
        os.environ.setdefault("OMP_NUM_THREADS", str(args.threads))
    try:
        return args.func(args)
    except (ParseError, ValidationError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except NonFiniteField as e:
        print(f"instability: {e}", file=sys.stderr)
        return EXIT_UNSTABLE
    except (OverlappingTransitionRegions, SourceInTransitionRegion) as e:
        print(f"overlap: {e}", file=sys.stderr)
        return EXIT_OVERLAP


if __name__ == "__main__":
    sys.exit(main())

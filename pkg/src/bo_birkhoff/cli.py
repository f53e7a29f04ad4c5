"""Command-line entry point: ``bo-birkhoff <command> [options]``."""
from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import __version__
from .birkhoff import BirkhoffState, birkhoff_coords
from .config import RunConfig, load_config, write_artifacts
from .direct import IntegratorConfig, evolve
from .errors import BOError
from .experiments import convergence_study, illposed_report
from .flow import Trajectory, solve_bo
from .fourier import RealPotential, random_smooth
from .inverse import finite_gap, newton_solve, phi_smooth, verify_finite_gap
from .lax import compute_spectrum
from .verification import CHECKS, run_checks

log = logging.getLogger("bo_birkhoff")


# -- potential sources ----------------------------------------------------

def _add_potential_args(p: argparse.ArgumentParser):
    g = p.add_argument_group("potential")
    g.add_argument("--input", help="RealPotential JSON file")
    g.add_argument("--zero", action="store_true", help="zero potential")
    g.add_argument("--cos", nargs=2, action="append", metavar=("K", "A"), default=[],
                   help="add A (e^{iKx} + e^{-iKx}), i.e. uhat(K) = A; repeatable")
    g.add_argument("--sin", nargs=2, action="append", metavar=("K", "A"), default=[],
                   help="add A (e^{iKx} - e^{-iKx}) / i, i.e. uhat(K) = -iA; repeatable")
    g.add_argument("--random", action="store_true", help="seeded random smooth potential")
    g.add_argument("--norm", type=float, default=0.3, help="L2 norm of --random (default 0.3)")


def potential_from_args(args, M: int) -> RealPotential:
    if args.input:
        with open(args.input) as fh:
            return RealPotential.from_json(json.load(fh)).resized(M)
    if args.random:
        return random_smooth(M, np.random.default_rng(args.seed), norm=args.norm)
    u = RealPotential.zero(M)
    for k, a in args.cos:
        u = u + RealPotential.from_modes({int(k): float(a)}, M)
    for k, a in args.sin:
        u = u + RealPotential.from_modes({int(k): -1j * float(a)}, M)
    return u


# -- commands ---------------------------------------------------------------

def cmd_spectrum(args, cfg: RunConfig):
    u = potential_from_args(args, cfg.M)
    spec = compute_spectrum(u, cfg.M, M_B=cfg.M_B, conv_tol=cfg.conv_tol, gap_tol=cfg.gap_tol)
    return {"potential": u.to_json(), "spectrum": spec.to_json(include_eigvecs=args.eigvecs)}, None


def cmd_birkhoff(args, cfg: RunConfig):
    u = potential_from_args(args, cfg.M)
    spec = compute_spectrum(u, cfg.M, M_B=cfg.M_B, conv_tol=cfg.conv_tol, gap_tol=cfg.gap_tol)
    if args.threshold:
        z = birkhoff_coords(spec)
    else:
        z = phi_smooth(u, cfg.M, spec.M_B)
    meta = dict(z.meta)
    meta.update({"potential": u.digest(), "potential_rounded": u_digest_rounded(u),
                 "route": "threshold" if args.threshold else "smooth"})
    state = BirkhoffState(z.zeta, meta)
    return {"state": state.to_json()}, None


def u_digest_rounded(u: RealPotential, decimals: int = 8) -> str:
    c = np.round(u.coeffs, decimals) + 0.0  # folds -0.0 into 0.0
    return RealPotential(c).digest()


def cmd_invert(args, cfg: RunConfig):
    with open(args.state) as fh:
        data = json.load(fh)
    z = BirkhoffState.from_json(data.get("state", data))
    if cfg.M < 2 * z.M_B:
        raise ValueError(f"M = {cfg.M} must be at least 2 M_B = {2 * z.M_B}")
    res = newton_solve(z, cfg.newton)
    out = {"potential": res.potential.to_json(), "residual": res.residual,
           "iterations": res.iterations, "log": res.log}
    src = z.meta.get("potential_rounded")
    if src is not None:
        got = u_digest_rounded(res.potential.resized(cfg.M))
        out["source_hash"] = src
        out["recovered_hash"] = got
        out["hash_match"] = src == got
    return out, [{"iter": r["iter"], "residual": r["residual"]} for r in res.log]


def _times(args):
    if args.times:
        return [float(t) for t in args.times.split(",")]
    return list(np.linspace(0.0, args.t_end, args.samples + 1))


def cmd_evolve(args, cfg: RunConfig):
    u0 = potential_from_args(args, cfg.M)
    times = _times(args)
    out, series = {}, None
    trajs = {}
    if args.method in ("birkhoff", "both"):
        trajs["birkhoff"] = solve_bo(u0, times, cfg.newton, M_B=cfg.M_B)
    if args.method in ("direct", "both"):
        trajs["direct"] = evolve(u0, cfg.integrator, times)
    for k, tr in trajs.items():
        out[k] = tr.to_json()
    if args.method == "both":
        b, d = trajs["birkhoff"], trajs["direct"]
        series = [{"t": float(t), "l2_discrepancy": float((x - y).l2_norm())}
                  for t, x, y in zip(times, b.samples, d.samples)]
        out["max_discrepancy"] = max(r["l2_discrepancy"] for r in series)
    return out, series


def cmd_finitegap(args, cfg: RunConfig):
    w = potential_from_args(args, cfg.M)
    wN = finite_gap(w, args.N, cfg.newton, M_B=cfg.M_B, gap_tol=cfg.gap_tol)
    rep = verify_finite_gap(wN, args.N, cfg.M)
    return {"potential": wN.to_json(), "report": rep.to_json()}, None


def cmd_verify(args, cfg: RunConfig):
    names = args.only or None
    results = run_checks(names, seed=cfg.seed)
    for r in results:
        print(r.line(), file=sys.stderr)
    failed = [r.name for r in results if not r.passed]
    # timings stay out of the artifact so reruns are byte-identical
    checks = [{k: v for k, v in _jsonable(r.to_json()).items() if k != "elapsed"} for r in results]
    out = {"checks": checks, "failed": failed,
           "passed": not failed}
    series = [{"check": r.name, "passed": int(r.passed)} for r in results]
    return out, series


def cmd_illposed(args, cfg: RunConfig):
    N_list = [int(n) for n in args.N.split(",")]
    rep = illposed_report(args.s, N_list, args.amplitude, args.eps, args.t)
    series = [{"N": c["N"], "d0": c["d0"], "dt": c["dt"], "ratio": c["ratio"]} for c in rep["cells"]]
    return rep, series


def cmd_converge(args, cfg: RunConfig):
    u = potential_from_args(args, cfg.M)
    M_list = [int(m) for m in args.M_list.split(",")]
    rep = convergence_study(u, M_list, args.n_max)
    return rep, rep["rows"]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


COMMANDS = {
    "spectrum": cmd_spectrum,
    "birkhoff": cmd_birkhoff,
    "evolve": cmd_evolve,
    "invert": cmd_invert,
    "finitegap": cmd_finitegap,
    "verify": cmd_verify,
    "illposed": cmd_illposed,
    "converge": cmd_converge,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bo-birkhoff", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="RunConfig JSON file")
    common.add_argument("--M", type=int, help="Galerkin cutoff")
    common.add_argument("--M_B", type=int, help="trust cutoff (default: convergence screen)")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--out", help="output directory")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", parents=[common], help="Lax spectrum and scaling factors")
    _add_potential_args(s)
    s.add_argument("--eigvecs", action="store_true", help="include eigenvectors")

    s = sub.add_parser("birkhoff", parents=[common], help="Birkhoff coordinates")
    _add_potential_args(s)
    s.add_argument("--threshold", action="store_true",
                   help="set coordinates on gaps below gap_tol to zero")

    s = sub.add_parser("evolve", parents=[common], help="time evolution")
    _add_potential_args(s)
    s.add_argument("--method", choices=("birkhoff", "direct", "both"), default="birkhoff")
    s.add_argument("--times", help="comma-separated sample times")
    s.add_argument("--t-end", type=float, default=1.0)
    s.add_argument("--samples", type=int, default=4)

    s = sub.add_parser("invert", parents=[common], help="inverse Birkhoff map")
    s.add_argument("--state", required=True, help="BirkhoffState JSON (or a birkhoff result.json)")

    s = sub.add_parser("finitegap", parents=[common], help="finite-gap approximation")
    _add_potential_args(s)
    s.add_argument("--N", type=int, required=True)

    s = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    s.add_argument("--only", action="append", choices=sorted(CHECKS), help="run a single check; repeatable")

    s = sub.add_parser("illposed", parents=[common], help="separation of nearby solutions below L2")
    s.add_argument("--s", type=float, default=-0.25)
    s.add_argument("--N", default="8,32,128,512", help="comma-separated modes")
    s.add_argument("--amplitude", type=float, default=1.0)
    s.add_argument("--eps", type=float, default=0.1)
    s.add_argument("--t", type=float, default=1.0)

    s = sub.add_parser("converge", parents=[common], help="eigenvalue convergence in M")
    _add_potential_args(s)
    s.add_argument("--M-list", dest="M_list", default="16,32,64,128,256")
    s.add_argument("--n-max", dest="n_max", type=int, default=16)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, M=args.M, M_B=args.M_B, seed=args.seed, out=args.out)
        if args.seed is None:
            args.seed = cfg.seed
        result, series = COMMANDS[args.command](args, cfg)
    except (BOError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    d = write_artifacts(cfg, args.command, _jsonable(result), series)
    log.info("wrote %s", d)
    if args.command == "verify" and not result["passed"]:
        print(f"failed checks: {', '.join(result['failed'])}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 1 verification failed, 2 pipeline infeasible,
3 usage or I/O error.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import spectral
from .alon import build_alon, format_generators, generator_set
from .edgelist import EdgeListError, atomic_write, read_edgelist, write_edgelist
from .gf2k import make_field
from .graph import degree_stats, triangle_count
from .regularize import PlanInfeasible, SynthesisFailed, parameter_registry, synthesize

EXIT_OK, EXIT_FAILED, EXIT_INFEASIBLE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    profile: str = "desk"
    overrides: dict = field(default_factory=dict)
    seed: int = 0
    paths: dict = field(default_factory=dict)


def _u64(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits: {text}")
    return v


def build_parser():
    p = _Parser(prog="tfreg", description="Certified triangle-free regular graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build-alon", help="build the base Cayley graph")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--dump-generators")

    s = sub.add_parser("synth", help="synthesize an n-vertex regular graph")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=_u64, required=True)
    s.add_argument("--profile", choices=("paper", "desk"), required=True)
    s.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", dest="overrides")
    s.add_argument("--out", required=True)
    s.add_argument("--cert", required=True)

    v = sub.add_parser("verify", help="check claims about a graph file")
    v.add_argument("--graph", required=True)
    v.add_argument("--expect-regular", type=int)
    v.add_argument("--expect-triangle-free", action="store_true")
    v.add_argument("--lambda-bound", type=float)
    v.add_argument("--tol", type=float, default=1e-6)

    e = sub.add_parser("spectrum", help="compute lambda of a graph file")
    e.add_argument("--graph", required=True)
    e.add_argument("--method", choices=("dense", "lanczos"), required=True)
    e.add_argument("--tol", type=float, default=1e-6)
    e.add_argument("--max-iter", type=int)
    return p


def parse_overrides(items):
    registry = parameter_registry()
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        if key not in registry:
            raise UsageError(f"unknown parameter {key!r}; known: {', '.join(sorted(registry))}")
        try:
            out[key] = registry[key](value)
        except ValueError:
            raise UsageError(f"parameter {key} expects {registry[key].__name__}, got {value!r}") from None
    return out


def parse_args(argv):
    """Return ``(command, RunConfig, namespace)``; raises ``SystemExit(3)``
    on usage errors."""
    ns = build_parser().parse_args(argv)
    cfg = RunConfig()
    if ns.command == "synth":
        try:
            cfg.overrides = parse_overrides(ns.overrides)
        except UsageError as exc:
            print(f"tfreg synth: error: {exc}", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
        cfg.profile, cfg.seed = ns.profile, ns.seed
        cfg.paths = {"out": ns.out, "cert": ns.cert}
    elif ns.command == "build-alon":
        if ns.k < 2 or ns.k % 3 == 0:
            reason = "is divisible by 3" if ns.k % 3 == 0 else "is below 2"
            print(f"tfreg build-alon: error: k={ns.k} {reason}", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
        cfg.paths = {"out": ns.out, "generators": ns.dump_generators}
    else:
        cfg.paths = {"graph": ns.graph}
    return ns.command, cfg, ns


def _emit(obj, stream=None):
    print(json.dumps(obj, indent=2), file=stream or sys.stdout)


def _lambda_for(G, tol, max_iter=None):
    method = "dense" if G.n <= spectral.DENSE_MAX_N else "lanczos"
    return spectral.compute_lambda(G, method, tol=tol, max_iter=max_iter)


def cmd_build_alon(ns, cfg):
    try:
        G, spec = build_alon(ns.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_edgelist(G, cfg.paths["out"])
    if cfg.paths["generators"]:
        atomic_write(cfg.paths["generators"], format_generators(ns.k, generator_set(make_field(ns.k))))
    rep = _lambda_for(G, 1e-6)
    ok = spec.lambda_floor - 1e-6 <= rep.lam <= spec.lambda_bound + 1e-6
    _emit({"k": ns.k, "N": G.n, "D": spec.D, "m": G.m, "regular": G.is_regular(spec.D),
           "triangle_count": triangle_count(G), "lambda": rep.to_dict(),
           "lambda_bound": spec.lambda_bound, "lambda_floor": spec.lambda_floor,
           "lambda_within_bounds": ok})
    return EXIT_OK if ok else EXIT_FAILED


def cmd_synth(ns, cfg):
    try:
        G, cert = synthesize(ns.n, cfg.seed, cfg.profile, cfg.overrides)
    except PlanInfeasible as exc:
        _emit({"stage": "plan", "reason": str(exc)}, sys.stderr)
        return EXIT_INFEASIBLE
    except SynthesisFailed as exc:
        _emit(exc.to_dict(), sys.stderr)
        return EXIT_INFEASIBLE
    write_edgelist(G, cfg.paths["out"])
    atomic_write(cfg.paths["cert"], json.dumps(cert, indent=2) + "\n")
    ok = cert["regular"] and cert["triangle_count"] == 0 and cert["lambda_final"]["chain_holds"]
    return EXIT_OK if ok else EXIT_FAILED


def cmd_verify(ns, cfg):
    G = read_edgelist(cfg.paths["graph"])
    stats = degree_stats(G)
    verdict = {"n": G.n, "m": G.m, "min_degree": stats.min, "max_degree": stats.max,
               "checks": {}}
    checks = verdict["checks"]
    if ns.expect_regular is not None:
        checks["regular"] = {"expected": ns.expect_regular,
                             "pass": G.is_regular(ns.expect_regular)}
    if ns.expect_triangle_free:
        count, tri = triangle_count(G, witness=True)
        checks["triangle_free"] = {"triangle_count": count, "triangle": tri, "pass": count == 0}
    if ns.lambda_bound is not None:
        entry = {"bound": ns.lambda_bound, "tol": ns.tol}
        try:
            rep = _lambda_for(G, min(ns.tol, 1e-6))
            entry["report"] = rep.to_dict()
            entry["pass"] = bool(rep.lam <= ns.lambda_bound + ns.tol)
        except spectral.SpectralError as exc:
            entry["error"] = str(exc)
            entry["pass"] = False
        checks["lambda"] = entry
    verdict["pass"] = all(c["pass"] for c in checks.values())
    _emit(verdict)
    return EXIT_OK if verdict["pass"] else EXIT_FAILED


def cmd_spectrum(ns, cfg):
    G = read_edgelist(cfg.paths["graph"])
    try:
        rep = spectral.compute_lambda(G, ns.method, tol=ns.tol, max_iter=ns.max_iter)
    except spectral.SpectralError as exc:
        print(f"tfreg spectrum: error: {exc}", file=sys.stderr)
        return EXIT_FAILED if "converge" in str(exc) else EXIT_USAGE
    _emit(rep.to_dict())
    return EXIT_OK


COMMANDS = {"build-alon": cmd_build_alon, "synth": cmd_synth, "verify": cmd_verify,
            "spectrum": cmd_spectrum}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        command, cfg, ns = parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return COMMANDS[command](ns, cfg)
    except UsageError as exc:
        print(f"tfreg {command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, EdgeListError) as exc:
        print(f"tfreg {command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
